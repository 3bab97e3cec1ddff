"""
physics/montecarlo.py
---------------------
Seeded generation of double-decay events (f1, t1, f2, t2).

La densidad conjunta se factoriza como I = exp(-Gamma t1) G(f1, f2, dt), con

    G = C12 { |eta1|^2 e^{-G_S dt} + |eta2|^2 e^{-G_L dt}
              - 2 |eta1||eta2| e^{-Gamma dt/2} cos(dm dt + phi1 - phi2) }

así que la generación va en dos etapas:
    1. t1 ~ Exponential(Gamma), exacta
    2. (f1, f2) según el peso integrado, luego dt en [0, t_max] por rechazo
       bajo la mayorante con el coseno reemplazado por -1 (mezcla de tres
       exponenciales truncadas, muestreada exactamente).

Streams:
    La partición i sortea de Generator(PCG64(SeedSequence(seed, spawn_key=(i,)))).
    Los tamaños son n // p, las primeras n % p particiones llevan un evento
    extra, y la salida es la concatenación en orden de partición. El
    resultado depende de (seed, partitions), nunca del número de workers.

Example:
    >>> run = generate_run(GeneratorConfig(channels=[ChannelWeight(id="pipi")],
    ...                                    t_max=40.0, n_events=1000, seed=7), ctx)
    >>> len(run.events)
    1000
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate, stats

from physics.errors import DomainError, EnvelopeViolationError, GenerationError
from physics.kinematics import CausalClass, CmKinematics, classify_many
from physics.ly_model import LyContext, c12

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

# ── Constants ─────────────────────────────────────────────────────────────────
STREAM_RULE: str = "PCG64(SeedSequence(seed,spawn_key=(partition,)))"
ENVELOPE_RTOL: float = 1e-12
MIN_BATCH: int = 1024
MIN_EVENTS_FOR_FIT: int = 1000
MIN_EXPECTED_PER_BIN: float = 5.0
MIN_EVENTS_PER_PAIR_FIT: int = 100


# ── Domain Types ──────────────────────────────────────────────────────────────

class ChannelWeight(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    weight: float = Field(default=1.0, ge=0.0)


class GeneratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    channels: tuple[ChannelWeight, ...]
    t_max: float = Field(gt=0.0)
    n_events: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    beta_k: float | None = Field(default=None, ge=0.0, lt=1.0)
    partitions: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    max_attempts: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_channels(self) -> "GeneratorConfig":
        if not self.channels:
            raise ValueError("at least one channel is required")
        ids = [c.id for c in self.channels]
        if len(set(ids)) != len(ids):
            raise ValueError("generator channel ids must be unique")
        if not sum(c.weight for c in self.channels) > 0.0:
            raise ValueError("channel weights must have a positive sum")
        if not math.isfinite(self.t_max):
            raise ValueError("t_max must be finite")
        return self

    def partition_sizes(self) -> list[int]:
        base, extra = divmod(self.n_events, self.partitions)
        return [base + (1 if i < extra else 0) for i in range(self.partitions)]

    def attempt_budget(self, size: int) -> int:
        if self.max_attempts is not None:
            return self.max_attempts
        return 200 * size + 10_000


class EventRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    f1: str
    f2: str
    t1: float
    t2: float
    causal_class: CausalClass = CausalClass.UNCLASSIFIED

    @model_validator(mode="after")
    def _check_times(self) -> "EventRecord":
        if not 0.0 <= self.t1 <= self.t2:
            raise ValueError(f"event times must satisfy 0 <= t1 <= t2 (got {self.t1}, {self.t2})")
        return self

    @property
    def delta_t(self) -> float:
        return self.t2 - self.t1


class GenerationRun(BaseModel):
    """Eventos más el registro de cómo se sortearon."""

    model_config = ConfigDict(frozen=True)

    events: list[EventRecord]
    pair_probabilities: dict[str, float]
    proposals: int
    acceptance_rate: float
    truncated_fraction: float


class GoodnessOfFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    chi2: float
    dof: int
    p_value: float
    bins_used: int

    @property
    def chi2_per_dof(self) -> float:
        return self.chi2 / self.dof


class FitReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_events: int
    t1: GoodnessOfFit
    delta_t: GoodnessOfFit
    pairs: dict[str, GoodnessOfFit]


def pair_key(f1: str, f2: str) -> str:
    return f"{f1},{f2}"


# ── Delta-t Density ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PairDensity:
    """G(f1, f2, dt) y su mayorante de mezcla de exponenciales para un par de canales."""

    f1: str
    f2: str
    scale: float
    amplitudes: tuple[float, float, float]
    rates: tuple[float, float, float]
    delta_m: float
    phase: float

    @classmethod
    def for_pair(cls, f1: str, f2: str, ctx: LyContext) -> "PairDensity":
        ch1, ch2 = ctx.channel(f1), ctx.channel(f2)
        p = ctx.params
        return cls(
            f1=f1,
            f2=f2,
            scale=c12(f1, f2, ctx),
            amplitudes=(
                ch1.eta_abs**2,
                ch2.eta_abs**2,
                2.0 * ch1.eta_abs * ch2.eta_abs,
            ),
            rates=(p.gamma_s, p.gamma_l, 0.5 * p.gamma),
            delta_m=p.delta_m,
            phase=ch1.phi - ch2.phi,
        )

    def density(self, dt: np.ndarray) -> np.ndarray:
        a_s, a_l, a_x = self.amplitudes
        r_s, r_l, r_x = self.rates
        return self.scale * (
            a_s * np.exp(-r_s * dt)
            + a_l * np.exp(-r_l * dt)
            - a_x * np.exp(-r_x * dt) * np.cos(self.delta_m * dt + self.phase)
        )

    def envelope(self, dt: np.ndarray) -> np.ndarray:
        a_s, a_l, a_x = self.amplitudes
        r_s, r_l, r_x = self.rates
        return self.scale * (
            a_s * np.exp(-r_s * dt) + a_l * np.exp(-r_l * dt) + a_x * np.exp(-r_x * dt)
        )

    def _oscillating(self, x: np.ndarray) -> np.ndarray:
        """Re[e^{i phase} e^{(-r + i dm) x} / (r - i dm)]."""
        r_x = self.rates[2]
        z = complex(-r_x, self.delta_m)
        return np.real(np.exp(1j * self.phase) * np.exp(z * x) / (-z))

    def cumulative(self, dt) -> np.ndarray:
        """Integral de G de 0 a dt, en forma cerrada."""
        x = np.asarray(dt, dtype=float)
        a_s, a_l, a_x = self.amplitudes
        r_s, r_l, _ = self.rates
        return self.scale * (
            a_s * -np.expm1(-r_s * x) / r_s
            + a_l * -np.expm1(-r_l * x) / r_l
            - a_x * (self._oscillating(np.zeros_like(x)) - self._oscillating(x))
        )

    def tail(self, t_max: float) -> float:
        """Integral de G de t_max a infinito, en forma cerrada."""
        a_s, a_l, a_x = self.amplitudes
        r_s, r_l, _ = self.rates
        return float(
            self.scale
            * (
                a_s * math.exp(-r_s * t_max) / r_s
                + a_l * math.exp(-r_l * t_max) / r_l
                - a_x * self._oscillating(np.asarray(t_max))
            )
        )

    def component_masses(self, t_max: float) -> np.ndarray:
        amps = np.asarray(self.amplitudes)
        rates = np.asarray(self.rates)
        return amps * -np.expm1(-rates * t_max) / rates


def pair_weight(f1: str, f2: str, t_max: float, ctx: LyContext) -> float:
    """Integral de G(f1, f2, dt) sobre [0, t_max]."""
    return float(PairDensity.for_pair(f1, f2, ctx).cumulative(t_max))


def pair_weight_quad(f1: str, f2: str, t_max: float, ctx: LyContext) -> float:
    """Verificación cruzada de ``pair_weight`` con cuadratura adaptativa."""
    density = PairDensity.for_pair(f1, f2, ctx)
    value, _ = integrate.quad(lambda x: float(density.density(np.asarray(x))), 0.0, t_max, limit=500)
    return value


def truncation_fraction(f1: str, f2: str, t_max: float, ctx: LyContext) -> float:
    """Fracción de la masa de G más allá de t_max."""
    density = PairDensity.for_pair(f1, f2, ctx)
    tail = density.tail(t_max)
    return tail / (float(density.cumulative(t_max)) + tail)


# ── Generation ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Plan:
    densities: tuple[PairDensity, ...]
    probabilities: np.ndarray
    t_max: float
    gamma: float


def _build_plan(config: GeneratorConfig, ctx: LyContext) -> _Plan:
    weights = {c.id: c.weight for c in config.channels}
    for channel_id in weights:
        ctx.channel(channel_id)

    densities: list[PairDensity] = []
    masses: list[float] = []
    for first in config.channels:
        for second in config.channels:
            density = PairDensity.for_pair(first.id, second.id, ctx)
            densities.append(density)
            masses.append(first.weight * second.weight * float(density.cumulative(config.t_max)))

    total = sum(masses)
    if not total > 0.0:
        raise GenerationError("all channel pairs have zero integrated intensity")
    return _Plan(
        densities=tuple(densities),
        probabilities=np.asarray(masses) / total,
        t_max=config.t_max,
        gamma=ctx.params.gamma,
    )


def _sample_delta_t(
    density: PairDensity,
    count: int,
    t_max: float,
    rng: np.random.Generator,
    budget: int,
) -> tuple[np.ndarray, int]:
    """Muestrea por rechazo ``count`` valores de dt; devuelve (muestras, propuestas usadas)."""
    masses = density.component_masses(t_max)
    probs = masses / masses.sum()
    rates = np.asarray(density.rates)
    spans = -np.expm1(-rates * t_max)

    chunks: list[np.ndarray] = []
    accepted = 0
    proposals = 0
    while accepted < count:
        if proposals >= budget:
            logger.error(
                f"Presupuesto de intentos agotado para el par ({density.f1}, {density.f2}): "
                f"{accepted}/{count} aceptados tras {proposals} propuestas"
            )
            raise GenerationError(
                f"attempt budget of {budget} proposals exhausted for pair "
                f"({density.f1}, {density.f2}) with {accepted} of {count} events accepted"
            )
        batch = min(max(MIN_BATCH, 2 * (count - accepted)), budget - proposals)
        proposals += batch

        component = rng.choice(3, size=batch, p=probs)
        u = rng.random(batch)
        dt = -np.log1p(-u * spans[component]) / rates[component]
        target = density.density(dt)
        envelope = density.envelope(dt)

        excess = target - envelope * (1.0 + ENVELOPE_RTOL)
        if np.any(excess > 0.0):
            worst = int(np.argmax(excess))
            logger.error(f"Envolvente violada para el par ({density.f1}, {density.f2}) en dt={dt[worst]}")
            raise EnvelopeViolationError(
                f"density above envelope for pair ({density.f1}, {density.f2}) at "
                f"dt={dt[worst]!r}: target={target[worst]!r}, envelope={envelope[worst]!r}"
            )

        keep = rng.random(batch) * envelope < target
        chunks.append(dt[keep])
        accepted += int(keep.sum())

    return np.concatenate(chunks)[:count], proposals


def _generate_partition(
    index: int,
    size: int,
    config: GeneratorConfig,
    plan: _Plan,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Devuelve (índice de par, t1, dt, propuestas) para una partición."""
    logger.debug(f"Generando partición {index} con {size} eventos")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(index,))))

    pairs = rng.choice(len(plan.densities), size=size, p=plan.probabilities)
    t1 = rng.exponential(1.0 / plan.gamma, size=size)
    dt = np.empty(size)

    budget = config.attempt_budget(size)
    proposals = 0
    for k in np.unique(pairs).tolist():
        mask = pairs == k
        samples, used = _sample_delta_t(
            plan.densities[k], int(mask.sum()), plan.t_max, rng, budget - proposals
        )
        dt[mask] = samples
        proposals += used

    return pairs, t1, dt, proposals


def _causal_classes(t1: np.ndarray, t2: np.ndarray, beta_k: float | None) -> list[CausalClass]:
    labels = [CausalClass.UNCLASSIFIED] * len(t1)
    if beta_k is None:
        return labels
    positive = np.flatnonzero(t2 > 0.0)
    classified = classify_many(t1[positive], t2[positive], CmKinematics(beta_k=beta_k))
    for i, label in zip(positive.tolist(), classified):
        labels[i] = label
    return labels


def generate_run(config: GeneratorConfig, ctx: LyContext) -> GenerationRun:
    """
    Sortea ``config.n_events`` eventos y reporta aceptación y truncamiento.

    Args:
        config: Canales, t_max, semilla, particiones y workers
        ctx: Contexto LY con los canales pedidos

    Returns:
        GenerationRun: Eventos en orden de partición, probabilidades por par,
        propuestas usadas y la mayor fracción truncada más allá de t_max

    Raises:
        ChannelNotFoundError: Canal de la configuración ausente del catálogo
        GenerationError: Presupuesto de intentos agotado o peso total nulo
        EnvelopeViolationError: La densidad superó la mayorante
    """
    plan = _build_plan(config, ctx)
    sizes = config.partition_sizes()
    logger.info(
        f"Generando {config.n_events} eventos en {config.partitions} partición(es), "
        f"seed={config.seed}, t_max={config.t_max}"
    )

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [
            pool.submit(_generate_partition, i, size, config, plan)
            for i, size in enumerate(sizes)
        ]
        parts = [future.result() for future in futures]

    pairs = np.concatenate([p[0] for p in parts])
    t1 = np.concatenate([p[1] for p in parts])
    dt = np.concatenate([p[2] for p in parts])
    proposals = sum(p[3] for p in parts)
    t2 = t1 + dt

    labels = _causal_classes(t1, t2, config.beta_k)
    events = [
        EventRecord(
            f1=plan.densities[k].f1,
            f2=plan.densities[k].f2,
            t1=a,
            t2=b,
            causal_class=label,
        )
        for k, a, b, label in zip(pairs.tolist(), t1.tolist(), t2.tolist(), labels)
    ]

    truncated = max(
        truncation_fraction(d.f1, d.f2, config.t_max, ctx)
        for d, prob in zip(plan.densities, plan.probabilities)
        if prob > 0.0
    )
    if truncated > 1e-6:
        logger.warning(f"t_max={config.t_max} trunca hasta {truncated:.3g} de la distribución de dt")

    return GenerationRun(
        events=events,
        pair_probabilities={
            pair_key(d.f1, d.f2): float(prob) for d, prob in zip(plan.densities, plan.probabilities)
        },
        proposals=proposals,
        acceptance_rate=config.n_events / proposals if proposals else 1.0,
        truncated_fraction=truncated,
    )


def generate(config: GeneratorConfig, ctx: LyContext) -> list[EventRecord]:
    return generate_run(config, ctx).events


# ── Goodness Of Fit ───────────────────────────────────────────────────────────

def _pool_sparse_bins(
    observed: np.ndarray, expected: np.ndarray, min_expected: float = MIN_EXPECTED_PER_BIN
) -> tuple[np.ndarray, np.ndarray]:
    """Une bins vecinos hasta que cada conteo esperado llegue a ``min_expected``."""
    pooled_obs: list[float] = []
    pooled_exp: list[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed.tolist(), expected.tolist()):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_o > 0.0 or acc_e > 0.0:
        if pooled_exp:
            pooled_obs[-1] += acc_o
            pooled_exp[-1] += acc_e
        else:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
    return np.asarray(pooled_obs), np.asarray(pooled_exp)


def _chi_square(name: str, observed: np.ndarray, expected: np.ndarray) -> GoodnessOfFit:
    obs, exp = _pool_sparse_bins(observed, expected)
    if np.any((exp <= 0.0) & (obs > 0.0)):
        chi2 = math.inf
    else:
        valid = exp > 0.0
        chi2 = float(np.sum((obs[valid] - exp[valid]) ** 2 / exp[valid]))
    dof = max(len(obs) - 1, 1)
    return GoodnessOfFit(
        name=name,
        chi2=chi2,
        dof=dof,
        p_value=float(stats.chi2.sf(chi2, dof)),
        bins_used=len(obs),
    )


def _delta_t_expected(
    densities: Sequence[PairDensity], counts: Sequence[int], edges: np.ndarray, t_max: float
) -> np.ndarray:
    expected = np.zeros(len(edges) - 1)
    for density, count in zip(densities, counts):
        cumulative = density.cumulative(edges)
        expected += count * np.diff(cumulative) / float(density.cumulative(t_max))
    return expected


def empirical_intensity_check(
    events: Sequence[EventRecord],
    ctx: LyContext,
    t_max: float | None = None,
    bins: int = 50,
) -> FitReport:
    """Chi-cuadrado de las marginales de t1 y dt (global y por par de canales).

    t1 se compara con Gamma exp(-Gamma t1) en [0, ln(1000)/Gamma] más un bin de
    overflow; dt con G normalizada sobre [0, t_max] para cada par, mezclada
    con los conteos observados de cada par.
    """
    if len(events) < MIN_EVENTS_FOR_FIT:
        raise DomainError(
            f"empirical_intensity_check needs at least {MIN_EVENTS_FOR_FIT} events (got {len(events)})"
        )

    t1 = np.fromiter((e.t1 for e in events), dtype=float, count=len(events))
    dt = np.fromiter((e.t2 - e.t1 for e in events), dtype=float, count=len(events))
    keys = [pair_key(e.f1, e.f2) for e in events]
    if t_max is None:
        t_max = float(dt.max())
    n = len(events)
    gamma = ctx.params.gamma

    # t1: bins de igual ancho, el último abierto hasta infinito
    t1_edges = np.linspace(0.0, math.log(1000.0) / gamma, bins + 1)
    t1_counts, _ = np.histogram(np.minimum(t1, t1_edges[-1]), bins=t1_edges)
    survival = np.exp(-gamma * t1_edges)
    t1_expected = n * -np.diff(survival)
    t1_expected[-1] += n * survival[-1]
    t1_fit = _chi_square("t1", t1_counts, t1_expected)

    # dt: mezcla global y por par
    dt_edges = np.linspace(0.0, t_max, bins + 1)
    clipped = np.minimum(dt, t_max)
    unique_keys = sorted(set(keys))
    key_array = np.asarray(keys)
    densities = []
    counts = []
    for key in unique_keys:
        f1, f2 = key.split(",", 1)
        densities.append(PairDensity.for_pair(f1, f2, ctx))
        counts.append(int(np.sum(key_array == key)))

    dt_counts, _ = np.histogram(clipped, bins=dt_edges)
    dt_fit = _chi_square("delta_t", dt_counts, _delta_t_expected(densities, counts, dt_edges, t_max))

    pairs: dict[str, GoodnessOfFit] = {}
    for key, density, count in zip(unique_keys, densities, counts):
        if count < MIN_EVENTS_PER_PAIR_FIT:
            continue
        observed, _ = np.histogram(clipped[key_array == key], bins=dt_edges)
        expected = _delta_t_expected([density], [count], dt_edges, t_max)
        pairs[key] = _chi_square(f"delta_t[{key}]", observed, expected)

    logger.debug(
        f"Ajuste sobre {n} eventos: t1 chi2/dof={t1_fit.chi2_per_dof:.3f}, "
        f"dt chi2/dof={dt_fit.chi2_per_dof:.3f}"
    )
    return FitReport(n_events=n, t1=t1_fit, delta_t=dt_fit, pairs=pairs)
