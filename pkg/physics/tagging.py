"""
physics/tagging.py
------------------
Decoherence-regime tags and the first-decay time distributions.

Tag K_L: tras f1 en t1 el sobreviviente es K_L, salvo una mezcla de K_S con
cociente de amplitudes |eta1| exp(-dG dt/2).
Tag K_S: visto f2 en t2, el kaón decaído era K_S antes de t1, salvo una
mezcla de K_L con cociente de amplitudes exp(-dG dt/2) / |eta2|. No está
definido para eta2 = 0.

La pureza es el peso de la componente estacionaria dominante en la
descomposición S/L (no ortogonal), 1 / (1 + contamination^2).

Curvas de la figura (f2 = f1 salvo que se indique, todas valen 1 en t1 = 0):
    interference  distribución observada de t1 para un t2 futuro fijo
    decoherence   exp(-Gamma_S t1)
    total_width   exp(-(Gamma_S + kappa Gamma_L) t1), kappa solo para visualizar

Example:
    >>> tag_report(TagKind.KS_TAG, "pipi", 0.01, ctx).delta_t
"""

import logging
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from physics.errors import DomainError
from physics.kaon_core import DecayChannel, PhysicsParams, sl_decompose
from physics.ly_model import LyContext, living_partner_state, past_state

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

# ── Constants ─────────────────────────────────────────────────────────────────
DEFAULT_KAPPA: float = 100.0


class TagKind(str, Enum):
    KL_TAG = "KL_tag"
    KS_TAG = "KS_tag"


class TagReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: TagKind
    channel: str
    delta_t: float
    contamination: float
    purity: float

    @model_validator(mode="after")
    def _check(self) -> "TagReport":
        if self.contamination < 0.0:
            raise ValueError("contamination must be >= 0")
        if not 0.0 < self.purity <= 1.0:
            raise ValueError("purity must lie in (0, 1]")
        return self


class Fig1Curves(BaseModel):
    """Las tres distribuciones del tiempo del primer decaimiento sobre una grilla común de t1."""

    model_config = ConfigDict(frozen=True)

    channel: str
    t2: float
    kappa: float
    t1_grid: tuple[float, ...]
    interference: tuple[float, ...]
    decoherence: tuple[float, ...]
    total_width: tuple[float, ...]

    @model_validator(mode="after")
    def _check(self) -> "Fig1Curves":
        n = len(self.t1_grid)
        if n == 0:
            raise ValueError("t1 grid is empty")
        if any(len(series) != n for series in (self.interference, self.decoherence, self.total_width)):
            raise ValueError("all series must match the grid length")
        if any(b < a for a, b in zip(self.t1_grid, self.t1_grid[1:])):
            raise ValueError("t1 grid must be ordered")
        if self.t1_grid[0] == 0.0:
            for series in (self.interference, self.decoherence, self.total_width):
                if series[0] != 1.0:
                    raise ValueError("every series must equal 1 at t1 = 0")
        return self

    def rows(self) -> list[tuple[float, float, float, float]]:
        return list(zip(self.t1_grid, self.interference, self.decoherence, self.total_width))


def purity_from_contamination(contamination: float) -> float:
    return 1.0 / (1.0 + contamination**2)


# ── Tag Thresholds ────────────────────────────────────────────────────────────

def kl_tag_contamination(eta_abs: float, delta_t: float, params: PhysicsParams) -> float:
    return eta_abs * math.exp(-params.delta_gamma * delta_t / 2.0)


def ks_tag_contamination(eta_abs: float, delta_t: float, params: PhysicsParams) -> float:
    _check_ks_taggable(eta_abs)
    return math.exp(-params.delta_gamma * delta_t / 2.0) / eta_abs


def _check_bound(bound: float) -> None:
    if not bound > 0.0:
        logger.error(f"Cota de contaminación inválida: {bound}")
        raise DomainError(f"contamination bound must be > 0 (got {bound})")


def _check_ks_taggable(eta_abs: float, channel: str | None = None) -> None:
    # eta2 = 0: f2 solo viene de K_S, el estado pasado es K_L puro para todo dt
    if eta_abs == 0.0:
        label = f"channel '{channel}'" if channel else "channel"
        logger.error(f"Tag K_S pedido sobre un canal con eta = 0: {channel}")
        raise DomainError(f"K_S tag is undefined for {label} with eta = 0")


def kl_tag_delta_t(f1: DecayChannel, contamination_bound: float, params: PhysicsParams) -> float:
    """Menor delta_t a partir del cual la mezcla de K_S en el sobreviviente queda bajo la cota."""
    _check_bound(contamination_bound)
    if contamination_bound >= f1.eta_abs:
        return 0.0
    return 2.0 / params.delta_gamma * math.log(f1.eta_abs / contamination_bound)


def ks_tag_delta_t(f2: DecayChannel, contamination_bound: float, params: PhysicsParams) -> float:
    """
    Menor delta_t a partir del cual la mezcla de K_L en el estado pasado queda bajo la cota.

    Args:
        f2: Canal del segundo decaimiento, con eta distinto de cero
        contamination_bound: Cota de |c_L| / |c_S|, > 0
        params: Anchos y diferencia de masa

    Returns:
        float: (2 / dG) ln(1 / (bound |eta2|)), o 0 si ya se cumple en delta_t = 0

    Raises:
        DomainError: Si la cota no es positiva o si eta2 = 0

    Example:
        >>> ks_tag_delta_t(DecayChannel.from_polar("f", 0.002, 0.0), 0.01, params)  # dG = 1
        21.6395...
    """
    _check_bound(contamination_bound)
    _check_ks_taggable(f2.eta_abs, f2.id)
    delta_t = 2.0 / params.delta_gamma * math.log(1.0 / (contamination_bound * f2.eta_abs))
    return max(delta_t, 0.0)


def tag_report(kind: TagKind, channel_id: str, bound: float, ctx: LyContext) -> TagReport:
    """delta_t umbral de un tag, con la contaminación y la pureza evaluadas ahí."""
    kind = TagKind(kind)
    channel = ctx.channel(channel_id)
    if kind is TagKind.KL_TAG:
        delta_t = kl_tag_delta_t(channel, bound, ctx.params)
        contamination = kl_tag_contamination(channel.eta_abs, delta_t, ctx.params)
    else:
        delta_t = ks_tag_delta_t(channel, bound, ctx.params)
        contamination = ks_tag_contamination(channel.eta_abs, delta_t, ctx.params)
    return TagReport(
        kind=kind,
        channel=channel_id,
        delta_t=delta_t,
        contamination=contamination,
        purity=purity_from_contamination(contamination),
    )


# ── Purity From The States ────────────────────────────────────────────────────

def past_state_purity(f2: str, t2: float, t1: float, ctx: LyContext) -> TagReport:
    """Reporte del tag K_S medido sobre el propio estado pasado inferido."""
    _check_ks_taggable(ctx.channel(f2).eta_abs, f2)
    c_s, c_l = sl_decompose(past_state(f2, t2, t1, ctx), ctx.basis)
    contamination = abs(c_l) / abs(c_s)
    return TagReport(
        kind=TagKind.KS_TAG,
        channel=f2,
        delta_t=t2 - t1,
        contamination=contamination,
        purity=purity_from_contamination(contamination),
    )


def living_partner_purity(f1: str, delta_t: float, ctx: LyContext) -> TagReport:
    """Reporte del tag K_L medido sobre el estado del compañero sobreviviente."""
    c_s, c_l = sl_decompose(living_partner_state(f1, delta_t, ctx), ctx.basis)
    contamination = abs(c_s) / abs(c_l)
    return TagReport(
        kind=TagKind.KL_TAG,
        channel=f1,
        delta_t=delta_t,
        contamination=contamination,
        purity=purity_from_contamination(contamination),
    )


# ── Figure Curves ─────────────────────────────────────────────────────────────

def _first_decay_rate(
    first: DecayChannel,
    second: DecayChannel,
    t2: float,
    t1: np.ndarray,
    ctx: LyContext,
) -> np.ndarray:
    """|<f1|T|K1(t1)>|^2 con K1 el estado pasado sin normalizar inferido de f2 en t2.

    La amplitud es amp_s1 (eta2 e^{-i(lL t2 + lS t1)} - eta1 e^{-i(lS t2 + lL t1)}),
    que se anula exactamente en t1 = t2 cuando f2 = f1.
    """
    p = ctx.params
    s_first = np.exp(-1j * (p.lambda_l * t2 + p.lambda_s * t1))
    l_first = np.exp(-1j * (p.lambda_s * t2 + p.lambda_l * t1))
    return np.abs(first.amp_s * (second.eta * s_first - first.eta * l_first)) ** 2


def _validated_grid(t1_grid, t2: float) -> np.ndarray:
    grid = np.asarray(t1_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("t1 grid must be a non-empty 1-D sequence")
    if not t2 > 0.0:
        raise DomainError(f"t2 must be > 0 (got {t2})")
    if np.any(grid < 0.0) or np.any(grid > t2):
        raise DomainError(f"t1 grid must lie within [0, t2={t2}]")
    if np.any(np.diff(grid) < 0.0):
        raise DomainError("t1 grid must be ordered")
    return grid


def _normalized_rate(
    first: DecayChannel,
    second: DecayChannel,
    t2: float,
    grid: np.ndarray,
    ctx: LyContext,
) -> np.ndarray:
    at_origin = _first_decay_rate(first, second, t2, np.zeros(1), ctx)[0]
    if not at_origin > 0.0:
        raise DomainError(f"first-decay rate vanishes at t1 = 0 for channel '{first.id}'")
    rate = _first_decay_rate(first, second, t2, grid, ctx) / at_origin
    return rate


def fig1_curves(
    f1: str,
    t2: float,
    kappa: float,
    t1_grid,
    ctx: LyContext,
    f2: str | None = None,
) -> Fig1Curves:
    """
    Distribuciones de t1 interference, decoherence y total-width, iguales a 1 en t1 = 0.

    ``f2`` toma por defecto ``f1``. Con f2 = f1 el modelo de un solo eta deja
    la curva de interferencia independiente de eta; pasar otro ``f2`` para ver
    la dependencia con el canal.

    Args:
        f1: Canal del primer decaimiento
        t2: Tiempo del segundo decaimiento, > 0
        kappa: Factor de la curva total_width, > 0
        t1_grid: Grilla ordenada dentro de [0, t2]
        ctx: Contexto LY
        f2: Canal del segundo decaimiento (opcional)

    Returns:
        Fig1Curves: Las tres series sobre la grilla

    Raises:
        DomainError: Grilla fuera de rango, t2 o kappa no positivos, o tasa nula en t1 = 0
    """
    grid = _validated_grid(t1_grid, t2)
    if not kappa > 0.0:
        raise DomainError(f"kappa must be > 0 (got {kappa})")
    first = ctx.channel(f1)
    second = ctx.channel(f2) if f2 is not None else first
    p = ctx.params
    logger.debug(
        f"Curvas de la figura para f1={f1}, f2={second.id}, t2={t2}, kappa={kappa}, {grid.size} puntos"
    )

    interference = _normalized_rate(first, second, t2, grid, ctx)
    decoherence = np.exp(-p.gamma_s * grid)
    total_width = np.exp(-(p.gamma_s + kappa * p.gamma_l) * grid)

    return Fig1Curves(
        channel=f1,
        t2=t2,
        kappa=kappa,
        t1_grid=tuple(grid.tolist()),
        interference=tuple(interference.tolist()),
        decoherence=tuple(decoherence.tolist()),
        total_width=tuple(total_width.tolist()),
    )


def decoherence_curve(
    f1: str,
    t1_grid,
    ctx: LyContext,
    contamination_bound: float = 1e-3,
) -> tuple[float, np.ndarray]:
    """Distribución observada de t1 (f2 = f1) con t2 bien dentro de la región del tag K_S.

    t2 se ubica para que la condición del tag K_S se cumpla en el último punto
    de la grilla. Devuelve (t2, curva normalizada en t1 = 0).
    """
    channel = ctx.channel(f1)
    grid = np.asarray(t1_grid, dtype=float)
    t1_end = float(grid.max()) if grid.size else 0.0
    t2 = t1_end + max(ks_tag_delta_t(channel, contamination_bound, ctx.params), 1.0)
    grid = _validated_grid(grid, t2)
    return t2, _normalized_rate(channel, channel, t2, grid, ctx)
