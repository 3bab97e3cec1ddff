"""
physics/ly_model.py
-------------------
Lee-Yang two-decay-times description of the C = -1 kaon pair.

La partícula 1 es la primera en decaer (f1 en t1) y la partícula 2 la última
(f2 en t2), así que todas las operaciones trabajan con tiempos ordenados
0 <= t1 <= t2.

Provee:
    - ly_amplitude / ly_intensity: amplitud y tasa diferencial doble
    - ly_intensity_closed: la misma tasa desde la forma cerrada de tres términos
    - c12: el prefactor de canales |N|^2/2 |<f1|T|K_S><f2|T|K_S>|^2
    - living_partner_state: kaón sobreviviente tras el primer decaimiento (pasado -> futuro)
    - past_state: kaón decaído antes de t1, inferido de f2 en t2 (futuro -> pasado)

La fase global de las amplitudes se fija tomando N real y positivo.
"""

import cmath
import logging
import math
from typing import Iterable

from pydantic import BaseModel, ConfigDict, model_validator

from physics.errors import ChannelNotFoundError, DomainError
from physics.kaon_core import (
    CpParams,
    DecayChannel,
    KaonState,
    PhysicsParams,
    StationaryStates,
    build_stationary_states,
    evolve,
    k_not_f,
    normalize,
    recompose,
)

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)


# ── Domain Types ──────────────────────────────────────────────────────────────

class LyContext(BaseModel):
    """Parámetros físicos, base estacionaria y catálogo de canales."""

    model_config = ConfigDict(frozen=True)

    params: PhysicsParams
    cp: CpParams
    basis: StationaryStates
    channels: dict[str, DecayChannel]

    @model_validator(mode="after")
    def _check_catalog(self) -> "LyContext":
        for key, channel in self.channels.items():
            if key != channel.id:
                raise ValueError(f"catalog key '{key}' does not match channel id '{channel.id}'")
        rebuilt = build_stationary_states(self.cp)
        if rebuilt.k_s != self.basis.k_s or rebuilt.k_l != self.basis.k_l:
            raise ValueError("basis was not built from the given CP parameters")
        return self

    @classmethod
    def build(
        cls,
        params: PhysicsParams,
        cp: CpParams,
        channels: Iterable[DecayChannel],
    ) -> "LyContext":
        catalog: dict[str, DecayChannel] = {}
        for channel in channels:
            if channel.id in catalog:
                raise ValueError(f"duplicate channel id '{channel.id}'")
            catalog[channel.id] = channel
        logger.debug(f"Construyendo contexto LY con canales {sorted(catalog)}")
        return cls(
            params=params,
            cp=cp,
            basis=build_stationary_states(cp),
            channels=catalog,
        )

    def channel(self, channel_id: str) -> DecayChannel:
        try:
            return self.channels[channel_id]
        except KeyError:
            logger.error(f"Canal no encontrado: {channel_id}")
            raise ChannelNotFoundError(channel_id) from None

    @property
    def norm(self) -> float:
        """N, real y positivo."""
        return math.sqrt(self.basis.entangled_norm_sq)


class IntensityPoint(BaseModel):
    """Un punto evaluado I(f1, t1; f2, t2)."""

    model_config = ConfigDict(frozen=True)

    f1: str
    t1: float
    f2: str
    t2: float
    value: float

    @model_validator(mode="after")
    def _check(self) -> "IntensityPoint":
        if not 0.0 <= self.t1 <= self.t2:
            raise ValueError("decay times must satisfy 0 <= t1 <= t2")
        if self.value < 0.0:
            raise ValueError("intensity must be non-negative")
        return self


# ── Helpers ───────────────────────────────────────────────────────────────────

def check_ordered_times(t1: float, t2: float) -> None:
    if not t1 >= 0.0:
        raise DomainError(f"t1 must be >= 0 (got {t1})")
    if not t2 >= t1:
        raise DomainError(f"decay times must be ordered, t2 >= t1 (got t1={t1}, t2={t2})")


def _phase(lam: complex, t: float) -> complex:
    return cmath.exp(-1j * lam * t)


# ── Intensity ─────────────────────────────────────────────────────────────────

def ly_amplitude(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> complex:
    """<f1 f2|T|i_{t1,t2}>."""
    check_ordered_times(t1, t2)
    ch1, ch2 = ctx.channel(f1), ctx.channel(f2)
    p = ctx.params
    # una exponencial por término: con f1 = f2 y t1 = t2 ambos términos coinciden bit a bit
    first = ch1.amp_s * ch2.amp_l * cmath.exp(-1j * (p.lambda_s * t1 + p.lambda_l * t2))
    second = ch1.amp_l * ch2.amp_s * cmath.exp(-1j * (p.lambda_l * t1 + p.lambda_s * t2))
    return ctx.norm / math.sqrt(2.0) * (first - second)


def ly_intensity(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> float:
    """I(f1, t1; f2, t2) como |ly_amplitude|^2."""
    return abs(ly_amplitude(f1, t1, f2, t2, ctx)) ** 2


def ly_point(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> IntensityPoint:
    return IntensityPoint(f1=f1, t1=t1, f2=f2, t2=t2, value=ly_intensity(f1, t1, f2, t2, ctx))


def c12(f1: str, f2: str, ctx: LyContext) -> float:
    ch1, ch2 = ctx.channel(f1), ctx.channel(f2)
    return ctx.basis.entangled_norm_sq / 2.0 * abs(ch1.amp_s * ch2.amp_s) ** 2


def _closed_terms(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> tuple[float, float, float]:
    check_ordered_times(t1, t2)
    ch1, ch2 = ctx.channel(f1), ctx.channel(f2)
    p = ctx.params
    dt = t2 - t1
    first = ch1.eta_abs**2 * math.exp(-p.gamma_l * t1 - p.gamma_s * t2)
    second = ch2.eta_abs**2 * math.exp(-p.gamma_s * t1 - p.gamma_l * t2)
    cross = (
        2.0
        * ch1.eta_abs
        * ch2.eta_abs
        * math.exp(-0.5 * p.gamma * (t1 + t2))
        * math.cos(p.delta_m * dt + ch1.phi - ch2.phi)
    )
    return first, second, cross


def ly_intensity_closed(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> float:
    """Forma cerrada de tres términos de la tasa de doble decaimiento."""
    first, second, cross = _closed_terms(f1, t1, f2, t2, ctx)
    return c12(f1, f2, ctx) * (first + second - cross)


def intensity_scale(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> float:
    """Suma de los módulos de los términos de la forma cerrada; cota superior de la intensidad."""
    first, second, cross = _closed_terms(f1, t1, f2, t2, ctx)
    return c12(f1, f2, ctx) * (first + second + abs(cross))


# ── Inferred Single-Kaon States ───────────────────────────────────────────────

def living_partner_state(f1: str, delta_t: float, ctx: LyContext) -> KaonState:
    """
    Estado normalizado de la partícula 2 un tiempo delta_t después de que la
    partícula 1 decayó a f1.

    Args:
        f1: Canal del primer decaimiento
        delta_t: Tiempo propio transcurrido desde ese decaimiento, >= 0
        ctx: Contexto LY

    Returns:
        KaonState: En delta_t = 0 es exactamente ``k_not_f(f1)``

    Raises:
        DomainError: Si delta_t < 0
        ChannelNotFoundError: Si f1 no está en el catálogo
    """
    if not delta_t >= 0.0:
        raise DomainError(f"delta_t must be >= 0 (got {delta_t})")
    start = k_not_f(ctx.channel(f1), ctx.basis)
    if delta_t == 0.0:
        return start
    return normalize(evolve(start, delta_t, ctx.params, ctx.basis))


def partner_state_after_decay(f1: str, t1: float, t2: float, ctx: LyContext) -> KaonState:
    """<f1|T|i_{t1,t2}> normalizado: el compañero construido directamente del estado del par.

    Difiere de ``living_partner_state(f1, t2 - t1)`` solo en una fase global.
    """
    check_ordered_times(t1, t2)
    ch1 = ctx.channel(f1)
    p = ctx.params
    c_l = ch1.amp_s * _phase(p.lambda_s, t1) * _phase(p.lambda_l, t2)
    c_s = -ch1.amp_l * _phase(p.lambda_l, t1) * _phase(p.lambda_s, t2)
    return normalize(recompose(c_s, c_l, ctx.basis))


def past_state_coefficients(f2: str, t2: float, t1: float, ctx: LyContext) -> tuple[complex, complex]:
    """(c_S, c_L) sin normalizar del kaón decaído en t1, dado f2 en t2."""
    check_ordered_times(t1, t2)
    ch2 = ctx.channel(f2)
    p = ctx.params
    dt = t2 - t1
    # sin el factor común e^{-i(lS + lL) t1}: solo queda dt
    c_s = ch2.eta * _phase(p.lambda_l, dt)
    c_l = -_phase(p.lambda_s, dt)
    return c_s, c_l


def past_state(f2: str, t2: float, t1: float, ctx: LyContext) -> KaonState:
    """Estado de la partícula 1 justo antes de decaer en t1, una vez conocido f2 en t2."""
    c_s, c_l = past_state_coefficients(f2, t2, t1, ctx)
    return normalize(recompose(c_s, c_l, ctx.basis))
