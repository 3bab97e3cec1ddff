"""
physics/th_model.py
-------------------
Time-history (TH) factorization of the double decay rate.

La tasa se arma con cuatro pasos sucesivos:
    1. evolución del par hasta t1 y proyección sobre K_perp(f1) x K_not(f1)
    2. amplitud de decaimiento de K_perp(f1) a f1
    3. evolución libre del sobreviviente K_not(f1) durante delta_t y su
       probabilidad de transición a K_perp(f2)
    4. amplitud de decaimiento de K_perp(f2) a f2

El sobreviviente se evoluciona *sin normalizar* desde un estado unitario en
t1, así que las pérdidas por decaimiento entre t1 y t2 quedan en el paso 3.

Example:
    >>> breakdown = th_intensity("pipi", 1.0, "pi0pi0", 4.0, ctx)
    >>> breakdown.total  # igual a ly_intensity en el mismo punto
"""

import cmath
import logging
import math

from pydantic import BaseModel, ConfigDict, model_validator

from physics.errors import DomainError
from physics.kaon_core import (
    decay_amplitude,
    evolve,
    inner,
    k_not_f,
    k_perp_not_f,
    recompose,
)
from physics.ly_model import LyContext, check_ordered_times

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)


class ThBreakdown(BaseModel):
    """Los cuatro factores TH y su producto."""

    model_config = ConfigDict(frozen=True)

    step1_prob: float
    step2_amp: complex
    step3_prob: float
    step4_amp: complex
    total: float

    @model_validator(mode="after")
    def _check_product(self) -> "ThBreakdown":
        if self.step1_prob < 0.0 or self.step1_prob > 0.5:
            raise ValueError("step1_prob must lie in [0, 1/2]")
        if self.step3_prob < 0.0 or not math.isfinite(self.step3_prob):
            raise ValueError("step3_prob must be finite and non-negative")
        product = (
            self.step1_prob
            * self.step3_prob
            * abs(self.step2_amp) ** 2
            * abs(self.step4_amp) ** 2
        )
        if abs(self.total - product) > 1e-12 * max(abs(product), 1e-300):
            raise ValueError("total must equal the product of the four steps")
        return self


def _check_delta_t(delta_t: float) -> None:
    if not delta_t >= 0.0:
        raise DomainError(f"delta_t must be >= 0 (got {delta_t})")


def transition_probability_flavor(f1: str, f2: str, delta_t: float, ctx: LyContext) -> float:
    """|<K_perp(f2)|K_not(f1)(delta_t)>|^2 como proyección literal en la base de sabor.

    Pierde precisión relativa del orden de 1e-16/|eta_f2|; sirve de verificación cruzada.
    """
    _check_delta_t(delta_t)
    survivor = evolve(k_not_f(ctx.channel(f1), ctx.basis), delta_t, ctx.params, ctx.basis)
    target = k_perp_not_f(ctx.channel(f2), ctx.basis)
    return abs(inner(target, survivor)) ** 2


def transition_probability(f1: str, f2: str, delta_t: float, ctx: LyContext) -> float:
    """P(K_not(f1)(0) -> K_perp(f2)(delta_t)).

    En dos dimensiones |<K_perp(f)|v>| = |det(K_not(f), v)|. Con ambos estados
    escritos en K_S/K_L queda |det(K_S, K_L)| |c_S + eta_f c_L| / ||K_L - eta_f K_S||,
    y los coeficientes del sobreviviente evolucionan con fases puras.

    Args:
        f1: Canal del primer decaimiento (define K_not(f1))
        f2: Canal del segundo decaimiento (define K_perp(f2))
        delta_t: t2 - t1, >= 0
        ctx: Contexto LY

    Returns:
        float: Probabilidad de transición, incluida la pérdida por decaimiento
    """
    _check_delta_t(delta_t)
    ch1, ch2 = ctx.channel(f1), ctx.channel(f2)
    p, basis = ctx.params, ctx.basis
    n1 = recompose(-ch1.eta, 1.0, basis).norm()
    n2 = recompose(-ch2.eta, 1.0, basis).norm()
    # coeficientes del sobreviviente por n1: (-eta1 e^{-i lS dt}, e^{-i lL dt})
    c_s = -ch1.eta * cmath.exp(-1j * p.lambda_s * delta_t)
    c_l = cmath.exp(-1j * p.lambda_l * delta_t)
    det_sl = basis.k_s.c_k0 * basis.k_l.c_k0bar - basis.k_s.c_k0bar * basis.k_l.c_k0
    return abs(det_sl) ** 2 * abs(c_s + ch2.eta * c_l) ** 2 / (n1 * n2) ** 2


def th_intensity(f1: str, t1: float, f2: str, t2: float, ctx: LyContext) -> ThBreakdown:
    """I(f1, t1; f2, t2) desde la historia temporal, factor por factor."""
    check_ordered_times(t1, t2)
    ch1, ch2 = ctx.channel(f1), ctx.channel(f2)

    step1 = 0.5 * math.exp(-ctx.params.gamma * t1)
    step2 = decay_amplitude(k_perp_not_f(ch1, ctx.basis), ch1, ctx.basis)
    step3 = transition_probability(f1, f2, t2 - t1, ctx)
    step4 = decay_amplitude(k_perp_not_f(ch2, ctx.basis), ch2, ctx.basis)

    return ThBreakdown(
        step1_prob=step1,
        step2_amp=step2,
        step3_prob=step3,
        step4_amp=step4,
        total=step1 * step3 * abs(step2) ** 2 * abs(step4) ** 2,
    )
