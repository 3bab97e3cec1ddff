"""
physics/kinematics.py
---------------------
Space-like / time-like classification of the two decay events.

Ambos kaones tienen la misma masa y salen en direcciones opuestas en el
sistema CM con velocidad beta_K. Con tiempos propios t1 <= t2 los eventos son

    space-like  si t1/t2 > R
    time-like   si t1/t2 < R,      R = (1 - beta_K) / (1 + beta_K)

y light-like en la igualdad (con tolerancia relativa 1e-12).

Example:
    >>> classify(0.5, 1.0, CmKinematics(beta_k=0.22))
    <CausalClass.TIME_LIKE: 'time_like'>
"""

import logging
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from physics.errors import DomainError

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

LIGHT_LIKE_RTOL: float = 1e-12


class CausalClass(str, Enum):
    SPACE_LIKE = "space_like"
    TIME_LIKE = "time_like"
    LIGHT_LIKE = "light_like"
    UNCLASSIFIED = "unclassified"


class CmKinematics(BaseModel):
    """Velocidad del kaón en el sistema CM (c = 1)."""

    model_config = ConfigDict(frozen=True)

    beta_k: float

    @field_validator("beta_k")
    @classmethod
    def _check_beta(cls, value: float) -> float:
        if not 0.0 <= value < 1.0:
            raise ValueError(f"beta_k must lie in [0, 1) (got {value})")
        return value

    @property
    def ratio_r(self) -> float:
        return (1.0 - self.beta_k) / (1.0 + self.beta_k)


def lorentz_gamma(beta_k: float) -> float:
    if not 0.0 <= beta_k < 1.0:
        raise DomainError(f"beta_k must lie in [0, 1) (got {beta_k})")
    return 1.0 / math.sqrt(1.0 - beta_k**2)


def _check_times(t1: float, t2: float) -> None:
    if not t2 > 0.0:
        raise DomainError(f"t2 must be > 0 (got {t2})")
    if not 0.0 <= t1 <= t2:
        raise DomainError(f"decay times must satisfy 0 <= t1 <= t2 (got t1={t1}, t2={t2})")


def interval_sq(t1: float, t2: float, kin: CmKinematics) -> float:
    """Intervalo invariante s^2 = dt^2 - dx^2 entre los dos decaimientos en el sistema CM.

    Positivo para pares time-like, negativo para space-like.
    """
    _check_times(t1, t2)
    gamma = lorentz_gamma(kin.beta_k)
    return gamma**2 * ((t2 - t1) ** 2 - kin.beta_k**2 * (t1 + t2) ** 2)


def classify(t1: float, t2: float, kin: CmKinematics) -> CausalClass:
    _check_times(t1, t2)
    r = kin.ratio_r
    ratio = t1 / t2
    if abs(ratio - r) <= LIGHT_LIKE_RTOL * r:
        return CausalClass.LIGHT_LIKE
    return CausalClass.SPACE_LIKE if ratio > r else CausalClass.TIME_LIKE


def classify_many(t1: np.ndarray, t2: np.ndarray, kin: CmKinematics) -> list[CausalClass]:
    """``classify`` vectorizado; mismos umbrales, elemento a elemento."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    if np.any(t2 <= 0.0) or np.any(t1 < 0.0) or np.any(t1 > t2):
        raise DomainError("decay times must satisfy 0 <= t1 <= t2 and t2 > 0")
    r = kin.ratio_r
    ratio = t1 / t2
    light = np.abs(ratio - r) <= LIGHT_LIKE_RTOL * r
    space = ratio > r
    return [
        CausalClass.LIGHT_LIKE if is_light else (CausalClass.SPACE_LIKE if is_space else CausalClass.TIME_LIKE)
        for is_light, is_space in zip(light.tolist(), space.tolist())
    ]
