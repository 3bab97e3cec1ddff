"""Fixtures compartidas: parámetros y contextos sintéticos (nunca los defaults incluidos)."""

import math

import numpy as np
import pytest

from physics.kaon_core import CpParams, DecayChannel, PhysicsParams
from physics.ly_model import LyContext


def random_context(rng: np.random.Generator, n_channels: int = 2) -> LyContext:
    """|eps_S|, |eps_L| <= 0.2, |eta| log-uniforme en [1e-4, 10], fases uniformes."""

    def small_complex() -> complex:
        return complex(*(rng.uniform(-1.0, 1.0) * 0.2 / math.sqrt(2.0) for _ in range(2)))

    params = PhysicsParams(
        gamma_s=1.0,
        gamma_l=float(rng.uniform(0.001, 0.6)),
        delta_m=float(rng.uniform(0.1, 2.0)),
    )
    cp = CpParams(epsilon_s=small_complex(), epsilon_l=small_complex())
    channels = [
        DecayChannel.from_polar(
            f"c{i}",
            eta_abs=float(10.0 ** rng.uniform(-4.0, 1.0)),
            eta_phase=float(rng.uniform(0.0, 2.0 * math.pi)),
            amp_abs=float(rng.uniform(0.5, 2.0)),
            amp_phase=float(rng.uniform(0.0, 2.0 * math.pi)),
        )
        for i in range(n_channels)
    ]
    return LyContext.build(params, cp, channels)


def ordered_times(rng: np.random.Generator, t_max: float = 30.0) -> tuple[float, float]:
    a, b = sorted(rng.uniform(0.0, t_max, size=2).tolist())
    return a, b


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def params() -> PhysicsParams:
    return PhysicsParams(gamma_s=1.0, gamma_l=0.5, delta_m=0.8)


@pytest.fixture
def cp() -> CpParams:
    return CpParams(epsilon_s=0.05 + 0.03j, epsilon_l=0.02 - 0.04j)


@pytest.fixture
def channels() -> list[DecayChannel]:
    return [
        DecayChannel.from_polar("a", 0.3, 0.7),
        DecayChannel.from_polar("b", 1.5, -2.0, amp_abs=0.8, amp_phase=0.4),
    ]


@pytest.fixture
def ctx(params, cp, channels) -> LyContext:
    return LyContext.build(params, cp, channels)


@pytest.fixture
def fig_ctx() -> LyContext:
    """Gamma_S = 1, Gamma_L = 0.002, dos canales con distinto eta."""
    return LyContext.build(
        PhysicsParams(gamma_s=1.0, gamma_l=0.002, delta_m=0.47),
        CpParams.from_epsilon_delta(1.6e-3 + 1.5e-3j, 0.0),
        [
            DecayChannel.from_polar("pipi", 2.232e-3, 0.7594),
            DecayChannel.from_polar("generic", 0.2, 0.5),
        ],
    )


@pytest.fixture(scope="session")
def mc_ctx() -> LyContext:
    """Gamma_S = 1, Gamma_L = 0.5: un t_max corto cubre todo el rango de dt."""
    return LyContext.build(
        PhysicsParams(gamma_s=1.0, gamma_l=0.5, delta_m=1.0),
        CpParams(epsilon_s=0.01 + 0.01j, epsilon_l=0.01 + 0.01j),
        [
            DecayChannel.from_polar("x", 0.6, 0.3),
            DecayChannel.from_polar("y", 0.9, 2.1),
        ],
    )
