"""
physics/kaon_core.py
--------------------
Single neutral-kaon state algebra.

Los estados son vectores complejos de dos componentes en la base de sabor
ortonormal (K0, K0bar). Los estados estacionarios K_S y K_L *no* son
ortogonales cuando hay violación de CP, así que expandir un estado sobre
ellos es resolver un sistema lineal 2x2, nunca una proyección.

Convenciones:
    - Tiempos propios en unidades de tau_S, anchos y delta_m en 1/tau_S (hbar = 1).
    - Solo se guardan *diferencias* de masa: lambda_S = -i Gamma_S/2 y
      lambda_L = delta_m - i Gamma_L/2. La fase común descartada no se
      observa en ninguna intensidad.
    - La fase global de los estados normalizados queda como se construyó,
      salvo donde se aplica ``fix_phase`` (componente K0 real y no negativa).

Example:
    >>> cp = CpParams(epsilon_s=0, epsilon_l=0)
    >>> basis = build_stationary_states(cp)
    >>> inner(basis.k_s, basis.k_l)
    0j
"""

import cmath
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from physics.errors import DegenerateBasisError, DomainError

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

# ── Tolerances ────────────────────────────────────────────────────────────────
# |overlap| tan cerca de 1 significa K_S y K_L paralelos
DEGENERACY_TOL: float = 1e-12
# Normas por debajo de esto cuentan como cero
ZERO_NORM_TOL: float = 1e-300


# ── Domain Types ──────────────────────────────────────────────────────────────

class PhysicsParams(BaseModel):
    """Anchos y diferencia de masa de los autovalores del Hamiltoniano efectivo."""

    model_config = ConfigDict(frozen=True)

    gamma_s: float
    gamma_l: float
    delta_m: float

    @model_validator(mode="after")
    def _check_widths(self) -> "PhysicsParams":
        for name in ("gamma_s", "gamma_l", "delta_m"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.gamma_s > self.gamma_l > 0.0:
            raise ValueError(
                f"widths must satisfy gamma_s > gamma_l > 0 "
                f"(got gamma_s={self.gamma_s}, gamma_l={self.gamma_l})"
            )
        return self

    @property
    def gamma(self) -> float:
        """Ancho total del par, Gamma_S + Gamma_L."""
        return self.gamma_s + self.gamma_l

    @property
    def delta_gamma(self) -> float:
        return self.gamma_s - self.gamma_l

    @property
    def lambda_s(self) -> complex:
        return complex(0.0, -0.5 * self.gamma_s)

    @property
    def lambda_l(self) -> complex:
        return complex(self.delta_m, -0.5 * self.gamma_l)


class CpParams(BaseModel):
    """Impurezas de CP de los estados estacionarios (epsilon_S, epsilon_L)."""

    model_config = ConfigDict(frozen=True)

    epsilon_s: complex
    epsilon_l: complex

    @field_validator("epsilon_s", "epsilon_l")
    @classmethod
    def _check_magnitude(cls, value: complex) -> complex:
        value = complex(value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError("CP parameters must be finite")
        if abs(value) >= 1.0:
            raise ValueError(f"|epsilon| must be < 1 (got {abs(value)})")
        return value

    @classmethod
    def from_epsilon_delta(cls, epsilon: complex, delta: complex) -> "CpParams":
        """Construye desde epsilon = (eS+eL)/2 y delta = (eS-eL)/2."""
        return cls(epsilon_s=epsilon + delta, epsilon_l=epsilon - delta)

    @property
    def epsilon(self) -> complex:
        return (self.epsilon_s + self.epsilon_l) / 2

    @property
    def delta(self) -> complex:
        return (self.epsilon_s - self.epsilon_l) / 2

    @property
    def t_violating(self) -> bool:
        return self.epsilon != 0

    @property
    def cpt_violating(self) -> bool:
        return self.delta != 0


class KaonState(BaseModel):
    """Amplitudes de un estado de un kaón sobre |K0> y |K0bar>."""

    model_config = ConfigDict(frozen=True)

    c_k0: complex
    c_k0bar: complex

    @field_validator("c_k0", "c_k0bar")
    @classmethod
    def _check_finite(cls, value: complex) -> complex:
        value = complex(value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError("state amplitudes must be finite")
        return value

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "KaonState":
        return cls(c_k0=complex(vector[0]), c_k0bar=complex(vector[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_k0, self.c_k0bar], dtype=np.complex128)

    def norm(self) -> float:
        return math.hypot(abs(self.c_k0), abs(self.c_k0bar))


K0 = KaonState(c_k0=1, c_k0bar=0)
K0BAR = KaonState(c_k0=0, c_k0bar=1)


class StationaryStates(BaseModel):
    """K_S y K_L unitarios, su overlap y el |N|^2 del estado entrelazado."""

    model_config = ConfigDict(frozen=True)

    k_s: KaonState
    k_l: KaonState
    overlap: complex
    entangled_norm_sq: float

    @model_validator(mode="after")
    def _check_consistency(self) -> "StationaryStates":
        for name in ("k_s", "k_l"):
            if abs(getattr(self, name).norm() - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm")
        if abs(self.overlap - inner(self.k_s, self.k_l)) > 1e-12:
            raise ValueError("overlap does not match <k_s|k_l>")
        expected = 1.0 / (1.0 - abs(self.overlap) ** 2)
        if abs(self.entangled_norm_sq - expected) > 1e-12 * expected:
            raise ValueError("entangled_norm_sq must equal (1 - |overlap|^2)^-1")
        return self

    @property
    def matrix(self) -> np.ndarray:
        """Columnas: k_s y k_l en la base de sabor."""
        return np.column_stack([self.k_s.vector, self.k_l.vector])


class DecayChannel(BaseModel):
    """Canal de decaimiento f: eta_f = <f|T|K_L>/<f|T|K_S> y la amplitud de K_S."""

    model_config = ConfigDict(frozen=True)

    id: str
    eta: complex
    amp_s: complex

    @field_validator("id")
    @classmethod
    def _check_id(cls, value: str) -> str:
        value = value.strip()
        if not value or any(ch in value for ch in ",\n\r"):
            raise ValueError("channel id must be non-empty and contain no commas")
        return value

    @field_validator("eta", "amp_s")
    @classmethod
    def _check_finite(cls, value: complex) -> complex:
        value = complex(value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError("channel parameters must be finite")
        return value

    @field_validator("amp_s")
    @classmethod
    def _check_amp_s(cls, value: complex) -> complex:
        # eta no está definido si K_S no puede decaer a f
        if value == 0:
            raise ValueError("amp_s must be non-zero")
        return value

    @classmethod
    def from_polar(
        cls,
        id: str,
        eta_abs: float,
        eta_phase: float,
        amp_abs: float = 1.0,
        amp_phase: float = 0.0,
    ) -> "DecayChannel":
        return cls(
            id=id,
            eta=cmath.rect(eta_abs, eta_phase),
            amp_s=cmath.rect(amp_abs, amp_phase),
        )

    @property
    def amp_l(self) -> complex:
        return self.eta * self.amp_s

    @property
    def eta_abs(self) -> float:
        return abs(self.eta)

    @property
    def phi(self) -> float:
        return cmath.phase(self.eta)


# ── State Algebra ─────────────────────────────────────────────────────────────

def inner(a: KaonState, b: KaonState) -> complex:
    """<a|b>, antilineal en ``a``."""
    return a.c_k0.conjugate() * b.c_k0 + a.c_k0bar.conjugate() * b.c_k0bar


def normalize(state: KaonState) -> KaonState:
    norm = state.norm()
    if norm <= ZERO_NORM_TOL:
        raise DegenerateBasisError("cannot normalize a zero-norm state")
    return KaonState(c_k0=state.c_k0 / norm, c_k0bar=state.c_k0bar / norm)


def fix_phase(state: KaonState) -> KaonState:
    """
    Rota la fase global para que la componente K0 sea real y no negativa.

    Si la componente K0 se anula, la componente K0bar queda real positiva.

    Args:
        state: Estado a rotar

    Returns:
        KaonState: El mismo rayo con la fase fijada
    """
    if abs(state.c_k0) > 0.0:
        rotation = state.c_k0.conjugate() / abs(state.c_k0)
        return KaonState(c_k0=abs(state.c_k0), c_k0bar=state.c_k0bar * rotation)
    if state.c_k0bar == 0:
        return state
    return KaonState(c_k0=0, c_k0bar=abs(state.c_k0bar))


def build_stationary_states(cp: CpParams) -> StationaryStates:
    """
    Construye K_S y K_L en la base de sabor, con su overlap y |N|^2.

    Args:
        cp: Impurezas epsilon_S, epsilon_L

    Returns:
        StationaryStates: Estados unitarios, overlap <K_S|K_L> y
        |N|^2 = 1 / (1 - |overlap|^2)

    Raises:
        DegenerateBasisError: Si K_S y K_L resultan paralelos
    """
    eps_s, eps_l = cp.epsilon_s, cp.epsilon_l
    norm_s = math.sqrt(2.0 * (1.0 + abs(eps_s) ** 2))
    norm_l = math.sqrt(2.0 * (1.0 + abs(eps_l) ** 2))
    k_s = KaonState(c_k0=(1 + eps_s) / norm_s, c_k0bar=(1 - eps_s) / norm_s)
    k_l = KaonState(c_k0=(1 + eps_l) / norm_l, c_k0bar=-(1 - eps_l) / norm_l)

    overlap = inner(k_s, k_l)
    if abs(overlap) >= 1.0 - DEGENERACY_TOL:
        logger.error(f"K_S y K_L paralelos para {cp!r}")
        raise DegenerateBasisError(f"degenerate stationary states (|<K_S|K_L>| = {abs(overlap)})")

    return StationaryStates(
        k_s=k_s,
        k_l=k_l,
        overlap=overlap,
        entangled_norm_sq=1.0 / (1.0 - abs(overlap) ** 2),
    )


def sl_decompose(state: KaonState, basis: StationaryStates) -> tuple[complex, complex]:
    """Coeficientes (c_S, c_L) con state = c_S k_s + c_L k_l."""
    try:
        c_s, c_l = np.linalg.solve(basis.matrix, state.vector)
    except np.linalg.LinAlgError as exc:
        raise DegenerateBasisError("singular K_S/K_L basis") from exc
    return complex(c_s), complex(c_l)


def recompose(c_s: complex, c_l: complex, basis: StationaryStates) -> KaonState:
    return KaonState.from_vector(c_s * basis.k_s.vector + c_l * basis.k_l.vector)


def _check_time(t: float, name: str = "t") -> None:
    if not t >= 0.0:
        raise DomainError(f"{name} must be >= 0 (got {t})")


def evolve(
    state: KaonState, t: float, params: PhysicsParams, basis: StationaryStates
) -> KaonState:
    """Evolución libre durante el tiempo propio ``t`` (la norma decrece, no se renormaliza)."""
    _check_time(t)
    c_s, c_l = sl_decompose(state, basis)
    return recompose(
        c_s * cmath.exp(-1j * params.lambda_s * t),
        c_l * cmath.exp(-1j * params.lambda_l * t),
        basis,
    )


def decay_amplitude(state: KaonState, f: DecayChannel, basis: StationaryStates) -> complex:
    """<f|T|state>."""
    c_s, c_l = sl_decompose(state, basis)
    return c_s * f.amp_s + c_l * f.amp_l


def k_not_f(f: DecayChannel, basis: StationaryStates) -> KaonState:
    """Estado unitario proporcional a |K_L> - eta_f |K_S>; no puede decaer a f."""
    if f.eta == 0:
        return basis.k_l
    try:
        return normalize(recompose(-f.eta, 1.0, basis))
    except DegenerateBasisError as exc:
        raise DegenerateBasisError(f"K_not_f has zero norm for channel '{f.id}'") from exc


def k_perp_not_f(f: DecayChannel, basis: StationaryStates) -> KaonState:
    """Estado unitario ortogonal a ``k_not_f(f)``: la componente que filtra el decaimiento."""
    blocked = k_not_f(f, basis)
    return fix_phase(
        KaonState(c_k0=-blocked.c_k0bar.conjugate(), c_k0bar=blocked.c_k0.conjugate())
    )


# ── Entangled Pair ────────────────────────────────────────────────────────────

def survival_probability(t1: float, params: PhysicsParams) -> float:
    """Norma^2 del estado del par C = -1 en t1: exp(-Gamma t1)."""
    _check_time(t1, "t1")
    return math.exp(-params.gamma * t1)


def antisymmetric_tensor(alpha: KaonState, beta: KaonState) -> np.ndarray:
    """N/sqrt(2) (|a>|b> - |b>|a>) como arreglo 2x2, con alpha y beta unitarios."""
    overlap_sq = abs(inner(alpha, beta)) ** 2
    if 1.0 - overlap_sq <= DEGENERACY_TOL:
        raise DegenerateBasisError("states are parallel; the antisymmetric pair vanishes")
    scale = 1.0 / math.sqrt(2.0 * (1.0 - overlap_sq))
    a, b = alpha.vector, beta.vector
    return scale * (np.outer(a, b) - np.outer(b, a))


def entangled_state(t: float, params: PhysicsParams, basis: StationaryStates) -> np.ndarray:
    """Estado del par C = -1, N/sqrt(2) (K_S K_L - K_L K_S), en t con ambos kaones evolucionados."""
    _check_time(t)
    k_s_t = evolve(basis.k_s, t, params, basis).vector
    k_l_t = evolve(basis.k_l, t, params, basis).vector
    scale = math.sqrt(basis.entangled_norm_sq / 2.0)
    return scale * (np.outer(k_s_t, k_l_t) - np.outer(k_l_t, k_s_t))


def entangled_norm_sq(t: float, params: PhysicsParams, basis: StationaryStates) -> float:
    return float(np.sum(np.abs(entangled_state(t, params, basis)) ** 2))


def basis_independence_check(
    alpha: KaonState,
    beta: KaonState,
    basis: StationaryStates | None = None,
) -> float:
    """
    Fidelidad entre el par antisimétrico (alpha, beta) y el de sabor.

    Con ``basis`` también se compara la escritura en K_S/K_L y se devuelve la
    menor de las dos fidelidades. Ambas valen 1 salvo redondeo: el estado
    C = -1 es único.

    Args:
        alpha: Primer estado (se normaliza)
        beta: Segundo estado, linealmente independiente de alpha
        basis: Base estacionaria opcional

    Returns:
        float: Fidelidad |<ref|cand>|^2
    """
    reference = antisymmetric_tensor(K0, K0BAR)
    candidate = antisymmetric_tensor(normalize(alpha), normalize(beta))
    fidelity = abs(np.vdot(reference, candidate)) ** 2
    if basis is not None:
        sl_pair = antisymmetric_tensor(basis.k_s, basis.k_l)
        fidelity = min(fidelity, abs(np.vdot(reference, sl_pair)) ** 2)
    return float(fidelity)
