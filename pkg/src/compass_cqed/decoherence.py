"""Zero-temperature cavity damping of the compass state.

Under amplitude damping a coherent dyad |a><b| maps to
<b|a>^{1 - e^{-kappa t}} |a_t><b_t| with a_t = a e^{-kappa t/2}.  For the
compass this gives the sixteen-term density matrix assembled here, with
e^{-2|alpha|^2(1-e^{-kappa t})} on opposite pairs and
e^{-|alpha|^2(1 +- i)(1-e^{-kappa t})} on adjacent pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroAmplitude
from .wigner import wigner_dyads
from .states import DensityMatrixFock, coherent_fock_amplitudes, compass, default_cutoff

__all__ = [
    "DecayParams",
    "dyad_damping_factor",
    "compass_dyads",
    "decohere_compass",
    "coherence_factor",
    "small_decay_log_error",
    "compass_lifetime",
    "purity",
    "opposite_pair_weight",
    "decohered_wigner",
]


@dataclass(frozen=True)
class DecayParams:
    """Cavity decay rate ``kappa`` (with ``t_c = 1/kappa``) and elapsed time ``t``."""

    kappa: float | None = None
    t: float = 0.0
    t_c: float | None = None

    def __post_init__(self):
        k, tc = self.kappa, self.t_c
        if k is None and tc is None:
            raise ValueError("give kappa or t_c")
        if k is None:
            if tc <= 0:
                raise ValueError("t_c must be positive")
            object.__setattr__(self, "kappa", 1.0 / tc)
        elif tc is None:
            if k < 0:
                raise ValueError("kappa must be non-negative")
            object.__setattr__(self, "t_c", math.inf if k == 0 else 1.0 / k)
        elif abs(k * tc - 1.0) > 1e-12:
            raise ValueError("t_c must equal 1/kappa")
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @classmethod
    def from_kappa_t(cls, kappa_t: float, kappa: float = 1.0) -> "DecayParams":
        return cls(kappa=kappa, t=kappa_t / kappa)

    @property
    def kappa_t(self) -> float:
        return self.kappa * self.t

    @property
    def loss(self) -> float:
        """1 - e^{-kappa t}, the fraction of energy lost."""
        return -math.expm1(-self.kappa_t)


def dyad_damping_factor(a: complex, b: complex, loss: float) -> complex:
    """Weight <b|a>^loss carried by |a_t><b_t| after damping."""
    return complex(np.exp(loss * (-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(b) * a)))


def compass_dyads(alpha: complex, params: DecayParams) -> tuple[np.ndarray, np.ndarray]:
    """Centers alpha_t {1, -1, i, -i} and the 4x4 coefficient matrix C.

    rho(t) = sum_{jk} C[j, k] |beta_j><beta_k|, with C including |N|^2.
    """
    base = alpha * np.array([1.0, -1.0, 1j, -1j])
    n2 = compass(alpha).weights[0].real ** 2
    loss = params.loss
    C = np.empty((4, 4), dtype=complex)
    for j in range(4):
        for k in range(4):
            C[j, k] = n2 * dyad_damping_factor(base[j], base[k], loss)
    return base * math.exp(-0.5 * params.kappa_t), C


def decohere_compass(alpha: complex, params: DecayParams, cutoff: int | None = None) -> DensityMatrixFock:
    """Fock-basis density matrix of the damped compass state."""
    if cutoff is None:
        cutoff = default_cutoff(alpha)
    centers, C = compass_dyads(alpha, params)
    V = np.array([coherent_fock_amplitudes(c, cutoff) for c in centers])
    rho = V.T @ C @ V.conj()
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrixFock(rho)


def coherence_factor(alpha: complex, params: DecayParams) -> float:
    """e^{-2|alpha|^2 (1 - e^{-kappa t})}: surviving opposite-pair coherence."""
    return math.exp(-2.0 * abs(alpha) ** 2 * params.loss)


def small_decay_log_error(alpha: complex, kappa_t: float) -> float:
    """Bound on |ln coherence_factor + 2|alpha|^2 kappa t|, namely |alpha|^2 (kappa t)^2.

    From x - (1 - e^{-x}) <= x^2/2 for x >= 0.
    """
    return abs(alpha) ** 2 * kappa_t**2


def compass_lifetime(alpha: complex, t_c: float) -> float:
    """t_c / (2 |alpha|^2)."""
    if alpha == 0:
        raise ZeroAmplitude("the lifetime diverges for alpha = 0")
    return t_c / (2.0 * abs(alpha) ** 2)


def purity(rho: DensityMatrixFock) -> float:
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.real(np.sum(m * m.T)))


def opposite_pair_weight(alpha: complex, params: DecayParams) -> float:
    """Ratio of the |alpha_t><-alpha_t| coefficient to the diagonal one, read off the dyads."""
    _, C = compass_dyads(alpha, params)
    return float((C[0, 1] / C[0, 0]).real)


def decohered_wigner(alpha: complex, params: DecayParams, gamma):
    """W of the damped compass evaluated directly from its coherent dyads."""
    centers, C = compass_dyads(alpha, params)
    return wigner_dyads(centers, C, gamma)
