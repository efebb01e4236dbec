"""Finite superpositions of coherent states of a single field mode.

Conventions: hbar = 1, phase-space point gamma = x + i p.  A coherent state
|alpha> is stored only through its complex center; every inner product is
evaluated from the closed-form overlap, never from a truncated basis, unless
a Fock representation is requested explicitly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import CutoffTooSmall, DegenerateState, NotNormalized

__all__ = [
    "CoherentSuperposition",
    "FockVector",
    "DensityMatrixFock",
    "overlap",
    "inner",
    "normalize",
    "coherent",
    "cat",
    "compass",
    "default_cutoff",
    "coherent_fock_amplitudes",
    "to_fock",
    "photon_distribution",
    "fidelity",
]

NORM_TOL = 1e-12
TRUNCATION_TOL = 1e-6


def overlap(alpha, beta):
    """Return <beta|alpha> for coherent states (broadcasts over arrays)."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    out = np.exp(-0.5 * np.abs(alpha) ** 2 - 0.5 * np.abs(beta) ** 2 + np.conj(beta) * alpha)
    return out if out.ndim else complex(out)


@dataclass(frozen=True, eq=False)
class CoherentSuperposition:
    """``sum_j weights[j] |centers[j]>``.

    Terms are kept in insertion order and identical centers are never merged,
    so that protocol branches stay traceable.
    """

    weights: np.ndarray
    centers: np.ndarray
    is_normalized: bool = False
    label: str = field(default="superposition", compare=False)

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex)).copy()
        c = np.atleast_1d(np.asarray(self.centers, dtype=complex)).copy()
        if w.ndim != 1 or w.shape != c.shape:
            raise ValueError("weights and centers must be 1-D and of equal length")
        if w.size == 0:
            raise ValueError("a superposition needs at least one term")
        if not np.any(w != 0):
            raise DegenerateState("all weights are zero")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(c))):
            raise ValueError("weights and centers must be finite")
        w.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "centers", c)
        if self.is_normalized and abs(self.norm_squared() - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm^2 = {self.norm_squared():.16g}, expected 1")

    def __len__(self):
        return self.weights.size

    def gram(self) -> np.ndarray:
        """Matrix G[j, k] = <centers[j]|centers[k]>."""
        return overlap(self.centers[None, :], self.centers[:, None])

    def norm_squared(self) -> float:
        w = self.weights
        return float(np.real(np.conj(w) @ self.gram() @ w))

    @property
    def max_amplitude(self) -> float:
        return float(np.max(np.abs(self.centers)))

    def scaled(self, factor: complex) -> "CoherentSuperposition":
        """Multiply every weight by ``factor`` (drops the normalized flag unless |factor| = 1)."""
        keep = self.is_normalized and abs(abs(factor) - 1.0) < 1e-15
        return CoherentSuperposition(self.weights * factor, self.centers, keep, self.label)

    def rotated(self, angle: float) -> "CoherentSuperposition":
        """Phase-space rotation: every center is multiplied by exp(i angle)."""
        return CoherentSuperposition(
            self.weights, self.centers * np.exp(1j * angle), self.is_normalized, self.label
        )

    def __add__(self, other: "CoherentSuperposition") -> "CoherentSuperposition":
        return CoherentSuperposition(
            np.concatenate([self.weights, other.weights]),
            np.concatenate([self.centers, other.centers]),
            False,
            self.label,
        )

    def describe(self) -> dict:
        return {
            "label": self.label,
            "weights": [[float(z.real), float(z.imag)] for z in self.weights],
            "centers": [[float(z.real), float(z.imag)] for z in self.centers],
        }


def inner(a: CoherentSuperposition, b: CoherentSuperposition) -> complex:
    """<a|b> from pairwise coherent overlaps."""
    g = overlap(b.centers[None, :], a.centers[:, None])
    return complex(np.conj(a.weights) @ g @ b.weights)


def normalize(s: CoherentSuperposition) -> CoherentSuperposition:
    n2 = s.norm_squared()
    if not n2 > 1e-300:
        raise DegenerateState(f"state norm^2 {n2!r} is not positive")
    return CoherentSuperposition(s.weights / math.sqrt(n2), s.centers, True, s.label)


def coherent(alpha: complex) -> CoherentSuperposition:
    return CoherentSuperposition([1.0], [alpha], True, "coherent")


def cat(alpha: complex) -> CoherentSuperposition:
    """Even cat N0 (|alpha> + |-alpha>)."""
    return normalize(CoherentSuperposition([1.0, 1.0], [alpha, -alpha], label="cat"))


def compass(alpha: complex) -> CoherentSuperposition:
    """N (|alpha> + |i alpha> + |-alpha> + |-i alpha>)."""
    centers = alpha * np.array([1.0, 1j, -1.0, -1j])
    return normalize(CoherentSuperposition(np.ones(4), centers, label="compass"))


def default_cutoff(amplitude) -> int:
    """Fock cutoff keeping the Poisson tail of every center below ~1e-10.

    ``amplitude`` is either a center magnitude or a superposition.
    """
    if isinstance(amplitude, CoherentSuperposition):
        amplitude = amplitude.max_amplitude
    n = abs(amplitude) ** 2
    return int(math.ceil(n + 10.0 * math.sqrt(n + 1.0) + 20.0))


@dataclass(frozen=True, eq=False)
class FockVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D array")
        object.__setattr__(self, "amplitudes", a)
        if self.norm() > 1.0 + 1e-12:
            raise ValueError(f"Fock vector norm {self.norm():.16g} exceeds 1")

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_density(self) -> "DensityMatrixFock":
        a = self.amplitudes
        return DensityMatrixFock(np.outer(a, a.conj()))

    @classmethod
    def number_state(cls, n: int, cutoff: int) -> "FockVector":
        a = np.zeros(cutoff + 1, dtype=complex)
        a[n] = 1.0
        return cls(a)


@dataclass(frozen=True, eq=False)
class DensityMatrixFock:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0] - 1

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def check(self, herm_tol: float = 1e-12, eig_tol: float = 1e-9) -> None:
        """Raise ValueError unless Hermitian, trace <= 1 and (nearly) positive."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if self.trace() > 1.0 + 1e-12:
            raise ValueError(f"trace {self.trace():.16g} exceeds 1")
        lo = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
        if lo < -eig_tol:
            raise ValueError(f"smallest eigenvalue {lo:.3g} is negative")


def coherent_fock_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff.

    Magnitudes come from log-Gamma (no factorial overflow); the phase is an
    accumulated product of the unit phasor, so centers related by a factor
    of i produce phases related exactly by powers of i.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    n = np.arange(cutoff + 1)
    r = abs(alpha)
    out = np.zeros(cutoff + 1, dtype=complex)
    if r == 0.0:
        out[0] = 1.0
        return out
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    # component-wise division stays finite for subnormal alpha
    a = complex(alpha)
    unit = complex(a.real / r, a.imag / r)
    phasor = np.ones(cutoff + 1, dtype=complex)
    if cutoff:
        phasor[1:] = np.cumprod(np.full(cutoff, unit))
    return np.exp(logmag) * phasor


def to_fock(s: CoherentSuperposition, cutoff: int | None = None) -> FockVector:
    if cutoff is None:
        cutoff = default_cutoff(s)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    amps = np.zeros(cutoff + 1, dtype=complex)
    for w, c in zip(s.weights, s.centers):
        amps += w * coherent_fock_amplitudes(c, cutoff)
    kept = float(np.real(np.vdot(amps, amps)))
    total = s.norm_squared()
    if kept < (1.0 - TRUNCATION_TOL) * total:
        warnings.warn(
            CutoffTooSmall(f"cutoff {cutoff} keeps only {kept / total:.3g} of the norm"),
            stacklevel=2,
        )
    return FockVector(amps)


def photon_distribution(s: CoherentSuperposition, cutoff: int | None = None) -> np.ndarray:
    a = to_fock(s, cutoff).amplitudes
    return np.abs(a) ** 2


def fidelity(a: CoherentSuperposition, b: CoherentSuperposition) -> float:
    """|<a|b>|^2 for normalized superpositions."""
    for s in (a, b):
        if abs(s.norm_squared() - 1.0) > 1e-10:
            raise NotNormalized("fidelity needs normalized states")
    return float(min(1.0, max(0.0, abs(inner(a, b)) ** 2)))
