"""Truncated Fock-space oracles.

Nothing in here reuses the closed-form coherent-state algebra of the other
modules (apart from building initial Fock vectors); it exists to check that
algebra independently.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffTooSmall, StepTooLarge
from .protocol import AtomState
from .states import DensityMatrixFock, FockVector

__all__ = [
    "displacement_matrix",
    "jc_propagate",
    "lindblad_rk4",
    "lindblad_rhs",
    "default_rk4_step",
    "trace_distance",
    "annihilation",
]

# Real-axis stability limit of classical RK4 is ~2.785; stay below it.
RK4_STABILITY = 2.5
TAIL_TOL = 1e-12


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)


def displacement_matrix(gamma: complex, cutoff: int, out_cutoff: int | None = None) -> np.ndarray:
    """Matrix elements <m|D(gamma)|n>, m = 0..out_cutoff, n = 0..cutoff.

    Uses the associated-Laguerre closed form with the factorial ratio and the
    power of |gamma| folded into a single log-Gamma exponent.
    """
    if cutoff < 0:
        raise CutoffTooSmall("cutoff must be non-negative")
    if out_cutoff is None:
        out_cutoff = cutoff
    m = np.arange(out_cutoff + 1)[:, None]
    n = np.arange(cutoff + 1)[None, :]
    r = abs(gamma)
    if r == 0.0:
        return np.eye(out_cutoff + 1, cutoff + 1, dtype=complex)
    lo = np.minimum(m, n)
    k = np.abs(m - n)
    x = r * r
    logpref = 0.5 * (gammaln(lo + 1) - gammaln(lo + k + 1)) + k * math.log(r) - 0.5 * x
    # above the diagonal the base is -conj(gamma) instead of gamma
    angle = np.where(m >= n, np.angle(gamma), np.angle(-np.conj(gamma)))
    lag = eval_genlaguerre(lo, k, x)
    return np.exp(logpref + 1j * k * angle) * lag


def jc_propagate(field: FockVector, atom: AtomState, g: float, delta: float, tau: float) -> np.ndarray:
    """Exact evolution under delta a^dag a + g(|e><g| a + |g><e| a^dag).

    Returns an array of shape (2, cutoff+1); row 0 holds the |e, n>
    amplitudes and row 1 the |g, n> amplitudes.  Each excitation manifold
    {|e, n>, |g, n+1>} is propagated with its own closed-form 2x2 unitary.
    """
    amps = field.amplitudes
    N = field.cutoff
    if abs(amps[-1]) ** 2 > TAIL_TOL:
        raise CutoffTooSmall(f"population {abs(amps[-1]) ** 2:.3g} at the cutoff level {N}")
    psi = np.zeros((2, N + 1), dtype=complex)
    psi[0] = atom.c_e * amps
    psi[1] = atom.c_g * amps
    out = np.zeros_like(psi)

    # |g, 0> is uncoupled with zero energy
    out[1, 0] = psi[1, 0]
    # |e, N> would couple to |g, N+1>, outside the space; its amplitude is
    # below TAIL_TOL, so it only picks up the free phase.
    out[0, N] = np.exp(-1j * delta * N * tau) * psi[0, N]

    n = np.arange(N)
    G = g * np.sqrt(n + 1.0)
    mean = delta * (n + 0.5)
    d = -0.5 * delta
    omega = np.sqrt(d * d + G * G)
    c = np.cos(omega * tau)
    s_over = tau * np.sinc(omega * tau / np.pi)  # sin(omega tau) / omega
    ph = np.exp(-1j * mean * tau)
    a_e = psi[0, :N]
    a_g = psi[1, 1:]
    out[0, :N] = ph * ((c - 1j * s_over * d) * a_e - 1j * s_over * G * a_g)
    out[1, 1:] = ph * (-1j * s_over * G * a_e + (c + 1j * s_over * d) * a_g)
    return out


def lindblad_rhs(rho: np.ndarray, kappa: float, a: np.ndarray, num: np.ndarray) -> np.ndarray:
    return -0.5 * kappa * (num[:, None] * rho + rho * num[None, :] - 2.0 * a @ rho @ a.conj().T)


def default_rk4_step(kappa: float, t: float) -> float:
    """Fixed step with kappa*dt = min(1e-3, kappa*t/1000)."""
    if kappa <= 0 or t <= 0:
        return t
    return min(1e-3, kappa * t / 1000.0) / kappa


def lindblad_rk4(rho0: DensityMatrixFock, kappa: float, t: float, dt: float | None = None) -> DensityMatrixFock:
    """Integrate zero-temperature amplitude damping with fixed-step RK4."""
    if kappa < 0 or t < 0:
        raise ValueError("kappa and t must be non-negative")
    rho = rho0.matrix.copy()
    if kappa == 0 or t == 0:
        return DensityMatrixFock(rho)
    if dt is None:
        dt = default_rk4_step(kappa, t)
    if not 0 < dt <= t:
        raise ValueError("need 0 < dt <= t")
    steps = int(math.ceil(t / dt - 1e-9))
    h = t / steps
    N = rho0.cutoff
    if kappa * h * max(N, 1) > RK4_STABILITY:
        raise StepTooLarge(f"kappa*dt*cutoff = {kappa * h * N:.3g} exceeds the RK4 stability bound")
    a = annihilation(N)
    num = np.arange(N + 1, dtype=float)
    tr = np.trace(rho).real
    for _ in range(steps):
        k1 = lindblad_rhs(rho, kappa, a, num)
        k2 = lindblad_rhs(rho + 0.5 * h * k1, kappa, a, num)
        k3 = lindblad_rhs(rho + 0.5 * h * k2, kappa, a, num)
        k4 = lindblad_rhs(rho + h * k3, kappa, a, num)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        new_tr = np.trace(rho).real
        if abs(new_tr - tr) > 1e-6:
            raise StepTooLarge(f"trace drifted by {new_tr - tr:.3g} in one step")
        tr = new_tr
    return DensityMatrixFock(rho)


def trace_distance(a: DensityMatrixFock | np.ndarray, b: DensityMatrixFock | np.ndarray) -> float:
    """Half the sum of absolute eigenvalues of a - b."""
    ma = getattr(a, "matrix", a)
    mb = getattr(b, "matrix", b)
    if ma.shape != mb.shape:
        raise ValueError("matrices differ in shape")
    diff = ma - mb
    ev = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(ev)))
