"""Wigner functions of coherent superpositions and Fock-space states.

Normalization: W is a density over gamma = x + i p with dx dp measure, so a
coherent state peaks at 2/pi and the vacuum is (2/pi) exp(-2|gamma|^2).  The
vacuum's 1/e footprint has area pi/2, which is the reference "Planck cell"
for the tile metrics below.

Three independent routes are provided:

* :func:`wigner_superposition`: closed-form pairwise sum over coherent dyads;
* :func:`wigner_compass`: the six-term compass expression;
* :func:`wigner_fock_numeric`: displaced parity in a truncated Fock basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import gammaln

from .errors import CompassError, CutoffTooSmall, GridTooCoarse, NotNormalized
from .numerics import displacement_matrix
from .states import CoherentSuperposition, DensityMatrixFock, FockVector, compass, default_cutoff

__all__ = [
    "VACUUM_FOOTPRINT",
    "GridSpec",
    "PhaseSpaceGrid",
    "TileReport",
    "wigner_dyads",
    "wigner_superposition",
    "wigner_compass",
    "wigner_fock_numeric",
    "wigner_fock_series",
    "default_grid_spec",
    "wigner_grid",
    "integrate_grid",
    "negativity_volume",
    "expected_fringe_spacing",
    "central_tile_metrics",
]

VACUUM_FOOTPRINT = math.pi / 2
IMAG_TOL = 1e-10
CENTRAL_HALF_WIDTH = 2.0
MIN_ALTERNATIONS = 3


def wigner_dyads(centers, coeffs, gamma):
    """W of the operator sum_{jk} coeffs[j, k] |centers[j]><centers[k]|.

    Each dyad |a><b| contributes (2/pi) exp(-2|g|^2 + 2 g conj(b) + 2 conj(g) a
    - |a|^2/2 - |b|^2/2 - conj(b) a).  The operator must be Hermitian; the
    imaginary residue of the sum is checked and discarded.
    """
    a = np.asarray(centers, dtype=complex)
    C = np.asarray(coeffs, dtype=complex)
    g = np.asarray(gamma, dtype=complex)
    gc = np.conj(g)
    g2 = np.abs(g) ** 2
    total = np.zeros(g.shape, dtype=complex)
    for j in range(a.size):
        for k in range(a.size):
            if C[j, k] == 0:
                continue
            expo = (
                -2.0 * g2 + 2.0 * g * np.conj(a[k]) + 2.0 * gc * a[j]
                - 0.5 * abs(a[j]) ** 2 - 0.5 * abs(a[k]) ** 2 - np.conj(a[k]) * a[j]
            )
            total += C[j, k] * np.exp(expo)
    total *= 2.0 / math.pi
    resid = np.max(np.abs(total.imag), initial=0.0)
    if resid > IMAG_TOL:
        raise CompassError(f"imaginary residue {resid:.3g} in the Wigner sum")
    out = total.real
    return out if out.ndim else float(out)


def wigner_superposition(s: CoherentSuperposition, gamma):
    """W(gamma) of a normalized coherent superposition (array-friendly).

    The Gaussian integral over coherent states is done in closed form, so W is
    a sum over pairs of terms of dyads w_j conj(w_k) |a_j><a_k|.
    """
    if abs(s.norm_squared() - 1.0) > 1e-10:
        raise NotNormalized("wigner_superposition needs a normalized state")
    w = s.weights
    return wigner_dyads(s.centers, np.outer(w, np.conj(w)), gamma)


def wigner_compass(alpha: complex, gamma):
    """Compass-state Wigner function written as its six interference terms."""
    n2 = compass(alpha).weights[0].real ** 2
    g = np.asarray(gamma, dtype=complex)
    ag = alpha * np.conj(g)
    # both arguments are real: 2 Re[(1 +- i) alpha conj(gamma)]
    z1 = 2.0 * np.real((1 + 1j) * ag)
    z2 = 2.0 * np.real((1 - 1j) * ag)
    a2 = abs(alpha) ** 2
    g2 = np.abs(g) ** 2
    terms = (
        2.0 * np.exp(-2.0 * a2 - 2.0 * g2) * np.cosh(z1) * np.cosh(z2)
        + 2.0 * np.exp(-2.0 * g2) * np.cos(z1) * np.cos(z2)
        + np.exp(-2.0 * g2 - (a2 - z1)) * np.cos(a2 - z1)
        + np.exp(-2.0 * g2 - (a2 - z2)) * np.cos(a2 - z2)
        + np.exp(-2.0 * g2 - (a2 + z1)) * np.cos(a2 + z1)
        + np.exp(-2.0 * g2 - (a2 + z2)) * np.cos(a2 + z2)
    )
    out = n2 * 4.0 / math.pi * terms
    return out if out.ndim else float(out)


def _as_density(state) -> np.ndarray:
    if isinstance(state, FockVector):
        a = state.amplitudes
        return np.outer(a, a.conj())
    if isinstance(state, DensityMatrixFock):
        return state.matrix
    raise TypeError("expected a FockVector or DensityMatrixFock")


def wigner_fock_numeric(state: FockVector | DensityMatrixFock, gamma: complex) -> float:
    """(2/pi) sum_n (-1)^n <n| D(-gamma) rho D(gamma) |n>.

    The displaced state is represented in a larger basis sized for the
    displacement, and the retained trace is checked against the input.
    """
    gamma = complex(gamma)
    if isinstance(state, FockVector):
        psi = state.amplitudes
        N = state.cutoff
        M = default_cutoff(math.sqrt(N) + abs(gamma))
        phi = displacement_matrix(-gamma, N, M) @ psi
        before = float(np.real(np.vdot(psi, psi)))
        after = float(np.real(np.vdot(phi, phi)))
        pops = np.abs(phi) ** 2
    else:
        rho = _as_density(state)
        N = rho.shape[0] - 1
        M = default_cutoff(math.sqrt(N) + abs(gamma))
        D = displacement_matrix(-gamma, N, M)
        r = D @ rho @ D.conj().T
        before = float(np.real(np.trace(rho)))
        after = float(np.real(np.trace(r)))
        pops = np.real(np.diag(r))
    if abs(after - before) > 1e-10:
        raise CutoffTooSmall(f"displaced state lost {before - after:.3g} of its trace")
    parity = np.where(np.arange(M + 1) % 2 == 0, 1.0, -1.0)
    return float(2.0 / math.pi * np.sum(parity * pops))


def wigner_fock_series(rho: np.ndarray | DensityMatrixFock | FockVector, gamma) -> np.ndarray:
    """Vectorized Wigner function of a Fock-basis state (Laguerre series).

    W = (2/pi) sum_{m, k} c_k Re[rho_{m,m+k} (-1)^m l_m^{(k)}], with
    l_m^{(k)} = sqrt(m!/(m+k)!) (2 gamma)^k L_m^{(k)}(4|gamma|^2) e^{-2|gamma|^2}
    generated by a normalized three-term recurrence in m (c_0 = 1, c_k = 2).
    """
    if not isinstance(rho, np.ndarray):
        rho = _as_density(rho)
    g = np.asarray(gamma, dtype=complex)
    x = 4.0 * np.abs(g) ** 2
    N = rho.shape[0] - 1
    safe_log = np.log(np.where(x > 0, x, 1.0))
    phase = np.exp(1j * np.angle(g))
    W = np.zeros(g.shape)
    for k in range(N + 1):
        diag = np.diagonal(rho, offset=k)
        if not np.any(diag):
            continue
        if k == 0:
            cur = np.exp(-0.5 * x).astype(complex)
        else:
            cur = np.where(x > 0, np.exp(0.5 * (k * safe_log - gammaln(k + 1)) - 0.5 * x), 0.0) * phase**k
        prev = np.zeros_like(cur)
        acc = np.zeros(g.shape, dtype=complex)
        for m in range(N + 1 - k):
            if diag[m] != 0:
                acc += diag[m] * (1.0 if m % 2 == 0 else -1.0) * cur
            nxt = ((2 * m + 1 + k - x) * cur - math.sqrt(m * (m + k)) * prev) / math.sqrt((m + 1) * (m + k + 1))
            prev, cur = cur, nxt
        W += acc.real if k == 0 else 2.0 * acc.real
    return 2.0 / math.pi * W


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    n_p: int

    def __post_init__(self):
        if self.nx < 2 or self.n_p < 2:
            raise ValueError("grids need at least 2 points per axis")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid bounds are inverted")

    @classmethod
    def square(cls, half_width: float, n: int) -> "GridSpec":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(self.x_min, self.x_max, self.nx), np.linspace(self.p_min, self.p_max, self.n_p)


def default_grid_spec(alpha_magnitude: float) -> GridSpec:
    """Bounds +-(|alpha| + 4); spacing <= min(0.05, pi/(8|alpha|)); odd point count."""
    r = abs(alpha_magnitude)
    half = r + 4.0
    h = 0.05 if r == 0 else min(0.05, math.pi / (8.0 * r))
    n = int(math.ceil(2.0 * half / h - 1e-9)) + 1
    if n % 2 == 0:
        n += 1
    return GridSpec.square(half, n)


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """W sampled on a rectangle; ``values[i, j]`` is W(x[i] + i p[j])."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    state_label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def n_p(self) -> int:
        return self.p.size

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return float(self.x[0]), float(self.x[-1]), float(self.p[0]), float(self.p[-1])


def wigner_grid(state, spec: GridSpec, label: str | None = None) -> PhaseSpaceGrid:
    """Evaluate W on a grid: closed form for pure superpositions, Laguerre
    series for Fock-basis states."""
    x, p = spec.axes()
    gam = x[:, None] + 1j * p[None, :]
    if isinstance(state, CoherentSuperposition):
        vals = wigner_superposition(state, gam)
        label = label or state.label
    else:
        # row by row keeps the temporaries small
        vals = np.vstack([wigner_fock_series(state, row) for row in gam])
        label = label or type(state).__name__
    if not np.all(np.isfinite(vals)):
        raise CompassError("non-finite Wigner values")
    return PhaseSpaceGrid(x, p, vals, label)


def integrate_grid(g: PhaseSpaceGrid) -> float:
    """Trapezoidal integral of W dx dp."""
    return float(np.trapezoid(np.trapezoid(g.values, g.p, axis=1), g.x))


def negativity_volume(g: PhaseSpaceGrid) -> float:
    return float(np.sum(np.clip(-g.values, 0.0, None)) * g.dx * g.dp)


def expected_fringe_spacing(alpha_magnitude: float) -> float:
    """Spacing of the central chessboard nodal lines, pi / (2 sqrt(2) |alpha|)."""
    return math.pi / (2.0 * math.sqrt(2.0) * alpha_magnitude)


@dataclass(frozen=True)
class TileReport:
    central_value: float
    zero_crossing_spacings_x: tuple[float, ...]
    zero_crossing_spacings_p: tuple[float, ...]
    central_tile_area: float
    tile_area_over_vacuum_footprint: float
    has_chessboard: bool
    axis_angle: float = math.pi / 4
    alternations: tuple[int, int] = (0, 0)

    def as_dict(self) -> dict:
        area = self.central_tile_area
        return {
            "central_value": self.central_value,
            "zero_crossing_spacings_x": list(self.zero_crossing_spacings_x),
            "zero_crossing_spacings_p": list(self.zero_crossing_spacings_p),
            "central_tile_area": area if math.isfinite(area) else None,
            "tile_area_over_vacuum_footprint": (
                self.tile_area_over_vacuum_footprint if math.isfinite(area) else None
            ),
            "has_chessboard": self.has_chessboard,
            "axis_angle": self.axis_angle,
            "alternations": list(self.alternations),
        }


def _crossings(t: np.ndarray, w: np.ndarray) -> np.ndarray:
    s = np.sign(w)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    # linear interpolation between bracketing samples
    return t[idx] - w[idx] * (t[idx + 1] - t[idx]) / (w[idx + 1] - w[idx])


def _central_spacing(cross: np.ndarray) -> float:
    left = cross[cross < 0]
    right = cross[cross >= 0]
    if left.size == 0 or right.size == 0:
        return math.inf
    return float(right.min() - left.max())


def central_tile_metrics(
    g: PhaseSpaceGrid, alpha_magnitude: float, alpha_phase: float = 0.0
) -> TileReport:
    """Zero-crossing analysis of the central interference pattern.

    W is cut along two perpendicular lines through the origin aligned with
    the chessboard's nodal lines, i.e. at ``alpha_phase + pi/4`` and
    ``alpha_phase + 3pi/4``.  (For real alpha the W-cuts along the x and p
    axes themselves only touch zero and never change sign.)

    Sign alternations are counted only in the central window
    |t| <= min(2, |alpha| / (2 sqrt 2)): beyond it the cuts run into the
    fringes of adjacent branch pairs, centered at distance |alpha|/sqrt 2.
    """
    r = abs(alpha_magnitude)
    h = max(abs(g.dx), abs(g.dp))
    if r > 0 and h > expected_fringe_spacing(r) / 4.0:
        raise GridTooCoarse(
            f"grid spacing {h:.3g} aliases the expected fringe spacing {expected_fringe_spacing(r):.3g}"
        )
    x0, x1, p0, p1 = g.bounds
    if min(-x0, x1, -p0, p1) < CENTRAL_HALF_WIDTH - 1e-12:
        raise GridTooCoarse("grid does not cover the central region |x|, |p| <= 2")
    interp = RegularGridInterpolator((g.x, g.p), g.values)
    t = np.arange(-CENTRAL_HALF_WIDTH, CENTRAL_HALF_WIDTH + 1e-12, 0.25 * min(abs(g.dx), abs(g.dp)))
    angle = alpha_phase + math.pi / 4
    window = CENTRAL_HALF_WIDTH if r == 0 else min(CENTRAL_HALF_WIDTH, r / (2.0 * math.sqrt(2.0)))
    spacings, alternations, central = [], [], []
    for ang in (angle, angle + math.pi / 2):
        pts = np.column_stack([t * math.cos(ang), t * math.sin(ang)])
        w = interp(pts)
        cross = _crossings(t, w)
        spacings.append(tuple(float(v) for v in np.diff(cross)))
        alternations.append(int(np.count_nonzero(np.abs(cross) <= window)))
        central.append(_central_spacing(cross))
    area = central[0] * central[1]
    has_chessboard = min(alternations) >= MIN_ALTERNATIONS
    return TileReport(
        central_value=float(interp([[0.0, 0.0]])[0]),
        zero_crossing_spacings_x=spacings[0],
        zero_crossing_spacings_p=spacings[1],
        central_tile_area=area,
        tile_area_over_vacuum_footprint=area / VACUUM_FOOTPRINT,
        has_chessboard=has_chessboard,
        axis_angle=angle,
        alternations=(alternations[0], alternations[1]),
    )
