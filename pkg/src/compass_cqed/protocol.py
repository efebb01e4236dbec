"""Dispersive two-atom preparation of compass states.

Atoms cross the cavity one after another.  In the dispersive limit an atom
in |g> rotates every coherent component by exp(-i phi - i delta_tau) and an
atom in |e> rotates it by exp(+i phi - i delta_tau) while picking up the
phase exp(i phi).  Detecting the atoms in chosen Ramsey states then projects
the field onto a superposition of up to four coherent states.

Branches are always labelled in atom-passage order.
"""
from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, NotNormalized, PhaseConditionViolated, ZeroDetuning
from .states import (
    CoherentSuperposition,
    DensityMatrixFock,
    coherent,
    compass,
    fidelity,
    normalize,
    overlap,
    to_fock,
)

__all__ = [
    "AtomState",
    "ProtocolConfig",
    "Branch",
    "AtomFieldState",
    "UndetectedBranch",
    "phi_from_physical",
    "tau_for_phase",
    "ramsey_atom",
    "dispersive_pass",
    "two_atom_pass",
    "conditional_project",
    "make_compass",
    "joint_probability",
    "outcome_probabilities",
    "single_atom_fringe",
    "undetected_atom_pass",
    "undetected_atom_protocol",
    "rotated_compass_fidelity",
    "ensemble_density",
    "single_atom_fock_rows",
    "fringe_scan",
]

EXCITED, GROUND = "e", "g"
PHASE_TOL = 1e-9


@dataclass(frozen=True)
class AtomState:
    c_e: complex
    c_g: complex

    def __post_init__(self):
        n = abs(self.c_e) ** 2 + abs(self.c_g) ** 2
        if abs(n - 1.0) > 1e-12:
            raise NotNormalized(f"|c_e|^2 + |c_g|^2 = {n!r}")

    def amplitude(self, label: str) -> complex:
        return self.c_e if label == EXCITED else self.c_g

    @classmethod
    def excited(cls) -> "AtomState":
        return cls(1.0, 0.0)

    @classmethod
    def ground(cls) -> "AtomState":
        return cls(0.0, 1.0)

    def orthogonal(self) -> "AtomState":
        return AtomState(-np.conj(self.c_g), np.conj(self.c_e))


def ramsey_atom(eta: float, theta: float) -> AtomState:
    """(e^{i eta}|e> + e^{i theta}|g>)/sqrt(2)."""
    s = 1.0 / math.sqrt(2.0)
    return AtomState(s * cmath.exp(1j * eta), s * cmath.exp(1j * theta))


def phi_from_physical(g: float, tau: float, delta: float) -> float:
    """Dispersive phase g^2 tau / delta."""
    if delta == 0:
        raise ZeroDetuning("the dispersive phase needs a non-zero detuning")
    return g * g * tau / delta


def tau_for_phase(phi: float, g: float, delta: float) -> float:
    """Interaction time giving dispersive phase ``phi``."""
    if delta == 0:
        raise ZeroDetuning("the dispersive phase needs a non-zero detuning")
    return phi * delta / (g * g)


@dataclass(frozen=True)
class ProtocolConfig:
    """Phases (radians) of the two-atom preparation.

    ``alpha`` is the coherent amplitude initially in the cavity.  Unprimed
    eta/theta prepare the atoms, primed ones define the detected states.
    The defaults satisfy the compass conditions with all eta's zero.
    """

    alpha: complex = 1.0
    phi: float = math.pi / 4
    phi_prime: float = math.pi / 2
    delta_tau: float = 0.0
    delta_tau_prime: float = 0.0
    eta_A: float = 0.0
    theta_A: float = math.pi / 4
    eta_B: float = 0.0
    theta_B: float = math.pi / 2
    eta_A_prime: float = 0.0
    theta_A_prime: float = 0.0
    eta_B_prime: float = 0.0
    theta_B_prime: float = 0.0

    def __post_init__(self):
        vals = [v for k, v in dataclasses.asdict(self).items() if k != "alpha"]
        if not all(math.isfinite(v) for v in vals) or not cmath.isfinite(self.alpha):
            raise ValueError("protocol phases and alpha must be finite")

    @property
    def eta1(self) -> float:
        return self.eta_A - self.eta_A_prime

    @property
    def eta2(self) -> float:
        return self.eta_B - self.eta_B_prime

    @property
    def theta1(self) -> float:
        return self.theta_A - self.theta_A_prime

    @property
    def theta2(self) -> float:
        return self.theta_B - self.theta_B_prime

    @property
    def alpha0(self) -> complex:
        return self.alpha * cmath.exp(-1j * (self.delta_tau + self.delta_tau_prime))

    def replace(self, **changes) -> "ProtocolConfig":
        return dataclasses.replace(self, **changes)

    def with_phase_offsets(self, d1: float, d2: float) -> "ProtocolConfig":
        """Config with theta1 - eta1 = d1 and theta2 - eta2 = d2 (changes theta_A, theta_B)."""
        return self.replace(
            theta_A=self.theta_A_prime + self.eta1 + d1,
            theta_B=self.theta_B_prime + self.eta2 + d2,
        )

    def with_flipped_detection(self, flip_a: bool, flip_b: bool) -> "ProtocolConfig":
        """Swap a detected Ramsey state for its orthogonal partner (theta' -> theta' + pi)."""
        return self.replace(
            theta_A_prime=self.theta_A_prime + (math.pi if flip_a else 0.0),
            theta_B_prime=self.theta_B_prime + (math.pi if flip_b else 0.0),
        )

    def atoms(self) -> tuple[AtomState, AtomState]:
        return ramsey_atom(self.eta_A, self.theta_A), ramsey_atom(self.eta_B, self.theta_B)

    def detection(self) -> tuple[AtomState, AtomState]:
        return (
            ramsey_atom(self.eta_A_prime, self.theta_A_prime),
            ramsey_atom(self.eta_B_prime, self.theta_B_prime),
        )

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        a = complex(d.pop("alpha"))
        return {"alpha_re": a.real, "alpha_im": a.imag, **d}


class Branch(NamedTuple):
    labels: tuple[str, ...]
    weight: complex
    field: CoherentSuperposition


@dataclass(frozen=True)
class AtomFieldState:
    """Entangled atoms+field state as a list of atomic-label branches."""

    branches: tuple[Branch, ...]

    @property
    def n_atoms(self) -> int:
        return len(self.branches[0].labels)

    def norm_squared(self) -> float:
        # different atomic labels are orthogonal
        return float(sum(abs(b.weight) ** 2 * b.field.norm_squared() for b in self.branches))

    def centers(self) -> dict[tuple[str, ...], np.ndarray]:
        return {b.labels: b.field.centers for b in self.branches}


def dispersive_pass(
    state: CoherentSuperposition | AtomFieldState,
    atom: AtomState,
    phi: float,
    delta_tau: float = 0.0,
) -> AtomFieldState:
    """Send one atom through the cavity under the effective dispersive map."""
    if isinstance(state, CoherentSuperposition):
        if abs(state.norm_squared() - 1.0) > 1e-10:
            raise NotNormalized("dispersive_pass needs a normalized field")
        state = AtomFieldState((Branch((), 1.0 + 0j, state),))
    out = []
    for b in state.branches:
        if atom.c_e != 0:
            out.append(Branch(
                b.labels + (EXCITED,),
                b.weight * atom.c_e * cmath.exp(1j * phi),
                b.field.rotated(phi - delta_tau),
            ))
        if atom.c_g != 0:
            out.append(Branch(
                b.labels + (GROUND,),
                b.weight * atom.c_g,
                b.field.rotated(-phi - delta_tau),
            ))
    return AtomFieldState(tuple(out))


def two_atom_pass(config: ProtocolConfig) -> AtomFieldState:
    atom_a, atom_b = config.atoms()
    s = dispersive_pass(coherent(config.alpha), atom_a, config.phi, config.delta_tau)
    return dispersive_pass(s, atom_b, config.phi_prime, config.delta_tau_prime)


def conditional_project(
    state: AtomFieldState, detection: Sequence[AtomState]
) -> tuple[CoherentSuperposition | None, float]:
    """Project onto the product detection state; returns (field, probability).

    The field is the unnormalized <chi|Psi>; ``None`` when the projection
    vanishes identically.
    """
    if len(detection) != state.n_atoms:
        raise DimensionMismatch(f"{len(detection)} detection states for {state.n_atoms} atoms")
    weights, centers = [], []
    for b in state.branches:
        coef = b.weight
        for atom, label in zip(detection, b.labels):
            coef *= np.conj(atom.amplitude(label))
        if coef == 0:
            continue
        weights.append(coef * b.field.weights)
        centers.append(b.field.centers)
    if not weights:
        return None, 0.0
    w = np.concatenate(weights)
    if not np.any(w != 0):
        return None, 0.0
    field = CoherentSuperposition(w, np.concatenate(centers), label="projected")
    return field, field.norm_squared()


def _wrap(x: float) -> float:
    """Angle difference folded into (-pi, pi]."""
    return math.remainder(x, 2 * math.pi)


def make_compass(
    config: ProtocolConfig, align_alpha0: bool = True, strict: bool = True
) -> CoherentSuperposition:
    """Normalized cavity state after detecting both atoms.

    With ``align_alpha0`` the output is rotated so that alpha0 = alpha e^{i pi/4},
    which makes the compass come out centered on {+-alpha, +-i alpha}.  With
    ``strict`` the compass phase conditions are enforced.
    """
    if strict:
        checks = {
            "phi = pi/4": config.phi - math.pi / 4,
            "phi' = pi/2": config.phi_prime - math.pi / 2,
            "theta1 = eta1 + pi/4": config.theta1 - config.eta1 - math.pi / 4,
            "theta2 = eta2 + pi/2": config.theta2 - config.eta2 - math.pi / 2,
        }
        bad = [name for name, v in checks.items() if abs(_wrap(v)) > PHASE_TOL]
        if bad:
            raise PhaseConditionViolated(", ".join(bad))
    field, _ = conditional_project(two_atom_pass(config), config.detection())
    out = normalize(field)
    if align_alpha0:
        out = out.rotated(math.pi / 4 + config.delta_tau + config.delta_tau_prime)
    return CoherentSuperposition(out.weights, out.centers, True, "prepared")


def _branch_phases_and_centers(config: ProtocolConfig) -> tuple[np.ndarray, np.ndarray]:
    """Branch phases psi and centers for (ee, eg, ge, gg) in closed form."""
    e1, e2, t1, t2 = config.eta1, config.eta2, config.theta1, config.theta2
    p, q = config.phi, config.phi_prime
    psi = np.array([e1 + e2 + p + q, e1 + t2 + p, t1 + e2 + q, t1 + t2])
    rot = np.array([p + q, p - q, -p + q, -p - q])
    return psi, config.alpha0 * np.exp(1j * rot)


def joint_probability(config: ProtocolConfig) -> float:
    """Probability of detecting both atoms in the configured Ramsey states.

    P = 1/4 + 1/8 Re sum_{j<k} e^{i(psi_k - psi_j)} <beta_j|beta_k> over the
    four branches; for the compass phases this is the six-overlap fringe
    formula.
    """
    psi, beta = _branch_phases_and_centers(config)
    total = 0.0 + 0.0j
    for j in range(4):
        for k in range(j + 1, 4):
            total += cmath.exp(1j * (psi[k] - psi[j])) * overlap(beta[k], beta[j])
    return 0.25 + 0.125 * total.real


def outcome_probabilities(config: ProtocolConfig) -> dict[str, float]:
    """Joint probabilities for the four orthogonal Ramsey detection outcomes."""
    out = {}
    for a in (False, True):
        for b in (False, True):
            key = ("-" if a else "+") + ("-" if b else "+")
            out[key] = joint_probability(config.with_flipped_detection(a, b))
    return out


def single_atom_fringe(
    c: AtomState, detection: AtomState, phi: float, delta_tau: float, alpha: complex
) -> float:
    """Detection probability of one atom after a dispersive pass with |alpha>."""
    ae = c.c_e * np.conj(detection.c_e)
    ag = c.c_g * np.conj(detection.c_g)
    ov = overlap(alpha * cmath.exp(1j * (phi - delta_tau)), alpha * cmath.exp(-1j * (phi + delta_tau)))
    cross = np.conj(ag) * ae * cmath.exp(1j * phi) * ov
    return float(abs(ae) ** 2 + abs(ag) ** 2 + 2.0 * cross.real)


class UndetectedBranch(NamedTuple):
    probability: float
    field: CoherentSuperposition


def undetected_atom_pass(
    field: CoherentSuperposition,
    phi: float,
    delta_t: float = 0.0,
    atom: AtomState | None = None,
) -> list[UndetectedBranch]:
    """Trace out an atom that crossed the cavity without being detected.

    Returns the ensemble {(p_e, field_e), (p_g, field_g)}; the default atom is
    the symmetric Ramsey state.
    """
    if atom is None:
        atom = ramsey_atom(0.0, 0.0)
    field = normalize(field)
    out = []
    for b in dispersive_pass(field, atom, phi, delta_t).branches:
        p = abs(b.weight) ** 2 * b.field.norm_squared()
        if p > 0:
            f = normalize(b.field.scaled(b.weight / abs(b.weight)))
            out.append(UndetectedBranch(float(p), f))
    return out


def undetected_atom_protocol(
    config: ProtocolConfig, like: str = "A"
) -> list[tuple[float, float, CoherentSuperposition]]:
    """Atom A detected, then an undetected atom, then atom B detected.

    ``like`` picks whether the undetected atom has atom A's or atom B's
    preparation and dispersive phase.  Returns, per ensemble branch,
    (branch probability, atom-B detection probability, normalized field).
    """
    atom_a, atom_b = config.atoms()
    det_a, det_b = config.detection()
    s = dispersive_pass(coherent(config.alpha), atom_a, config.phi, config.delta_tau)
    c_a, _ = conditional_project(s, [det_a])
    if like == "A":
        extra = undetected_atom_pass(c_a, config.phi, config.delta_tau, atom_a)
    elif like == "B":
        extra = undetected_atom_pass(c_a, config.phi_prime, config.delta_tau_prime, atom_b)
    else:
        raise ValueError("like must be 'A' or 'B'")
    out = []
    for br in extra:
        s_b = dispersive_pass(br.field, atom_b, config.phi_prime, config.delta_tau_prime)
        c_b, p_b = conditional_project(s_b, [det_b])
        out.append((br.probability, p_b, normalize(c_b)))
    return out


def rotated_compass_fidelity(state: CoherentSuperposition, alpha: complex) -> tuple[float, float]:
    """Best fidelity of ``state`` with compass(|alpha| e^{i angle}).

    Candidate angles are read off the state's own centers.  Returns
    (fidelity, angle).
    """
    r = abs(alpha)
    best = (-1.0, 0.0)
    for c in state.centers:
        if r == 0 or abs(abs(c) - r) > 1e-9 * max(1.0, r):
            continue
        ang = cmath.phase(c)
        f = fidelity(state, compass(r * cmath.exp(1j * ang)))
        if f > best[0]:
            best = (f, ang)
    if best[0] < 0:
        best = (fidelity(state, compass(alpha)), cmath.phase(alpha) if r else 0.0)
    return best


def ensemble_density(
    branches: Sequence[tuple[float, CoherentSuperposition]], cutoff: int
) -> DensityMatrixFock:
    """Fock density matrix sum_k p_k |psi_k><psi_k|."""
    rho = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for p, f in branches:
        v = to_fock(normalize(f), cutoff).amplitudes
        rho += p * np.outer(v, v.conj())
    return DensityMatrixFock(rho)


def single_atom_fock_rows(state: AtomFieldState, cutoff: int) -> np.ndarray:
    """One-atom AtomFieldState as a (2, cutoff+1) array, rows (|e,n>, |g,n>)."""
    if state.n_atoms != 1:
        raise DimensionMismatch("expected a single-atom state")
    rows = np.zeros((2, cutoff + 1), dtype=complex)
    for b in state.branches:
        i = 0 if b.labels[0] == EXCITED else 1
        rows[i] += b.weight * to_fock(b.field, cutoff).amplitudes
    return rows


def fringe_scan(config: ProtocolConfig, n1: int, n2: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """P over (theta1 - eta1, theta2 - eta2) on [0, 2pi) x [0, 2pi).

    Returns (d1, d2, P) with P[i, j] at (d1[i], d2[j]).
    """
    n2 = n1 if n2 is None else n2
    d1 = 2 * math.pi * np.arange(n1) / n1
    d2 = 2 * math.pi * np.arange(n2) / n2
    P = np.empty((n1, n2))
    for i, a in enumerate(d1):
        for j, b in enumerate(d2):
            P[i, j] = joint_probability(config.with_phase_offsets(a, b))
    return d1, d2, P
