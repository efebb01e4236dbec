"""End-to-end checks backing ``compass-cqed selftest`` and the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on failure.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .decoherence import (
    DecayParams,
    coherence_factor,
    compass_lifetime,
    decohere_compass,
    opposite_pair_weight,
    small_decay_log_error,
)
from .numerics import jc_propagate, lindblad_rk4, trace_distance
from .probe import jc_deviation, resonant_detection_probs, revival_time_estimate, revival_trace
from .protocol import (
    ProtocolConfig,
    conditional_project,
    dispersive_pass,
    fringe_scan,
    joint_probability,
    make_compass,
    outcome_probabilities,
    ramsey_atom,
    rotated_compass_fidelity,
    single_atom_fock_rows,
    tau_for_phase,
    two_atom_pass,
    undetected_atom_protocol,
)
from .states import cat, coherent, compass, fidelity, to_fock
from .wigner import (
    VACUUM_FOOTPRINT,
    GridSpec,
    central_tile_metrics,
    default_grid_spec,
    integrate_grid,
    wigner_compass,
    wigner_fock_numeric,
    wigner_grid,
    wigner_superposition,
)

SEED = 20040101


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _random_alphas(rng, n, rmax):
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(0, 2 * math.pi, n))


def check_compass_preparation() -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 1.0
    for a in _random_alphas(rng, 20, 4.0):
        e1, e2 = rng.uniform(0, 2 * math.pi, 2)
        cfg = ProtocolConfig(alpha=complex(a), eta_A=e1, theta_A=e1 + math.pi / 4, eta_B=e2, theta_B=e2 + math.pi / 2)
        worst = min(worst, fidelity(make_compass(cfg), compass(complex(a))))
    return CheckResult(1, "compass preparation", worst >= 1 - 1e-10, f"min fidelity 1 - {1 - worst:.2e}")


def check_wigner_oracles() -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for a in (1.0, 2.0, 3.0):
        s = compass(a)
        fv = to_fock(s)
        half = a + 2.0
        pts = rng.uniform(-half, half, 100) + 1j * rng.uniform(-half, half, 100)
        w6 = wigner_compass(a, pts)
        w5 = wigner_superposition(s, pts)
        wf = np.array([wigner_fock_numeric(fv, g) for g in pts])
        worst = max(worst, np.max(np.abs(w6 - w5)), np.max(np.abs(w6 - wf)), np.max(np.abs(w5 - wf)))
    return CheckResult(2, "Wigner triple oracle", worst <= 1e-8, f"max pairwise deviation {worst:.2e}")


def check_chessboard() -> CheckResult:
    reports = {}
    for a in (1.0, 3.0, 4.0, 5.0):
        grid = wigner_grid(compass(a), default_grid_spec(a))
        reports[a] = central_tile_metrics(grid, a)
    # the same claim on a fixed 321 x 321 grid over [-8, 8]^2
    fixed = central_tile_metrics(wigner_grid(compass(5.0), GridSpec.square(8.0, 321)), 5.0)
    scaled = [reports[a].central_tile_area * a * a for a in (3.0, 4.0, 5.0)]
    spread = max(scaled) / min(scaled)
    ok = (
        not reports[1.0].has_chessboard
        and reports[5.0].has_chessboard
        and reports[5.0].central_tile_area < VACUUM_FOOTPRINT
        and fixed.has_chessboard
        and fixed.central_tile_area < VACUUM_FOOTPRINT
        and spread <= 1.3
    )
    detail = (
        f"|a|=1 chessboard={reports[1.0].has_chessboard}, |a|=5 chessboard={reports[5.0].has_chessboard}, "
        f"tile/footprint(5)={reports[5.0].tile_area_over_vacuum_footprint:.4f} "
        f"(321^2 grid: {fixed.tile_area_over_vacuum_footprint:.4f}), area*|a|^2 spread {spread:.3f}"
    )
    return CheckResult(3, "chessboard onset", ok, detail)


def check_normalization_symmetry() -> CheckResult:
    states = [coherent(0.0), coherent(2 - 1j), cat(2.0), cat(1.5j)] + [compass(a) for a in (1.0, 2.0, 3.0 + 1j, 5.0)]
    worst_int = 0.0
    for s in states:
        grid = wigner_grid(s, default_grid_spec(s.max_amplitude))
        worst_int = max(worst_int, abs(integrate_grid(grid) - 1.0))
    rng = np.random.default_rng(SEED + 2)
    worst_sym = 0.0
    for a in _random_alphas(rng, 5, 4.0):
        pts = rng.uniform(-5, 5, 10) + 1j * rng.uniform(-5, 5, 10)
        s = compass(complex(a))
        worst_sym = max(worst_sym, np.max(np.abs(wigner_superposition(s, pts) - wigner_superposition(s, 1j * pts))))
    ok = worst_int <= 2e-3 and worst_sym <= 1e-10
    return CheckResult(4, "normalization and symmetry", ok, f"max |int W - 1| {worst_int:.2e}, max |W(g) - W(ig)| {worst_sym:.2e}")


def _random_config(rng) -> ProtocolConfig:
    ph = rng.uniform(0, 2 * math.pi, 12)
    a = _random_alphas(rng, 1, 3.0)[0]
    return ProtocolConfig(complex(a), *ph)


def check_joint_probability() -> CheckResult:
    rng = np.random.default_rng(SEED + 3)
    worst_p, worst_sum = 0.0, 0.0
    for _ in range(50):
        cfg = _random_config(rng)
        _, p_norm = conditional_project(two_atom_pass(cfg), cfg.detection())
        worst_p = max(worst_p, abs(joint_probability(cfg) - p_norm))
        worst_sum = max(worst_sum, abs(sum(outcome_probabilities(cfg).values()) - 1.0))
    contrast = {}
    for a in (1.0, 3.0):
        _, _, P = fringe_scan(ProtocolConfig(alpha=a), 48)
        contrast[a] = float(P.max() - P.min())
    ok = worst_p <= 1e-12 and worst_sum <= 1e-10 and contrast[3.0] < contrast[1.0]
    detail = f"max |P - <C|C>| {worst_p:.1e}, max |sum - 1| {worst_sum:.1e}, contrast {contrast[1.0]:.4f} -> {contrast[3.0]:.2e}"
    return CheckResult(5, "joint-probability identities", ok, detail)


def check_decoherence() -> CheckResult:
    worst_td, worst_w = 0.0, 0.0
    for a in (1.0, 2.0):
        rho0 = decohere_compass(a, DecayParams(kappa=1.0, t=0.0))
        for kt in (0.01, 0.1, 0.5):
            p = DecayParams(kappa=1.0, t=kt)
            worst_td = max(worst_td, trace_distance(decohere_compass(a, p), lindblad_rk4(rho0, 1.0, kt)))
            worst_w = max(worst_w, abs(opposite_pair_weight(a, p) - math.exp(-2 * a * a * (1 - math.exp(-kt)))))
    life_ok = True
    t_c = 2.5
    for a in (1.0, 2.0, 5.0):
        p = DecayParams(t_c=t_c, t=compass_lifetime(a, t_c))
        approx = 2 * a * a * p.kappa_t
        dev = abs(math.log(coherence_factor(a, p)) + approx)
        life_ok &= abs(approx - 1.0) <= 1e-12 and dev <= small_decay_log_error(a, p.kappa_t)
    ok = worst_td <= 1e-6 and worst_w <= 1e-12 and life_ok
    return CheckResult(6, "decoherence", ok, f"max trace distance {worst_td:.1e}, opposite weight err {worst_w:.1e}, lifetime ok={life_ok}")


def check_photon_statistics() -> CheckResult:
    worst = 0.0
    for r in np.linspace(0.25, 5.0, 20):
        for ang in (0.0, 0.3, math.pi / 5):
            a = to_fock(compass(r * cmath.exp(1j * ang))).amplitudes
            mask = np.arange(a.size) % 4 != 0
            worst = max(worst, float(np.max(np.abs(a[mask]))))
    return CheckResult(7, "compass photon statistics", worst < 1e-14, f"max off-lattice amplitude {worst:.1e}")


def check_probe() -> CheckResult:
    rng = np.random.default_rng(SEED + 4)
    worst_sum, worst_jc = 0.0, 0.0
    fields = [compass(2.0), cat(2.0 + 1j), coherent(1.5), compass(1.2j)]
    for f in fields:
        for t in rng.uniform(0, 20, 5):
            pgg, pge = resonant_detection_probs(f, 1.0, t)
            worst_sum = max(worst_sum, abs(pgg + pge - 1.0))
            worst_jc = max(worst_jc, jc_deviation(f, 1.0, t))
    order_ok = True
    times = {}
    for a in (3.0, 4.0, 5.0):
        t_max = 3 * math.pi * a
        est = [revival_time_estimate(revival_trace(f, 1.0, t_max, 4001)) for f in (compass(a), cat(a), coherent(a))]
        times[a] = est
        order_ok &= est[0] < est[1] < est[2]
    ok = worst_sum <= 1e-12 and worst_jc <= 1e-10 and order_ok
    detail = (
        f"max |Pgg + Pge - 1| {worst_sum:.1e}, max JC deviation {worst_jc:.1e}, "
        + ", ".join(f"|a|={a:g}: " + "<".join(f"{t:.2f}" for t in v) for a, v in times.items())
    )
    return CheckResult(8, "probe identities and revival ordering", ok, detail)


def dispersive_infidelity(detuning_ratio: float, alpha: complex = 1.0, phi: float = math.pi / 8) -> float:
    """1 - |<effective|exact>|^2 after one atom pass at delta/g = detuning_ratio."""
    g = 1.0
    delta = detuning_ratio * g
    tau = tau_for_phase(phi, g, delta)
    atom = ramsey_atom(0.0, 0.0)
    field = coherent(alpha)
    fv = to_fock(field)
    exact = jc_propagate(fv, atom, g, delta, tau)
    eff = single_atom_fock_rows(dispersive_pass(field, atom, phi, delta * tau), fv.cutoff)
    return float(1.0 - abs(np.vdot(eff.ravel(), exact.ravel())) ** 2)


def check_dispersive_limit() -> CheckResult:
    i10, i20 = dispersive_infidelity(10.0), dispersive_infidelity(20.0)
    ratio = i10 / i20
    return CheckResult(9, "dispersive-limit scaling", 2.0 <= ratio <= 8.0, f"infidelity {i10:.3e} -> {i20:.3e}, ratio {ratio:.2f}")


def check_undetected_atom() -> CheckResult:
    rng = np.random.default_rng(SEED + 5)
    worst = 1.0
    for a in (1.0, 2.0 + 0.5j, 3.0j):
        e1, e2 = rng.uniform(0, 2 * math.pi, 2)
        cfg = ProtocolConfig(alpha=a, eta_A=e1, theta_A=e1 + math.pi / 4, eta_B=e2, theta_B=e2 + math.pi / 2)
        for like in ("A", "B"):
            for _, _, state in undetected_atom_protocol(cfg, like):
                worst = min(worst, rotated_compass_fidelity(state, a)[0])
    return CheckResult(10, "undetected-atom robustness", worst >= 1 - 1e-10, f"min branch fidelity 1 - {1 - worst:.1e}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_compass_preparation,
    check_wigner_oracles,
    check_chessboard,
    check_normalization_symmetry,
    check_joint_probability,
    check_decoherence,
    check_photon_statistics,
    check_probe,
    check_dispersive_limit,
    check_undetected_atom,
)


def run_check(fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = fn()
    except Exception as exc:  # a crashing check is a failing check
        number = CHECKS.index(fn) + 1 if fn in CHECKS else 0
        res = CheckResult(number, fn.__name__, False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(echo: Callable[[str], None] | None = print) -> list[CheckResult]:
    results = []
    for fn in CHECKS:
        res = run_check(fn)
        if echo:
            echo(res.line())
        results.append(res)
    return results
