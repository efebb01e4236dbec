"""Command-line front end.

Every subcommand writes CSV files (17 significant digits, ``.`` decimal) with
a JSON sidecar that echoes the fully resolved configuration.  Settings come
from flags, then an optional ``--config`` file of ``key = value`` lines, then
built-in defaults.  Angles are in units of pi unless ``--radians`` is given.

Exit status: 0 success, 1 numeric failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import cmath
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .decoherence import DecayParams, coherence_factor, decohere_compass, decohered_wigner, purity
from .errors import CompassError
from .export import write_csv, write_grid_csv, write_json
from .numerics import lindblad_rk4, trace_distance
from .probe import jc_deviation, revival_time_estimate, revival_trace
from .protocol import ProtocolConfig, fringe_scan, make_compass, outcome_probabilities
from .states import cat, coherent, compass, default_cutoff, fidelity, to_fock
from .wigner import (
    GridSpec,
    PhaseSpaceGrid,
    central_tile_metrics,
    default_grid_spec,
    integrate_grid,
    negativity_volume,
    wigner_grid,
)


class UsageError(Exception):
    pass


# name -> (type, default); angle-valued options are listed in ANGLES
DEFAULTS = {
    "wigner": {
        "state": (str, "compass"),
        "alpha": (float, 5.0),
        "alpha_phase": (float, 0.0),
        "bounds": (float, None),
        "res": (int, None),
        "prefix": (str, "wigner"),
    },
    "protocol": {
        "mode": (str, "prepare"),
        "alpha": (float, 1.0),
        "alpha_phase": (float, 0.0),
        "phi": (float, 0.25),
        "phi_prime": (float, 0.5),
        "delta_tau": (float, 0.0),
        "delta_tau_prime": (float, 0.0),
        "eta_a": (float, 0.0),
        "theta_a": (float, 0.25),
        "eta_b": (float, 0.0),
        "theta_b": (float, 0.5),
        "eta_a_prime": (float, 0.0),
        "theta_a_prime": (float, 0.0),
        "eta_b_prime": (float, 0.0),
        "theta_b_prime": (float, 0.0),
        "scan_res": (int, 64),
        "strict": (bool, True),
    },
    "decohere": {
        "alpha": (float, 2.0),
        "alpha_phase": (float, 0.0),
        "kt_max": (float, 1.0),
        "kt_points": (int, 21),
        "snapshots": (str, ""),
        "res": (int, None),
        "cutoff": (int, None),
        "oracle_check": (bool, False),
    },
    "probe": {
        "alpha": (float, 4.0),
        "alpha_phase": (float, 0.0),
        "gt_max": (float, None),
        "samples": (int, 4001),
        "oracle_check": (bool, False),
    },
    "selftest": {},
}
ANGLES = {
    "alpha_phase", "phi", "phi_prime", "delta_tau", "delta_tau_prime",
    "eta_a", "theta_a", "eta_b", "theta_b",
    "eta_a_prime", "theta_a_prime", "eta_b_prime", "theta_b_prime",
}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def read_config(path: Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys are allowed."""
    out = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def resolve(command: str, args: argparse.Namespace) -> dict:
    table = DEFAULTS[command]
    cfg_file = read_config(Path(args.config)) if args.config else {}
    unknown = set(cfg_file) - set(table) - {"radians", "out"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    radians = args.radians if args.radians is not None else _parse_bool(cfg_file.get("radians", "false"))
    resolved = {"command": command, "radians": radians}
    for name, (typ, default) in table.items():
        flag = getattr(args, name, None)
        if flag is not None:
            val = flag
        elif name in cfg_file:
            try:
                val = _parse_bool(cfg_file[name]) if typ is bool else typ(cfg_file[name])
            except ValueError as exc:
                raise UsageError(f"bad value for {name}: {cfg_file[name]!r}") from exc
        else:
            val = default
        resolved[name] = val
    resolved["out"] = str(args.out if args.out is not None else cfg_file.get("out", "."))
    return resolved


def angle(cfg: dict, name: str) -> float:
    v = cfg[name]
    return v if cfg["radians"] else v * math.pi


def alpha_of(cfg: dict) -> complex:
    if cfg["alpha"] < 0:
        raise UsageError("--alpha is a magnitude; use --alpha-phase for its direction")
    return cfg["alpha"] * cmath.exp(1j * angle(cfg, "alpha_phase"))


def _outdir(cfg: dict) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_meta(grid: PhaseSpaceGrid, descriptor: dict) -> dict:
    x0, x1, p0, p1 = grid.bounds
    return {
        "bounds": {"x_min": x0, "x_max": x1, "p_min": p0, "p_max": p1},
        "resolution": {"nx": grid.nx, "np": grid.n_p},
        "state": descriptor,
        "integral": integrate_grid(grid),
        "negativity_volume": negativity_volume(grid),
    }


def _grid_spec(cfg: dict, magnitude: float) -> GridSpec:
    spec = default_grid_spec(magnitude)
    half = cfg.get("bounds") or spec.x_max
    n = cfg.get("res") or spec.nx
    if half <= 0 or n < 2:
        raise UsageError("--bounds must be positive and --res at least 2")
    return GridSpec.square(half, n)


def cmd_wigner(cfg: dict) -> int:
    out = _outdir(cfg)
    a = alpha_of(cfg)
    builders = {"compass": compass, "cat": cat, "coherent": coherent, "vacuum": lambda _: coherent(0.0)}
    if cfg["state"] not in builders:
        raise UsageError(f"unknown state {cfg['state']!r}; choose from {', '.join(builders)}")
    state = builders[cfg["state"]](a)
    grid = wigner_grid(state, _grid_spec(cfg, state.max_amplitude))
    stem = cfg["prefix"]
    write_grid_csv(grid, out / f"{stem}.csv")
    meta = _grid_meta(grid, state.describe())
    write_json(out / f"{stem}.json", {"config": cfg, **meta})
    magnitude = 0.0 if cfg["state"] == "vacuum" else abs(a)
    report = central_tile_metrics(grid, magnitude, cmath.phase(a))
    write_json(out / f"{stem}_tiles.json", {"config": cfg, "tile_report": report.as_dict()})
    print(
        f"{cfg['state']} |alpha|={magnitude:g}: integral {meta['integral']:.6f}, "
        f"chessboard={report.has_chessboard}, tile/footprint={report.tile_area_over_vacuum_footprint:.4g}"
    )
    return 0


def _protocol_config(cfg: dict) -> ProtocolConfig:
    names = {
        "phi": "phi", "phi_prime": "phi_prime", "delta_tau": "delta_tau", "delta_tau_prime": "delta_tau_prime",
        "eta_a": "eta_A", "theta_a": "theta_A", "eta_b": "eta_B", "theta_b": "theta_B",
        "eta_a_prime": "eta_A_prime", "theta_a_prime": "theta_A_prime",
        "eta_b_prime": "eta_B_prime", "theta_b_prime": "theta_B_prime",
    }
    return ProtocolConfig(alpha=alpha_of(cfg), **{field: angle(cfg, key) for key, field in names.items()})


def cmd_protocol(cfg: dict) -> int:
    out = _outdir(cfg)
    pc = _protocol_config(cfg)
    mode = cfg["mode"]
    if mode == "prepare":
        state = make_compass(pc, strict=cfg["strict"])
        fid = fidelity(state, compass(pc.alpha))
        write_json(out / "protocol_prepare.json", {
            "config": cfg, "protocol": pc.as_dict(), "fidelity_with_compass": fid, "state": state.describe(),
        })
        print(f"prepared state fidelity with compass: {fid:.15f}")
    elif mode == "scan":
        if cfg["scan_res"] < 2:
            raise UsageError("--scan-res must be at least 2")
        d1, d2, P = fringe_scan(pc, cfg["scan_res"])
        D1, D2 = np.meshgrid(d1, d2, indexing="ij")
        scale = 1.0 if cfg["radians"] else 1.0 / math.pi
        write_csv(out / "fringe_scan.csv", ("theta1", "theta2", "P"), (D1 * scale, D2 * scale, P))
        write_json(out / "fringe_scan.json", {
            "config": cfg, "protocol": pc.as_dict(),
            "axes": "theta1 - eta1, theta2 - eta2" + ("" if cfg["radians"] else " (units of pi)"),
            "P_min": float(P.min()), "P_max": float(P.max()), "contrast": float(P.max() - P.min()),
        })
        print(f"fringe contrast {P.max() - P.min():.6g} over {P.size} points")
    elif mode == "complete":
        probs = outcome_probabilities(pc)
        total = sum(probs.values())
        write_json(out / "protocol_outcomes.json", {
            "config": cfg, "protocol": pc.as_dict(), "probabilities": probs, "sum": total,
        })
        print("outcome probabilities " + ", ".join(f"{k}: {v:.6f}" for k, v in probs.items()) + f"; sum {total:.15f}")
    else:
        raise UsageError(f"unknown mode {mode!r}")
    return 0


def _parse_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def cmd_decohere(cfg: dict) -> int:
    out = _outdir(cfg)
    a = alpha_of(cfg)
    if cfg["kt_points"] < 2 or cfg["kt_max"] <= 0:
        raise UsageError("--kt-points must be >= 2 and --kt-max positive")
    cutoff = cfg["cutoff"] or default_cutoff(a)
    spec = _grid_spec(cfg, abs(a))
    x, p = spec.axes()
    gam = x[:, None] + 1j * p[None, :]
    kts = np.linspace(0.0, cfg["kt_max"], cfg["kt_points"])
    cf, pur, neg = [], [], []
    worst_td = 0.0
    rho0 = decohere_compass(a, DecayParams(kappa=1.0, t=0.0), cutoff)
    for kt in kts:
        params = DecayParams(kappa=1.0, t=float(kt))
        rho = decohere_compass(a, params, cutoff)
        cf.append(coherence_factor(a, params))
        pur.append(purity(rho))
        grid = PhaseSpaceGrid(x, p, decohered_wigner(a, params, gam))
        neg.append(negativity_volume(grid))
        if cfg["oracle_check"] and kt > 0:
            worst_td = max(worst_td, trace_distance(rho, lindblad_rk4(rho0, 1.0, float(kt))))
    write_csv(out / "decay_curve.csv", ("kappa_t", "coherence_factor", "purity", "negativity_volume"), (kts, cf, pur, neg))
    meta = {"config": cfg, "cutoff": cutoff, "state": compass(a).describe()}
    if cfg["oracle_check"]:
        meta["oracle_max_trace_distance"] = worst_td
        meta["oracle_pass"] = worst_td <= 1e-6
    write_json(out / "decay_curve.json", meta)
    target = to_fock(compass(a), cutoff).amplitudes
    for kt in _parse_list(cfg["snapshots"]):
        if kt < 0:
            raise UsageError("snapshot times must be non-negative")
        rho = decohere_compass(a, DecayParams(kappa=1.0, t=kt), cutoff)
        grid = wigner_grid(rho, spec, label=f"decohered compass kt={kt:g}")
        stem = f"snapshot_kt{kt:g}"
        write_grid_csv(grid, out / f"{stem}.csv")
        fid = float(np.real(np.vdot(target, rho.matrix @ target)))
        write_json(out / f"{stem}.json", {"config": cfg, "kappa_t": kt, "fidelity_with_compass": fid,
                                          **_grid_meta(grid, {"label": grid.state_label})})
    print(f"decay curve over {len(kts)} points written to {out / 'decay_curve.csv'}")
    if cfg["oracle_check"]:
        print(f"RK4 oracle max trace distance {worst_td:.3e}")
        if worst_td > 1e-6:
            print("oracle check FAILED", file=sys.stderr)
            return 1
    return 0


def cmd_probe(cfg: dict) -> int:
    out = _outdir(cfg)
    a = alpha_of(cfg)
    gt_max = cfg["gt_max"] or 3.0 * math.pi * max(abs(a), 1.0)
    if cfg["samples"] < 2 or gt_max <= 0:
        raise UsageError("--samples must be >= 2 and --gt-max positive")
    summary = {"config": {**cfg, "gt_max": gt_max}, "revival_times": {}}
    for name, builder in (("compass", compass), ("cat", cat), ("coherent", coherent)):
        field = builder(a)
        tr = revival_trace(field, 1.0, gt_max, cfg["samples"])
        try:
            t_rev = revival_time_estimate(tr)
        except CompassError:
            t_rev = None
        summary["revival_times"][name] = t_rev
        write_csv(out / f"probe_{name}.csv", ("gt", "P_gg", "P_ge"), (tr.gt, tr.p_gg, tr.p_ge))
        write_json(out / f"probe_{name}.json", {
            "config": summary["config"], "state": field.describe(), "revival_time": t_rev,
        })
    t = summary["revival_times"]
    ordered = None not in t.values() and t["compass"] < t["cat"] < t["coherent"]
    summary["ordering_compass_lt_cat_lt_coherent"] = ordered
    if cfg["oracle_check"]:
        check_t = np.linspace(0.0, gt_max, 7)
        worst = max(jc_deviation(builder(a), 1.0, check_t) for builder in (compass, cat, coherent))
        summary["oracle_max_deviation"] = worst
        summary["oracle_pass"] = worst <= 1e-10
    write_json(out / "probe_summary.json", summary)
    print("revival times " + ", ".join(f"{k}: {v if v is None else round(v, 4)}" for k, v in t.items())
          + f"; ordering compass < cat < coherent: {ordered}")
    if cfg["oracle_check"]:
        print(f"JC oracle max deviation {summary['oracle_max_deviation']:.3e}")
        if not summary["oracle_pass"]:
            return 1
    return 0


def cmd_selftest(cfg: dict) -> int:
    from .selfcheck import run_all

    results = run_all()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


COMMANDS = {
    "wigner": cmd_wigner,
    "protocol": cmd_protocol,
    "decohere": cmd_decohere,
    "probe": cmd_probe,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compass-cqed", description="Compass-state cavity-QED simulations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--radians", action="store_true", default=None, help="angles in radians instead of units of pi")

    def add(p, name, typ, help_text=None):
        flag = "--" + name.replace("_", "-")
        if typ is bool:
            p.add_argument(flag, dest=name, action="store_true", default=None, help=help_text)
        else:
            p.add_argument(flag, dest=name, type=typ, default=None, help=help_text)

    p = sub.add_parser("wigner", parents=[common], help="Wigner grid, metadata and tile report")
    for name, (typ, _) in DEFAULTS["wigner"].items():
        add(p, name, typ)

    p = sub.add_parser("protocol", parents=[common], help="two-atom preparation, fringe scan, completeness")
    for name, (typ, _) in DEFAULTS["protocol"].items():
        if name != "strict":
            add(p, name, typ)
    p.add_argument("--no-strict", dest="strict", action="store_false", default=None,
                   help="prepare even if the compass phase conditions fail")

    p = sub.add_parser("decohere", parents=[common], help="decay curve and Wigner snapshots")
    for name, (typ, _) in DEFAULTS["decohere"].items():
        add(p, name, typ)

    p = sub.add_parser("probe", parents=[common], help="resonant-probe revival traces")
    for name, (typ, _) in DEFAULTS["probe"].items():
        add(p, name, typ)

    sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args.command, args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (CompassError, ValueError, FloatingPointError) as exc:
        print(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
