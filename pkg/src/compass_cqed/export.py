"""Plain-text artifacts: locale-free CSV with 17 significant digits and JSON sidecars."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .wigner import PhaseSpaceGrid


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path | str, header: Sequence[str], columns: Iterable[np.ndarray]) -> Path:
    path = Path(path)
    cols = [np.ravel(np.asarray(c, dtype=float)) for c in columns]
    n = cols[0].size
    if any(c.size != n for c in cols):
        raise ValueError("CSV columns differ in length")
    lines = [",".join(header)]
    lines.extend(",".join(fmt(c[i]) for c in cols) for i in range(n))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path: Path | str, obj: dict) -> Path:
    path = Path(path)
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def write_grid_csv(grid: PhaseSpaceGrid, path: Path | str) -> Path:
    """Rows ``x,p,w`` with x as the outer loop."""
    X, P = np.meshgrid(grid.x, grid.p, indexing="ij")
    return write_csv(path, ("x", "p", "w"), (X, P, grid.values))


def read_grid_csv(path: Path | str) -> PhaseSpaceGrid:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = np.unique(data[:, 0])
    p = np.unique(data[:, 1])
    values = data[:, 2].reshape(x.size, p.size)
    return PhaseSpaceGrid(x, p, values, Path(path).stem)
