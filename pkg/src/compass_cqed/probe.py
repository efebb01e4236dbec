"""Resonant probe atom: photon-number-sensitive Rabi oscillations.

A ground-state atom resonant with the cavity sees Rabi frequency 2 g sqrt(n)
in each photon-number sector, so P(g -> g) = sum_n p(n) cos^2(g t sqrt n).
The graininess of p(n) (every integer, every even integer, every fourth
integer) sets how soon the oscillations revive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .errors import NoRevivalFound
from .numerics import jc_propagate
from .protocol import AtomState
from .states import CoherentSuperposition, normalize, photon_distribution, to_fock

__all__ = [
    "ENVELOPE_WINDOW_FRACTION",
    "MIN_COLLAPSE_DEPTH",
    "RevivalTrace",
    "resonant_detection_probs",
    "excited_entry_probs",
    "revival_trace",
    "rms_envelope",
    "revival_time_estimate",
    "jc_deviation",
]

# moving-RMS window as a fraction of the trace duration
ENVELOPE_WINDOW_FRACTION = 0.05
# a revival peak must stand this far (relative to the envelope's range) above its surroundings
PEAK_PROMINENCE = 0.05
# the envelope must fall at least this fraction below its maximum to count as a collapse
MIN_COLLAPSE_DEPTH = 0.25


def _distribution(field: CoherentSuperposition, cutoff: int | None) -> np.ndarray:
    return photon_distribution(normalize(field), cutoff)


def resonant_detection_probs(
    field: CoherentSuperposition, g: float, t, cutoff: int | None = None
) -> tuple[np.ndarray | float, np.ndarray | float]:
    """(P_g->g, P_g->e) for an atom entering in |g>; ``t`` may be an array."""
    if g < 0 or np.any(np.asarray(t) < 0):
        raise ValueError("g and t must be non-negative")
    pn = _distribution(field, cutoff)
    sq = np.sqrt(np.arange(pn.size))
    tt = np.asarray(t, dtype=float)
    c2 = np.cos(g * tt[..., None] * sq) ** 2
    s2 = np.sin(g * tt[..., None] * sq) ** 2
    pgg = c2 @ pn
    pge = s2 @ pn
    if tt.ndim == 0:
        return float(pgg), float(pge)
    return pgg, pge


def excited_entry_probs(field: CoherentSuperposition, g: float, t, cutoff: int | None = None):
    """(P_e->e, P_e->g) for an atom entering in |e>."""
    pn = _distribution(field, cutoff)
    sq = np.sqrt(np.arange(pn.size) + 1.0)
    tt = np.asarray(t, dtype=float)
    pee = (np.cos(g * tt[..., None] * sq) ** 2) @ pn
    peg = (np.sin(g * tt[..., None] * sq) ** 2) @ pn
    if tt.ndim == 0:
        return float(pee), float(peg)
    return pee, peg


@dataclass(frozen=True, eq=False)
class RevivalTrace:
    t: np.ndarray
    p_gg: np.ndarray
    p_ge: np.ndarray
    g: float = 1.0
    label: str = ""

    @property
    def gt(self) -> np.ndarray:
        return self.g * self.t


def revival_trace(
    field: CoherentSuperposition, g: float, t_max: float, samples: int, cutoff: int | None = None
) -> RevivalTrace:
    if samples < 2:
        raise ValueError("need at least two samples")
    t = np.linspace(0.0, t_max, samples)
    pgg, pge = resonant_detection_probs(field, g, t, cutoff)
    return RevivalTrace(t, np.asarray(pgg), np.asarray(pge), g, field.label)


def rms_envelope(trace: RevivalTrace, window_fraction: float = ENVELOPE_WINDOW_FRACTION) -> np.ndarray:
    """Moving RMS of P_gg about its trace mean."""
    dt = trace.t[1] - trace.t[0]
    width = max(3, int(round(window_fraction * (trace.t[-1] - trace.t[0]) / dt)))
    osc = trace.p_gg - trace.p_gg.mean()
    return np.sqrt(uniform_filter1d(osc**2, size=width, mode="reflect"))


def revival_time_estimate(trace: RevivalTrace, window_fraction: float = ENVELOPE_WINDOW_FRACTION) -> float:
    """Time of the first envelope maximum after the initial collapse."""
    env = rms_envelope(trace, window_fraction)
    span = float(env.max() - env.min())
    if span <= MIN_COLLAPSE_DEPTH * float(env.max()):
        raise NoRevivalFound("the envelope never collapses")
    prom = PEAK_PROMINENCE * span
    minima, _ = find_peaks(-env, prominence=prom)
    if minima.size == 0:
        raise NoRevivalFound("the envelope never collapses")
    peaks, _ = find_peaks(env, prominence=prom)
    peaks = peaks[peaks > minima[0]]
    if peaks.size == 0:
        raise NoRevivalFound("no envelope maximum after the collapse")
    return float(trace.t[peaks[0]])


def jc_deviation(field: CoherentSuperposition, g: float, times) -> float:
    """Largest gap between the closed-form probabilities and exact JC evolution at ``times``."""
    fv = to_fock(normalize(field))
    worst = 0.0
    for t in np.atleast_1d(times):
        pgg, pge = resonant_detection_probs(field, g, float(t))
        psi = jc_propagate(fv, AtomState.ground(), g, 0.0, float(t))
        worst = max(worst, abs(pgg - np.sum(np.abs(psi[1]) ** 2)), abs(pge - np.sum(np.abs(psi[0]) ** 2)))
    return worst
