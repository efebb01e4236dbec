import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compass_cqed.errors import NoRevivalFound
from compass_cqed.probe import (
    ENVELOPE_WINDOW_FRACTION,
    RevivalTrace,
    excited_entry_probs,
    jc_deviation,
    resonant_detection_probs,
    revival_time_estimate,
    revival_trace,
    rms_envelope,
)
from compass_cqed.states import cat, coherent, compass, photon_distribution
from strategies import complex_amplitudes


class TestDetectionProbabilities:
    def test_start(self):
        assert resonant_detection_probs(compass(2.0), 1.0, 0.0) == pytest.approx((1.0, 0.0))

    def test_vacuum_never_excites(self):
        pgg, pge = resonant_detection_probs(coherent(0.0), 1.0, np.linspace(0, 50, 11))
        assert np.allclose(pgg, 1) and np.allclose(pge, 0)

    def test_compass_against_jc(self):
        assert jc_deviation(compass(2.0), 1.0, math.pi / 2) < 1e-10

    def test_compass_reduces_to_multiples_of_four(self):
        # P_gg = sum_p p(4p) cos^2(2 g t sqrt p)
        field, t = compass(2.0), 0.83
        pn = photon_distribution(field)
        p = np.arange(0, pn.size, 4)
        reduced = np.sum(pn[p] * np.cos(2 * t * np.sqrt(p // 4)) ** 2)
        assert resonant_detection_probs(field, 1.0, t)[0] == pytest.approx(reduced, abs=1e-14)

    @given(complex_amplitudes(3.0), st.floats(0, 30))
    def test_completeness(self, a, t):
        for field in (compass(a), cat(a) if a != 0 else coherent(0.0), coherent(a)):
            pgg, pge = resonant_detection_probs(field, 1.0, t)
            assert pgg + pge == pytest.approx(1.0, abs=1e-12)

    def test_excited_entry_completeness(self):
        pee, peg = excited_entry_probs(cat(1.5), 1.0, np.linspace(0, 10, 7))
        assert np.allclose(pee + peg, 1.0, atol=1e-12)

    def test_oracle_over_fields(self, rng):
        for field in (compass(2.0), cat(2.0 + 1j), coherent(1.5)):
            assert jc_deviation(field, 1.0, rng.uniform(0, 20, 4)) < 1e-10

    def test_negative_time(self):
        with pytest.raises(ValueError):
            resonant_detection_probs(coherent(1.0), 1.0, -1.0)


class TestRevival:
    def test_vacuum_trace_is_flat(self):
        tr = revival_trace(coherent(0.0), 1.0, 30.0, 301)
        assert np.all(tr.p_gg == 1.0)
        with pytest.raises(NoRevivalFound):
            revival_time_estimate(tr)

    def test_window_constant(self):
        assert ENVELOPE_WINDOW_FRACTION == 0.05

    def test_synthetic_trace(self):
        # fast oscillation whose amplitude collapses and revives at t = 60
        t = np.linspace(0, 100, 20001)
        amp = np.exp(-((t / 8) ** 2)) + np.exp(-(((t - 60) / 8) ** 2))
        p = 0.5 + 0.5 * amp * np.cos(2 * t)
        tr = RevivalTrace(t, p, 1 - p)
        assert revival_time_estimate(tr) == pytest.approx(60.0, abs=1.0)

    def test_pure_oscillation_has_no_revival(self):
        t = np.linspace(0, 100, 5001)
        p = np.cos(t) ** 2
        with pytest.raises(NoRevivalFound):
            revival_time_estimate(RevivalTrace(t, p, 1 - p))

    def test_coherent_revival_time(self):
        tr = revival_trace(coherent(4.0), 1.0, 12 * math.pi, 4001)
        assert revival_time_estimate(tr) == pytest.approx(2 * math.pi * 4, rel=0.1)

    @pytest.mark.parametrize("a", [3.0, 4.0, 5.0])
    def test_ordering(self, a):
        t_max = 3 * math.pi * a
        times = [revival_time_estimate(revival_trace(f, 1.0, t_max, 4001)) for f in (compass(a), cat(a), coherent(a))]
        assert times[0] < times[1] < times[2]

    def test_envelope_shape(self):
        tr = revival_trace(coherent(4.0), 1.0, 40.0, 2001)
        assert rms_envelope(tr).shape == tr.t.shape

    def test_gt_axis(self):
        tr = revival_trace(coherent(1.0), 2.0, 5.0, 11)
        assert np.allclose(tr.gt, 2 * tr.t)

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            revival_trace(coherent(1.0), 1.0, 5.0, 1)
