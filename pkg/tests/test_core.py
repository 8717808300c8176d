import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from scanclean.core import (
    NoiseTemplate,
    SampleVector,
    Spectrum,
    forward_transform,
    halfwave_rectify,
    inverse_transform,
    ncc,
    rms,
)
from scanclean.errors import DegenerateInput, EmptyInput, LengthMismatch

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


def _nonconstant(n_min=2, n_max=64):
    return arrays(np.float64, st.integers(n_min, n_max), elements=finite).filter(
        lambda a: np.ptp(a) > 1e-3
    )


class TestSampleVector:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            SampleVector(np.array([0.0, np.nan]), 16000)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            SampleVector(np.zeros(3), 0)

    def test_empty_allowed(self):
        v = SampleVector([], 8000)
        assert len(v) == 0
        assert np.asarray(v).shape == (0,)

    def test_slice_keeps_rate(self):
        v = SampleVector(np.arange(10.0), 8000)
        s = v.slice(2, 5)
        assert s.sample_rate == 8000
        np.testing.assert_array_equal(s.samples, [2.0, 3.0, 4.0])


class TestNcc:
    def test_self(self, rng):
        a = rng.standard_normal(50)
        assert ncc(a, a) == pytest.approx(1.0, abs=1e-12)

    def test_negation(self, rng):
        a = rng.standard_normal(50)
        assert ncc(a, -a) == pytest.approx(-1.0, abs=1e-12)

    def test_orthogonal(self):
        assert ncc([1, -1, 1, -1], [1, 1, -1, -1]) == pytest.approx(0.0, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            ncc([1, 2, 3], [1, 2])

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            ncc([1, 1, 1], [1, 2, 3])

    @given(_nonconstant(), st.data())
    def test_symmetric(self, a, data):
        b = data.draw(arrays(np.float64, a.size, elements=finite).filter(lambda b: np.ptp(b) > 1e-3))
        assert abs(ncc(a, b) - ncc(b, a)) <= 1e-12

    @given(_nonconstant(), st.floats(0.01, 100.0), st.floats(-10.0, 10.0), st.data())
    def test_positive_affine_invariance(self, a, c, d, data):
        b = data.draw(arrays(np.float64, a.size, elements=finite).filter(lambda b: np.ptp(b) > 1e-3))
        assert abs(ncc(c * a + d, b) - ncc(a, b)) <= 1e-9


class TestRms:
    def test_zeros(self):
        assert rms(np.zeros(8)) == 0.0

    @pytest.mark.parametrize("c", [0.5, -0.25, 3.0])
    def test_constant(self, c):
        assert rms(np.full(7, c)) == pytest.approx(abs(c), rel=1e-15)

    def test_direct(self):
        assert rms([3, 4]) == pytest.approx(math.sqrt(12.5), rel=1e-15)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            rms([])


class TestRectify:
    def test_example(self):
        np.testing.assert_array_equal(halfwave_rectify([-1, 2, 0]), [0, 2, 0])

    def test_nonnegative_unchanged(self):
        x = np.array([0.0, 1.5, 3.0])
        np.testing.assert_array_equal(halfwave_rectify(x), x)

    def test_all_negative(self):
        np.testing.assert_array_equal(halfwave_rectify([-1.0, -0.1]), [0.0, 0.0])

    @given(arrays(np.float64, st.integers(0, 32), elements=finite))
    def test_idempotent(self, x):
        once = halfwave_rectify(x)
        np.testing.assert_array_equal(halfwave_rectify(once), once)


class TestTransform:
    def test_impulse_flat(self):
        spec = forward_transform([1.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(spec.magnitude, np.ones(4), atol=1e-15)

    def test_cosine_bins(self):
        L, k = 64, 5
        x = np.cos(2 * np.pi * k * np.arange(L) / L)
        mag = forward_transform(x).magnitude
        big = np.flatnonzero(mag > 1e-9)
        assert set(big) == {k, L - k}

    def test_bin_resolution(self):
        spec = forward_transform(SampleVector(np.ones(1600), 16000))
        assert spec.bin_resolution == pytest.approx(10.0)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            forward_transform([])
        with pytest.raises(EmptyInput):
            inverse_transform(Spectrum(np.array([], complex)))

    @given(arrays(np.float64, st.integers(1, 97), elements=finite))
    def test_round_trip(self, x):
        back = inverse_transform(forward_transform(x))
        scale = max(np.linalg.norm(x), 1e-300)
        assert np.linalg.norm(back - x) / scale <= 1e-9 or np.linalg.norm(x) == 0

    @given(arrays(np.float64, st.integers(1, 97), elements=finite))
    def test_parseval(self, x):
        mag = forward_transform(x).magnitude
        lhs = np.sum(x * x)
        rhs = np.mean(mag ** 2)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-300)


class TestNoiseTemplate:
    def test_spectrum_cached(self, rng):
        t = NoiseTemplate.from_samples(rng.standard_normal(33))
        np.testing.assert_allclose(t.magnitude_spectrum, np.abs(np.fft.fft(t.samples)), atol=1e-12)
        assert t.update_count == 0
        assert len(t) == 33

    def test_blend_returns_new(self):
        t = NoiseTemplate.from_samples(np.ones(4))
        u = t.blend(np.zeros(4), 0.9)
        np.testing.assert_allclose(u.samples, 0.9)
        np.testing.assert_array_equal(t.samples, 1.0)
        assert u.update_count == 1

    def test_samples_read_only(self):
        t = NoiseTemplate.from_samples(np.ones(4))
        with pytest.raises(ValueError):
            t.samples[0] = 2.0

    def test_blend_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            NoiseTemplate.from_samples(np.ones(4)).blend(np.ones(3), 0.5)

    @settings(max_examples=30)
    @given(arrays(np.float64, 16, elements=finite), arrays(np.float64, 16, elements=finite),
           st.floats(0.0, 1.0))
    def test_blend_stays_in_bounds(self, g, x, gamma):
        out = NoiseTemplate.from_samples(g).blend(x, gamma).samples
        assert np.all(np.abs(out) <= 1.0 + 1e-15)
