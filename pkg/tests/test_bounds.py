import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from waymeter import bounds, wavepacket as wp
from waymeter.bounds import BoundInput
from waymeter.scattering import QubitState


def _sigma_y_eigenstate(theta, sign=+1):
    # <sigma_y> = -2 Im(c_g* c_e) = +-1 for c = (1, -+i)/sqrt(2)
    return QubitState.from_z(1 / math.sqrt(2), -sign * 1j / math.sqrt(2), theta)


def test_sigma_expectations_of_eigenstates():
    th = 0.8
    assert bounds.sigma_expectations(_sigma_y_eigenstate(th), th) == pytest.approx((1, 0), abs=1e-15)
    assert bounds.sigma_expectations(QubitState(1, 0), th) == pytest.approx((0, -1), abs=1e-15)


def test_sigma_y_matches_commutator():
    th, wq = 0.9, 1.7
    hs = 0.5 * wq * (math.cos(th) * bounds.SIGMA_Z + math.sin(th) * bounds.SIGMA_X)
    comm = bounds.SIGMA_Z @ hs - hs @ bounds.SIGMA_Z
    assert comm == pytest.approx(1j * wq * math.sin(th) * bounds.SIGMA_Y)


class TestStateBound:
    def test_commuting_vanishes(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            assert bounds.ozawa_bound_state(QubitState.random(rng), BoundInput(0.0, 0.3)) == 0

    def test_zero_sigma_y(self):
        s = QubitState.from_z(0.6, 0.8, 1.0)
        assert bounds.ozawa_bound_state(s, BoundInput(1.0, 0.3)) == 0

    def test_plug_in(self):
        s = _sigma_y_eigenstate(math.pi / 2)
        assert bounds.ozawa_bound_state(s, BoundInput(math.pi / 2, 1.0)) == pytest.approx(
            math.sqrt(0.2), abs=1e-15
        )

    def test_eigenstate_with_monochromatic_meter(self):
        assert bounds.ozawa_bound_state(QubitState(0, 1), BoundInput(1.0, 0.0)) == 0.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            BoundInput(0.3, float("inf"))


class TestMaxBound:
    def test_no_frequency_spread(self):
        assert bounds.ozawa_bound_max(BoundInput(math.pi / 2, 0.0)) == 1

    def test_broadband_asymptote(self):
        x = 1e3
        assert bounds.ozawa_bound_max(BoundInput(math.pi / 2, x)) == pytest.approx(1 / (2 * x), rel=1e-6)

    @pytest.mark.parametrize("theta", [0.2, 1.0, math.pi / 2])
    @pytest.mark.parametrize("x", [0.0, 0.3, 4.0])
    def test_brute_force_maximum(self, theta, x):
        rng = np.random.default_rng(7)
        b = BoundInput(theta, x)
        vals = [bounds.ozawa_bound_state(QubitState.random(rng), b) for _ in range(10_000)]
        top = bounds.ozawa_bound_max(b)
        assert max(vals) <= top + 1e-12
        assert max(vals) == pytest.approx(top, abs=1e-2 * top)
        # the analytic maximizer attains it
        assert bounds.ozawa_bound_state(_sigma_y_eigenstate(theta, -1), b) == pytest.approx(top, abs=1e-9)

    @given(st.floats(0, math.pi / 2), st.floats(0, 50), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
    def test_max_dominates(self, theta, x, a, b):
        s = QubitState(math.cos(a / 2), math.sin(a / 2) * complex(math.cos(b), math.sin(b)))
        bi = BoundInput(theta, x)
        assert bounds.ozawa_bound_state(s, bi) <= bounds.ozawa_bound_max(bi) + 1e-12


class TestRatio:
    def test_short_limit(self):
        m = wp.WavepacketMoments(1.0, 0.5)
        assert bounds.error_bound_ratio(1.0, m, 0.0, 1e9) == pytest.approx(math.sqrt(2))

    def test_gaussian_saturates(self):
        sh = wp.make_shape("gaussian", 0.01)
        P = wp.overlap_P(wp.WavepacketSpec(sh), 1.0)
        assert bounds.error_bound_ratio(1.0, wp.moments(sh), P, 1.0) == pytest.approx(1, rel=1e-2)

    def test_exponential_penalty(self):
        sh = wp.make_shape("exponential", 0.01)
        spec = wp.WavepacketSpec(sh, wp.optimal_tau(sh, 1.0))
        r = bounds.error_bound_ratio(1.0, wp.moments(sh), wp.overlap_P(spec, 1.0), 1.0)
        assert 1.66 <= r <= 1.73
        # leading-order expansion: ratio -> 2 dw dt
        assert r == pytest.approx(2 * bounds.uncertainty_product(wp.moments(sh)), rel=1e-3)

    @pytest.mark.parametrize("family", ["gaussian", "square", "exponential"])
    def test_theta_cancels(self, family):
        sh = wp.make_shape(family, 0.8)
        spec = wp.WavepacketSpec(sh, wp.optimal_tau(sh, 1.0))
        P, m = wp.overlap_P(spec, 1.0), wp.moments(sh)
        from waymeter.interferometer import optimal_error

        for theta in (0.1, 0.5, math.pi / 2):
            raw = optimal_error(theta, P) / bounds.ozawa_bound_max(BoundInput(theta, m.delta_omega))
            assert raw == pytest.approx(bounds.error_bound_ratio(theta, m, P, 1.0), rel=1e-12)

    @pytest.mark.parametrize("family", ["gaussian", "square", "exponential"])
    def test_long_packet_asymptote(self, family):
        sh = wp.make_shape(family, 50.0)
        spec = wp.WavepacketSpec(sh, wp.optimal_tau(sh, 1.0))
        r = bounds.error_bound_ratio(0.3, wp.moments(sh), wp.overlap_P(spec, 1.0), 1.0)
        assert r == pytest.approx(math.sqrt(2), rel=0.02)


class TestUncertaintyProduct:
    def test_gaussian(self):
        assert bounds.uncertainty_product(wp.moments(wp.Gaussian(3.0))) == pytest.approx(0.5)

    def test_square(self):
        assert bounds.uncertainty_product(wp.moments(wp.SmoothedSquare(1.0))) == pytest.approx(
            0.572033945475142416, rel=1e-12
        )

    def test_exponential(self):
        assert bounds.uncertainty_product(wp.moments(wp.SmoothedExponential(1.0))) == pytest.approx(
            0.847523536723972332, rel=1e-12
        )
