import io
import math

import numpy as np
import pytest

from waymeter import interferometer as itf
from waymeter import oracle as orc
from waymeter import wavepacket as wp
from waymeter.scattering import Level, MeasurementConfig, QubitState, scatter, theta_rotation

G_Z = QubitState.from_z(1, 0, 0.0)
UNIT_GAUSSIAN = wp.WavepacketSpec(wp.Gaussian(1.0))


def _grid(spec, n=2**14):
    return orc.Grid.for_wavepacket(spec, n)


def _closed_form_eps2(config, spec):
    P = wp.overlap_P(spec, config.omega_q)
    return itf.readout_error_closed_form(config, P) ** 2


class TestEvolveDelta:
    def test_commuting_case_is_phase(self):
        cfg = MeasurementConfig(0.0, math.pi)
        g = _grid(UNIT_GAUSSIAN)
        out = orc.evolve_delta(G_Z, UNIT_GAUSSIAN, cfg, g)
        psi = wp.amplitude(UNIT_GAUSSIAN, g.t)
        assert np.abs(out.amplitudes[:, 0, orc.ARM_A] - 1j * psi).max() < 1e-14
        assert np.abs(out.amplitudes[:, 1, :]).max() == 0
        assert np.abs(out.amplitudes[:, :, orc.ARM_B]).max() == 0

    def test_no_kick_is_identity(self):
        cfg = MeasurementConfig(0.8, 0.0)
        g = _grid(UNIT_GAUSSIAN)
        s = QubitState(0.6, 0.8j)
        out = orc.evolve_delta(s, UNIT_GAUSSIAN, cfg, g)
        assert out.distance(orc.initial_state(s, UNIT_GAUSSIAN, cfg, g)) < 1e-13

    @pytest.mark.parametrize("theta", [0.3, math.pi / 2])
    def test_unitary(self, theta):
        cfg = MeasurementConfig(theta, 2.1)
        out = orc.evolve_delta(QubitState(0.6, 0.8), UNIT_GAUSSIAN, cfg, _grid(UNIT_GAUSSIAN))
        assert out.norm() == pytest.approx(1, abs=1e-9)

    def test_branches_match_scattering_map(self):
        # least-squares projection of each eigen-level onto psi and psi e^{-+i w t}
        wq = 1.0
        cfg = MeasurementConfig(math.pi / 4, math.pi / 2, wq)
        spec = wp.WavepacketSpec(wp.Gaussian(1 / wq))
        g = _grid(spec)
        s = QubitState(1 / math.sqrt(2), 1 / math.sqrt(2))
        out = orc.evolve_delta(s, spec, cfg, g)
        b = out.amplitudes[:, :, orc.ARM_A] @ theta_rotation(cfg.theta)  # z -> theta basis
        psi, t = wp.amplitude(spec, g.t), g.t

        fitted = {}
        for level, sign in ((Level.G_THETA, -1), (Level.E_THETA, +1)):
            col = 0 if level is Level.G_THETA else 1
            basis = np.stack([psi, psi * np.exp(sign * 1j * wq * t)], axis=1)
            coef, *_ = np.linalg.lstsq(basis, b[:, col], rcond=None)
            fitted[(level, 0.0)] = coef[0]
            fitted[(level, -sign * wq)] = coef[1]
            assert np.abs(basis @ coef - b[:, col]).max() < 1e-12

        for br in scatter(s, cfg):
            assert fitted[(br.qubit_level, br.frequency_shift)] == pytest.approx(br.amplitude, abs=1e-8)

    def test_window_too_small(self):
        g = orc.Grid(-2.0, 2.0, 2**12)
        with pytest.raises(orc.WindowTooSmall):
            orc.evolve_delta(G_Z, UNIT_GAUSSIAN, MeasurementConfig(0.5, math.pi), g)

    def test_resolution_too_coarse(self):
        # a Gaussian is still exact on 64 Simpson points; the exponential's rising edge is not
        spec = wp.WavepacketSpec(wp.SmoothedExponential(1.0))
        with pytest.raises(orc.ResolutionTooCoarse):
            orc.evolve_delta(G_Z, spec, MeasurementConfig(0.5, math.pi), _grid(spec, 2**6))

    def test_shifted_launch_and_sampled_profile(self):
        shape = wp.SmoothedExponential(1.3)
        state = QubitState(0.6, 0.8)
        cfg = MeasurementConfig(0.9, math.pi)
        spec = wp.WavepacketSpec(shape, 2.0)
        sampled = wp.WavepacketSpec(wp.sample(shape, 2**14), 2.0)
        g = _grid(spec)
        a = orc.evolve_delta(state, spec, cfg, g)
        b = orc.evolve_delta(state, sampled, cfg, g)
        assert a.distance(b) < 1e-6


class TestFiniteWidth:
    CFG = MeasurementConfig(math.pi / 3, math.pi, 1.0)
    STATE = QubitState.from_z(1 / math.sqrt(2), 1j / math.sqrt(2), math.pi / 3)

    def _distance(self, length):
        g = _grid(UNIT_GAUSSIAN)
        d = orc.evolve_delta(self.STATE, UNIT_GAUSSIAN, self.CFG, g)
        f = orc.evolve_finite_width(
            self.STATE, UNIT_GAUSSIAN, self.CFG, g, orc.InteractionProfile.smoothed_box(length)
        )
        assert f.norm() == pytest.approx(1, abs=1e-7)
        return f.distance(d)

    def test_delta_limit(self):
        near = self._distance(1e-3)
        assert near <= 1e-3
        assert 0.4 <= self._distance(5e-4) / near <= 0.6

    def test_no_kick_is_identity(self):
        cfg = MeasurementConfig(1.0, 0.0)
        g = _grid(UNIT_GAUSSIAN)
        s = QubitState(0.6, 0.8)
        f = orc.evolve_finite_width(s, UNIT_GAUSSIAN, cfg, g, orc.InteractionProfile.smoothed_box(0.5))
        assert f.distance(orc.initial_state(s, UNIT_GAUSSIAN, cfg, g)) < 1e-12

    def test_matches_pointwise_time_ordering(self):
        # per-arrival brute force at a handful of times vs the factored propagator
        prof = orc.InteractionProfile.smoothed_box(0.3)
        cfg = MeasurementConfig(0.7, 2.0, 1.3)
        a, b = prof.support
        n = 4000
        t = np.array([-1.7, 0.0, 2.4])
        got = orc.finite_width_matrices(cfg, t, prof, n)
        du = (b - a) / n
        for k, tk in enumerate(t):
            # lab-frame evolution from t+a to t+b, then map into the interaction picture
            u = np.eye(2, dtype=complex)
            for j in range(n):
                um = a + (j + 0.5) * du
                h = orc.free_propagator(cfg, du / 2)
                u = h @ orc._pauli_exp(0.5 * cfg.phi * prof.f(um) * du, orc._SZ) @ h @ u
            want = orc.free_propagator(cfg, -(tk + b)) @ u @ orc.free_propagator(cfg, tk + a)
            assert got[k] == pytest.approx(want, abs=1e-13)

    def test_rejects_coarse_stepping(self):
        g = _grid(UNIT_GAUSSIAN)
        with pytest.raises(orc.ResolutionTooCoarse):
            orc.evolve_finite_width(
                G_Z, UNIT_GAUSSIAN, self.CFG, g, orc.InteractionProfile.smoothed_box(0.1), n_steps=10
            )

    def test_profile_must_be_normalized(self):
        with pytest.raises(ValueError):
            orc.InteractionProfile("finite", lambda u: 2.0 if abs(u) < 0.5 else 0.0, 1.0, (-1.0, 1.0))

    def test_sampled_profile(self):
        box = orc.InteractionProfile.smoothed_box(1.0)
        u = np.linspace(*box.support, 8001)
        vals = np.array([box.f(x) for x in u])
        prof = orc.InteractionProfile.from_samples(u, vals / np.trapezoid(vals, u), 1.0)
        cfg = MeasurementConfig(0.5, 1.0)
        t = np.array([-1.0, 0.5])
        assert orc.finite_width_matrices(cfg, t, prof, 4000) == pytest.approx(
            orc.finite_width_matrices(cfg, t, box, 4000), abs=1e-6
        )


class TestInterferometer:
    def test_projective_case(self):
        cfg = MeasurementConfig(0.0, math.pi)
        run = orc.run_interferometer(G_Z, UNIT_GAUSSIAN, cfg, _grid(UNIT_GAUSSIAN))
        assert (run.p_a, run.p_b) == pytest.approx((0, 1), abs=1e-9)

    def test_no_kick_splits_evenly(self):
        cfg = MeasurementConfig(1.1, 0.0)
        run = orc.run_interferometer(QubitState(0.6, 0.8j), UNIT_GAUSSIAN, cfg, _grid(UNIT_GAUSSIAN))
        assert (run.p_a, run.p_b) == pytest.approx((0.5, 0.5), abs=1e-9)

    def test_transverse_matches_pointer(self):
        cfg = MeasurementConfig(math.pi / 2, math.pi)
        g_z = QubitState.from_z(1, 0, cfg.theta)
        run = orc.run_interferometer(g_z, UNIT_GAUSSIAN, cfg, _grid(UNIT_GAUSSIAN))
        want = itf.pointer_expectations(cfg, math.exp(-0.5))[0]
        assert run.p_a == pytest.approx(want, abs=1e-8)


class TestMeasureError:
    def test_commuting(self):
        cfg = MeasurementConfig(0.0, math.pi)
        assert orc.measure_error(cfg, UNIT_GAUSSIAN, _grid(UNIT_GAUSSIAN)) == pytest.approx(0, abs=1e-9)

    def test_transverse_gaussian(self):
        cfg = MeasurementConfig(math.pi / 2, math.pi)
        eps2 = orc.measure_error(cfg, UNIT_GAUSSIAN, _grid(UNIT_GAUSSIAN))
        assert eps2 == pytest.approx(0.786938680574733153, abs=1e-6)

    def test_random_configs(self):
        rng = np.random.default_rng(5)
        spec = wp.WavepacketSpec(wp.Gaussian(0.3))
        g = _grid(spec)
        for _ in range(25):
            cfg = MeasurementConfig(rng.uniform(0, math.pi / 2), rng.uniform(0, 2 * math.pi))
            assert orc.measure_error(cfg, spec, g) == pytest.approx(_closed_form_eps2(cfg, spec), abs=1e-6)

    @pytest.mark.parametrize("family", ["gaussian", "square", "exponential"])
    @pytest.mark.parametrize("wq_dt", [0.05, 1.0, 5.0])
    def test_shapes_match_closed_form(self, family, wq_dt):
        cfg = MeasurementConfig(math.pi / 3, math.pi)
        shape = wp.make_shape(family, wq_dt)
        spec = wp.WavepacketSpec(shape, wp.optimal_tau(shape, 1.0))
        got = math.sqrt(orc.measure_error(cfg, spec, _grid(spec)))
        assert got == pytest.approx(math.sqrt(_closed_form_eps2(cfg, spec)), rel=1e-6)

    def test_state_independent(self):
        rng = np.random.default_rng(2)
        cfg = MeasurementConfig(1.0, 2.6)
        spec = wp.WavepacketSpec(wp.SmoothedSquare(0.8))
        g = _grid(spec)
        vals = [orc.measure_error(cfg, spec, g, QubitState.random(rng)) for _ in range(20)]
        assert max(vals) - min(vals) <= 1e-8

    def test_routes_agree_with_finite_width(self):
        cfg = MeasurementConfig(0.6, math.pi)
        prof = orc.InteractionProfile.smoothed_box(0.2)
        routes = orc.measure_error_routes(cfg, UNIT_GAUSSIAN, _grid(UNIT_GAUSSIAN), profile=prof)
        assert routes.combination == pytest.approx(routes.noise_operator, abs=1e-8)


def test_dump_densities():
    cfg = MeasurementConfig(math.pi / 2, math.pi)
    g = _grid(UNIT_GAUSSIAN, 2**10)
    run = orc.run_interferometer(G_Z, UNIT_GAUSSIAN, cfg, g)
    buf = io.StringIO()
    orc.dump_densities(run.output, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "series,t,density"
    assert len(lines) == 1 + 2 * g.n_points
    rows = [ln.split(",") for ln in lines[1:]]
    total = {"arm_a": 0.0, "arm_b": 0.0}
    for name, _, d in rows:
        total[name] += float(d) * g.spacing
    assert total["arm_a"] == pytest.approx(run.p_a, abs=1e-6)
    assert total["arm_b"] == pytest.approx(run.p_b, abs=1e-6)
