"""Acceptance matrix: analytic curves, oracle cross-checks and the bound audit.

Each check returns a :class:`CheckResult` with the worst measured
deviation next to its tolerance.  Checks that raise (for instance an
under-resolved oracle grid) are reported as failures, not propagated.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import bounds, oracle
from . import wavepacket as wp
from .interferometer import readout_error, readout_error_closed_form
from .scattering import MeasurementConfig, QubitState
from .sweep import OMEGA_Q, evaluate_point

SHAPES = ("gaussian", "square", "exponential")
SQRT2 = math.sqrt(2)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    elapsed: float
    budget: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"[{status}] {self.number:2d} {self.name}: measured {self.measured:.3e}"
            f" (tol {self.tolerance:.1e}), {self.elapsed:.2f} s of {self.budget:g} s"
        )
        return f"{text}; {self.detail}" if self.detail else text

    def record(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerifyOptions:
    eta: float = wp.DEFAULT_ETA
    seed: int = 0
    grid_points: int = 2**14
    audit_size: int = 10_000


def _spec(shape: str, wq_dt: float, eta: float) -> wp.WavepacketSpec:
    profile = wp.make_shape(shape, wq_dt, eta)
    return wp.WavepacketSpec(profile, wp.optimal_tau(profile, OMEGA_Q))


def check_asymptote(opt: VerifyOptions):
    ratios = [evaluate_point(s, 50.0, opt.eta).ratio for s in SHAPES]
    dev = max(abs(r / SQRT2 - 1) for r in ratios)
    return dev, 0.02, "ratios " + ", ".join(f"{r:.5f}" for r in ratios)


def check_gaussian_saturation(opt: VerifyOptions):
    g, sq, ex = (evaluate_point(s, 0.01, opt.eta).ratio for s in SHAPES)
    # fold the two one-sided conditions into a single deviation
    dev = abs(g - 1)
    ok_others = min(sq, ex) > 1.05
    return (dev if ok_others else math.inf), 0.01, f"gaussian {g:.6f}, square {sq:.5f}, exponential {ex:.5f}"


def check_exponential_penalty(opt: VerifyOptions):
    r = evaluate_point("exponential", 0.01, opt.eta).ratio
    # distance outside [1.66, 1.73]; zero when inside
    dev = max(1.66 - r, r - 1.73, 0.0)
    return dev, 0.0, f"ratio {r:.5f}"


def check_uncertainty_mapping(opt: VerifyOptions):
    worst = 0.0
    for s in SHAPES:
        for x in np.geomspace(0.01, 0.05, 5):
            p = evaluate_point(s, float(x), opt.eta)
            worst = max(worst, abs(2 * p.dw_dt_product - p.ratio) / p.ratio)
    return worst, 0.02, "relative |2 dw dt - ratio| over 5 points per shape"


def check_oracle_equivalence(opt: VerifyOptions):
    cfg = MeasurementConfig(math.pi / 3, math.pi, OMEGA_Q)
    worst = 0.0
    for s in SHAPES:
        for x in (0.05, 0.3, 1.0, 5.0):
            spec = _spec(s, x, opt.eta)
            grid = oracle.Grid.for_wavepacket(spec, opt.grid_points)
            eps = math.sqrt(max(oracle.measure_error(cfg, spec, grid), 0.0))
            ref = readout_error_closed_form(cfg, wp.overlap_P(spec, OMEGA_Q))
            worst = max(worst, abs(eps - ref) / ref)
    return worst, 1e-6, f"12-point matrix on {opt.grid_points} grid points"


def check_bound_audit(opt: VerifyOptions):
    rng = np.random.default_rng(opt.seed)
    worst = -math.inf
    violations = 0
    for _ in range(opt.audit_size):
        state = QubitState.random(rng)
        theta = rng.uniform(0, math.pi / 2)
        shape = SHAPES[rng.integers(len(SHAPES))]
        x = 10 ** rng.uniform(-2, 2)
        profile = wp.make_shape(shape, float(x), opt.eta)
        m = wp.moments(profile)
        P = wp.overlap_P(wp.WavepacketSpec(profile, wp.optimal_tau(profile, OMEGA_Q)), OMEGA_Q)
        eps = readout_error(state, MeasurementConfig(theta, math.pi, OMEGA_Q), P)
        eps_b = bounds.ozawa_bound_state(state, bounds.BoundInput(theta, m.delta_omega / OMEGA_Q))
        gap = eps_b - eps  # positive means violation
        worst = max(worst, gap)
        violations += gap > 1e-12
    # report the largest excess of the bound over the error; must stay below 1e-12
    return max(worst, 0.0), 1e-12, f"{violations} violations in {opt.audit_size} tuples (seed {opt.seed})"


def check_state_independence(opt: VerifyOptions):
    rng = np.random.default_rng(opt.seed + 1)
    cfg = MeasurementConfig(math.pi / 3, 2.5, OMEGA_Q)
    spec = _spec("exponential", 1.0, opt.eta)
    grid = oracle.Grid.for_wavepacket(spec, opt.grid_points)
    vals = [oracle.measure_error(cfg, spec, grid, QubitState.random(rng)) for _ in range(20)]
    return max(vals) - min(vals), 1e-8, f"eps^2 = {np.mean(vals):.12f} over 20 states"


def check_delta_limit(opt: VerifyOptions):
    cfg = MeasurementConfig(math.pi / 3, math.pi, OMEGA_Q)
    spec = wp.WavepacketSpec(wp.Gaussian(1.0))
    grid = oracle.Grid.for_wavepacket(spec, opt.grid_points)
    state = QubitState.from_z(1 / math.sqrt(2), 1j / math.sqrt(2), cfg.theta)
    ref = oracle.evolve_delta(state, spec, cfg, grid)

    def dist(length):
        prof = oracle.InteractionProfile.smoothed_box(length / OMEGA_Q)
        return oracle.evolve_finite_width(state, spec, cfg, grid, prof).distance(ref)

    d1, d2 = dist(1e-3), dist(5e-4)
    ratio = d2 / d1
    over = max(d1 - 1e-3, 0.0, 0.4 - ratio, ratio - 0.6)
    return over, 0.0, f"distance {d1:.3e} at L*wq=1e-3, halving ratio {ratio:.4f}"


def check_phi_optimality(opt: VerifyOptions):
    worst = -math.inf
    for theta in (0.1, 0.7, math.pi / 2):
        for P in (0.0, 0.5, 0.99):
            best = readout_error_closed_form(MeasurementConfig(theta, math.pi), P)
            others = min(
                readout_error_closed_form(MeasurementConfig(theta, phi), P)
                for phi in np.linspace(0, 2 * math.pi, 721)
            )
            worst = max(worst, best - others)
    return max(worst, 0.0), 0.0, "excess of eps(pi) over the phi-grid minimum"


def check_moment_closed_forms(opt: VerifyOptions):
    worst = 0.0
    for profile in (
        wp.Gaussian(0.7),
        wp.SmoothedSquare(1.0, opt.eta),
        wp.SmoothedExponential(1.0, opt.eta),
    ):
        sampled = wp.sample(profile, 2**15)
        for fn in (wp.time_dispersion, wp.frequency_dispersion):
            worst = max(worst, abs(fn(sampled) / fn(profile) - 1))
    gauss_dev, min_excess = 0.0, math.inf
    for s in SHAPES:
        for dt in np.geomspace(1e-3, 1e3, 13):
            for eta in (0.05, opt.eta, 0.9):
                m = wp.moments(wp.make_shape(s, float(dt), eta))
                prod = m.delta_t * m.delta_omega
                if s == "gaussian":
                    gauss_dev = max(gauss_dev, abs(prod - 0.5))
                else:
                    min_excess = min(min_excess, prod - 0.5)
    detail = f"gaussian |dw dt - 1/2| {gauss_dev:.1e}, smallest other excess {min_excess:.3e}"
    if gauss_dev > 1e-9 or not min_excess > 1e-9:
        return math.inf, 1e-6, detail
    return worst, 1e-6, detail


# (number, name, runtime budget in seconds, check)
CHECKS: list[tuple[int, str, float, Callable]] = [
    (1, "sqrt(2) asymptote", 1.0, check_asymptote),
    (2, "gaussian saturation", 1.0, check_gaussian_saturation),
    (3, "exponential penalty", 1.0, check_exponential_penalty),
    (4, "uncertainty mapping", 1.0, check_uncertainty_mapping),
    (5, "oracle equivalence", 30.0, check_oracle_equivalence),
    (6, "bound inequality audit", 10.0, check_bound_audit),
    (7, "state independence", 20.0, check_state_independence),
    (8, "delta-limit convergence", 60.0, check_delta_limit),
    (9, "phi optimality", 1.0, check_phi_optimality),
    (10, "moment closed forms", 5.0, check_moment_closed_forms),
]


def run_check(number: int, opt: VerifyOptions | None = None) -> CheckResult:
    opt = opt or VerifyOptions()
    num, name, budget, fn = next(c for c in CHECKS if c[0] == number)
    start = time.perf_counter()
    try:
        measured, tol, detail = fn(opt)
        passed = measured <= tol
    except (ArithmeticError, ValueError) as exc:
        measured, tol, detail, passed = math.inf, math.nan, f"{type(exc).__name__}: {exc}", False
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        passed = False
        detail = f"{detail}; over the runtime budget"
    return CheckResult(num, name, passed, float(measured), float(tol), elapsed, budget, detail)


def run_all(opt: VerifyOptions | None = None) -> list[CheckResult]:
    return [run_check(c[0], opt) for c in CHECKS]
