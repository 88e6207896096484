"""Checking the analytic pipeline with a brute-force grid evolution.

The oracle samples the particle on a time grid, applies the qubit kick
pointwise, runs both beamsplitters and integrates the detector densities.
It knows nothing about branches or overlaps, yet lands on the same error.

    python demos/04_grid_oracle.py
"""

import math

from waymeter import oracle
from waymeter import wavepacket as wp
from waymeter.interferometer import readout_error_closed_form
from waymeter.scattering import MeasurementConfig, QubitState

cfg = MeasurementConfig(theta=math.pi / 3, phi=math.pi)
print(f"{'shape':12s} {'wq*dt':>6s} {'oracle eps':>14s} {'analytic eps':>14s} {'rel diff':>9s}")
for name in ("gaussian", "square", "exponential"):
    for x in (0.05, 1.0, 5.0):
        shape = wp.make_shape(name, x)
        spec = wp.WavepacketSpec(shape, wp.optimal_tau(shape, 1.0))
        grid = oracle.Grid.for_wavepacket(spec)
        eps_grid = math.sqrt(oracle.measure_error(cfg, spec, grid))
        eps = readout_error_closed_form(cfg, wp.overlap_P(spec, 1.0))
        print(f"{name:12s} {x:6.2f} {eps_grid:14.10f} {eps:14.10f} {abs(eps_grid / eps - 1):9.1e}")

# A coupling region of finite length L approaches the point kick linearly in L.
spec = wp.WavepacketSpec(wp.Gaussian(1.0))
grid = oracle.Grid.for_wavepacket(spec)
state = QubitState.from_z(0.6, 0.8j, cfg.theta)
point = oracle.evolve_delta(state, spec, cfg, grid)
print("\nfinite-width coupling, distance to the point kick:")
for L in (0.1, 0.03, 0.01, 0.003, 0.001):
    wide = oracle.evolve_finite_width(state, spec, cfg, grid, oracle.InteractionProfile.smoothed_box(L))
    print(f"  L*wq={L:<6} {wide.distance(point):.3e}")

# Too coarse a grid is refused rather than silently answered.
try:
    spec = wp.WavepacketSpec(wp.make_shape("exponential", 1.0))
    oracle.measure_error(cfg, spec, oracle.Grid.for_wavepacket(spec, 64))
except oracle.ResolutionTooCoarse as exc:
    print(f"\n64-point grid: {exc}")
