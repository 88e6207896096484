"""The state-dependent bound never exceeds the actual error.

The bound depends on the qubit state through <sigma_y> and <sigma_theta>;
the error does not depend on the state at all.  The bound is largest
for <sigma_y> = +-1, and that maximum is what the error is compared with
in the ratio curves.

    python demos/05_bound_audit.py
"""

import math

import numpy as np

from waymeter import bounds
from waymeter import wavepacket as wp
from waymeter.interferometer import readout_error
from waymeter.scattering import MeasurementConfig, QubitState

rng = np.random.default_rng(0)
theta = math.pi / 2
for name in ("gaussian", "square", "exponential"):
    shape = wp.make_shape(name, 0.05)
    m = wp.moments(shape)
    P = wp.overlap_P(wp.WavepacketSpec(shape, wp.optimal_tau(shape, 1.0)), 1.0)
    cfg = MeasurementConfig(theta, math.pi)
    b = bounds.BoundInput(theta, m.delta_omega)
    states = [QubitState.random(rng) for _ in range(2000)]
    eps = readout_error(states[0], cfg, P)
    eps_b = [bounds.ozawa_bound_state(s, b) for s in states]
    print(f"{name:12s} eps={eps:.6f}  max over states of eps_B={max(eps_b):.6f}  "
          f"closed-form max={bounds.ozawa_bound_max(b):.6f}  eps/max={eps / bounds.ozawa_bound_max(b):.4f}")
