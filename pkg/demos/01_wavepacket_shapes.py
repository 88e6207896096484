"""Three meter wavepackets, one time dispersion.

Each family is tuned to the same dt by inverting its dispersion formula.
The Gaussian is the only minimum-uncertainty profile; the smoothed square
and exponential carry extra frequency spread in their edges.

    python demos/01_wavepacket_shapes.py
"""

import math

from waymeter import wavepacket as wp

DT = 1.0  # in units of 1/omega_q

print(f"{'shape':12s} {'param':>10s} {'dt':>8s} {'dw':>8s} {'dw*dt':>8s} {'tau*':>8s} {'P(tau*)':>9s}")
for name in ("gaussian", "square", "exponential"):
    shape = wp.make_shape(name, DT)
    m = wp.moments(shape)
    tau = wp.optimal_tau(shape, 1.0)
    P = wp.overlap_P(wp.WavepacketSpec(shape, tau), 1.0)
    param = next(iter(vars(shape).values()))
    print(f"{name:12s} {param:10.5f} {m.delta_t:8.5f} {m.delta_omega:8.5f} "
          f"{m.delta_t * m.delta_omega:8.5f} {tau:8.5f} {P:9.6f}")

# Sharpening the edges makes the square pulse more ideal in time but
# drives its frequency spread up like 1/sqrt(eta).
print("\nsquare pulse, dt = 1:")
for eta in (0.5, 1 / math.pi, 0.1, 0.01, 0.001):
    m = wp.moments(wp.make_shape("square", DT, eta))
    print(f"  eta={eta:<8.4g} dw={m.delta_omega:9.4f}")

# A sampled profile goes through the same API; its moments come from the grid.
sampled = wp.sample(wp.make_shape("exponential", DT), 2**14)
print(f"\nsampled exponential: dt={wp.time_dispersion(sampled):.8f} dw={wp.frequency_dispersion(sampled):.8f}")
