"""Following one qubit state through the interferometer.

The particle enters arm A, is kicked by the qubit in arm A and picks up a
pi/2 phase in arm B, then the arms recombine.  Which detector clicks
reveals sigma_z, up to errors from the qubit's own dynamics.

    python demos/02_interferometer_readout.py
"""

import math

from waymeter import interferometer as itf
from waymeter.scattering import MeasurementConfig, QubitState, scatter

# Commuting case: H_S along sigma_z, a pi kick.  The readout is perfect.
cfg = MeasurementConfig(theta=0.0, phi=math.pi)
for label, (cg, ce) in (("|g_z>", (1, 0)), ("|e_z>", (0, 1))):
    p_a, p_b = itf.arm_probabilities(itf.mz_output(QubitState.from_z(cg, ce, 0.0), cfg), overlap=0.4)
    print(f"theta=0, {label}: p_A={p_a:.3f} p_B={p_b:.3f}")

# Transverse H_S: the kick now flips the energy eigenstates, and the meter
# carries away +-omega_q.  The four branches of the scattering map:
cfg = MeasurementConfig(theta=math.pi / 3, phi=math.pi)
state = QubitState(math.sqrt(0.7), math.sqrt(0.3))
print("\nbranches for theta = pi/3:")
for br in scatter(state, cfg):
    print(f"  qubit {br.qubit_level.name:8s} meter shift {br.frequency_shift:+.0f} amplitude {br.amplitude:.4f}")

# The readout error depends on the meter only through the overlap P
# between the packet and its frequency-shifted copy, and not on the state.
print("\nerror vs overlap at theta = pi/3:")
for P in (0.0, 0.5, 0.9, 0.99, 1.0):
    eps = itf.readout_error(state, cfg, P)
    print(f"  P={P:<5} eps={eps:.5f}  (sin(theta) sqrt(2(1-P)) = {itf.optimal_error(cfg.theta, P):.5f})")
