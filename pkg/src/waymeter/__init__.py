"""Qubit readout through a flying-particle meter in a Mach-Zehnder interferometer."""

from .bounds import BoundInput, DegenerateDenominator, error_bound_ratio, ozawa_bound_max, ozawa_bound_state
from .interferometer import optimal_error, readout_error, readout_error_closed_form
from .oracle import (
    Grid,
    GridState,
    InteractionProfile,
    OracleDisagreement,
    ResolutionTooCoarse,
    WindowTooSmall,
    measure_error,
)
from .scattering import MeasurementConfig, QubitState, ScatteringAmplitudes, amplitudes, scatter
from .sweep import LogGrid, NonConvergence, RunConfig, SweepPoint, evaluate_point, run_sweep
from .wavepacket import (
    DivergentMoment,
    Gaussian,
    QuadratureFailure,
    Sampled,
    SmoothedExponential,
    SmoothedSquare,
    WavepacketMoments,
    WavepacketSpec,
    make_shape,
    moments,
    optimal_tau,
    overlap_P,
)

__version__ = "0.1.0"
