"""Conservation-law lower bound on the readout error and related ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scattering import QubitState
from .wavepacket import WavepacketMoments

# z-basis (g_z, e_z) Pauli matrices with sigma_z = diag(-1, +1) and
# [sigma_z, H_S] = i omega_q sin(theta) sigma_y
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)


class DegenerateDenominator(ZeroDivisionError):
    """Variance sum vanished while the commutator term did not."""


@dataclass(frozen=True)
class BoundInput:
    theta: float
    domega_over_wq: float

    def __post_init__(self):
        if not (math.isfinite(self.domega_over_wq) and self.domega_over_wq >= 0):
            raise ValueError(f"domega_over_wq must be finite and >= 0, got {self.domega_over_wq}")


def sigma_expectations(state: QubitState, theta: float) -> tuple[float, float]:
    """(<sigma_y>, <sigma_theta>) from the state's z-basis amplitudes."""
    c = np.array(state.z_amplitudes(theta))
    sigma_theta = math.cos(theta) * SIGMA_Z + math.sin(theta) * SIGMA_X
    sy = float(np.real(np.conj(c) @ SIGMA_Y @ c))
    st = float(np.real(np.conj(c) @ sigma_theta @ c))
    return sy, st


def ozawa_bound_state(state: QubitState, bound: BoundInput) -> float:
    """State-dependent bound; the meter enters only through its frequency spread."""
    sy, st = sigma_expectations(state, bound.theta)
    num = math.sin(bound.theta) ** 2 * sy**2
    den = 1 + 4 * bound.domega_over_wq**2 - st**2
    if den <= 1e-15:
        # eigenstate of H_S with a monochromatic meter: <sigma_y> = 0 as well
        if num <= 1e-15:
            return 0.0
        raise DegenerateDenominator(f"denominator {den!r} with numerator {num!r}")
    return math.sqrt(num / den)


def ozawa_bound_max(bound: BoundInput) -> float:
    """Bound maximized over qubit states (attained at <sigma_y> = +-1)."""
    return math.sin(bound.theta) / math.sqrt(1 + 4 * bound.domega_over_wq**2)


def error_bound_ratio(
    theta: float, moments: WavepacketMoments, P: float, omega_q: float, deficit: float | None = None
) -> float:
    """Ratio of the phi = pi error to the maximized bound (independent of theta).

    ``deficit`` optionally supplies 1 - P computed without cancellation.
    """
    x = moments.delta_omega / omega_q
    d = 1 - P if deficit is None else deficit
    return math.sqrt(2 * (1 + 4 * x * x) * max(d, 0.0))


def uncertainty_product(moments: WavepacketMoments) -> float:
    return moments.delta_omega * moments.delta_t
