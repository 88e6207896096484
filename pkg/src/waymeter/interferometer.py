"""Mach-Zehnder readout algebra for a single meter particle.

Arm amplitudes are carried symbolically as bundles indexed by
(qubit level, frequency-shift label); the labels are ``SHIFTS`` =
(0, +omega_q, -omega_q) and the levels are (g_theta, e_theta).

Phase convention: acquiring a phase ``a`` multiplies an amplitude by
exp(-i a), the same convention as the sigma_z kick exp(-i phi sigma_z / 2).
With it, the ideal projective case (theta = 0, phi = pi) sends |g_z> to
arm B and |e_z> to arm A.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .scattering import MeasurementConfig, QubitState, amplitudes

SHIFTS = (0, +1, -1)  # in units of omega_q
_SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True, eq=False)
class ArmState:
    """One-particle state split over arms A and B (arrays of equal shape)."""

    arm_a: np.ndarray
    arm_b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.arm_a, dtype=complex)
        b = np.asarray(self.arm_b, dtype=complex)
        if a.shape != b.shape:
            raise ValueError("arm bundles must have the same shape")
        object.__setattr__(self, "arm_a", a)
        object.__setattr__(self, "arm_b", b)

    @classmethod
    def from_qubit(cls, state: QubitState) -> "ArmState":
        """Particle entering port A, qubit in ``state``, unshifted meter."""
        a = np.zeros((2, 3), dtype=complex)
        a[:, 0] = state.as_array()
        return cls(a, np.zeros_like(a))

    def label_norm(self) -> float:
        """Squared norm treating every bundle label as orthonormal."""
        return float(np.sum(np.abs(self.arm_a) ** 2) + np.sum(np.abs(self.arm_b) ** 2))


def beamsplitter(state: ArmState) -> ArmState:
    a, b = state.arm_a, state.arm_b
    return ArmState(_SQRT_HALF * (a + b), _SQRT_HALF * (a - b))


def phase_shifter_b(state: ArmState, phase: float = math.pi / 2) -> ArmState:
    return ArmState(state.arm_a, cmath.exp(-1j * phase) * state.arm_b)


def scatter_arm_a(state: ArmState, config: MeasurementConfig) -> ArmState:
    """Apply the qubit kick to the arm-A bundle (unshifted input only)."""
    a = state.arm_a
    if a.shape != (2, 3) or np.any(a[:, 1:] != 0):
        raise ValueError("arm A must hold an unshifted (2, 3) bundle")
    amp = amplitudes(config)
    out = np.zeros_like(a)
    out[0, 0] = amp.i_gg * a[0, 0]
    out[1, 0] = amp.i_ee * a[1, 0]
    out[1, 2] = amp.i_ge * a[0, 0]  # g_theta -> e_theta, meter loses omega_q
    out[0, 1] = amp.i_eg * a[1, 0]  # e_theta -> g_theta, meter gains omega_q
    return ArmState(out, state.arm_b)


def mz_output(state: QubitState, config: MeasurementConfig) -> ArmState:
    """Beamsplitter, kick in A with pi/2 phase in B, beamsplitter."""
    s = beamsplitter(ArmState.from_qubit(state))
    s = phase_shifter_b(scatter_arm_a(s, config))
    return beamsplitter(s)


def _gram(overlap: complex, overlap_double: complex | None) -> np.ndarray:
    # <shift_i | shift_j> for labels (0, +, -); overlap = <1_w | 1_{w+wq}>
    od = np.nan if overlap_double is None else overlap_double
    o = complex(overlap)
    return np.array(
        [
            [1, o, o.conjugate()],
            [o.conjugate(), 1, od],
            [o, np.conj(od), 1],
        ],
        dtype=complex,
    )


def arm_probabilities(
    state: ArmState, overlap: complex, overlap_double: complex | None = None
) -> tuple[float, float]:
    """Detection probabilities (p_A, p_B) of a (2, 3) bundle.

    ``overlap`` is <1_w|1_{w+wq}>; ``overlap_double`` = <1_{w+wq}|1_{w-wq}> is
    only needed when one level carries both a +wq and a -wq component.
    """
    gram = _gram(overlap, overlap_double)
    probs = []
    for arm in (state.arm_a, state.arm_b):
        total = 0.0
        for v in arm:
            if overlap_double is None and v[1] != 0 and v[2] != 0:
                raise ValueError("overlap_double required for this bundle")
            used = v != 0
            g = gram[np.ix_(used, used)]
            total += float(np.real(np.conj(v[used]) @ g @ v[used]))
        probs.append(total)
    return probs[0], probs[1]


def pointer_expectations(config: MeasurementConfig, P: float) -> tuple[float, float]:
    """(<n_A> for input |g_z>, <n_B> for input |e_z>); the two coincide."""
    val = 0.5 * _reduced_error2(config, P)
    return val, val


def _reduced_error2(config: MeasurementConfig, P: float, deficit: float | None = None) -> float:
    # 1 - sin(phi/2) [cos^2 + P sin^2], rearranged to avoid cancellation
    k = math.sin(config.phi / 2)
    return (1 - k) + k * math.sin(config.theta) ** 2 * (1 - P if deficit is None else deficit)


def _expectation(state: QubitState, config: MeasurementConfig, overlap: complex, sign: int) -> float:
    amp = amplitudes(config)
    pg, pe = abs(state.b_g) ** 2, abs(state.b_e) ** 2
    cross = (state.b_g.conjugate() * state.b_e * overlap).real
    inner = -1j * (pg * amp.i_gg.conjugate() + pe * amp.i_gg) + 2j * amp.i_eg * cross
    return 0.25 * (1 + abs(amp.i_gg) ** 2 + abs(amp.i_eg) ** 2 + sign * 2 * inner.real)


def expectation_nA_general(state: QubitState, config: MeasurementConfig, P: float) -> float:
    """Probability of detecting the particle in arm A for any qubit state."""
    return _expectation(state, config, complex(P), +1)


def expectation_nB_general(state: QubitState, config: MeasurementConfig, P: float) -> float:
    return _expectation(state, config, complex(P), -1)


def expectation_nA_complex(state: QubitState, config: MeasurementConfig, overlap: complex) -> float:
    """Variant of :func:`expectation_nA_general` keeping the full complex overlap."""
    return _expectation(state, config, overlap, +1)


def readout_error(state: QubitState, config: MeasurementConfig, P: float) -> float:
    """Noise-operator error, assembled from the z-basis pointer statistics.

    Raises ArithmeticError if the g_z and e_z contributions differ, which
    would make the error depend on the qubit state.
    """
    th = config.theta
    c_g, c_e = state.z_amplitudes(th)
    n_a = expectation_nA_general(QubitState.from_z(1, 0, th), config, P)
    n_b = expectation_nB_general(QubitState.from_z(0, 1, th), config, P)
    if abs(n_a - n_b) > 1e-12:
        raise ArithmeticError(f"readout error is state dependent: {n_a!r} != {n_b!r}")
    eps2 = 4 * abs(c_g) ** 2 * n_a + 4 * abs(c_e) ** 2 * n_b
    return math.sqrt(max(eps2, 0.0))


def readout_error_closed_form(config: MeasurementConfig, P: float, deficit: float | None = None) -> float:
    """State-independent error; pass ``deficit`` = 1 - P when P is close to 1."""
    return math.sqrt(max(2 * _reduced_error2(config, P, deficit), 0.0))


def optimal_error(theta: float, P: float) -> float:
    """Error at the optimal kick strength phi = pi."""
    return math.sin(theta) * math.sqrt(max(2 * (1 - P), 0.0))
