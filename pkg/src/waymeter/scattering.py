"""Qubit-meter scattering map for a point-like sigma_z kick.

Basis conventions: z-basis amplitudes are ordered (g_z, e_z) with
sigma_z = diag(-1, +1).  The qubit Hamiltonian is
H_S = (omega_q / 2) (cos(theta) sigma_z + sin(theta) sigma_x), whose
eigenstates are

    |g_theta> =  cos(theta/2)|g_z> - sin(theta/2)|e_z>
    |e_theta> =  sin(theta/2)|g_z> + cos(theta/2)|e_z>
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MeasurementConfig:
    theta: float
    phi: float = math.pi
    omega_q: float = 1.0

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not -1e-12 <= self.phi <= 2 * math.pi + 1e-12:
            raise ValueError(f"phi must lie in [0, 2 pi], got {self.phi}")
        if not self.omega_q > 0:
            raise ValueError(f"omega_q must be positive, got {self.omega_q}")


def theta_rotation(theta: float) -> np.ndarray:
    """Matrix R with z_amplitudes = R @ theta_amplitudes."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class QubitState:
    """Pure qubit state b_g|g_theta> + b_e|e_theta>."""

    b_g: complex
    b_e: complex

    def __post_init__(self):
        norm = abs(self.b_g) ** 2 + abs(self.b_e) ** 2
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"qubit state not normalized: |b|^2 = {norm!r}")

    @classmethod
    def from_z(cls, c_g: complex, c_e: complex, theta: float) -> "QubitState":
        b = theta_rotation(theta).T @ np.array([c_g, c_e], dtype=complex)
        return cls(complex(b[0]), complex(b[1]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "QubitState":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    def z_amplitudes(self, theta: float) -> tuple[complex, complex]:
        c = theta_rotation(theta) @ np.array([self.b_g, self.b_e], dtype=complex)
        return complex(c[0]), complex(c[1])

    def as_array(self) -> np.ndarray:
        return np.array([self.b_g, self.b_e], dtype=complex)


@dataclass(frozen=True)
class ScatteringAmplitudes:
    i_gg: complex
    i_ee: complex
    i_ge: complex
    i_eg: complex


class Level(enum.Enum):
    G_THETA = "g_theta"
    E_THETA = "e_theta"


@dataclass(frozen=True)
class ScatterBranch:
    qubit_level: Level
    frequency_shift: float
    amplitude: complex


def amplitudes(config: MeasurementConfig) -> ScatteringAmplitudes:
    half = config.phi / 2
    i_gg = complex(math.cos(half), math.cos(config.theta) * math.sin(half))
    i_ge = 1j * math.sin(config.theta) * math.sin(half)
    return ScatteringAmplitudes(i_gg, i_gg.conjugate(), i_ge, i_ge)


def scatter(state: QubitState, config: MeasurementConfig) -> list[ScatterBranch]:
    """Four output branches; the meter gains omega_q only when e_theta decays to g_theta."""
    amp = amplitudes(config)
    wq = config.omega_q
    return [
        ScatterBranch(Level.G_THETA, 0.0, state.b_g * amp.i_gg),
        ScatterBranch(Level.E_THETA, 0.0, state.b_e * amp.i_ee),
        ScatterBranch(Level.E_THETA, -wq, state.b_g * amp.i_ge),
        ScatterBranch(Level.G_THETA, +wq, state.b_e * amp.i_eg),
    ]


def kick_phase(config: MeasurementConfig, level: Level) -> complex:
    """Diagonal element of exp(-i phi sigma_z / 2) for a z-basis level (testing aid)."""
    sign = -1 if level is Level.G_THETA else 1
    return cmath.exp(-1j * config.phi / 2 * sign)
