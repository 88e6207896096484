"""Brute-force grid evolution of the joint qubit-meter wavefunction.

Independent of the analytic map: every 2x2 propagator is built from the
Pauli decomposition of H_S and of the sigma_z kick in the z basis, the
meter is sampled on a uniform time grid (t = -x/v0), and detector
probabilities are integrated with composite Simpson.

GridState amplitudes have shape (n_points, 2, 2) indexed by
(grid point, z-basis qubit level (g_z, e_z), arm (A, B)).  Everything is
in the interaction picture, where the clock Hamiltonian leaves the
meter profile rigid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad, simpson

from . import wavepacket as wp
from .scattering import MeasurementConfig, QubitState

ARM_A, ARM_B = 0, 1

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
_BS = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class WindowTooSmall(ValueError):
    pass


class ResolutionTooCoarse(ArithmeticError):
    pass


class OracleDisagreement(ArithmeticError):
    pass


@dataclass(frozen=True)
class Grid:
    t_min: float
    t_max: float
    n_points: int = 2**14

    def __post_init__(self):
        if not self.t_max > self.t_min:
            raise ValueError("empty grid window")
        if self.n_points < 3:
            raise ValueError("need at least 3 grid points")

    @classmethod
    def for_wavepacket(cls, spec: wp.WavepacketSpec, n_points: int = 2**14) -> "Grid":
        lo, hi = spec.window()
        return cls(lo, hi, n_points)

    @property
    def spacing(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_points)

    def integrate(self, values: np.ndarray) -> float:
        return float(simpson(values, dx=self.spacing, axis=0))


@dataclass(frozen=True, eq=False)
class GridState:
    grid: Grid
    amplitudes: np.ndarray

    def densities(self) -> np.ndarray:
        """|amplitude|^2 summed over qubit levels, shape (n_points, 2 arms)."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def norm(self) -> float:
        return self.grid.integrate(self.densities().sum(axis=1))

    def arm_probabilities(self) -> tuple[float, float]:
        d = self.densities()
        return self.grid.integrate(d[:, ARM_A]), self.grid.integrate(d[:, ARM_B])

    def inner(self, other: "GridState", arm_signs=(1.0, 1.0)) -> complex:
        """<self|D|other> with D diagonal in the arms (weights ``arm_signs``)."""
        w = np.asarray(arm_signs, dtype=float)
        integrand = np.einsum("nla,nla,a->n", np.conj(self.amplitudes), other.amplitudes, w)
        return complex(simpson(integrand, dx=self.grid.spacing))

    def distance(self, other: "GridState") -> float:
        diff = GridState(self.grid, self.amplitudes - other.amplitudes)
        return math.sqrt(max(diff.norm(), 0.0))


@dataclass(frozen=True)
class InteractionProfile:
    """Spatial shape f(u) of the coupling, normalized so that its integral is 1.

    ``kind`` is "delta" or "finite"; finite profiles vanish outside ``support``.
    """

    kind: str
    f: Callable[[float], float] | None = None
    length: float = 0.0
    support: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.kind == "delta":
            return
        if self.kind != "finite" or self.f is None or not self.length > 0:
            raise ValueError("finite profiles need a callable f and positive length")
        a, b = self.support
        total = quad(self.f, a, b, points=[0.0] if a < 0 < b else None, limit=400)[0]
        if abs(total - 1) > 1e-6:
            raise ValueError(f"interaction profile integrates to {total!r}, not 1")

    @classmethod
    def delta(cls) -> "InteractionProfile":
        return cls("delta")

    @classmethod
    def smoothed_box(cls, length: float, edge: float = 0.05) -> "InteractionProfile":
        """Box of width ``length`` with tanh edges of width ``edge * length``."""
        w, h = edge * length, length / 2

        def f(u):
            return (math.tanh((u + h) / w) - math.tanh((u - h) / w)) / (2 * length)

        reach = h + 20 * w
        return cls("finite", f, length, (-reach, reach))

    @classmethod
    def from_samples(cls, u: np.ndarray, values: np.ndarray, length: float) -> "InteractionProfile":
        u = np.asarray(u, dtype=float)
        values = np.asarray(values, dtype=float)

        def f(x):
            return float(np.interp(x, u, values, left=0.0, right=0.0))

        return cls("finite", f, length, (float(u[0]), float(u[-1])))


def _pauli_exp(angle, axis: np.ndarray) -> np.ndarray:
    """exp(-i angle * axis) for an involutory axis (axis @ axis = I); angle may be an array."""
    angle = np.asarray(angle, dtype=float)
    return (
        np.cos(angle)[..., None, None] * _I2
        - 1j * np.sin(angle)[..., None, None] * axis
    )


def _hs_axis(config: MeasurementConfig) -> np.ndarray:
    return math.cos(config.theta) * _SZ + math.sin(config.theta) * _SX


def free_propagator(config: MeasurementConfig, t) -> np.ndarray:
    """exp(-i t H_S) for scalar or array ``t``."""
    return _pauli_exp(0.5 * config.omega_q * np.asarray(t, dtype=float), _hs_axis(config))


def kick(config: MeasurementConfig) -> np.ndarray:
    return _pauli_exp(config.phi / 2, _SZ)


def delta_matrices(config: MeasurementConfig, t: np.ndarray) -> np.ndarray:
    """Interaction-picture kick exp(i t H_S) K exp(-i t H_S) at each arrival time."""
    fwd = free_propagator(config, t)
    back = free_propagator(config, -t)
    return back @ kick(config) @ fwd


def interaction_propagator(
    config: MeasurementConfig, profile: InteractionProfile, n_steps: int
) -> np.ndarray:
    """Time-ordered propagator across the profile support (Strang splitting)."""
    a, b = profile.support
    du = (b - a) / n_steps
    half = free_propagator(config, du / 2)
    w = np.eye(2, dtype=complex)
    for k in range(n_steps):
        um = a + (k + 0.5) * du
        step = half @ _pauli_exp(0.5 * config.phi * profile.f(um) * du, _SZ) @ half
        w = step @ w
    return w


def finite_width_matrices(
    config: MeasurementConfig, t: np.ndarray, profile: InteractionProfile, n_steps: int
) -> np.ndarray:
    """Interaction-picture propagator for each arrival time, finite-width coupling.

    The particle arriving at time t crosses u in [a, b] while the qubit
    evolves under H_S + (phi/2) f(u) sigma_z; outside it evolves freely.
    """
    a, b = profile.support
    w = interaction_propagator(config, profile, n_steps)
    return free_propagator(config, -(t + b)) @ w @ free_propagator(config, t + a)


def _auto_steps(config: MeasurementConfig, profile: InteractionProfile) -> int:
    a, b = profile.support
    scale = min(profile.length, 1 / config.omega_q)
    return int(math.ceil(200 * (b - a) / scale))


def _tail_mass(spec: wp.WavepacketSpec, grid: Grid) -> float:
    shape = spec.shape
    lo, hi = grid.t_min - spec.tau, grid.t_max - spec.tau
    if isinstance(shape, wp.Sampled):
        t = shape.times
        inside = (t >= lo) & (t <= hi)
        rho = np.abs(shape.amplitudes) ** 2
        return float(max(0.0, simpson(rho, x=t) - simpson(rho[inside], x=t[inside])))
    cuts = sorted({lo, hi, *[p for p in shape.breakpoints() if lo < p < hi]})
    inside = sum(
        quad(shape._density_scalar, x0, x1, epsabs=1e-13, epsrel=1e-13, limit=400)[0]
        for x0, x1 in zip(cuts[:-1], cuts[1:])
    )
    return max(0.0, 1.0 - inside)


def initial_state(state: QubitState, spec: wp.WavepacketSpec, config: MeasurementConfig, grid: Grid) -> GridState:
    """Unscattered product state with the particle in arm A."""
    tail = _tail_mass(spec, grid)
    if tail > 1e-8:
        raise WindowTooSmall(f"wavepacket norm outside grid window: {tail:.3e}")
    psi = wp.amplitude(spec, grid.t)
    c = np.array(state.z_amplitudes(config.theta), dtype=complex)
    amps = np.zeros((grid.n_points, 2, 2), dtype=complex)
    amps[:, :, ARM_A] = psi[:, None] * c[None, :]
    gs = GridState(grid, amps)
    drift = abs(gs.norm() - 1)
    if drift > 1e-9:
        raise ResolutionTooCoarse(
            f"{grid.n_points}-point grid misses the wavepacket norm by {drift:.3e}"
        )
    return gs


def _apply_in_arm(gs: GridState, matrices: np.ndarray, arm: int) -> GridState:
    amps = gs.amplitudes.copy()
    amps[:, :, arm] = np.einsum("nij,nj->ni", matrices, amps[:, :, arm])
    return GridState(gs.grid, amps)


def _scattering_matrices(config, grid, profile, n_steps, check=True):
    if profile is None or profile.kind == "delta":
        return delta_matrices(config, grid.t)
    if n_steps is None:
        n_steps = _auto_steps(config, profile)
    a, b = profile.support
    if (b - a) / n_steps > min(profile.length, 1 / config.omega_q) / 50:
        raise ResolutionTooCoarse(f"{n_steps} steps under-resolve the interaction region")
    if check:
        coarse = interaction_propagator(config, profile, n_steps)
        fine = interaction_propagator(config, profile, 2 * n_steps)
        change = np.linalg.norm(coarse - fine, 2)
        if change > 1e-6:
            raise ResolutionTooCoarse(f"halving the step changes the propagator by {change:.3e}")
    return finite_width_matrices(config, grid.t, profile, n_steps)


def evolve_delta(state: QubitState, spec: wp.WavepacketSpec, config: MeasurementConfig, grid: Grid) -> GridState:
    """Post-scattering state of a particle in arm A, point-like coupling."""
    gs = initial_state(state, spec, config, grid)
    return _apply_in_arm(gs, delta_matrices(config, grid.t), ARM_A)


def evolve_finite_width(
    state: QubitState,
    spec: wp.WavepacketSpec,
    config: MeasurementConfig,
    grid: Grid,
    profile: InteractionProfile,
    n_steps: int | None = None,
) -> GridState:
    gs = initial_state(state, spec, config, grid)
    return _apply_in_arm(gs, _scattering_matrices(config, grid, profile, n_steps), ARM_A)


def _mix_arms(gs: GridState, mat: np.ndarray) -> GridState:
    return GridState(gs.grid, np.einsum("ab,nlb->nla", mat, gs.amplitudes))


@dataclass(frozen=True)
class InterferometerRun:
    p_a: float
    p_b: float
    output: GridState


def run_interferometer(
    state: QubitState,
    spec: wp.WavepacketSpec,
    config: MeasurementConfig,
    grid: Grid,
    profile: InteractionProfile | None = None,
    n_steps: int | None = None,
    _matrices: np.ndarray | None = None,
) -> InterferometerRun:
    """Beamsplitter, kick in arm A and pi/2 phase in arm B, beamsplitter, detection."""
    gs = initial_state(state, spec, config, grid)
    mats = _matrices if _matrices is not None else _scattering_matrices(config, grid, profile, n_steps)
    gs = _mix_arms(gs, _BS)
    gs = _apply_in_arm(gs, mats, ARM_A)
    gs = _mix_arms(gs, np.diag([1.0, np.exp(-0.5j * math.pi)]))
    gs = _mix_arms(gs, _BS)
    p_a, p_b = gs.arm_probabilities()
    if abs(p_a + p_b - 1) > 1e-9:
        raise ResolutionTooCoarse(f"detector probabilities sum to {p_a + p_b!r}")
    return InterferometerRun(p_a, p_b, gs)


@dataclass(frozen=True)
class ErrorRoutes:
    combination: float
    noise_operator: float


def measure_error_routes(
    config: MeasurementConfig,
    spec: wp.WavepacketSpec,
    grid: Grid,
    state: QubitState | None = None,
    profile: InteractionProfile | None = None,
    n_steps: int | None = None,
) -> ErrorRoutes:
    """Squared error two ways: z-basis detector statistics, and 2 - 2 Re<U^+ O_M U sigma_z>."""
    th = config.theta
    if state is None:
        state = QubitState.from_z(1 / math.sqrt(2), 1 / math.sqrt(2), th)
    mats = _scattering_matrices(config, grid, profile, n_steps)

    def run(s):
        return run_interferometer(s, spec, config, grid, _matrices=mats)

    c_g, c_e = state.z_amplitudes(th)
    p_a_g = run(QubitState.from_z(1, 0, th)).p_a
    p_b_e = run(QubitState.from_z(0, 1, th)).p_b
    combination = 4 * abs(c_g) ** 2 * p_a_g + 4 * abs(c_e) ** 2 * p_b_e

    out = run(state).output
    out_z = run(QubitState.from_z(-c_g, c_e, th)).output
    noise = 2 - 2 * out.inner(out_z, arm_signs=(1.0, -1.0)).real
    return ErrorRoutes(combination, noise)


def measure_error(
    config: MeasurementConfig,
    spec: wp.WavepacketSpec,
    grid: Grid,
    state: QubitState | None = None,
    profile: InteractionProfile | None = None,
    n_steps: int | None = None,
    agreement: float = 1e-8,
) -> float:
    """Squared readout error from the grid pipeline; both routes must agree."""
    routes = measure_error_routes(config, spec, grid, state, profile, n_steps)
    if abs(routes.combination - routes.noise_operator) > agreement:
        raise OracleDisagreement(
            f"error routes disagree: {routes.combination!r} vs {routes.noise_operator!r}"
        )
    return routes.combination


def dump_densities(gs: GridState, fh) -> None:
    """Write arm densities as ``series,t,density`` rows (same layout as shape dumps)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["series", "t", "density"])
    d = gs.densities()
    t = gs.grid.t
    for arm, name in ((ARM_A, "arm_a"), (ARM_B, "arm_b")):
        for ti, di in zip(t, d[:, arm]):
            writer.writerow([name, repr(float(ti)), repr(float(di))])
