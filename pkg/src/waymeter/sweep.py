"""Evaluate error, bound and ratio over a log-spaced range of omega_q * dt.

Everything runs at omega_q = 1, so omega_q * dt is just the time
dispersion of the meter profile.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import bounds, oracle
from . import wavepacket as wp
from .interferometer import readout_error_closed_form
from .scattering import MeasurementConfig

OMEGA_Q = 1.0


class NonConvergence(ArithmeticError):
    """A sweep point could not be evaluated to the requested accuracy."""


@dataclass(frozen=True)
class LogGrid:
    min: float = 1e-2
    max: float = 1e2
    count: int = 61

    def __post_init__(self):
        if not (self.min > 0 and self.max >= self.min and math.isfinite(self.max)):
            raise ValueError(f"log grid needs 0 < min <= max, got {self.min}:{self.max}")
        if self.count < 2:
            raise ValueError("log grid needs at least 2 points")

    @classmethod
    def parse(cls, text: str) -> "LogGrid":
        """Parse ``MIN:MAX:COUNT``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected MIN:MAX:COUNT, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self) -> np.ndarray:
        return np.geomspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepPoint:
    shape: str
    wq_dt: float
    epsilon: float
    epsilon_b: float
    ratio: float
    dw_dt_product: float
    p_overlap: float
    tau_star: float
    epsilon_oracle: float | None = None

    def record(self) -> dict:
        out = asdict(self)
        if self.epsilon_oracle is None:
            del out["epsilon_oracle"]
        return out


FIELD_NAMES = [f.name for f in fields(SweepPoint)]


@dataclass(frozen=True)
class RunConfig:
    shapes: tuple[str, ...] = ("gaussian", "square", "exponential")
    grid: LogGrid = field(default_factory=LogGrid)
    eta: float = wp.DEFAULT_ETA
    theta: float = math.pi / 2
    phi: float = math.pi
    oracle: bool = False
    grid_points: int = 2**14
    jobs: int | None = None

    def __post_init__(self):
        unknown = [s for s in self.shapes if s not in wp.SHAPE_NAMES]
        if unknown or not self.shapes:
            raise ValueError(f"unknown shapes {unknown}; choose from {sorted(wp.SHAPE_NAMES)}")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        MeasurementConfig(self.theta, self.phi, OMEGA_Q)  # validates the angles
        if self.grid_points < 3:
            raise ValueError("grid_points must be at least 3")
        if self.jobs is not None and self.jobs < 1:
            raise ValueError("jobs must be positive")


def evaluate_point(
    shape: str,
    wq_dt: float,
    eta: float = wp.DEFAULT_ETA,
    theta: float = math.pi / 2,
    phi: float = math.pi,
    use_oracle: bool = False,
    grid_points: int = 2**14,
) -> SweepPoint:
    label = f"{shape} at omega_q*dt={wq_dt!r}"
    try:
        profile = wp.make_shape(shape, wq_dt, eta)
        m = wp.moments(profile)
        tau = wp.optimal_tau(profile, OMEGA_Q)
        spec = wp.WavepacketSpec(profile, tau)
        P = wp.overlap_P(spec, OMEGA_Q)
        cfg = MeasurementConfig(theta, phi, OMEGA_Q)
        deficit = wp.overlap_deficit(spec, OMEGA_Q)
        eps = readout_error_closed_form(cfg, P, deficit)
        eps_b = bounds.ozawa_bound_max(bounds.BoundInput(theta, m.delta_omega / OMEGA_Q))
        if eps_b > 0:
            ratio = eps / eps_b
        elif phi == math.pi:
            ratio = bounds.error_bound_ratio(theta, m, P, OMEGA_Q, deficit)  # theta -> 0 limit
        else:
            ratio = math.inf
        eps_o = None
        if use_oracle:
            grid = oracle.Grid.for_wavepacket(spec, grid_points)
            eps_o = math.sqrt(max(oracle.measure_error(cfg, spec, grid), 0.0))
    except (ArithmeticError, oracle.WindowTooSmall) as exc:
        raise NonConvergence(f"{label}: {exc}") from exc
    return SweepPoint(shape, float(wq_dt), eps, eps_b, ratio, m.delta_t * m.delta_omega, P, tau, eps_o)


def _evaluate(args) -> SweepPoint:
    return evaluate_point(*args)


def run_sweep(config: RunConfig) -> list[SweepPoint]:
    """All points ordered by shape (as listed), then ascending omega_q * dt."""
    tasks = [
        (s, float(x), config.eta, config.theta, config.phi, config.oracle, config.grid_points)
        for s in config.shapes
        for x in config.grid.values()
    ]
    jobs = config.jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) < 2:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
