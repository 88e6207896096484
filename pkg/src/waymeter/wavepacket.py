"""Meter wavepackets parametrized by the arrival-time variable t = -x/v0.

Three smooth families are provided (Gaussian, smoothed square pulse,
smoothed exponential decay) plus a sampled profile on a uniform grid.
Natural units are used throughout (hbar = v0 = 1), so the only physical
scale is the qubit frequency passed to the overlap functions.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.integrate import IntegrationWarning, quad, simpson
from scipy.optimize import minimize_scalar

DEFAULT_ETA = 1.0 / math.pi

# tail mass left outside the analytic windows is below ~1e-16
_GAUSS_HALF_WIDTH = 10.0
_TAIL_DECAYS = 40.0

_QUAD_OPTS = dict(epsabs=1e-10, epsrel=1e-12, limit=400)


class DivergentMoment(ArithmeticError):
    """A sampled spectral moment does not settle under grid refinement."""


class QuadratureFailure(ArithmeticError):
    """Adaptive quadrature reported that it did not reach its tolerance."""


@dataclass(frozen=True)
class Gaussian:
    sigma_t: float

    def __post_init__(self):
        if not self.sigma_t > 0:
            raise ValueError(f"sigma_t must be positive, got {self.sigma_t}")

    def density(self, t):
        s = self.sigma_t
        return np.exp(-np.square(t) / (2 * s * s)) / (math.sqrt(2 * math.pi) * s)

    def _density_scalar(self, t: float) -> float:
        return self._integrand()(t)

    def _integrand(self):
        exp, k, c = math.exp, -0.5 / self.sigma_t**2, 1 / (math.sqrt(2 * math.pi) * self.sigma_t)
        return lambda t: c * exp(k * t * t)

    def window(self) -> tuple[float, float]:
        h = _GAUSS_HALF_WIDTH * self.sigma_t
        return -h, h

    def breakpoints(self) -> tuple[float, ...]:
        return (0.0,)


@dataclass(frozen=True)
class SmoothedSquare:
    """Square pulse of duration ~2s with tanh edges of relative width eta."""

    s: float
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")

    def density(self, t):
        s, a = self.s, self.eta * self.s
        t = np.asarray(t, dtype=float)
        return (np.tanh((t + s) / a) - np.tanh((t - s) / a)) / (4 * s)

    def _density_scalar(self, t: float) -> float:
        return self._integrand()(t)

    def _integrand(self):
        tanh, s, inv_a, c = math.tanh, self.s, 1 / (self.eta * self.s), 1 / (4 * self.s)
        return lambda t: c * (tanh((t + s) * inv_a) - tanh((t - s) * inv_a))

    def window(self) -> tuple[float, float]:
        h = self.s * (1 + 0.5 * _TAIL_DECAYS * self.eta)
        return -h, h

    def breakpoints(self) -> tuple[float, ...]:
        return (-self.s, 0.0, self.s)


@dataclass(frozen=True)
class SmoothedExponential:
    """Exponential decay at rate gamma with a tanh rise of width ~eta/gamma at t=0."""

    gamma: float
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")

    @property
    def _norm(self) -> float:
        g, e = self.gamma, self.eta
        return 2 * g / (math.pi * e) * math.sin(math.pi * e / 2)

    def density(self, t):
        g, e = self.gamma, self.eta
        t = np.asarray(t, dtype=float)
        # 0.5 * (1 + tanh(x)) == 1 / (1 + exp(-2x)); written to avoid exp overflow
        logistic = 0.5 * (1 + np.tanh(g * t / e))
        with np.errstate(over="ignore", under="ignore"):
            return self._norm * logistic * np.exp(-g * t)

    def _density_scalar(self, t: float) -> float:
        return self._integrand()(t)

    def _integrand(self):
        tanh, exp, g, k, c = math.tanh, math.exp, self.gamma, self.gamma / self.eta, 0.5 * self._norm

        def f(t):
            if g * t < -700:
                return 0.0
            return c * (1 + tanh(k * t)) * exp(-g * t)

        return f

    def window(self) -> tuple[float, float]:
        g, e = self.gamma, self.eta
        # left tail decays at rate gamma * (2/eta - 1)
        return -_TAIL_DECAYS / (g * (2 / e - 1)), _TAIL_DECAYS / g

    def breakpoints(self) -> tuple[float, ...]:
        return (0.0, 1.0 / self.gamma)


@dataclass(frozen=True, eq=False)
class Sampled:
    """Arbitrary complex profile on a uniform time grid, normalized on construction."""

    times: np.ndarray
    amplitudes: np.ndarray
    _norm_factor: float = field(init=False, repr=False, default=1.0)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if times.ndim != 1 or times.shape != amps.shape:
            raise ValueError("times and amplitudes must be 1-D arrays of equal length")
        if times.size < 5:
            raise ValueError("need at least 5 samples")
        dt = np.diff(times)
        if not np.all(dt > 0) or not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
            raise ValueError("times must be uniformly spaced and increasing")
        norm = simpson(np.abs(amps) ** 2, x=times)
        if not norm > 0:
            raise ValueError("profile has zero norm")
        amps = amps / math.sqrt(norm)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "_norm_factor", math.sqrt(norm))

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0])

    def amplitude(self, t):
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.amplitudes.real, left=0.0, right=0.0)
        im = np.interp(t, self.times, self.amplitudes.imag, left=0.0, right=0.0)
        return re + 1j * im

    def density(self, t):
        return np.abs(self.amplitude(t)) ** 2

    def window(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])


Shape = Union[Gaussian, SmoothedSquare, SmoothedExponential, Sampled]
PARAMETRIC = (Gaussian, SmoothedSquare, SmoothedExponential)

SHAPE_NAMES = {
    "gaussian": Gaussian,
    "square": SmoothedSquare,
    "exponential": SmoothedExponential,
}


@dataclass(frozen=True)
class WavepacketSpec:
    """A meter wavepacket: profile shape plus launch offset tau.

    The launched profile is psi(t - tau), so tau enters the overlap
    through cos(omega_q * (t + tau)).
    """

    shape: Shape
    tau: float = 0.0

    def with_tau(self, tau: float) -> "WavepacketSpec":
        return WavepacketSpec(self.shape, float(tau))

    def window(self) -> tuple[float, float]:
        """Time window of the launched profile."""
        lo, hi = self.shape.window()
        return lo + self.tau, hi + self.tau


@dataclass(frozen=True)
class WavepacketMoments:
    delta_t: float
    delta_omega: float

    def __post_init__(self):
        if not (self.delta_t > 0 and self.delta_omega > 0):
            raise ValueError("dispersions must be positive")
        if self.delta_t * self.delta_omega < 0.5 - 1e-9:
            raise ValueError(
                f"dispersions violate dw*dt >= 1/2: {self.delta_t * self.delta_omega}"
            )


def _as_shape(spec) -> Shape:
    return spec.shape if isinstance(spec, WavepacketSpec) else spec


def amplitude(spec, t):
    """Wavefunction psi(t) of the launched packet (real for the parametric families)."""
    shape = _as_shape(spec)
    tau = spec.tau if isinstance(spec, WavepacketSpec) else 0.0
    t = np.asarray(t, dtype=float) - tau
    if isinstance(shape, Sampled):
        return shape.amplitude(t)
    return np.sqrt(np.maximum(shape.density(t), 0.0))


def density(spec, t):
    return np.abs(amplitude(spec, t)) ** 2


def _pieces(shape, half: bool = False) -> list[tuple[float, float]]:
    lo, hi = shape.window()
    if half:
        lo = 0.0
    cuts = [lo] + [b for b in shape.breakpoints() if lo < b < hi] + [hi]
    return list(zip(cuts[:-1], cuts[1:]))


def _integrate(shape, weight=None, wvar=None, moment: int = 0, half: bool = False) -> float:
    rho = shape._integrand()
    if moment:
        f = lambda t: t**moment * rho(t)  # noqa: E731
    else:
        f = rho
    kw = dict(_QUAD_OPTS)
    if weight is not None:
        kw.update(weight=weight, wvar=wvar)
    return _quad_sum(f, _pieces(shape, half), shape, **kw)


def _quad_sum(f, pieces, label, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            return sum(quad(f, a, b, **kw)[0] for a, b in pieces)
        except IntegrationWarning as exc:
            raise QuadratureFailure(f"{label!r}: {' '.join(str(exc).split())}") from None


def mean_time(spec) -> float:
    """First moment of |psi|^2 (including the launch offset)."""
    shape = _as_shape(spec)
    tau = spec.tau if isinstance(spec, WavepacketSpec) else 0.0
    if isinstance(shape, (Gaussian, SmoothedSquare)):
        return tau
    if isinstance(shape, Sampled):
        return simpson(shape.times * np.abs(shape.amplitudes) ** 2, x=shape.times) + tau
    return _integrate(shape, moment=1) + tau


def time_dispersion(spec) -> float:
    shape = _as_shape(spec)
    if isinstance(shape, Gaussian):
        return shape.sigma_t
    if isinstance(shape, SmoothedSquare):
        e = shape.eta
        return shape.s * math.sqrt(4 + math.pi**2 * e**2) / (2 * math.sqrt(3))
    if isinstance(shape, SmoothedExponential):
        e = shape.eta
        return math.pi * e / (2 * shape.gamma * math.sin(math.pi * e / 2))
    t, rho = shape.times, np.abs(shape.amplitudes) ** 2
    mean = simpson(t * rho, x=t)
    return math.sqrt(simpson((t - mean) ** 2 * rho, x=t))


def _spectral_variance(psi: np.ndarray, dt: float) -> float:
    k = 2 * np.pi * np.fft.fftfreq(psi.size, d=dt)
    dpsi = np.fft.ifft(1j * k * np.fft.fft(psi))
    x = np.arange(psi.size) * dt
    mean_w = simpson(np.real(np.conj(psi) * (-1j) * dpsi), x=x)
    return simpson(np.abs(dpsi) ** 2, x=x) - mean_w**2


def frequency_dispersion(spec, rtol: float = 1e-4) -> float:
    """Frequency spread; sampled profiles use a spectral derivative on their grid.

    For sampled profiles, the value is recomputed on the grid thinned by two;
    a relative change above ``rtol`` raises DivergentMoment.
    """
    shape = _as_shape(spec)
    if isinstance(shape, Gaussian):
        return 1 / (2 * shape.sigma_t)
    if isinstance(shape, SmoothedSquare):
        e, u = shape.eta, 2 / shape.eta
        if u > 350:
            inner = 2 * e
        else:
            inner = 2 * e / math.tanh(u) - 4 / math.sinh(u) ** 2
        return math.sqrt(inner) / (2 * math.sqrt(2) * e * shape.s)
    if isinstance(shape, SmoothedExponential):
        e = shape.eta
        return math.sqrt((2 - e) / (8 * e)) * shape.gamma
    fine = _spectral_variance(shape.amplitudes, shape.spacing)
    coarse = _spectral_variance(shape.amplitudes[::2], 2 * shape.spacing)
    if not (fine > 0 and np.isfinite(fine)) or abs(coarse - fine) > rtol * fine:
        raise DivergentMoment(
            f"spectral variance unsettled under refinement: {coarse!r} vs {fine!r}"
        )
    return math.sqrt(fine)


def moments(spec) -> WavepacketMoments:
    return WavepacketMoments(time_dispersion(spec), frequency_dispersion(spec))


@functools.lru_cache(maxsize=4096)
def _fourier_moments(shape, omega: float) -> tuple[float, float]:
    """(integral rho cos(omega t), integral rho sin(omega t)) for an analytic shape."""
    if isinstance(shape, (Gaussian, SmoothedSquare)):
        # even profiles: no sine moment, cosine moment is twice the half line
        return 2 * _integrate(shape, "cos", omega, half=True), 0.0
    return _integrate(shape, "cos", omega), _integrate(shape, "sin", omega)


def _sampled_moments(shape: Sampled, omega: float) -> tuple[float, float]:
    t, rho = shape.times, np.abs(shape.amplitudes) ** 2
    return simpson(rho * np.cos(omega * t), x=t), simpson(rho * np.sin(omega * t), x=t)


def fourier_moments(spec, omega: float) -> tuple[float, float]:
    shape = _as_shape(spec)
    if omega == 0:
        return 1.0, 0.0
    if isinstance(shape, Sampled):
        return _sampled_moments(shape, omega)
    return _fourier_moments(shape, float(omega))


def overlap(spec: WavepacketSpec, omega_q: float) -> complex:
    """Complex overlap <1_w|1_{w+wq}> = integral |psi(t - tau)|^2 exp(-i wq t) dt."""
    c, s = fourier_moments(spec, omega_q)
    tau = spec.tau if isinstance(spec, WavepacketSpec) else 0.0
    return complex(c, -s) * complex(math.cos(omega_q * tau), -math.sin(omega_q * tau))


def overlap_P(spec: WavepacketSpec, omega_q: float) -> float:
    """P = integral |psi(t)|^2 cos(omega_q (t + tau)) dt."""
    if omega_q < 0:
        omega_q = -omega_q
    if omega_q == 0:
        return 1.0
    c, s = fourier_moments(spec, omega_q)
    tau = spec.tau if isinstance(spec, WavepacketSpec) else 0.0
    return c * math.cos(omega_q * tau) - s * math.sin(omega_q * tau)


def overlap_deficit(spec: WavepacketSpec, omega_q: float) -> float:
    """1 - P, keeping full relative accuracy when P is within rounding of 1.

    Near P = 1 the deficit is integrated directly as
    integral |psi(t)|^2 * 2 sin^2(omega_q (t + tau) / 2) dt.
    """
    P = overlap_P(spec, omega_q)
    if P < 0.5:
        return 1.0 - P
    shape = _as_shape(spec)
    tau = spec.tau if isinstance(spec, WavepacketSpec) else 0.0
    w = abs(omega_q)
    if isinstance(shape, Sampled):
        t = shape.times
        rho = np.abs(shape.amplitudes) ** 2
        return float(simpson(2 * rho * np.sin(0.5 * w * (t + tau)) ** 2, x=t))
    rho, sin = shape._integrand(), math.sin

    def f(t):
        return 2 * rho(t) * sin(0.5 * w * (t + tau)) ** 2

    # small-frequency size of the deficit sets the absolute tolerance
    scale = 0.5 * w * w * (time_dispersion(shape) ** 2 + (mean_time(shape) + tau) ** 2)
    return _quad_sum(f, _pieces(shape), shape, epsabs=1e-13 * min(scale, 1.0), epsrel=1e-12, limit=400)


def optimal_tau(spec, omega_q: float, n_scan: int = 64, tol: float = 1e-10) -> float:
    """Launch offset in [0, 2 pi / omega_q) maximizing P.

    The Gaussian returns 0.  For the even square profile P(tau) is
    cos(omega_q tau) times the cosine moment, so the answer is 0 or
    pi / omega_q depending on the sign of that moment.  Otherwise P(tau) is
    scanned on ``n_scan`` phases, the best bracket is refined by
    golden-section search with tolerance ``tol`` in omega_q * tau, and two
    Newton steps on dP/dtau finish the job.
    """
    if not omega_q > 0:
        raise ValueError("omega_q must be positive")
    shape = _as_shape(spec)
    if isinstance(shape, Gaussian):
        return 0.0
    c, s = fourier_moments(shape, omega_q)
    if isinstance(shape, SmoothedSquare):
        return 0.0 if c >= 0 else math.pi / omega_q
    if math.hypot(c, s) < 1e-15:
        return 0.0

    def neg_p(u):  # u = omega_q * tau
        return -(c * math.cos(u) - s * math.sin(u))

    h = 2 * math.pi / n_scan
    grid = np.arange(n_scan) * h
    k = int(np.argmin([neg_p(u) for u in grid]))
    # re-centre on pi so the relative tolerance of the search acts as absolute
    shift = grid[k] - math.pi
    res = minimize_scalar(
        lambda v: neg_p(v + shift),
        bracket=(math.pi - h, math.pi, math.pi + h),
        method="golden",
        tol=tol / math.pi,
    )
    u = float(res.x + shift)
    # comparisons cannot resolve a smooth maximum below ~sqrt(machine eps);
    # polish with Newton steps on the derivative (P'' = -P, no cancellation in P')
    for _ in range(2):
        p = c * math.cos(u) - s * math.sin(u)
        u += (-c * math.sin(u) - s * math.cos(u)) / p
    return (u % (2 * math.pi)) / omega_q


def solve_param_for_dt(family, eta: float, target_dt: float) -> float:
    """Shape parameter (sigma_t, s or gamma) giving the requested time dispersion."""
    if not target_dt > 0:
        raise ValueError("target_dt must be positive")
    family = SHAPE_NAMES.get(family, family)
    if family is Gaussian:
        return float(target_dt)
    if family is SmoothedSquare:
        return target_dt * 2 * math.sqrt(3) / math.sqrt(4 + math.pi**2 * eta**2)
    if family is SmoothedExponential:
        return math.pi * eta / (2 * target_dt * math.sin(math.pi * eta / 2))
    raise ValueError(f"unknown wavepacket family {family!r}")


def make_shape(family, target_dt: float, eta: float = DEFAULT_ETA) -> Shape:
    """Build a parametric shape with time dispersion ``target_dt``."""
    family = SHAPE_NAMES.get(family, family)
    param = solve_param_for_dt(family, eta, target_dt)
    if family is Gaussian:
        return Gaussian(param)
    return family(param, eta)


def sample(spec, n_points: int = 2**14, window: tuple[float, float] | None = None) -> Sampled:
    """Sample a wavepacket on a uniform grid across its window."""
    lo, hi = window if window is not None else _as_shape(spec).window()
    t = np.linspace(lo, hi, n_points)
    return Sampled(t, amplitude(_as_shape(spec), t))
