"""Rocket physics: mass and exhaust schedules, atmosphere, and the reduced BVP.

The altitude ``x(t)`` of a variable-mass rocket obeys

    m x'' = c m' - m g - (A C_D rho0 / 2) x'^2 exp(-x / H),
    x(t0) = x0,  x(t1) = x1.

Subtracting the chord ``y(t) = a (t - t0) + x0`` with ``a = (x1 - x0)/(t1 - t0)``
gives ``z = x - y`` with homogeneous Dirichlet data and

    z'' = alpha(t) (z' + a)^2 exp(-z / H) + beta(t),

where ``alpha = -A C_D rho0 exp(-y/H) / (2 m)`` and ``beta = c m'/m - g``.

Time-dependent inputs with jumps (burn start, burnout, exhaust breakpoints)
accept a ``side`` argument: ``+1`` selects the right limit and ``-1`` the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidScenarioError

__all__ = [
    "MassProfile",
    "ExhaustProfile",
    "ScenarioConfig",
    "ChordShift",
    "chord_shift",
    "mass_eval",
    "exhaust_eval",
    "alpha_beta_at",
    "sample_alpha_beta",
    "nonlinearity_F",
    "tsiolkovsky_velocity",
    "tsiolkovsky_trajectory",
    "full_rhs",
    "air_density",
]


@dataclass(frozen=True)
class MassProfile:
    """Linear propellant burn with a burnout plateau.

    Mass is ``m_dry + propellant`` until ``t_start``, then decreases at
    ``burn_rate`` kg/s until ``t_burnout`` and stays constant afterwards.
    ``t_burnout`` defaults to the instant the propellant runs out.
    """

    m_dry: float
    propellant: float = 0.0
    burn_rate: float = 0.0
    t_start: float = 0.0
    t_burnout: float | None = None

    def __post_init__(self):
        if not self.m_dry > 0:
            raise InvalidScenarioError(f"dry mass must be positive, got {self.m_dry}")
        if self.propellant < 0 or self.burn_rate < 0:
            raise InvalidScenarioError("propellant and burn rate must be non-negative")
        if self.burn_rate == 0:
            tb = self.t_start if self.t_burnout is None else self.t_burnout
        elif self.t_burnout is None:
            tb = self.t_start + self.propellant / self.burn_rate
        else:
            tb = self.t_burnout
            if self.burn_rate * (tb - self.t_start) > self.propellant * (1 + 1e-12):
                raise InvalidScenarioError(
                    "burn schedule exhausts the propellant before burnout: "
                    f"{self.burn_rate} kg/s over {tb - self.t_start} s > {self.propellant} kg"
                )
        if tb < self.t_start:
            raise InvalidScenarioError("burnout precedes ignition")
        object.__setattr__(self, "t_burnout", float(tb))

    @property
    def burning(self) -> bool:
        return self.burn_rate > 0 and self.t_burnout > self.t_start

    @property
    def initial_mass(self) -> float:
        return self.m_dry + self.propellant

    def jump_times(self) -> list[float]:
        """Instants where the mass rate is discontinuous."""
        return [self.t_start, self.t_burnout] if self.burning else []


@dataclass(frozen=True)
class ExhaustProfile:
    """Relative exhaust velocity, constant or piecewise constant.

    ``values[k]`` holds on ``[breakpoints[k-1], breakpoints[k])``; with no
    breakpoints the single value is used everywhere. Negative values mean
    gas leaves backwards, which is what drives the rocket up.
    """

    values: tuple[float, ...] = (-3000.0,)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        values = tuple(float(v) for v in np.atleast_1d(self.values))
        breakpoints = tuple(float(b) for b in np.atleast_1d(self.breakpoints))
        if len(values) != len(breakpoints) + 1:
            raise InvalidScenarioError("exhaust schedule needs one more value than breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise InvalidScenarioError("exhaust breakpoints must be strictly increasing")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "breakpoints", breakpoints)

    @classmethod
    def constant(cls, c: float) -> "ExhaustProfile":
        return cls(values=(c,))

    @property
    def is_constant(self) -> bool:
        return len(set(self.values)) == 1


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical and numerical statement of one rocket BVP (SI units)."""

    t0: float
    t1: float
    x0: float
    x1: float
    A: float
    C_D: float
    mass: MassProfile
    exhaust: ExhaustProfile = field(default_factory=ExhaustProfile)
    g: float = 9.81
    rho0: float = 1.225
    H: float = 8000.0
    n_grid: int = 201
    tol: float = 1e-8
    max_iter: int = 500
    damping: float = 0.5

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise InvalidScenarioError(f"need t1 > t0, got [{self.t0}, {self.t1}]")
        if not self.x1 > self.x0:
            raise InvalidScenarioError(f"only ascending chords are supported, got x0={self.x0}, x1={self.x1}")
        if not self.H > 0:
            raise InvalidScenarioError("scale height H must be positive")
        for name in ("rho0", "A", "C_D", "g"):
            if getattr(self, name) < 0:
                raise InvalidScenarioError(f"{name} must be non-negative")
        if int(self.n_grid) != self.n_grid or self.n_grid < 3:
            raise InvalidScenarioError("n_grid must be an integer >= 3")
        if not 0 < self.damping <= 1:
            raise InvalidScenarioError("damping must lie in (0, 1]")
        if not self.tol > 0:
            raise InvalidScenarioError("tol must be positive")
        if self.max_iter < 1:
            raise InvalidScenarioError("max_iter must be at least 1")
        self._check_exhaust_sign()
        self._check_grid_alignment()

    def _check_exhaust_sign(self):
        prof = self.mass
        if not prof.burning:
            return
        lo = max(prof.t_start, self.t0)
        hi = min(prof.t_burnout, self.t1)
        if hi <= lo:
            return
        edges = [-math.inf, *self.exhaust.breakpoints, math.inf]
        for c, (e0, e1) in zip(self.exhaust.values, zip(edges, edges[1:])):
            if e1 > lo and e0 < hi and not c < 0:
                raise InvalidScenarioError(
                    f"exhaust velocity must be negative while burning, got c={c} on [{e0}, {e1})"
                )

    def _check_grid_alignment(self):
        # Jumps in m' or c must sit on grid nodes so quadrature and RK4 steps never straddle them.
        h = (self.t1 - self.t0) / (self.n_grid - 1)
        for tj in (*self.mass.jump_times(), *self.exhaust.breakpoints):
            if self.t0 < tj < self.t1:
                k = (tj - self.t0) / h
                if abs(k - round(k)) > 1e-9 * max(1.0, k):
                    raise InvalidScenarioError(
                        f"discontinuity at t={tj} is not on a grid node (n_grid={self.n_grid}, h={h})"
                    )

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, int(self.n_grid))

    @property
    def drag_factor(self) -> float:
        """``A C_D rho0``; zero means the problem is linear."""
        return self.A * self.C_D * self.rho0

    @property
    def jump_times(self) -> list[float]:
        return [tj for tj in (*self.mass.jump_times(), *self.exhaust.breakpoints) if self.t0 < tj < self.t1]


@dataclass(frozen=True)
class ChordShift:
    """Straight line through ``(t0, x0)`` and ``(t1, x1)``."""

    a: float
    t0: float
    x0: float

    def __call__(self, t):
        return self.a * (np.asarray(t, dtype=float) - self.t0) + self.x0


def chord_shift(config: ScenarioConfig) -> ChordShift:
    dt = config.t1 - config.t0
    if dt == 0:
        raise InvalidScenarioError("degenerate time interval t1 == t0")
    return ChordShift(a=(config.x1 - config.x0) / dt, t0=config.t0, x0=config.x0)


def mass_eval(profile: MassProfile, t, side: int = 1):
    """Return ``(m, mdot)`` at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    ts, tb, r = profile.t_start, profile.t_burnout, profile.burn_rate
    burned = r * np.clip(t - ts, 0.0, tb - ts)
    m = profile.m_dry + profile.propellant - burned
    if profile.burning:
        on = (t > ts) & (t < tb)
        if side > 0:
            on |= t == ts
        else:
            on |= t == tb
        mdot = np.where(on, -r, 0.0)
    else:
        mdot = np.zeros_like(t)
    if m.ndim == 0:
        return float(m), float(mdot)
    return m, mdot


def exhaust_eval(profile: ExhaustProfile, t, side: int = 1):
    t = np.asarray(t, dtype=float)
    vals = np.asarray(profile.values)
    if not profile.breakpoints:
        c = np.full_like(t, vals[0])
    else:
        idx = np.searchsorted(profile.breakpoints, t, side="right" if side > 0 else "left")
        c = vals[idx]
    return float(c) if c.ndim == 0 else c


def air_density(config: ScenarioConfig, x):
    return config.rho0 * np.exp(-np.asarray(x, dtype=float) / config.H)


def alpha_beta_at(config: ScenarioConfig, t, side: int = 1):
    """Coefficients of the reduced equation at time(s) ``t``."""
    y = chord_shift(config)(t)
    m, mdot = mass_eval(config.mass, t, side)
    c = exhaust_eval(config.exhaust, t, side)
    alpha = -config.drag_factor * np.exp(-y / config.H) / (2.0 * m)
    beta = c * mdot / m - config.g
    if np.ndim(alpha) == 0:
        return float(alpha), float(beta)
    return alpha, beta


def sample_alpha_beta(config: ScenarioConfig, t: np.ndarray):
    """Nodal ``alpha`` and ``beta``; at a jump node beta is the mean of both limits.

    The mean is what composite trapezoid weights produce when each
    subinterval uses its own one-sided limit, so quadrature and residual
    checks stay consistent.
    """
    t = np.asarray(t, dtype=float)
    alpha, beta_r = alpha_beta_at(config, t, side=1)
    _, beta_l = alpha_beta_at(config, t, side=-1)
    beta = 0.5 * (np.asarray(beta_l) + np.asarray(beta_r))
    # the end nodes only see the cell inside [t0, t1]
    beta = np.where(t <= config.t0, beta_r, np.where(t >= config.t1, beta_l, beta))
    return np.asarray(alpha), beta


def nonlinearity_F(alpha, a, H, z, p):
    """Drag term ``alpha (p + a)^2 exp(-z/H)`` with ``p`` standing in for ``z'``."""
    return alpha * (p + a) ** 2 * np.exp(-np.asarray(z, dtype=float) / H)


def tsiolkovsky_velocity(v_init, c, m_init, m, g=0.0, dt=0.0):
    """Velocity after burning from ``m_init`` down to ``m`` in gravity ``g``."""
    if np.any(np.asarray(m) <= 0) or np.any(np.asarray(m_init) <= 0):
        raise DomainError("masses must be positive")
    return v_init - g * dt + c * np.log(np.asarray(m, dtype=float) / m_init)


def full_rhs(t, x, v, config: ScenarioConfig, side: int = 1):
    """Acceleration of the unshifted problem."""
    m, mdot = mass_eval(config.mass, t, side)
    c = exhaust_eval(config.exhaust, t, side)
    drag = config.drag_factor * v**2 * np.exp(-x / config.H) / (2.0 * m)
    return c * mdot / m - config.g - drag


def _log_mass_integral(profile: MassProfile, m_ref: float, t_from: float, t: np.ndarray) -> np.ndarray:
    """``int_{t_from}^{t} ln(m(s)/m_ref) ds`` for the piecewise-linear mass."""

    def antiderivative(tt):
        # Exact primitive of ln(m(s)/m_ref), continuous across ignition and burnout.
        ts, tb, r = profile.t_start, profile.t_burnout, profile.burn_rate
        m_full = profile.initial_mass
        pre = np.minimum(tt, ts) - ts
        out = pre * math.log(m_full / m_ref)
        if profile.burning:
            u = np.clip(tt, ts, tb)
            mu = m_full - r * (u - ts)
            out = out + ((m_full * math.log(m_full / m_ref) - m_full) - (mu * np.log(mu / m_ref) - mu)) / r
            m_end = m_full - r * (tb - ts)
            out = out + (np.maximum(tt, tb) - tb) * math.log(m_end / m_ref)
        else:
            out = out + (np.maximum(tt, ts) - ts) * math.log(m_full / m_ref)
        return out

    return antiderivative(np.asarray(t, dtype=float)) - antiderivative(np.asarray(t_from, dtype=float))


def tsiolkovsky_trajectory(config: ScenarioConfig, t: Sequence[float] | np.ndarray):
    """Closed-form ``(x, v, v_init)`` of the drag-free BVP with constant exhaust velocity.

    Velocity follows the Tsiolkovskii law in gravity; the initial velocity is
    fixed by requiring ``x(t1) = x1``.
    """
    if config.drag_factor != 0:
        raise DomainError("closed form exists only without drag")
    if not config.exhaust.is_constant:
        raise DomainError("closed form needs a constant exhaust velocity")
    c = config.exhaust.values[0]
    t = np.asarray(t, dtype=float)
    m_ref, _ = mass_eval(config.mass, config.t0)
    T = config.t1 - config.t0
    log_int_T = float(_log_mass_integral(config.mass, m_ref, config.t0, np.asarray(config.t1)))
    v_init = (config.x1 - config.x0 + 0.5 * config.g * T**2 - c * log_int_T) / T
    tau = t - config.t0
    m, _ = mass_eval(config.mass, t)
    v = tsiolkovsky_velocity(v_init, c, m_ref, m, config.g, tau)
    x = config.x0 + v_init * tau - 0.5 * config.g * tau**2 + c * _log_mass_integral(config.mass, m_ref, config.t0, t)
    return x, v, v_init
