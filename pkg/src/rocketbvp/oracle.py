"""Independent solvers used to cross-check the integral-operator path.

* RK4 shooting on the unshifted problem ``x'' = f(t, x, x')``.
* Newton's method on the central-difference discretisation of the shifted
  problem, with a tridiagonal Jacobian.

Neither touches the Green's function or the quadrature operator, so
agreement between the three is real evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import IntegrationError, NoBracketError, OracleFailureError
from .grid import GridFunction, check_same_grid
from .model import ScenarioConfig, chord_shift, full_rhs, nonlinearity_F, sample_alpha_beta

__all__ = [
    "Trajectory",
    "ivp_integrate",
    "shooting_roots",
    "shooting_solve",
    "fd_newton_solve",
    "compare",
    "trajectory_to_grid",
    "grid_to_trajectory",
]


@dataclass(frozen=True, eq=False)
class Trajectory:
    nodes: np.ndarray
    x: np.ndarray
    v: np.ndarray
    v_init: float = math.nan
    roots: tuple[float, ...] = ()


def ivp_integrate(config: ScenarioConfig, v_init: float) -> Trajectory:
    """Classical RK4 from ``(x0, v_init)`` across the scenario grid.

    Jumps in the mass rate sit on nodes, so the last stage of each step
    takes the left limit and the first stage the right limit.
    """
    t = config.grid
    h = t[1] - t[0]
    n = len(t)
    x = np.empty(n)
    v = np.empty(n)
    x[0], v[0] = config.x0, v_init

    def acc(tt, xx, vv, side):
        return full_rhs(tt, xx, vv, config, side)

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n - 1):
            ti, xi, vi = t[i], x[i], v[i]
            k1x, k1v = vi, acc(ti, xi, vi, 1)
            k2x, k2v = vi + 0.5 * h * k1v, acc(ti + 0.5 * h, xi + 0.5 * h * k1x, vi + 0.5 * h * k1v, 1)
            k3x, k3v = vi + 0.5 * h * k2v, acc(ti + 0.5 * h, xi + 0.5 * h * k2x, vi + 0.5 * h * k2v, 1)
            k4x, k4v = vi + h * k3v, acc(t[i + 1], xi + h * k3x, vi + h * k3v, -1)
            x[i + 1] = xi + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
            v[i + 1] = vi + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
            if not (math.isfinite(x[i + 1]) and math.isfinite(v[i + 1])):
                raise IntegrationError(f"state blew up near t={t[i + 1]:.6g}", blowup_time=float(t[i + 1]))
    return Trajectory(t, x, v, v_init=float(v_init))


def _miss(config: ScenarioConfig, v_init: float) -> float:
    try:
        return float(ivp_integrate(config, v_init).x[-1] - config.x1)
    except IntegrationError:
        # blow-up comes from plunging into ever denser air: count it as falling short
        return -math.inf


def _refine(config, lo, hi, f_lo, f_hi, tol):
    """Bisection down to a narrow bracket, then secant steps inside it."""
    for _ in range(200):
        if hi - lo <= 1e-7 * (1.0 + abs(lo) + abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        f_mid = _miss(config, mid)
        if abs(f_mid) <= tol:
            return mid
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    a, fa, b, fb = lo, f_lo, hi, f_hi
    for _ in range(50):
        if not (math.isfinite(fa) and math.isfinite(fb)) or fb == fa:
            break
        c = b - fb * (b - a) / (fb - fa)
        if not lo <= c <= hi:
            break
        fc = _miss(config, c)
        if abs(fc) <= tol:
            return c
        a, fa, b, fb = b, fb, c, fc
    best = min(((abs(f_lo), lo), (abs(f_hi), hi), (abs(fb), b)))
    if best[0] <= tol:
        return best[1]
    raise OracleFailureError(f"shooting refinement stalled with miss {best[0]:.3e} m")


def shooting_roots(
    config: ScenarioConfig,
    v_range: tuple[float, float] | None = None,
    n_scan: int = 64,
) -> list[float]:
    """All initial velocities found that hit ``x1`` at ``t1``.

    The default scan range is ``a +- 10 g (t1 - t0)``.
    """
    a = chord_shift(config).a
    if v_range is None:
        span = 10 * config.g * (config.t1 - config.t0)
        span = span if span > 0 else 10 * max(abs(a), 1.0)
        v_range = (a - span, a + span)
    tol = 1e-9 * max(1.0, abs(config.x1))
    vs = np.linspace(v_range[0], v_range[1], n_scan + 1)
    misses = [_miss(config, v) for v in vs]
    roots = []
    for k in range(n_scan):
        f0, f1 = misses[k], misses[k + 1]
        if abs(f0) <= tol:
            roots.append(float(vs[k]))
        elif f0 * f1 < 0 or (math.isinf(f0) and f1 > 0):
            roots.append(float(_refine(config, vs[k], vs[k + 1], f0, f1, tol)))
    if abs(misses[-1]) <= tol:
        roots.append(float(vs[-1]))
    if not roots:
        raise NoBracketError(f"miss function keeps one sign on v_init in [{v_range[0]:.4g}, {v_range[1]:.4g}]")
    return roots


def shooting_solve(
    config: ScenarioConfig,
    reference: GridFunction | None = None,
    v_range: tuple[float, float] | None = None,
) -> Trajectory:
    """Shooting solution; with several roots, the one nearest ``reference`` wins."""
    roots = shooting_roots(config, v_range)
    trajs = [ivp_integrate(config, v) for v in roots]
    pick = trajs[0]
    if reference is not None and len(trajs) > 1:
        y = chord_shift(config)(config.grid)
        pick = min(trajs, key=lambda tr: np.max(np.abs(tr.x - y - reference.values)))
    return Trajectory(pick.nodes, pick.x, pick.v, v_init=pick.v_init, roots=tuple(roots))


def _fd_derivs(z: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(z)
    d[1:-1] = (z[2:] - z[:-2]) / (2 * h)
    d[0] = (-3 * z[0] + 4 * z[1] - z[2]) / (2 * h)
    d[-1] = (3 * z[-1] - 4 * z[-2] + z[-3]) / (2 * h)
    return d


def fd_newton_solve(config: ScenarioConfig, max_steps: int = 50) -> GridFunction:
    """Newton's method on the 3-point discretisation of the shifted BVP."""
    if config.n_grid < 5:
        raise OracleFailureError("finite differences need n_grid >= 5")
    t = config.grid
    h = t[1] - t[0]
    a = chord_shift(config).a
    H = config.H
    alpha, beta = sample_alpha_beta(config, t)
    alpha, beta = alpha[1:-1], beta[1:-1]
    z = np.zeros_like(t)
    for _ in range(max_steps):
        zi = z[1:-1]
        p = (z[2:] - z[:-2]) / (2 * h)
        F = nonlinearity_F(alpha, a, H, zi, p)
        res = (z[:-2] - 2 * zi + z[2:]) / h**2 - F - beta
        dF_dz = -F / H
        dF_dp = 2 * alpha * (p + a) * np.exp(-zi / H)
        ab = np.zeros((3, len(zi)))
        ab[0, 1:] = (1 / h**2 - dF_dp / (2 * h))[:-1]  # d res_i / d z_{i+1}
        ab[1, :] = -2 / h**2 - dF_dz
        ab[2, :-1] = (1 / h**2 + dF_dp / (2 * h))[1:]  # d res_i / d z_{i-1}
        step = solve_banded((1, 1), ab, -res)
        z[1:-1] += step
        if not np.all(np.isfinite(z)):
            break
        if np.max(np.abs(step)) <= 1e-10 * (1 + np.max(np.abs(z))):
            return GridFunction(t, z.copy(), _fd_derivs(z, h))
    raise OracleFailureError(f"finite-difference Newton did not converge in {max_steps} steps")


def compare(zA: GridFunction, zB: GridFunction) -> dict:
    check_same_grid(zA, zB)
    dv = zA.values - zB.values
    dd = zA.derivs - zB.derivs
    return {
        "sup_values": float(np.max(np.abs(dv))),
        "rms_values": float(np.sqrt(np.mean(dv**2))),
        "sup_derivs": float(np.max(np.abs(dd))),
        "rms_derivs": float(np.sqrt(np.mean(dd**2))),
    }


def trajectory_to_grid(traj: Trajectory, config: ScenarioConfig) -> GridFunction:
    shift = chord_shift(config)
    return GridFunction(traj.nodes, traj.x - shift(traj.nodes), traj.v - shift.a)


def grid_to_trajectory(z: GridFunction, config: ScenarioConfig) -> Trajectory:
    shift = chord_shift(config)
    return Trajectory(z.grid, z.values + shift(z.grid), z.derivs + shift.a)
