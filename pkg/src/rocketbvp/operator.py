"""Discrete integral operator on C^1 grid functions.

A candidate ``z`` is stored as nodal values and nodal derivatives on a
uniform grid. The operator

    (S z)(t)  = -int G(t, s) F(s, z, z') ds + b(t)
    (S z)'(t) = -int dG/dt(t, s) F(s, z, z') ds + b'(t)

with ``b = -int G beta`` is evaluated by composite trapezoid quadrature.
The grid nodes coincide with the kernel's kink, so each subinterval sees a
smooth integrand and the rule is second order. Fixed points of ``S``
satisfy ``z'' = F + beta`` with ``z(t0) = z(t1) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ShapeError
from .grid import GridFunction
from .green import Interval, green_dt, green_paper
from .model import ScenarioConfig, chord_shift, nonlinearity_F, sample_alpha_beta

__all__ = [
    "GridFunction",
    "Coefficients",
    "quadrature_matrices",
    "build_coefficients",
    "apply_S",
    "c1_norm",
    "ode_residual",
    "ode_residual_profile",
]


@dataclass(frozen=True, eq=False)
class Coefficients:
    grid: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    b: np.ndarray
    bprime: np.ndarray
    a: float


@lru_cache(maxsize=16)
def quadrature_matrices(t0: float, t1: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid matrices ``(KG, KD)`` with ``(KG f)_i ~ int G(t_i, s) f(s) ds``.

    ``KD`` does the same for ``dG/dt``; every subinterval evaluates the
    derivative kernel with its own one-sided limit at the diagonal.
    """
    iv = Interval(t0, t1)
    t = np.linspace(t0, t1, n)
    h = (t1 - t0) / (n - 1)
    T, S = t[:, None], t[None, :]
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    KG = green_paper(T, S, iv) * w[None, :]
    j = np.arange(n)
    # left cell [s_{j-1}, s_j] exists for j > 0, right cell [s_j, s_{j+1}] for j < n - 1
    left = 0.5 * h * (j > 0)[None, :] * green_dt(T, S, iv, side=-1)
    right = 0.5 * h * (j < n - 1)[None, :] * green_dt(T, S, iv, side=1)
    KD = left + right
    KG.setflags(write=False)
    KD.setflags(write=False)
    return KG, KD


def _matrices_for(config: ScenarioConfig):
    return quadrature_matrices(float(config.t0), float(config.t1), int(config.n_grid))


def build_coefficients(config: ScenarioConfig) -> Coefficients:
    t = config.grid
    alpha, beta = sample_alpha_beta(config, t)
    KG, KD = _matrices_for(config)
    b = -KG @ beta
    b[0] = b[-1] = 0.0
    bprime = -KD @ beta
    return Coefficients(t, alpha, beta, b, bprime, chord_shift(config).a)


def apply_S(z: GridFunction, coeffs: Coefficients, config: ScenarioConfig) -> GridFunction:
    if z.grid.shape != coeffs.grid.shape or not np.array_equal(z.grid, coeffs.grid):
        raise ShapeError("candidate and coefficients live on different grids")
    KG, KD = _matrices_for(config)
    f = nonlinearity_F(coeffs.alpha, coeffs.a, config.H, z.values, z.derivs)
    values = coeffs.b - KG @ f
    values[0] = values[-1] = 0.0
    derivs = coeffs.bprime - KD @ f
    return GridFunction(z.grid, values, derivs)


def c1_norm(z: GridFunction) -> float:
    """``max(sup|z|, sup|z'|)`` over the nodes."""
    return float(max(np.max(np.abs(z.values)), np.max(np.abs(z.derivs))))


def ode_residual_profile(z: GridFunction, config: ScenarioConfig) -> np.ndarray:
    """Nodewise ``|z''_fd - F - beta|``; boundary rows hold the (zero) Dirichlet residual.

    The second derivative comes from central differences of the values,
    independent of the carried derivatives.
    """
    n = len(z.grid)
    if n < 5:
        raise ShapeError("residual needs at least 5 nodes")
    h = z.grid[1] - z.grid[0]
    alpha, beta = sample_alpha_beta(config, z.grid)
    a = chord_shift(config).a
    zpp = (z.values[:-2] - 2 * z.values[1:-1] + z.values[2:]) / h**2
    f = nonlinearity_F(alpha[1:-1], a, config.H, z.values[1:-1], z.derivs[1:-1])
    res = np.zeros(n)
    res[1:-1] = np.abs(zpp - f - beta[1:-1])
    res[0], res[-1] = abs(z.values[0]), abs(z.values[-1])
    return res


def ode_residual(z: GridFunction, config: ScenarioConfig) -> float:
    return float(np.max(ode_residual_profile(z, config)[1:-1]))
