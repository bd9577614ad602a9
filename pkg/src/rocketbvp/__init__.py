"""Two-point boundary value problems for rocket ascent with drag.

A rocket of decreasing mass must climb from ``x0`` at ``t0`` to ``x1`` at
``t1`` under gravity and exponential-atmosphere drag. The package solves
this by damped Picard iteration on a Green's-function integral operator,
evaluates sufficient conditions for existence, and cross-checks results
against RK4 shooting and a finite-difference Newton solver.

Modules:
    model: mass/exhaust profiles, scenario config, reduced coefficients.
    green: the Dirichlet Green's function and its norm constants.
    operator: C^1 grid functions and the discrete integral operator.
    solver: Picard iteration, existence certificates, ball checks.
    oracle: shooting and finite-difference reference solvers.
    scenario_io: JSON scenario files and trajectory CSVs.
    cli: the ``rocketbvp`` command.
"""

from .errors import (
    DivergenceError,
    DomainError,
    IntegrationError,
    InvalidScenarioError,
    NoBracketError,
    NonConvergenceError,
    OracleFailureError,
    RocketBVPError,
    ShapeError,
)
from .green import Interval, green_constants, green_dt, green_paper
from .grid import GridFunction
from .model import (
    ChordShift,
    ExhaustProfile,
    MassProfile,
    ScenarioConfig,
    alpha_beta_at,
    chord_shift,
    full_rhs,
    mass_eval,
    nonlinearity_F,
    tsiolkovsky_trajectory,
    tsiolkovsky_velocity,
)
from .operator import Coefficients, apply_S, build_coefficients, c1_norm, ode_residual
from .oracle import Trajectory, compare, fd_newton_solve, ivp_integrate, shooting_solve
from .scenario_io import bundled_scenario, load_scenario
from .solver import ExistenceCertificate, SolveReport, ball_check, certificate, picard_solve

__version__ = "0.1.0"

__all__ = [
    "ChordShift", "Coefficients", "DivergenceError", "DomainError", "ExhaustProfile",
    "ExistenceCertificate", "GridFunction", "IntegrationError", "Interval", "InvalidScenarioError",
    "MassProfile", "NoBracketError", "NonConvergenceError", "OracleFailureError", "RocketBVPError",
    "ScenarioConfig", "ShapeError", "SolveReport", "Trajectory", "alpha_beta_at", "apply_S",
    "ball_check", "build_coefficients", "c1_norm", "certificate", "chord_shift", "compare",
    "fd_newton_solve", "full_rhs", "green_constants", "green_dt", "green_paper", "ivp_integrate",
    "bundled_scenario", "load_scenario", "mass_eval", "nonlinearity_F", "ode_residual", "picard_solve",
    "shooting_solve", "tsiolkovsky_trajectory", "tsiolkovsky_velocity",
]
