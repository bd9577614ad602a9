"""
Drag, three ways
================

Solve a burn through the lower atmosphere with the integral operator, then
repeat it by RK4 shooting and by Newton on finite differences.
"""

import numpy as np

from rocketbvp import load_scenario, picard_solve
from rocketbvp.oracle import compare, fd_newton_solve, shooting_solve, trajectory_to_grid
from rocketbvp.scenario_io import bundled_scenario

config, label = load_scenario(bundled_scenario("uncertified_convergent"))
z, report = picard_solve(config)
print(f"{label}: {report.status} in {report.iterations} iterations (damping {report.damping})")

traj = shooting_solve(config, reference=z)
z_shoot = trajectory_to_grid(traj, config)
z_fd = fd_newton_solve(config)
print(f"shooting launch speed {traj.v_init:.4f} m/s")

###############################################################################
# Shooting is independent of the grid operator; the finite-difference
# solution coincides with Picard because the trapezoid Green matrix is the
# exact inverse of the 3-point Laplacian.

scale = np.max(np.abs(z.values))
for name, other in (("shooting", z_shoot), ("fd-newton", z_fd)):
    d = compare(z, other)
    print(f"picard vs {name:9s}: sup {d['sup_values']:.3e} m ({d['sup_values'] / scale:.1e} of max|z|)")
