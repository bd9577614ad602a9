"""
The drag-free limit
===================

With no drag the operator is constant, so one Picard step lands on the
solution and the velocity must match Tsiolkovsky's formula with gravity.
"""

from dataclasses import replace

import numpy as np

from rocketbvp import load_scenario, picard_solve
from rocketbvp.model import chord_shift, tsiolkovsky_trajectory
from rocketbvp.scenario_io import bundled_scenario

config, label = load_scenario(bundled_scenario("linear"))
z, report = picard_solve(config)
print(f"{label}: {report.status} after {report.iterations} iterations")

###############################################################################
# Reconstruct velocity from the shifted unknown and compare.

v = z.derivs + chord_shift(config).a
x_exact, v_exact, v_init = tsiolkovsky_trajectory(config, config.grid)
print(f"launch speed {v_init:.3f} m/s, burnout speed {v_exact[-1]:.3f} m/s")
print(f"worst relative velocity error {np.max(np.abs(v - v_exact) / np.abs(v_exact)):.2e}")

###############################################################################
# Halving the step quarters the position error.

for n in (51, 101, 201, 401):
    cfg = replace(config, n_grid=n)
    zn, _ = picard_solve(cfg)
    xe, _, _ = tsiolkovsky_trajectory(cfg, cfg.grid)
    err = np.max(np.abs(zn.values + chord_shift(cfg)(cfg.grid) - xe))
    print(f"n={n:4d}  max |x - x_exact| = {err:.3e} m")
