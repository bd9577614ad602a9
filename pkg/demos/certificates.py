"""
Existence certificates
======================

The sufficient conditions for a solution are checked twice: once with the
literal estimate, once with the sharp Green's constants and a bound that
also controls the derivative.
"""

from dataclasses import replace

import numpy as np

from rocketbvp import load_scenario
from rocketbvp.scenario_io import bundled_scenario
from rocketbvp.solver import ball_check, certificate


def fmt(R):
    return "none" if R is None else f"{R:.2f}"


config, _ = load_scenario(bundled_scenario("certified_drag"))
for mode in ("paper", "rigorous"):
    c = certificate(config, mode)
    print(f"{mode:8s} G2={c.G2:.3e} R={fmt(c.radius_R)} verdict={c.verdict_overall}")

###############################################################################
# Push random members of the rigorous ball through the operator.

R = certificate(config, "rigorous").radius_R
rep = ball_check(R, config, n_samples=200)
print(f"R={R:.2f}: worst |Sz| = {rep.worst_norm:.2f}, violations {rep.n_violations}")

###############################################################################
# More drag eventually breaks the certificate even though Picard may still
# converge.

for A in np.linspace(0.0, 0.02, 6):
    c = certificate(replace(config, A=float(A)), "rigorous")
    print(f"A={A:.3f}  R={fmt(c.radius_R)}  certified={c.verdict_overall}")
