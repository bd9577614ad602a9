import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rocketbvp.errors import DivergenceError, NonConvergenceError
from rocketbvp.model import MassProfile, tsiolkovsky_trajectory, chord_shift
from rocketbvp.operator import apply_S, build_coefficients, c1_norm, ode_residual
from rocketbvp.solver import (
    aest_interval,
    ball_check,
    best_bound,
    certificate,
    certificate_from_values,
    discriminant,
    paper_radius,
    picard_solve,
    rigorous_radius,
)

from conftest import make


# --- certificate arithmetic -------------------------------------------------


def test_aest_interval_a4():
    lo, hi = aest_interval(4.0)
    assert lo == pytest.approx(1 / 12, rel=1e-15)
    assert hi == pytest.approx(1 / 4, rel=1e-15)
    assert aest_interval(1.0) is None


@given(a=st.floats(1.0001, 1e6))
def test_aest_endpoints_are_roots(a):
    lo, hi = aest_interval(a)
    for r in (lo, hi):
        q = 4 * a * (a - 1) * r**2 - 4 * a * r + 1
        # scale of the terms being cancelled
        assert abs(q) <= 1e-12 * (4 * a * (a - 1) * r**2 + 4 * a * r + 1)


def test_best_bound_example():
    assert best_bound(4.0, 0.05) == pytest.approx(1.6, rel=1e-14)


def test_radius_example_and_substitution():
    assert discriminant(4.0, 0.05, 1.0) == pytest.approx(0.12, rel=1e-13)
    R = paper_radius(4.0, 0.05, 1.0)
    assert R == pytest.approx((0.6 - math.sqrt(0.12)) / 0.1, rel=1e-13)
    assert R == pytest.approx(2.5359, abs=5e-5)
    assert 0.05 * R**2 + (2 * 4 * 0.05 - 1) * R + (0.05 * 4 + 1.0) <= 1e-9


@given(a=st.floats(1.01, 1e3), frac=st.floats(0.01, 0.99), bfrac=st.floats(0.0, 0.99))
def test_paper_certificate_root_property(a, frac, bfrac):
    lo, _ = aest_interval(a)
    G2 = frac * lo
    b = bfrac * best_bound(a, G2)
    cert = certificate_from_values(a, G2, b, "paper")
    assert cert.verdict_overall
    R = cert.radius_R
    assert R > 0
    q = G2 * R**2 + (2 * a * G2 - 1) * R + (G2 * a + b)
    assert q <= 1e-9 * max(1.0, R, b)


def test_certificate_example_paper_mode():
    cert = certificate_from_values(4.0, 0.05, 1.0, "paper")
    assert cert.verdict_aest and cert.verdict_best and cert.verdict_overall
    assert cert.best_bound == pytest.approx(1.6)
    assert cert.delta == pytest.approx(0.12)
    assert cert.radius_R == pytest.approx(2.5358983848622454, rel=1e-12)


def test_upper_branch_has_no_ball():
    # G2 above (a + sqrt a)/(2a(a-1)) satisfies the interval test but no positive root exists
    cert = certificate_from_values(4.0, 1.0, 0.0, "paper")
    assert cert.verdict_aest
    assert not cert.verdict_overall and cert.radius_R is None
    assert any("upper" in n for n in cert.notes)


def test_a_at_most_one():
    cert = certificate_from_values(0.5, 0.01, 1.0, "paper")
    assert not cert.verdict_overall
    assert "a ≤ 1" in cert.notes[0]


def test_linear_case_unconditional():
    cert = certificate_from_values(0.5, 0.0, 3.0, "rigorous", sup_bprime=4.0)
    assert cert.linear and cert.verdict_overall and cert.radius_R == 4.0


@given(a=st.floats(1.5, 500), G2=st.floats(1e-9, 1e-2), b=st.floats(0, 1e3), H=st.floats(1e3, 1e4))
def test_rigorous_radius_is_feasible_and_tight(a, G2, b, H):
    R = rigorous_radius(a, G2, b, H)
    if R is None:
        # no R on a fine scan either
        Rs = np.geomspace(1e-6, 1e7, 4000)
        with np.errstate(over="ignore"):
            assert np.all(Rs - G2 * (Rs + a) ** 2 * np.exp(np.minimum(Rs / H, 700)) - b < 1e-9 * (1 + Rs))
        return
    assert G2 * (R + a) ** 2 * math.exp(R / H) + b <= R
    Rm = R * (1 - 1e-9)
    assert G2 * (Rm + a) ** 2 * math.exp(Rm / H) + b > Rm - 1e-12 * R


# --- certificates on scenarios ----------------------------------------------


def test_certified_scenario(certified_cfg):
    for mode in ("paper", "rigorous"):
        cert = certificate(certified_cfg, mode)
        assert cert.verdict_overall and cert.radius_R > 0
    assert certificate(certified_cfg, "rigorous").G2 > 0


def test_uncertified_scenario(desk_cfg):
    assert not certificate(desk_cfg, "paper").verdict_overall
    assert not certificate(desk_cfg, "rigorous").verdict_overall


def test_linear_scenario_certificate(linear_cfg):
    cert = certificate(linear_cfg, "rigorous")
    assert cert.linear and cert.G2 == 0 and cert.verdict_overall


def test_slow_chord_is_not_certifiable():
    cfg = make(t1=10.0, x1=5.0, A=0.001, mass=MassProfile(50.0))
    cert = certificate(cfg, "rigorous")
    assert not cert.verdict_overall and "a ≤ 1" in cert.notes[0]


def test_sup_estimates_cover_grid_values(certified_cfg):
    cert = certificate(certified_cfg, "rigorous")
    co = build_coefficients(certified_cfg)
    assert cert.sup_b >= np.max(np.abs(co.b))
    assert cert.sup_bprime >= np.max(np.abs(co.bprime))
    assert cert.sup_alpha >= np.max(np.abs(co.alpha))


# --- Picard ----------------------------------------------------------------


def test_linear_picard_is_one_step(linear_cfg):
    z, rep = picard_solve(linear_cfg)
    co = build_coefficients(linear_cfg)
    assert rep.converged and rep.iterations == 2
    assert rep.delta_history[-1] == 0.0
    assert np.array_equal(z.values, co.b)


def test_converged_is_fixed_point(certified_cfg):
    z, rep = picard_solve(certified_cfg)
    assert rep.converged and rep.delta_history[-1] <= certified_cfg.tol
    co = build_coefficients(certified_cfg)
    assert c1_norm(apply_S(z, co, certified_cfg) - z) <= certified_cfg.tol
    assert rep.final_residual <= 10 * certified_cfg.tol
    assert z.values[0] == 0.0 and z.values[-1] == 0.0


def test_converged_solution_inside_certificate_ball(certified_cfg):
    z, _ = picard_solve(certified_cfg)
    for mode in ("paper", "rigorous"):
        assert c1_norm(z) <= certificate(certified_cfg, mode).radius_R


@pytest.mark.parametrize("omega", [0.3, 0.7])
def test_damping_same_limit(certified_cfg, omega):
    cfg1 = replace(certified_cfg, damping=1.0, tol=1e-10)
    z1, _ = picard_solve(cfg1)
    z2, _ = picard_solve(replace(cfg1, damping=omega))
    assert c1_norm(z1 - z2) <= 1e-8


def test_drag_lower_bound(coast_cfg):
    z, _ = picard_solve(coast_cfg)
    co = build_coefficients(coast_cfg)
    assert np.all(co.beta <= 0)
    assert np.all(z.values >= co.b - coast_cfg.tol)


def test_residual_order_under_refinement():
    # drag-free burn: the discrete solution's residual is rounding-level, while the
    # closed-form error decreases at second order
    errs = []
    for n in (26, 51, 101):
        cfg = make(t1=10.0, x1=2000.0, A=0.0, mass=MassProfile(1000.0, 100.0, 5.0), damping=1.0, n_grid=n)
        z, rep = picard_solve(cfg)
        x, _, _ = tsiolkovsky_trajectory(cfg, cfg.grid)
        errs.append(np.max(np.abs(z.values - (x - chord_shift(cfg)(cfg.grid)))))
        assert rep.final_residual < 1e-9
    assert errs[0] / errs[1] > 3.8 and errs[1] / errs[2] > 3.8


def test_non_convergence_reported():
    cfg = make(t1=60.0, x1=15000.0, A=1.0, mass=MassProfile(1000.0, 9000.0, 150.0), max_iter=60)
    with pytest.raises(NonConvergenceError) as info:
        picard_solve(cfg)
    rep = info.value.report
    assert rep.iterations == 60 and len(rep.delta_history) == 60 and not rep.converged


def test_divergence_reported():
    cfg = make(t1=60.0, x1=15000.0, A=5.0, mass=MassProfile(1000.0, 9000.0, 150.0), damping=1.0)
    with pytest.raises(DivergenceError) as info:
        picard_solve(cfg)
    assert info.value.report.status == "diverged"
    with pytest.raises(DivergenceError):
        picard_solve(replace(cfg, A=0.01, damping=0.5), guard=1.0)


# --- ball invariance --------------------------------------------------------


def test_ball_check_rigorous_radius(certified_cfg):
    R = certificate(certified_cfg, "rigorous").radius_R
    rep = ball_check(R, certified_cfg, n_samples=100)
    assert rep.rigorous_ok
    assert rep.n_violations == 0 and rep.worst_norm <= R


def test_ball_check_linear(linear_cfg):
    co = build_coefficients(linear_cfg)
    R = max(np.max(np.abs(co.b)), np.max(np.abs(co.bprime)))
    rep = ball_check(R * 1.0001, linear_cfg, n_samples=20)
    assert rep.n_violations == 0
    assert rep.worst_norm == pytest.approx(R)


def test_ball_check_zero_radius(certified_cfg):
    rep = ball_check(0.0, certified_cfg, n_samples=5)
    assert not rep.paper_ok and not rep.rigorous_ok
    assert rep.n_violations == 5
