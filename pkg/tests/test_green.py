import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from rocketbvp.errors import DomainError
from rocketbvp.green import (
    Interval,
    green_constants,
    green_constants_numeric,
    green_constants_report,
    green_dt,
    green_paper,
)

rng = np.random.default_rng(1234)


def quad_sup(fn, iv):
    """Independent oracle: adaptive quadrature split at the diagonal, then maximisation in t."""

    def integral(t):
        return quad(lambda s: fn(t, s), iv.t0, iv.t1, points=[t], limit=200, epsabs=1e-14)[0]

    grid = np.linspace(iv.t0, iv.t1, 201)
    vals = np.array([integral(t) for t in grid])
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(lambda t: -integral(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return max(vals.max(), -res.fun)


def test_boundary_zeros():
    iv = Interval(-1.0, 3.0)
    s = rng.uniform(-1, 3, 100)
    assert np.all(green_paper(iv.t0, s, iv) == 0)
    assert np.all(green_paper(iv.t1, s, iv) == 0)


def test_midpoint_value():
    assert green_paper(0.5, 0.5, Interval(0.0, 1.0)) == 0.25


def test_symmetric_nonnegative():
    iv = Interval(2.0, 7.0)
    t, s = rng.uniform(2, 7, (2, 1000))
    assert np.array_equal(green_paper(t, s, iv), green_paper(s, t, iv))
    assert np.all(green_paper(t, s, iv) >= 0)


def test_domain_checked():
    with pytest.raises(DomainError):
        green_paper(1.5, 0.5, Interval(0.0, 1.0))
    with pytest.raises(DomainError):
        Interval(1.0, 1.0)


def test_derivative_example_and_boundary_row():
    iv = Interval(0.0, 1.0)
    assert green_dt(0.25, 0.75, iv) == 0.25
    assert green_dt(0.4, 1.0, iv) == 0.0


def test_derivative_needs_side_on_diagonal():
    iv = Interval(0.0, 1.0)
    with pytest.raises(DomainError):
        green_dt(0.3, 0.3, iv)
    assert green_dt(0.3, 0.3, iv, side=1) - green_dt(0.3, 0.3, iv, side=-1) == pytest.approx(1.0, abs=1e-15)


def test_derivative_matches_finite_differences():
    iv = Interval(0.0, 3.0)
    t, s = rng.uniform(0.01, 2.99, (2, 200))
    keep = np.abs(t - s) > 1e-3
    t, s = t[keep], s[keep]
    eps = 1e-6
    fd = (green_paper(t + eps, s, iv) - green_paper(t - eps, s, iv)) / (2 * eps)
    assert np.allclose(fd, green_dt(t, s, iv), atol=1e-8)


def test_constants_closed_forms():
    assert green_constants(Interval(0.0, 1.0)) == (0.125, 0.5)
    assert green_constants(Interval(0.0, 2.0)) == (0.5, 1.0)
    assert green_constants(Interval(0.0, 2.0), "paper") == (1.5, 4.0)
    with pytest.raises(ValueError):
        green_constants(Interval(0.0, 1.0), "other")


@pytest.mark.parametrize("t0,t1", [(0.0, 1.0), (0.0, 2.0), (3.0, 63.0)])
def test_constants_against_adaptive_quadrature(t0, t1):
    iv = Interval(t0, t1)
    g0 = quad_sup(lambda t, s: green_paper(t, s, iv), iv)
    g1 = quad_sup(lambda t, s: abs(green_dt(t, s, iv, side=1)), iv)
    G0, G1 = green_constants(iv)
    assert g0 == pytest.approx(G0, rel=1e-8)
    assert g1 == pytest.approx(G1, rel=1e-8)


def test_brute_force_constants():
    assert green_constants_numeric(Interval(0.0, 1.0)) == pytest.approx((0.125, 0.5), rel=1e-6)
    rep = green_constants_report(Interval(0.0, 2.0), n=2001)
    assert rep["G0"]["paper_deviates"] and rep["G1"]["paper_deviates"]
    assert rep["G0"]["quadrature_rel_err"] < 1e-6


def test_row_integrals_closed_form():
    # int G(t, s) ds = (t - t0)(t1 - t)/2 and int |dG/dt| ds = ((t-t0)^2 + (t1-t)^2) / (2L)
    iv = Interval(0.0, 1.0)
    for t in rng.uniform(0, 1, 5):
        i0 = quad(lambda s: green_paper(t, s, iv), 0, 1, points=[t])[0]
        i1 = quad(lambda s: abs(green_dt(t, s, iv, side=1)), 0, 1, points=[t])[0]
        assert i0 == pytest.approx(t * (1 - t) / 2, rel=1e-10)
        assert i1 == pytest.approx((t**2 + (1 - t) ** 2) / 2, rel=1e-10)


def test_kernel_inverts_second_derivative():
    # u = int G f with f = 2 on [0, 1] gives t (1 - t), so u'' = -f
    iv = Interval(0.0, 1.0)
    for t in np.linspace(0, 1, 11):
        u = quad(lambda s: green_paper(t, s, iv) * 2.0, 0, 1, points=[t])[0]
        assert u == pytest.approx(t * (1 - t), abs=1e-13)
