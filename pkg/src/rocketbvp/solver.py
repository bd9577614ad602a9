"""Fixed-point iteration and existence certificates for the reduced BVP.

Two certificate modes are offered. ``"paper"`` is the literal Schauder
arithmetic: ``G2 = |alpha| (t1 - t0)^2`` and the ball
condition ``G2 (R^2 + 2aR + a) + |b| <= R``. ``"rigorous"`` uses the true
kernel constants and the bound

    G2 (R + a)^2 exp(R / H) + max(|b|, |b'|) <= R,

which does imply ``S(B(0, R)) ⊂ B(0, R)`` in the C^1 norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DivergenceError, NonConvergenceError
from .green import Interval, green_constants
from .model import ScenarioConfig, alpha_beta_at, chord_shift
from .operator import GridFunction, apply_S, build_coefficients, c1_norm, ode_residual

__all__ = [
    "ExistenceCertificate",
    "SolveReport",
    "BallCheckReport",
    "aest_interval",
    "best_bound",
    "discriminant",
    "paper_radius",
    "rigorous_radius",
    "certificate",
    "certificate_from_values",
    "picard_solve",
    "ball_check",
]

MODES = ("paper", "rigorous")


@dataclass(frozen=True)
class ExistenceCertificate:
    mode: str
    a: float
    sup_alpha: float
    sup_b: float
    sup_bprime: float
    G0: float
    G1: float
    G2: float
    delta: float
    aest_interval: tuple[float, float] | None
    best_bound: float | None
    radius_R: float | None
    verdict_aest: bool
    verdict_best: bool
    verdict_overall: bool
    linear: bool = False
    notes: tuple[str, ...] = ()

    @property
    def b_norm(self) -> float:
        """Size of the inhomogeneous term as the mode measures it."""
        return self.sup_b if self.mode == "paper" else max(self.sup_b, self.sup_bprime)

    def to_dict(self) -> dict:
        lo_hi = None
        if self.aest_interval is not None:
            lo, hi = self.aest_interval
            lo_hi = [[0.0, lo], [hi, None]]  # None stands for +infinity
        return {
            "mode": self.mode,
            "a": self.a,
            "sup_alpha": self.sup_alpha,
            "sup_b": self.sup_b,
            "sup_bprime": self.sup_bprime,
            "G0": self.G0,
            "G1": self.G1,
            "G2": self.G2,
            "delta": self.delta,
            "aest_intervals": lo_hi,
            "best_bound": self.best_bound,
            "radius_R": self.radius_R,
            "verdict_aest": self.verdict_aest,
            "verdict_best": self.verdict_best,
            "verdict_overall": self.verdict_overall,
            "linear": self.linear,
            "notes": list(self.notes),
        }


@dataclass
class SolveReport:
    iterations: int = 0
    delta_history: list[float] = field(default_factory=list)
    final_residual: float = math.nan
    converged: bool = False
    status: str = "running"
    damping: float = 1.0
    certificate: ExistenceCertificate | None = None

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "delta_history": list(self.delta_history),
            "final_residual": self.final_residual,
            "converged": self.converged,
            "status": self.status,
            "damping": self.damping,
        }


# --- certificate arithmetic -------------------------------------------------


def aest_interval(a: float) -> tuple[float, float] | None:
    """Endpoints ``(lo, hi)``: admissible G2 lie in ``(0, lo) ∪ (hi, inf)``.

    They are the roots of ``4a(a-1) G2^2 - 4a G2 + 1``; ``None`` for ``a <= 1``.
    """
    if a <= 1:
        return None
    root = math.sqrt(a)
    den = 2.0 * a * (a - 1.0)
    return (a - root) / den, (a + root) / den


def best_bound(a: float, G2: float) -> float:
    """Largest admissible ``|b|``; ``inf`` when there is no drag."""
    if G2 == 0:
        return math.inf
    return (4 * a * (a - 1) * G2**2 - 4 * a * G2 + 1) / (4 * G2)


def discriminant(a: float, G2: float, b: float) -> float:
    return (2 * a * G2 - 1) ** 2 - 4 * G2 * (G2 * a + b)


def paper_radius(a: float, G2: float, b: float) -> float | None:
    """Smaller positive root of ``G2 R^2 + (2aG2 - 1) R + (G2 a + |b|)``."""
    if G2 == 0:
        return b if b > 0 else None
    d = discriminant(a, G2, b)
    lin = 1 - 2 * a * G2
    if d <= 0 or lin <= 0:
        return None
    # cancellation-free form of ((1 - 2aG2) - sqrt(d)) / (2 G2)
    r = 2 * (G2 * a + b) / (lin + math.sqrt(d))
    return r if r > 0 else None


def rigorous_radius(a: float, G2: float, b: float, H: float) -> float | None:
    """Smallest ``R > 0`` with ``G2 (R + a)^2 exp(R/H) + b <= R``, if any."""
    if G2 == 0:
        return b if b > 0 else None

    def phi(R):
        return R - G2 * (R + a) ** 2 * math.exp(R / H) - b

    def dphi(R):
        return 1 - G2 * math.exp(R / H) * (2 * (R + a) + (R + a) ** 2 / H)

    # phi is concave, so its maximum sits at the unique zero of phi'
    if dphi(0.0) <= 0:
        return None
    hi = max(1.0, a)
    while dphi(hi) > 0:
        hi *= 2.0
        if hi > 1e12:
            return None
    r_star = brentq(dphi, 0.0, hi, xtol=1e-14, rtol=1e-15)
    if phi(r_star) < 0:
        return None
    # bisection keeps a feasible upper end, so the returned radius satisfies the bound
    lo, hi = 0.0, r_star
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if phi(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def certificate_from_values(
    a: float,
    G2: float,
    sup_b: float,
    mode: str = "paper",
    *,
    sup_bprime: float = 0.0,
    sup_alpha: float = math.nan,
    G0: float = math.nan,
    G1: float = math.nan,
    H: float = 8000.0,
) -> ExistenceCertificate:
    """Evaluate the existence conditions for given constants."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    B = sup_b if mode == "paper" else max(sup_b, sup_bprime)
    notes = []
    delta = discriminant(a, G2, B)
    interval = aest_interval(a)
    bound = best_bound(a, G2)
    linear = G2 == 0
    if linear:
        notes.append("linear case: no drag, the problem is linear and solvable outright")
        R = B if B > 0 else 0.0
        return ExistenceCertificate(
            mode, a, sup_alpha, sup_b, sup_bprime, G0, G1, G2, delta, interval, None, R,
            True, True, True, linear=True, notes=tuple(notes),
        )
    if a <= 1:
        notes.append("a ≤ 1 (existence argument needs a > 1)")
        return ExistenceCertificate(
            mode, a, sup_alpha, sup_b, sup_bprime, G0, G1, G2, delta, None, bound, None,
            False, False, False, notes=tuple(notes),
        )
    lo, hi = interval
    ok_aest = (0 < G2 < lo) or (G2 > hi)
    ok_best = B < bound
    if G2 > hi:
        notes.append("G2 on the upper (aest) branch: 2aG2 > 1, so the quadratic has no positive root")
    if mode == "paper":
        R = paper_radius(a, G2, B) if ok_aest and ok_best else None
    else:
        R = rigorous_radius(a, G2, B, H)
        if R is None:
            notes.append("no R satisfies G2 (R+a)^2 exp(R/H) + max(|b|,|b'|) <= R")
    overall = R is not None and (ok_aest and ok_best if mode == "paper" else True)
    return ExistenceCertificate(
        mode, a, sup_alpha, sup_b, sup_bprime, G0, G1, G2, delta, interval, bound,
        R if overall else None, ok_aest, ok_best, overall, notes=tuple(notes),
    )


def _refined_sup(coarse: float, fine: float, ratio: int = 10) -> float:
    # Richardson step for an O(h^2) quantity, kept only if it enlarges the estimate
    extrap = fine + (fine - coarse) / (ratio**2 - 1)
    return max(coarse, fine, extrap)


def _oversampled(config: ScenarioConfig, factor: int = 10) -> ScenarioConfig:
    return replace(config, n_grid=factor * (config.n_grid - 1) + 1)


def certificate(config: ScenarioConfig, mode: str = "rigorous") -> ExistenceCertificate:
    """Existence certificate for a scenario."""
    a = chord_shift(config).a
    fine_cfg = _oversampled(config)
    sups = {}
    for key, cfg in (("coarse", config), ("fine", fine_cfg)):
        co = build_coefficients(cfg)
        alpha, _ = alpha_beta_at(cfg, cfg.grid)
        sups[key] = (np.max(np.abs(alpha)), np.max(np.abs(co.b)), np.max(np.abs(co.bprime)))
    sup_alpha, sup_b, sup_bp = (
        _refined_sup(float(c), float(f)) for c, f in zip(sups["coarse"], sups["fine"])
    )
    G0, G1 = green_constants(Interval(config.t0, config.t1), mode)
    G2 = sup_alpha * max(G0, G1)
    return certificate_from_values(
        a, G2, sup_b, mode, sup_bprime=sup_bp, sup_alpha=sup_alpha, G0=G0, G1=G1, H=config.H
    )


# --- fixed-point iteration --------------------------------------------------


def _diverging(history: list[float], window: int = 5) -> bool:
    if len(history) <= window:
        return False
    tail = history[-window - 1 :]
    growing = all(b > a for a, b in zip(tail, tail[1:]))
    return growing and tail[-1] > 10 * tail[0]


def picard_solve(
    config: ScenarioConfig,
    *,
    z_init: GridFunction | None = None,
    guard: float = 1e12,
) -> tuple[GridFunction, SolveReport]:
    """Damped Picard iteration ``z <- (1 - w) z + w S(z)`` from ``z = 0``.

    Stops once the fixed-point defect ``||S(z) - z||`` drops below
    ``config.tol`` and returns ``S(z)``, which satisfies the discrete
    equation up to a Lipschitz multiple of that defect.

    Raises:
        DivergenceError: the defect grew more than tenfold over five
            consecutive increases, the iterate left the ``guard`` ball, or
            became non-finite.
        NonConvergenceError: ``config.max_iter`` exhausted.

    Both carry the partial :class:`SolveReport` as ``.report``.
    """
    coeffs = build_coefficients(config)
    z = z_init if z_init is not None else GridFunction.zeros(coeffs.grid)
    report = SolveReport(damping=config.damping)
    for k in range(1, config.max_iter + 1):
        w = apply_S(z, coeffs, config)
        delta = c1_norm(w - z)
        report.iterations = k
        report.delta_history.append(delta)
        if not math.isfinite(delta) or c1_norm(w) > guard:
            report.status = "diverged"
            raise DivergenceError(f"iterate left the guard ball at iteration {k}", report)
        if delta <= config.tol:
            report.converged = True
            report.status = "converged"
            report.final_residual = ode_residual(w, config) if config.n_grid >= 5 else math.nan
            return w, report
        if _diverging(report.delta_history):
            report.status = "diverged"
            raise DivergenceError(f"defect grew tenfold over five steps by iteration {k}", report)
        z = z.blend(w, config.damping)
    report.status = "max_iter"
    if config.n_grid >= 5:
        report.final_residual = ode_residual(z, config)
    raise NonConvergenceError(
        f"no convergence in {config.max_iter} iterations (last defect {report.delta_history[-1]:.3e})",
        report,
    )


# --- ball invariance --------------------------------------------------------


@dataclass(frozen=True)
class BallCheckReport:
    R: float
    paper_lhs: float
    paper_ok: bool
    rigorous_lhs: float
    rigorous_ok: bool
    n_samples: int
    worst_norm: float
    n_violations: int


def _random_c1_samples(grid: np.ndarray, R: float, n: int, rng: np.random.Generator):
    """Polynomials vanishing at both ends, scaled into the closed C^1 ball of radius R."""
    L = grid[-1] - grid[0]
    tau = (grid - grid[0]) / L
    P = np.polynomial.Polynomial
    base = P([0.0, 1.0, -1.0])  # tau (1 - tau)
    for k in range(n):
        q = P(rng.standard_normal(rng.integers(1, 5)))
        p = base * q
        vals, ders = p(tau), p.deriv()(tau) / L
        norm = max(np.max(np.abs(vals)), np.max(np.abs(ders)))
        # every fourth sample sits on the sphere, the rest inside
        scale = 1.0 if k % 4 == 0 else rng.uniform(0.0, 1.0)
        s = scale * R / norm if norm > 0 else 0.0
        yield GridFunction(grid, s * vals, s * ders)


def ball_check(
    R: float,
    config: ScenarioConfig,
    n_samples: int = 100,
    mode: str = "rigorous",
    seed: int = 0,
) -> BallCheckReport:
    """Test whether ``S`` maps the C^1 ball of radius ``R`` into itself.

    Both analytic bounds are evaluated with the constants of ``mode``;
    ``n_samples`` random members of the ball are then pushed through ``S``.
    """
    cert = certificate(config, mode)
    a, G2 = cert.a, cert.G2
    paper_lhs = G2 * (R**2 + 2 * a * R + a) + cert.sup_b
    rig_lhs = G2 * (R + a) ** 2 * math.exp(R / config.H) + max(cert.sup_b, cert.sup_bprime)
    coeffs = build_coefficients(config)
    rng = np.random.default_rng(seed)
    worst, bad = 0.0, 0
    for z in _random_c1_samples(coeffs.grid, R, n_samples, rng):
        nrm = c1_norm(apply_S(z, coeffs, config))
        worst = max(worst, nrm)
        bad += nrm > R
    return BallCheckReport(
        R=R,
        paper_lhs=paper_lhs,
        paper_ok=paper_lhs <= R,
        rigorous_lhs=rig_lhs,
        rigorous_ok=rig_lhs <= R,
        n_samples=n_samples,
        worst_norm=worst,
        n_violations=int(bad),
    )
