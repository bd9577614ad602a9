"""Green's function of ``u'' = f`` with homogeneous Dirichlet data on ``[t0, t1]``.

The kernel is

    G(t, s) = (t - t0)(t1 - s) / L   for t <= s
              (s - t0)(t1 - t) / L   for t >  s,      L = t1 - t0,

continuous, symmetric and non-negative, with ``dG/dt`` jumping by one
across the diagonal. Note that ``u(t) = int G(t, s) f(s) ds`` solves
``u'' = -f``; callers that need ``u'' = f`` negate the integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Interval",
    "green_paper",
    "green_dt",
    "green_constants",
    "green_constants_numeric",
    "green_constants_report",
    "PAPER_CONSTANTS",
]


@dataclass(frozen=True)
class Interval:
    t0: float
    t1: float

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise DomainError(f"need t1 > t0, got [{self.t0}, {self.t1}]")

    @property
    def length(self) -> float:
        return self.t1 - self.t0


def _check_domain(iv: Interval, *args):
    for x in args:
        x = np.asarray(x)
        # small slack for nodes produced by linspace round-off
        eps = 1e-12 * max(1.0, abs(iv.t0), abs(iv.t1))
        if np.any(x < iv.t0 - eps) or np.any(x > iv.t1 + eps):
            raise DomainError(f"argument outside [{iv.t0}, {iv.t1}]")


def green_paper(t, s, iv: Interval):
    """Kernel value ``G(t, s)``; the diagonal takes the common continuous value."""
    _check_domain(iv, t, s)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    lo = np.minimum(t, s)
    hi = np.maximum(t, s)
    out = (lo - iv.t0) * (iv.t1 - hi) / iv.length
    return float(out) if out.ndim == 0 else out


def green_dt(t, s, iv: Interval, side: int | None = None):
    """``dG/dt(t, s)``.

    On the diagonal the derivative is discontinuous and ``side`` picks the
    limit: ``+1`` for ``s -> t+`` (the ``t < s`` branch), ``-1`` for
    ``s -> t-``.
    """
    _check_domain(iv, t, s)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    t, s = np.broadcast_arrays(t, s)
    diag = t == s
    if np.any(diag) and side is None:
        raise DomainError("dG/dt is discontinuous at t == s; pass side=+1 or side=-1")
    upper = (t < s) | (diag & (side is not None and side > 0))
    out = np.where(upper, iv.t1 - s, iv.t0 - s) / iv.length
    return float(out) if out.ndim == 0 else out


# Values printed alongside the Schauder estimates; kept for reproducing that arithmetic.
PAPER_CONSTANTS = {"G0": lambda L: 3.0 / 8.0 * L**2, "G1": lambda L: L**2}


def green_constants(iv: Interval, mode: str = "rigorous") -> tuple[float, float]:
    """``(G0, G1)``: sup over t of ``int G ds`` and of ``int |dG/dt| ds``.

    ``mode="rigorous"`` gives the true suprema ``L^2/8`` (midpoint) and
    ``L/2`` (endpoints). ``mode="paper"`` returns ``3/8 L^2`` and ``L^2``.
    """
    L = iv.length
    if mode == "rigorous":
        return L**2 / 8.0, L / 2.0
    if mode == "paper":
        return PAPER_CONSTANTS["G0"](L), PAPER_CONSTANTS["G1"](L)
    raise ValueError(f"unknown mode {mode!r}")


def green_constants_numeric(iv: Interval, n: int = 10001, chunk: int = 512) -> tuple[float, float]:
    """Brute-force ``(G0, G1)``: trapezoid quadrature in s, maximum over a t-grid.

    Evaluation points double as quadrature nodes so the diagonal kink is
    always a node.
    """
    nodes = np.linspace(iv.t0, iv.t1, n)
    h = nodes[1] - nodes[0]
    g0 = g1 = -np.inf
    for start in range(0, n, chunk):
        t = nodes[start : start + chunk, None]
        G = green_paper(t, nodes[None, :], iv)
        i0 = np.trapezoid(G, dx=h, axis=1)
        # split each row at its diagonal so |dG/dt| is integrated one side at a time
        mask_lo = nodes[None, :] <= t
        mask_hi = nodes[None, :] >= t
        dlo = np.where(mask_lo, np.abs(green_dt(t, nodes[None, :], iv, side=-1)), 0.0)
        dhi = np.where(mask_hi, np.abs(green_dt(t, nodes[None, :], iv, side=1)), 0.0)
        i1 = np.trapezoid(dlo, dx=h, axis=1) + np.trapezoid(dhi, dx=h, axis=1)
        # each masked row gains a spurious half cell next to the diagonal; remove it
        rows = np.arange(len(t))
        k = start + rows
        i1 -= 0.5 * h * (np.where(k < n - 1, dlo[rows, k], 0.0) + np.where(k > 0, dhi[rows, k], 0.0))
        g0 = max(g0, float(i0.max()))
        g1 = max(g1, float(i1.max()))
    return g0, g1


def green_constants_report(iv: Interval, n: int = 10001) -> dict:
    """Closed-form, brute-force and literal-mode constants side by side."""
    closed = green_constants(iv, "rigorous")
    numeric = green_constants_numeric(iv, n)
    paper = green_constants(iv, "paper")
    report = {"interval": [iv.t0, iv.t1]}
    for k, name in enumerate(("G0", "G1")):
        report[name] = {
            "closed_form": closed[k],
            "quadrature": numeric[k],
            "paper": paper[k],
            "quadrature_rel_err": abs(numeric[k] - closed[k]) / closed[k],
            "paper_deviates": not np.isclose(paper[k], closed[k], rtol=1e-6),
        }
    return report
