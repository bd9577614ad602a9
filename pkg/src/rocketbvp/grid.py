"""C^1 grid functions shared by the integral-operator path and the oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

__all__ = ["GridFunction", "check_same_grid"]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nodal values and derivatives of a C^1 function."""

    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        if not (self.grid.shape == self.values.shape == self.derivs.shape):
            raise ShapeError("grid, values and derivs must have equal length")

    @classmethod
    def zeros(cls, grid: np.ndarray) -> "GridFunction":
        return cls(grid, np.zeros_like(grid), np.zeros_like(grid))

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        check_same_grid(self, other)
        return GridFunction(self.grid, self.values - other.values, self.derivs - other.derivs)

    def blend(self, other: "GridFunction", weight: float) -> "GridFunction":
        """``(1 - weight) * self + weight * other``."""
        check_same_grid(self, other)
        return GridFunction(
            self.grid,
            (1 - weight) * self.values + weight * other.values,
            (1 - weight) * self.derivs + weight * other.derivs,
        )


def check_same_grid(u: GridFunction, v: GridFunction):
    if u.grid.shape != v.grid.shape or not np.array_equal(u.grid, v.grid):
        raise ShapeError("grid functions live on different grids")
