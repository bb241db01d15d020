"""Rectangular (t, x) grids of solution values with provenance metadata."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initialdata import InitialDatum
from .kernels import Problem

#: engines that can fill a Field
ENGINES = ("closed_smooth", "closed_nonsmooth", "monte_carlo", "pde", "density_oracle")


@dataclass
class Field:
    """u(t, x) on a rectangular grid, tagged with the engine that produced it.

    ``values[i, j]`` is u(t_grid[i], x_grid[j]); ``std_errors`` is filled only
    by the Monte Carlo engine.
    """

    t_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray
    engine: str
    problem: Problem
    datum: InitialDatum
    std_errors: np.ndarray | None = None

    def __post_init__(self):
        self.t_grid = np.atleast_1d(np.asarray(self.t_grid, dtype=float))
        self.x_grid = np.atleast_1d(np.asarray(self.x_grid, dtype=float))
        self.values = np.asarray(self.values, dtype=float)
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}, expected one of {ENGINES}")
        if self.t_grid.ndim != 1 or self.x_grid.ndim != 1:
            raise ValueError("grids must be one-dimensional")
        if self.t_grid.size == 0 or self.x_grid.size == 0:
            raise ValueError("grids must be nonempty")
        if np.any(self.t_grid <= 0.0) or np.any(np.diff(self.t_grid) <= 0.0):
            raise ValueError("t_grid must be strictly increasing and positive")
        if np.any(self.x_grid < 0.0) or np.any(np.diff(self.x_grid) <= 0.0):
            raise ValueError("x_grid must be strictly increasing and nonnegative")
        if self.values.shape != (self.t_grid.size, self.x_grid.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match grids "
                f"({self.t_grid.size}, {self.x_grid.size})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")
        if self.std_errors is not None:
            self.std_errors = np.asarray(self.std_errors, dtype=float)
            if self.std_errors.shape != self.values.shape:
                raise ValueError("std_errors shape does not match values")

    def minimum(self) -> tuple[float, float, float]:
        """Smallest value on the grid and the (t, x) point attaining it."""
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.values[i, j]), float(self.t_grid[i]), float(self.x_grid[j])
