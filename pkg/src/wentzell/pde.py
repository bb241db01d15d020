"""Finite-difference oracle for the dynamic-boundary heat equation.

Discretizes u_t = mu u_x + (1/2) u_xx on [0, x_max] with the boundary
condition u_t(t, 0) = nu u_x(t, 0) treated as an evolution equation for
the boundary value itself, and u = 0 at the truncation point x_max.  The
scheme is theta-blended in time (theta = 0.5 is trapezoidal, second
order) with second-order central differences inside and a second-order
one-sided difference (-3 u0 + 4 u1 - u2) / (2 dx) for u_x at the wall.

The wall row couples u0, u1, u2, one entry outside the tridiagonal band;
a single time-independent row reduction against row 1 restores the band
before the banded solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import SingularSystemError, StabilityError
from .field import Field
from .initialdata import InitialDatum
from .kernels import Problem


@dataclass(frozen=True)
class PdeGrid:
    """Uniform space-time mesh for one marching solve.

    nx is the number of spatial cells (nx + 1 nodes including both ends),
    nt the number of time steps of size t_end / nt.
    """

    x_max: float
    nx: int
    t_end: float
    nt: int
    theta: float = 0.5

    def __post_init__(self):
        if not (math.isfinite(self.x_max) and self.x_max > 0.0):
            raise ValueError(f"x_max={self.x_max} must be positive")
        if int(self.nx) != self.nx or self.nx < 16:
            raise ValueError(f"nx={self.nx} must be an integer >= 16")
        if int(self.nt) != self.nt or self.nt < 1:
            raise ValueError(f"nt={self.nt} must be an integer >= 1")
        if not (math.isfinite(self.t_end) and self.t_end > 0.0):
            raise ValueError(f"t_end={self.t_end} must be positive")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta={self.theta} must lie in [0, 1]")

    @property
    def dx(self) -> float:
        return self.x_max / self.nx

    @property
    def dt(self) -> float:
        return self.t_end / self.nt


def suggested_x_max(p: Problem, d: InitialDatum, t_end: float) -> float:
    """Truncation point beyond which the solution is negligible.

    Datum support plus the advected distance plus a 12-sigma diffusion
    margin; Dirichlet u = 0 there costs less than ~1e-8.
    """
    return d.cutoff + abs(p.mu) * t_end + 12.0 * math.sqrt(t_end)


def solve_pde(p: Problem, d: InitialDatum, grid: PdeGrid,
              t_record=None) -> Field:
    """March the scheme and return snapshots at the requested times.

    ``t_record`` defaults to [t_end]; every entry must lie in (0, t_end].
    Times between step boundaries are filled by linear blending of the
    bracketing steps (the blend error is O(dt^2), below the scheme's own
    accuracy).  Raises StabilityError when theta < 0.5 and the explicit
    part violates dt <= dx^2 / (1 + |mu| dx).
    """
    if t_record is None:
        t_record = [grid.t_end]
    t_record = np.atleast_1d(np.asarray(t_record, dtype=float))
    if np.any(t_record <= 0.0) or np.any(t_record > grid.t_end * (1.0 + 1e-12)):
        raise ValueError("record times must lie in (0, t_end]")
    if np.any(np.diff(t_record) <= 0.0):
        raise ValueError("record times must be strictly increasing")

    dx, dt, theta = grid.dx, grid.dt, grid.theta
    if theta < 0.5 and dt > dx * dx / (1.0 + abs(p.mu) * dx):
        raise StabilityError(
            f"explicit part unstable: dt={dt:g} exceeds dx^2/(1+|mu|dx)="
            f"{dx * dx / (1.0 + abs(p.mu) * dx):g}; refine nt or raise theta")

    n = grid.nx + 1
    x = np.linspace(0.0, grid.x_max, n)
    u = np.asarray(d.f(x), dtype=float).copy()

    # interior operator coefficients: A u|_j = lo*u_{j-1} + di*u_j + hi*u_{j+1}
    lo = -p.mu / (2.0 * dx) + 1.0 / (2.0 * dx * dx)
    di = -1.0 / (dx * dx)
    hi = p.mu / (2.0 * dx) + 1.0 / (2.0 * dx * dx)
    # wall row: du0/dt = nu (-3 u0 + 4 u1 - u2) / (2 dx)
    w0, w1, w2 = np.array([-3.0, 4.0, -1.0]) * (p.nu / (2.0 * dx))

    # implicit matrix M = I - theta dt A in banded form (super, diag, sub)
    ab = np.zeros((3, n))
    ab[0, 2:] = -theta * dt * hi
    ab[1, 1:-1] = 1.0 - theta * dt * di
    ab[2, :-2] = -theta * dt * lo
    ab[1, 0] = 1.0 - theta * dt * w0
    ab[0, 1] = -theta * dt * w1
    m02 = -theta * dt * w2  # out-of-band wall entry
    ab[1, -1] = 1.0  # Dirichlet row
    ab[2, -2] = 0.0

    # reduce the wall row against row 1 to eliminate the u2 entry
    gamma = 0.0
    if m02 != 0.0:
        if ab[0, 2] == 0.0:
            raise SingularSystemError(
                "wall-row reduction impossible: row 1 has no u2 coupling "
                "(mu*dx = -1 degeneracy); refine nx")
        gamma = -m02 / ab[0, 2]
        ab[1, 0] += gamma * ab[2, 0]
        ab[0, 1] += gamma * ab[1, 1]

    def rhs(v):
        r = v.copy()
        e = (1.0 - theta) * dt
        r[1:-1] += e * (lo * v[:-2] + di * v[1:-1] + hi * v[2:])
        r[0] += e * (w0 * v[0] + w1 * v[1] + w2 * v[2])
        r[-1] = 0.0
        return r

    snapshots = np.empty((t_record.size, n))
    rec = 0
    eps = 1e-9 * dt
    # capture any record time at (or numerically at) t = 0+ boundary of step 1
    for k in range(grid.nt):
        t_next = (k + 1) * dt
        u_prev = u
        r = rhs(u)
        if gamma != 0.0:
            r[0] += gamma * r[1]
        u = solve_banded((1, 1), ab, r)
        if not np.all(np.isfinite(u)):
            raise SingularSystemError(f"solution became non-finite at step {k + 1}")
        while rec < t_record.size and t_record[rec] <= t_next + eps:
            frac = (t_record[rec] - k * dt) / dt
            snapshots[rec] = u_prev + np.clip(frac, 0.0, 1.0) * (u - u_prev)
            rec += 1
    if rec != t_record.size:
        raise RuntimeError("internal error: record times not exhausted")
    return Field(t_record, x, snapshots, "pde", p, d)
