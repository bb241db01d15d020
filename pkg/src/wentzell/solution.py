"""Evaluators for the dynamic-boundary heat equation on the half line.

The problem solved here is

    u_t = mu u_x + (1/2) u_xx   on (0, inf),
    u_t(t, 0) = nu u_x(t, 0),
    u(0, x) = f(x),

and every evaluator returns u(t, x) for one point or a grid of points.
Three independent routes are provided:

* ``eval_u_smooth`` integrates f against the transition kernel and f'
  against the boundary-correction kernel (requires a differentiable datum).
* ``eval_u_nonsmooth`` integrates f alone against the combined kernel plus
  a boundary term, valid for t > 0 even when f has no derivative.
* ``eval_u_density_oracle`` evaluates the underlying expectation over the
  joint law of a driftless-reflection pair by brute-force two-dimensional
  quadrature.  Slow, but it shares no kernel code with the other two.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InvalidPointError
from .field import ENGINES, Field
from .initialdata import InitialDatum
from .kernels import (
    Problem,
    joint_density_g,
    kernel_G,
    kernel_G_plus_Hy,
    kernel_H,
    kernel_H0,
    local_time_integral,
)
from .quadrature import QuadratureSpec, integrate_interval, integrate_semiinf

_DEFAULT_SPEC = QuadratureSpec()


def _check_eval_point(t: float, x: float, *, positive_t: bool) -> tuple[float, float]:
    t = float(t)
    x = float(x)
    if not math.isfinite(t) or not math.isfinite(x):
        raise InvalidPointError(f"evaluation point (t={t}, x={x}) must be finite")
    if x < 0.0:
        raise InvalidPointError(f"x={x} lies outside the half line")
    if positive_t:
        if t <= 0.0:
            raise InvalidPointError(f"t={t} must be positive for this evaluator")
    elif t < 0.0:
        raise InvalidPointError(f"t={t} must be nonnegative")
    return t, x


def _kernel_breakpoints(problem: Problem, t: float, x: float, datum: InitialDatum,
                        upper: float) -> list[float]:
    """Panel seeds where the y-integrands vary fastest.

    The kernels are built from Gaussian bells and tails centred where the
    arguments (x +- y + ct)/sqrt(t) vanish; at small t those features are
    narrow, so the first partition must resolve them.
    """
    w = math.sqrt(t)
    centers = [
        x + problem.mu * t,
        -(x + problem.mu * t),
        -(x + (2.0 * problem.nu - problem.mu) * t),
    ]
    pts = [2.0 * w, 8.0 * w]
    for c in centers:
        for k in (-8.0, -4.0, -1.0, 0.0, 1.0, 4.0, 8.0):
            pts.append(c + k * w)
    pts.extend(datum.knots())
    return sorted(p for p in set(pts) if 0.0 < p < upper)


def eval_u_components(problem: Problem, datum: InitialDatum, t: float, x: float,
                      spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """The two summands of the smooth-datum representation, separately.

    Returns ``(u1, u2)`` with u = u1 - u2, where u1 integrates f against the
    transition kernel and u2 integrates f' against the boundary-correction
    kernel.  At t = 0 this is (f(x), 0).
    """
    if not datum.smooth:
        datum.fprime(0.0)  # raises NotSmoothError with the datum's message
    t, x = _check_eval_point(t, x, positive_t=False)
    if t == 0.0:
        return float(datum.f(x)), 0.0
    spec = spec or _DEFAULT_SPEC
    upper = spec.tail_cutoff_policy(problem, t, x, datum)
    bps = _kernel_breakpoints(problem, t, x, datum, upper)
    u1 = integrate_semiinf(lambda y: datum.f(y) * kernel_G(problem, t, x, y),
                           spec, upper=upper, breakpoints=bps)
    u2 = integrate_semiinf(lambda y: datum.fprime(y) * kernel_H(problem, t, x, y),
                           spec, upper=upper, breakpoints=bps)
    return u1, u2


def eval_u_smooth(problem: Problem, datum: InitialDatum, t: float, x: float,
                  spec: QuadratureSpec | None = None) -> float:
    """u(t, x) for a differentiable datum, via the two-kernel representation."""
    u1, u2 = eval_u_components(problem, datum, t, x, spec)
    return u1 - u2


def eval_u_nonsmooth(problem: Problem, datum: InitialDatum, t: float, x: float,
                     spec: QuadratureSpec | None = None) -> float:
    """u(t, x) for t > 0 using only values of f, never its derivative.

    Integration by parts moves the derivative off the datum:
    u = int f(y) (G + H_y)(t; x, y) dy + f(0) H(t; x, 0).
    """
    t, x = _check_eval_point(t, x, positive_t=True)
    spec = spec or _DEFAULT_SPEC
    upper = spec.tail_cutoff_policy(problem, t, x, datum)
    bps = _kernel_breakpoints(problem, t, x, datum, upper)
    integral = integrate_semiinf(lambda y: datum.f(y) * kernel_G_plus_Hy(problem, t, x, y),
                                 spec, upper=upper, breakpoints=bps)
    return integral + float(datum.f(0.0)) * kernel_H0(problem, t, x)


def eval_u_density_oracle(problem: Problem, datum: InitialDatum, t: float, x: float,
                          spec: QuadratureSpec | None = None) -> float:
    """u(t, x) by two-dimensional quadrature over the reflection pair's law.

    Writes the expectation behind the solution as an integral against the
    joint density of (endpoint, running max) of a driftless-style pair and
    evaluates it with nested adaptive panels.  Independent of the kernel
    formulas, hence useful as a slow cross-check.  Requires a smooth datum
    and t > 0.
    """
    if not datum.smooth:
        datum.fprime(0.0)
    t, x = _check_eval_point(t, x, positive_t=True)
    spec = spec or _DEFAULT_SPEC
    w = math.sqrt(t)
    span = abs(problem.mu) * t + 12.0 * w
    s_max = span
    # Inner integrals feed an outer quadrature, so they must be resolved a
    # couple of orders tighter than the requested budget.
    inner_abs = spec.abs_tol / (4.0 * max(s_max, 1.0))
    inner_rel = 0.1 * spec.rel_tol
    lam = problem.lam

    def inner(s: float, deriv: bool) -> float:
        top = max(x, s)
        center = 2.0 * s - problem.mu * t  # stationary point of the b-exponent
        bps = [center - 4.0 * w, center - w, center, center + w, center + 4.0 * w]
        bps.extend(top - k for k in datum.knots())
        lo = s - span
        bps = sorted(p for p in set(bps) if lo < p < s)
        fn = datum.fprime if deriv else datum.f
        return integrate_interval(
            lambda b: fn(top - b) * joint_density_g(problem, t, b, s),
            lo, s,
            abs_tol=inner_abs, rel_tol=inner_rel,
            max_subdivisions=spec.max_subdivisions, breakpoints=bps)

    def outer_u1(s_arr):
        return np.array([inner(float(s), False) for s in np.atleast_1d(s_arr)])

    def outer_u2(s_arr):
        out = []
        for s in np.atleast_1d(s_arr):
            s = float(s)
            ell = max(s - x, 0.0)
            weight = local_time_integral(lam, ell)
            out.append(weight * inner(s, True) if weight != 0.0 else 0.0)
        return np.array(out)

    outer_bps = [x, x - w, x + w, w, 2.0 * w, 4.0 * w, 8.0 * w,
                 abs(problem.mu) * t, abs(problem.mu) * t + 4.0 * w]
    outer_bps = sorted(p for p in set(outer_bps) if 0.0 < p < s_max)
    kw = dict(abs_tol=spec.abs_tol, rel_tol=spec.rel_tol,
              max_subdivisions=spec.max_subdivisions, breakpoints=outer_bps)
    u1 = integrate_interval(outer_u1, 0.0, s_max, **kw)
    u2 = integrate_interval(outer_u2, 0.0, s_max, **kw)
    return u1 - u2


def _mc_point_seed(base_seed: int, index: int) -> int:
    """64-bit counter key for one grid point, derived reproducibly."""
    return int(np.random.SeedSequence(base_seed, spawn_key=(index,)).generate_state(1, np.uint64)[0])


def eval_field(problem: Problem, datum: InitialDatum, t_grid, x_grid, engine: str,
               spec: QuadratureSpec | None = None, *,
               mc_samples: int = 200_000, mc_seed: int = 0,
               pde_grid=None, workers: int = 1) -> Field:
    """Fill a rectangular (t, x) grid of u-values with the named engine.

    Engines: ``closed_smooth``, ``closed_nonsmooth``, ``density_oracle``
    evaluate pointwise (optionally across ``workers`` threads, placement by
    index so the result is identical for any worker count).  ``monte_carlo``
    derives one counter-key per grid point from ``mc_seed``, so the field is
    reproducible and each point's stream is independent.  ``pde`` runs one
    marching solve on ``pde_grid`` (a default grid is built when None) and
    interpolates the snapshots onto ``x_grid``.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}, expected one of {ENGINES}")
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    spec = spec or _DEFAULT_SPEC

    if engine == "pde":
        from .pde import PdeGrid, solve_pde, suggested_x_max

        t_end = float(t_grid[-1])
        if pde_grid is None:
            x_max = suggested_x_max(problem, datum, t_end)
            pde_grid = PdeGrid(x_max=x_max, nx=max(16, int(round(100.0 * x_max))),
                               t_end=t_end, nt=max(100, int(round(1000.0 * t_end))))
        if pde_grid.t_end < t_end:
            raise ValueError(f"pde_grid.t_end={pde_grid.t_end} < last requested time {t_end}")
        if pde_grid.x_max < x_grid[-1]:
            raise ValueError(f"pde_grid.x_max={pde_grid.x_max} < last requested x {x_grid[-1]}")
        mesh_field = solve_pde(problem, datum, pde_grid, t_record=t_grid)
        values = np.empty((t_grid.size, x_grid.size))
        for i in range(t_grid.size):
            values[i] = np.interp(x_grid, mesh_field.x_grid, mesh_field.values[i])
        return Field(t_grid, x_grid, values, "pde", problem, datum)

    if engine == "monte_carlo":
        from .montecarlo import estimate_u

        values = np.empty((t_grid.size, x_grid.size))
        errs = np.empty_like(values)
        for i, t in enumerate(t_grid):
            for j, xv in enumerate(x_grid):
                est = estimate_u(problem, datum, float(t), float(xv), mc_samples,
                                 seed=_mc_point_seed(mc_seed, i * x_grid.size + j),
                                 workers=workers)
                values[i, j] = est.mean
                errs[i, j] = est.std_error
        return Field(t_grid, x_grid, values, engine, problem, datum, std_errors=errs)

    point_eval = {"closed_smooth": eval_u_smooth,
                  "closed_nonsmooth": eval_u_nonsmooth,
                  "density_oracle": eval_u_density_oracle}[engine]
    points = [(i, j, float(t), float(xv))
              for i, t in enumerate(t_grid) for j, xv in enumerate(x_grid)]
    values = np.empty((t_grid.size, x_grid.size))
    if workers > 1:
        def run(p):
            return p[0], p[1], point_eval(problem, datum, p[2], p[3], spec)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, j, val in pool.map(run, points):
                values[i, j] = val
    else:
        for i, j, t, xv in points:
            values[i, j] = point_eval(problem, datum, t, xv, spec)
    return Field(t_grid, x_grid, values, engine, problem, datum)
