"""Exact Monte Carlo evaluation of the probabilistic solution formulas.

The solution admits the representation

    u(t, x) = E[ f(X_t) - f'(X_t) * int_0^L exp(-lambda r) dr ],
    v(t, x) = u_x(t, x) = E[ exp(-lambda L) f'(X_t) ],

with lambda = 2(nu - mu), where X_t is reflecting Brownian motion with
drift mu started at x and L its local time at the origin up to t.  Both
X_t and L are deterministic functions of the pair (endpoint, running max)
of an auxiliary drifted Brownian motion, so the estimators below sample
that pair exactly at the terminal time: no path discretization, no bias.

Reproducibility contract: all randomness flows through the Philox
counter-based generator.  Sample index space is split into fixed-size
blocks; block k uses ``Philox(key=seed).jumped(k)`` and draws its normals
first, then its uniforms.  Block summaries are merged in block order, so
an estimate depends only on (seed, n), never on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPointError
from .initialdata import InitialDatum
from .kernels import Problem, local_time_integral

#: samples per RNG block; one Philox jump per block
BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class MaxEndpointSample:
    """Endpoint b and running maximum s of the driving drifted motion.

    Fields are scalars or equal-shape arrays, with s >= max(b, 0)
    elementwise.
    """

    b: float | np.ndarray
    s: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.s) < np.maximum(np.asarray(self.b), 0.0)):
            raise ValueError("running maximum below max(endpoint, 0)")


@dataclass(frozen=True)
class PathFunctionals:
    """Reflected position X = max(x, s) - b and local time L = max(x, s) - x."""

    X: float | np.ndarray
    L: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.X) < 0.0) or np.any(np.asarray(self.L) < 0.0):
            raise ValueError("reflected position and local time must be nonnegative")


@dataclass(frozen=True)
class McEstimate:
    """Plain Monte Carlo mean with its standard error.

    ``std_error`` is the sample standard deviation divided by sqrt(n_samples).
    """

    mean: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("an estimate needs at least 2 samples")


def sample_max_endpoint(p: Problem, t: float, rng: np.random.Generator,
                        size: int | None = None) -> MaxEndpointSample:
    """Exact draw of (endpoint, running max) of Brownian motion with drift -mu.

    The endpoint is Gaussian with mean -mu*t and variance t.  Conditional on
    the endpoint b, the running maximum is a bridge functional independent of
    the drift, with tail P(S >= s | B = b) = exp(-2 s (s - b) / t) for
    s >= max(b, 0); inverting that CDF at a uniform U in (0, 1] gives
    s = (b + sqrt(b^2 - 2 t ln U)) / 2.  Draw order per call: normals first,
    then uniforms.  ``size=None`` returns scalar fields.
    """
    if not t > 0.0:
        raise InvalidPointError(f"t={t} must be positive")
    rt = math.sqrt(t)
    z = rng.standard_normal(size)
    b = -p.mu * t + rt * z
    u = 1.0 - rng.random(size)  # in (0, 1]; u = 1 hits s = max(b, 0) exactly
    s = 0.5 * (b + np.sqrt(b * b - 2.0 * t * np.log(u)))
    s = np.maximum(s, np.maximum(b, 0.0))  # guard round-off at the support edge
    if size is None:
        return MaxEndpointSample(float(b), float(s))
    return MaxEndpointSample(b, s)


def path_functionals(x: float, smp: MaxEndpointSample) -> PathFunctionals:
    """Map (b, s) to the reflected position and local time started from x."""
    if x < 0.0:
        raise InvalidPointError(f"x={x} lies outside the half line")
    top = np.maximum(x, smp.s)
    X = top - smp.b
    L = top - x
    if np.isscalar(smp.b) or np.ndim(smp.b) == 0:
        return PathFunctionals(float(X), float(L))
    return PathFunctionals(X, L)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(block))


def _check_estimate_args(d: InitialDatum, t: float, n: int, seed: int) -> None:
    if not d.smooth:
        d.fprime(0.0)  # raises NotSmoothError
    if not t > 0.0:
        raise InvalidPointError(f"t={t} must be positive")
    if n < 2:
        raise ValueError("need n >= 2 samples")
    if not 0 <= int(seed) < 2 ** 64:
        raise ValueError("seed must fit in 64 bits")


def _block_summary(p: Problem, d: InitialDatum, t: float, x: float, seed: int,
                   block: int, count: int, kind: str) -> tuple[int, float, float]:
    rng = _block_rng(seed, block)
    smp = sample_max_endpoint(p, t, rng, size=count)
    pf = path_functionals(x, smp)
    if kind == "u":
        w = d.f(pf.X) - d.fprime(pf.X) * local_time_integral(p.lam, pf.L)
    else:
        w = np.exp(-p.lam * pf.L) * d.fprime(pf.X)
    mean = float(np.mean(w))
    m2 = float(np.sum((w - mean) ** 2))
    return count, mean, m2


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    # numerically stable pairwise combination of (count, mean, sum of squares)
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _estimate(p: Problem, d: InitialDatum, t: float, x: float, n: int, seed: int,
              kind: str, workers: int) -> McEstimate:
    _check_estimate_args(d, t, n, seed)
    if x < 0.0:
        raise InvalidPointError(f"x={x} lies outside the half line")
    n = int(n)
    seed = int(seed)
    counts = [(k, min(BLOCK_SIZE, n - k * BLOCK_SIZE))
              for k in range((n + BLOCK_SIZE - 1) // BLOCK_SIZE)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda kc: _block_summary(p, d, t, x, seed, kc[0], kc[1], kind), counts))
    else:
        parts = [_block_summary(p, d, t, x, seed, k, c, kind) for k, c in counts]
    total = parts[0]
    for part in parts[1:]:  # fixed block order regardless of schedule
        total = _merge(total, part)
    count, mean, m2 = total
    std_error = math.sqrt(m2 / (count - 1) / count)
    return McEstimate(mean=mean, std_error=std_error, n_samples=count, seed=seed)


def estimate_u(p: Problem, d: InitialDatum, t: float, x: float, n: int,
               seed: int = 0, workers: int = 1) -> McEstimate:
    """Monte Carlo value of u(t, x) for a differentiable datum.

    Averages f(X) - f'(X) * int_0^L exp(-lambda r) dr over n exact samples.
    Deterministic given (seed, n).
    """
    return _estimate(p, d, t, x, n, seed, "u", workers)


def estimate_v(p: Problem, d: InitialDatum, t: float, x: float, n: int,
               seed: int = 0, workers: int = 1) -> McEstimate:
    """Monte Carlo value of the space derivative v = u_x at (t, x).

    Averages exp(-lambda L) f'(X) over n exact samples; the weight is
    identically 1 when nu = mu.  Deterministic given (seed, n).
    """
    return _estimate(p, d, t, x, n, seed, "v", workers)
