"""Initial data f on [0, inf) for the half-line problem.

Three families are provided:

``GaussianBump``
    f(x) = exp(-((x - center)/width)^2).  Smooth, vanishes at infinity.
``ExpDecay``
    f(x) = exp(-rate * x).  Smooth, monotone, with f'(0) = -rate != 0,
    which exercises the boundary corner of the solution.
``TableDatum``
    Tabulated (x, f) pairs joined by a monotone cubic (PCHIP) interpolant.
    Continuous with bounded slope but flagged non-smooth: it may only be
    fed to the evaluator that does not need f'.

Each datum knows its ``cutoff``: the abscissa beyond which |f| <= 1e-12,
used by the quadrature tail policy and by the PDE domain truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NotSmoothError, OutOfDomainError


def _check_domain(x):
    if not np.all(np.asarray(x) >= 0.0):
        raise OutOfDomainError(f"initial data live on [0, inf), got x={x}")


def _ret(out):
    return out.item() if np.ndim(out) == 0 else out


class InitialDatum:
    """Common interface: evaluation of f (and f' when smooth) on [0, inf)."""

    smooth: bool = False

    def f(self, x):
        raise NotImplementedError

    def fprime(self, x):
        raise NotSmoothError(f"{type(self).__name__} does not expose a derivative")

    @property
    def cutoff(self) -> float:
        """Abscissa beyond which |f| <= 1e-12."""
        raise NotImplementedError

    @property
    def sup_bound(self) -> float:
        """An upper bound for sup |f|."""
        raise NotImplementedError

    def knots(self) -> tuple[float, ...]:
        """Abscissae where f changes character; quadrature seeds panel edges here."""
        return ()


@dataclass(frozen=True)
class GaussianBump(InitialDatum):
    center: float
    width: float = 1.0

    smooth = True

    def __post_init__(self):
        if not (self.width > 0.0 and math.isfinite(self.width) and math.isfinite(self.center)):
            raise ValueError(f"need finite center and width > 0, got {self}")

    def f(self, x):
        _check_domain(x)
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return _ret(np.exp(-z * z))

    def fprime(self, x):
        _check_domain(x)
        x = np.asarray(x, dtype=float)
        z = (x - self.center) / self.width
        return _ret(-2.0 * (x - self.center) / self.width**2 * np.exp(-z * z))

    @property
    def cutoff(self) -> float:
        # exp(-36) ~ 2.3e-16, comfortably under the 1e-12 contract
        return self.center + 6.0 * self.width

    @property
    def sup_bound(self) -> float:
        return 1.0

    def knots(self):
        return (max(0.0, self.center - 6.0 * self.width), self.center, self.cutoff)


@dataclass(frozen=True)
class ExpDecay(InitialDatum):
    rate: float

    smooth = True

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"need rate > 0, got {self.rate}")

    def f(self, x):
        _check_domain(x)
        return _ret(np.exp(-self.rate * np.asarray(x, dtype=float)))

    def fprime(self, x):
        _check_domain(x)
        return _ret(-self.rate * np.exp(-self.rate * np.asarray(x, dtype=float)))

    @property
    def cutoff(self) -> float:
        # exp(-28) ~ 6.9e-13
        return 28.0 / self.rate

    @property
    def sup_bound(self) -> float:
        return 1.0

    def knots(self):
        return (1.0 / self.rate, 4.0 / self.rate, 14.0 / self.rate)


class TableDatum(InitialDatum):
    """Tabulated datum with monotone-cubic interpolation, zero outside the table.

    The abscissae must be strictly increasing and >= 0.  PCHIP preserves
    monotonicity between knots, so the interpolant never overshoots the data
    and its slope stays bounded.  Only continuity is guaranteed; ``fprime``
    raises, which bars the table family from the evaluators that need f'.
    """

    smooth = False

    def __init__(self, xs, values):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.shape != values.shape or xs.size < 2:
            raise ValueError("need matching 1-D arrays with at least two points")
        if not np.all(np.diff(xs) > 0.0):
            raise ValueError("table abscissae must be strictly increasing")
        if xs[0] < 0.0:
            raise ValueError("table abscissae must be >= 0")
        if not np.all(np.isfinite(values)):
            raise ValueError("table values must be finite")
        self._xs = xs
        self._values = values
        self._interp = PchipInterpolator(xs, values, extrapolate=False)

    @classmethod
    def from_csv(cls, path) -> "TableDatum":
        data = np.loadtxt(path, delimiter=",", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"expected a two-column CSV, got shape {data.shape} from {path}")
        return cls(data[:, 0], data[:, 1])

    def f(self, x):
        _check_domain(x)
        x = np.asarray(x, dtype=float)
        out = self._interp(x)
        return _ret(np.where(np.isnan(out), 0.0, out))

    @property
    def cutoff(self) -> float:
        return float(self._xs[-1])

    @property
    def sup_bound(self) -> float:
        return float(np.max(np.abs(self._values)))

    def knots(self):
        xs = self._xs
        if xs.size <= 32:
            return tuple(xs)
        idx = np.linspace(0, xs.size - 1, 32).astype(int)
        return tuple(xs[idx])


def parse_datum(spec: str) -> InitialDatum:
    """Parse a datum specification string.

    Grammar:
        gaussian:center=<r>,width=<r>
        expdecay:rate=<r>
        table:<path to two-column CSV>
    """
    family, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"malformed datum spec {spec!r}: expected '<family>:<args>'")
    if family == "table":
        return TableDatum.from_csv(rest)
    try:
        kwargs = {}
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"malformed parameter {item!r}")
            kwargs[key.strip()] = float(value)
    except ValueError as exc:
        raise ValueError(f"malformed datum spec {spec!r}: {exc}") from None
    if family == "gaussian":
        allowed = {"center", "width"}
    elif family == "expdecay":
        allowed = {"rate"}
    else:
        raise ValueError(f"unknown datum family {family!r} (use gaussian, expdecay or table)")
    unknown = set(kwargs) - allowed
    if unknown:
        raise ValueError(f"unknown parameters {sorted(unknown)} for family {family!r}")
    return GaussianBump(**kwargs) if family == "gaussian" else ExpDecay(**kwargs)
