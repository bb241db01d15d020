"""Closed-form kernels for the half-line drift-diffusion problem.

The initial boundary value problem

    u_t = mu * u_x + (1/2) * u_xx      (t > 0, x >= 0)
    u(0, x) = f(x)                     (x >= 0)
    u_t(t, 0) = nu * u_x(t, 0)         (t > 0)

has, for smooth data, the solution

    u(t, x) = int_0^inf f(y) G(t;x,y) dy - int_0^inf f'(y) H(t;x,y) dy,

where G is the transition density of reflecting Brownian motion with drift
mu on [0, inf) and H carries the boundary coefficient nu through the
derived constant lam = 2*(nu - mu).  This module evaluates G, H, the
integration-by-parts combination G + H_y, the boundary kernel H(t;x,0),
and the joint density g(t;b,s) of the endpoint and running maximum of the
drifted Brownian motion driving the probabilistic picture.

Every product of a large exponential with a Gaussian tail is routed through
:func:`wentzell.gaussian.exp_psi` / :func:`~wentzell.gaussian.exp_phi`;
no raw factor exp(2*mu*y) or exp(2*(nu-mu)*(x+y+nu*t)) is ever formed, so
the y-integrals can be pushed arbitrarily far into the tail.

H and G + H_y have removable singularities at nu = mu.  The 1/(nu - mu)
prefactor loses roughly nine digits to cancellation once |nu - mu| drops
below 1e-9, so the exact nu = mu forms take over at the threshold
``NU_EQ_MU_RTOL`` (relative to max(1, |mu|)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPointError
from .gaussian import exp_phi, exp_psi, phi, psi

# below this relative gap the 1/(nu - mu) form is dominated by cancellation
# and the exact merged-coefficient branch is used instead
NU_EQ_MU_RTOL = 1e-9

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class Problem:
    """Coefficient pair (mu, nu) of the boundary value problem.

    mu is the interior drift, nu the boundary coefficient in
    u_t(t,0) = nu * u_x(t,0).  The derived elastic rate lam = 2*(nu - mu)
    is recomputed on access so it can never go stale.
    """

    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise ValueError(f"coefficients must be finite, got mu={self.mu}, nu={self.nu}")

    @property
    def lam(self) -> float:
        return 2.0 * (self.nu - self.mu)

    def merged_coefficients(self) -> bool:
        """True when nu is close enough to mu that the exact merged branch applies."""
        return abs(self.nu - self.mu) < NU_EQ_MU_RTOL * max(1.0, abs(self.mu))


def _ret(out):
    return out.item() if np.ndim(out) == 0 else out


def _check_time(t):
    if not np.all(np.asarray(t) > 0.0):
        raise InvalidPointError(f"t must be > 0, got {t}")


def _check_point(t, x, y=None):
    _check_time(t)
    if not np.all(np.asarray(x) >= 0.0):
        raise InvalidPointError(f"x must be >= 0, got {x}")
    if y is not None and not np.all(np.asarray(y) >= 0.0):
        raise InvalidPointError(f"y must be >= 0, got {y}")


def kernel_G(p: Problem, t, x, y):
    """Transition density G(t;x,y) of reflecting Brownian motion with drift mu.

        G = (1/sqrt(t)) * [ e^{2 mu y} phi((x+y+mu t)/sqrt(t))
                            + phi((x-y+mu t)/sqrt(t)) ]
            - 2 mu e^{2 mu y} psi((x+y+mu t)/sqrt(t))

    The tail term carries no 1/sqrt(t): only this grouping integrates to 1
    over y in [0, inf) for every t, x, and only it is consistent with the
    closed form implemented in kernel_G_plus_Hy (G = that form minus H_y).
    Nonnegative.
    """
    _check_point(t, x, y)
    mu = p.mu
    rt = np.sqrt(t)
    a = 2.0 * mu * np.asarray(y, dtype=float)
    w_plus = (x + y + mu * t) / rt
    w_minus = (x - y + mu * t) / rt
    val = (exp_phi(a, w_plus) + phi(w_minus)) / rt - 2.0 * mu * exp_psi(a, w_plus)
    return _ret(np.maximum(val, 0.0))


def kernel_H(p: Problem, t, x, y):
    """Boundary kernel H(t;x,y) weighting f' in the smooth-data solution.

    For nu != mu:

        H = (e^{2 mu y}/(nu-mu)) * [ (2 nu - mu) e^{2(nu-mu)(x+y+nu t)}
                                        * psi((x+y+(2 nu - mu)t)/sqrt(t))
                                     - mu * psi((x+y+mu t)/sqrt(t)) ]

    and for nu = mu the limiting form:

        H = 2 e^{2 mu y} * [ (1 + mu (x+y+mu t)) psi((x+y+mu t)/sqrt(t))
                             - mu sqrt(t) phi((x+y+mu t)/sqrt(t)) ]
    """
    _check_point(t, x, y)
    mu, nu = p.mu, p.nu
    rt = np.sqrt(t)
    a = 2.0 * mu * np.asarray(y, dtype=float)
    w_mu = (x + y + mu * t) / rt
    if p.merged_coefficients():
        val = 2.0 * (
            (1.0 + mu * (x + y + mu * t)) * exp_psi(a, w_mu)
            - mu * rt * exp_phi(a, w_mu)
        )
    else:
        a_el = a + 2.0 * (nu - mu) * (x + y + nu * t)
        w_el = (x + y + (2.0 * nu - mu) * t) / rt
        val = ((2.0 * nu - mu) * exp_psi(a_el, w_el) - mu * exp_psi(a, w_mu)) / (nu - mu)
    return _ret(np.asarray(val))


def kernel_G_plus_Hy(p: Problem, t, x, y):
    """The combination (G + H_y)(t;x,y) weighting f in the non-smooth solution.

    For nu != mu:

        (1/sqrt(t)) [ phi((x-y+mu t)/sqrt(t)) - e^{2 mu y} phi((x+y+mu t)/sqrt(t)) ]
        - (2 nu e^{2 mu y}/(nu-mu)) [ mu psi((x+y+mu t)/sqrt(t))
              + (mu - 2 nu) e^{2(nu-mu)(x+y+nu t)} psi((x+y+(2 nu - mu)t)/sqrt(t)) ]

    and for nu = mu:

        (1/sqrt(t)) phi((x-y+mu t)/sqrt(t))
        - (e^{2 mu y}/sqrt(t)) [ (1 + 4 mu^2 t) phi((x+y+mu t)/sqrt(t))
              - 4 mu (1 + mu (x+y) + mu^2 t) sqrt(t) psi((x+y+mu t)/sqrt(t)) ]
    """
    _check_point(t, x, y)
    mu, nu = p.mu, p.nu
    rt = np.sqrt(t)
    a = 2.0 * mu * np.asarray(y, dtype=float)
    w_mu = (x + y + mu * t) / rt
    w_minus = (x - y + mu * t) / rt
    if p.merged_coefficients():
        val = phi(w_minus) / rt - (
            (1.0 + 4.0 * mu * mu * t) * exp_phi(a, w_mu)
            - 4.0 * mu * (1.0 + mu * (x + y) + mu * mu * t) * rt * exp_psi(a, w_mu)
        ) / rt
    else:
        a_el = a + 2.0 * (nu - mu) * (x + y + nu * t)
        w_el = (x + y + (2.0 * nu - mu) * t) / rt
        val = (phi(w_minus) - exp_phi(a, w_mu)) / rt - (2.0 * nu / (nu - mu)) * (
            mu * exp_psi(a, w_mu) + (mu - 2.0 * nu) * exp_psi(a_el, w_el)
        )
    return _ret(np.asarray(val))


def kernel_H0(p: Problem, t, x):
    """The boundary kernel at y = 0, H(t;x,0), in its own closed form.

    For nu != mu:

        (1/(nu-mu)) [ (2 nu - mu) e^{2(nu-mu)(x+nu t)} psi((x+(2 nu - mu)t)/sqrt(t))
                      - mu psi((x+mu t)/sqrt(t)) ]

    and for nu = mu:

        2 [ (1 + mu (x+mu t)) psi((x+mu t)/sqrt(t)) - mu sqrt(t) phi((x+mu t)/sqrt(t)) ]
    """
    _check_point(t, x)
    mu, nu = p.mu, p.nu
    rt = np.sqrt(t)
    w_mu = (x + mu * t) / rt
    if p.merged_coefficients():
        val = 2.0 * ((1.0 + mu * (x + mu * t)) * psi(w_mu) - mu * rt * phi(w_mu))
    else:
        a_el = 2.0 * (nu - mu) * (x + nu * t)
        w_el = (x + (2.0 * nu - mu) * t) / rt
        val = ((2.0 * nu - mu) * exp_psi(a_el, w_el) - mu * psi(w_mu)) / (nu - mu)
    return _ret(np.asarray(val))


def joint_density_g(p: Problem, t, b, s):
    """Joint density g(t;b,s) of the endpoint and running maximum.

    For B a standard Brownian motion, the pair

        (B_t - mu t,  sup_{r<=t} (B_r - mu r))

    has density

        g(t;b,s) = sqrt(2/pi) t^{-3/2} (2s - b)
                   * exp[ -(2s - b)^2/(2t) - mu (b + mu t / 2) ]

    on the support {b <= s, s >= 0}, and 0 elsewhere (returned as an exact 0,
    not an error, so that 2-D quadrature can sweep rectangles freely).
    """
    _check_time(t)
    mu = p.mu
    b = np.asarray(b, dtype=float)
    s = np.asarray(s, dtype=float)
    support = (s >= 0.0) & (b <= s)
    m = 2.0 * s - b
    expo = np.where(support, -m * m / (2.0 * t) - mu * (b + mu * t / 2.0), -np.inf)
    val = _SQRT_2_OVER_PI * t ** (-1.5) * np.where(support, m, 0.0) * np.exp(expo)
    return _ret(val)


def local_time_integral(lam, ell):
    """The accumulated creation/killing factor int_0^ell exp(-lam*r) dr.

    Equals ell when lam = 0 and (1 - exp(-lam*ell))/lam otherwise; the
    expm1 form keeps the lam -> 0 limit free of cancellation, so the
    nu ~ mu regime stays accurate.
    """
    ell = np.asarray(ell, dtype=float)
    if lam == 0.0:
        return _ret(ell + 0.0)
    with np.errstate(over="ignore"):
        out = -np.expm1(-lam * ell) / lam
    return _ret(out)
