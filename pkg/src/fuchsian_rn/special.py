"""Whittaker W-functions, the kernel h(t; alpha, beta) and the upper incomplete gamma.

The workhorse is a double-exponential trapezoid rule for

    I(a, b, Y) = int_0^inf e^{-u} u^{a-1} (u + Y)^b du,   Re a > 0, Y >= 0,

under u = exp(t - e^{-t}).  The substitution makes the integrand decay doubly
exponentially at both ends, including the algebraic singularity at u = 0.
"""
from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np


class UnsupportedParameters(ValueError):
    """Parameters outside the region the quadrature (plus recurrence) covers."""


MAX_SHIFTS = 8
# below this Re(a) an imaginary part of a makes u^{a-1} oscillate too fast near 0
_MIN_DIRECT_EXPONENT = 1.0
_STEP = 1.0 / 24


def _nodes(refine: int) -> np.ndarray:
    h = _STEP / refine
    n = int(round(16.7 / h))
    return np.arange(-n, n + 1) * h, h


def _laplace_power_integral(a: complex, b: complex, Y, refine: int = 1):
    """I(a, b, Y) for an array of Y >= 0."""
    if a.real <= 0:
        raise UnsupportedParameters(f"Re(a) = {a.real} <= 0")
    Y = np.atleast_1d(np.asarray(Y, dtype=float))
    t, h = _nodes(refine)
    log_u = t - np.exp(-t)
    # clip where the integrand is far below double precision anyway
    keep = (log_u < 7.0) & (a.real * log_u > -745.0)
    t, log_u = t[keep], log_u[keep]
    u = np.exp(log_u)
    jac = np.log1p(np.exp(-t))  # du = u (1 + e^{-t}) dt
    base = -u + a * log_u + jac
    logs = base[None, :] + b * np.log(u[None, :] + Y[:, None])
    return h * np.exp(logs).sum(axis=1)


def _rgamma(x: complex) -> complex:
    return complex(mpmath.rgamma(x))


def _whittaker_direct(kappa: complex, mu: complex, y: np.ndarray, refine: int) -> np.ndarray:
    a = mu - kappa + 0.5
    b = mu + kappa - 0.5
    pref = np.exp((0.5 - mu) * np.log(y) - y / 2) * _rgamma(a)
    return pref * _laplace_power_integral(a, b, y, refine)


def _whittaker_array(kappa, mu, y, refine: int = 1) -> np.ndarray:
    kappa, mu = complex(kappa), complex(mu)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ValueError("whittaker_w needs y > 0")
    # W is even in mu; take the sign giving the larger exponent at u = 0
    if mu.real < 0 or (mu.real == 0 and mu.imag < 0):
        mu = -mu
    a = mu - kappa + 0.5
    if a.real >= _MIN_DIRECT_EXPONENT:
        return _whittaker_direct(kappa, mu, y, refine)
    shifts = math.floor(_MIN_DIRECT_EXPONENT - a.real) + 1
    if shifts + 1 > MAX_SHIFTS:
        raise UnsupportedParameters(f"kappa={kappa}, mu={mu} needs {shifts} shifts")
    k0 = kappa - shifts
    lower = _whittaker_direct(k0 - 1, mu, y, refine)
    upper = _whittaker_direct(k0, mu, y, refine)
    # W_{k+1} = (y - 2k) W_k - ((k - 1/2)^2 - mu^2) W_{k-1}
    kk = k0
    for _ in range(shifts):
        lower, upper = upper, (y - 2 * kk) * upper - ((kk - 0.5) ** 2 - mu * mu) * lower
        kk += 1
    return upper


def whittaker_w(kappa, mu, y, refine: int = 1):
    """W_{kappa,mu}(y) for y > 0; accepts a scalar or an array of y."""
    out = _whittaker_array(kappa, mu, y, refine)
    return complex(out[0]) if np.ndim(y) == 0 else out


def modified_w(y_signed, alpha, beta):
    """W(eps*y; alpha, beta) = y^{-q/2} W_{eps*k/2, (q-1)/2}(2y)."""
    q = complex(alpha) + complex(beta)
    k = complex(alpha) - complex(beta)
    ys = np.atleast_1d(np.asarray(y_signed, dtype=float))
    if np.any(ys == 0):
        raise ValueError("modified_w needs a nonzero argument")
    out = np.empty(ys.shape, dtype=complex)
    for eps in (1, -1):
        sel = np.sign(ys) == eps
        if sel.any():
            y = np.abs(ys[sel])
            out[sel] = y ** (-q / 2) * _whittaker_array(eps * k / 2, (q - 1) / 2, 2 * y)
    return complex(out[0]) if np.ndim(y_signed) == 0 else out


def h_kernel(t: float, alpha, beta) -> complex:
    """h(t) = int_R (1 - ix)^{-alpha} (1 + ix)^{-beta} e^{-itx} dx via the one-sided form."""
    alpha, beta = complex(alpha), complex(beta)
    q = alpha + beta
    if q.real <= 1:
        raise ValueError("h_kernel needs Re(alpha + beta) > 1")
    ra, rb = _rgamma(alpha), _rgamma(beta)
    if t == 0:
        return 2 * math.pi * 2 ** (1 - q) * complex(mpmath.gamma(q - 1)) * ra * rb
    if rb == 0 and t > 0 or ra == 0 and t < 0:
        return 0j
    # u = |t| + v turns the range u > |t| into v > 0
    if t > 0:
        integral = _laplace_power_integral(beta, alpha - 1, 2 * t)[0]
    else:
        integral = _laplace_power_integral(alpha, beta - 1, -2 * t)[0]
    return 2 * math.pi * 2 ** (1 - q) * ra * rb * cmath.exp(-abs(t)) * integral


def incomplete_gamma_upper(a, x: float, tol: float = 1e-15, max_iter: int = 100000) -> complex:
    """Gamma(a, x) for x > 0 by the Legendre continued fraction (modified Lentz)."""
    if x <= 0:
        raise ValueError("incomplete_gamma_upper needs x > 0")
    a = complex(a)
    tiny = 1e-300
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b
    f = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        d = tiny if d == 0 else d
        c = b + an / c
        c = tiny if c == 0 else c
        d = 1 / d
        delta = d * c
        f *= delta
        if abs(delta - 1) < tol:
            break
    else:
        raise ArithmeticError("continued fraction did not converge")
    return cmath.exp(-x + a * math.log(x)) * f
