"""Non-holomorphic Eisenstein series for R(N).

Notation: for a weight k (even) and spectral parameter s we use
q = 2s + k, alpha = s + k, beta = s, and the dual point 1 - k - s.  The basic
object is

    g_N(z, alpha, beta) = sum over the L and R index sets of |w|^{-q} (w/|w|)^{-k},

with w = sqrt(N) m z + n on the L side and w = m z + sqrt(N) n on the R side;
G_{N,k}(z, s) = y^s g_N(z, s + k, s) / 2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .arith import DomainError, factorize, is_prime, is_squarefree, sigma_power
from .group import GroupElement, act
from .lseries import (PoleError, L_level, _shift_ratio, f_N, f_Nb, zeta,
                      zeta_times_L_trivial)
from .special import whittaker_w

DEFAULT_NMAX = 64
DEFAULT_CUTOFF = 400


class ConvergenceError(ArithmeticError):
    pass


def auto_terms(N: int, y: float, n_max: int | None = None) -> int:
    """Number of Fourier terms: the default, raised until e^{-2 pi n y / sqrt N} < e^{-60}
    (the margin covers polynomial growth of the coefficients)."""
    if n_max is not None:
        return n_max
    if y < 0.02:
        raise ConvergenceError(f"Im z = {y} is too close to the real axis")
    return max(DEFAULT_NMAX, math.ceil(60 * math.sqrt(N) / (2 * math.pi * y)))


@dataclass(frozen=True)
class SpectralPoint:
    s: complex
    k: int

    def __post_init__(self):
        if self.k % 2:
            raise DomainError(f"weight {self.k} must be even")
        object.__setattr__(self, "s", complex(self.s))

    @property
    def q(self) -> complex:
        return 2 * self.s + self.k

    @property
    def alpha(self) -> complex:
        return self.s + self.k

    @property
    def beta(self) -> complex:
        return self.s

    @property
    def dual(self) -> "SpectralPoint":
        return SpectralPoint(1 - self.k - self.s, self.k)


def _weight(alpha, beta) -> tuple[complex, int]:
    q = complex(alpha) + complex(beta)
    kc = complex(alpha) - complex(beta)
    k = int(round(kc.real))
    if abs(kc - k) > 1e-12 or k % 2:
        raise DomainError("alpha - beta must be an even integer")
    return q, k


def _gamma(x) -> complex:
    return complex(mpmath.gamma(x))


def _rgamma(x) -> complex:
    return complex(mpmath.rgamma(x))


def _pow(base: float, w: complex) -> complex:
    return cmath.exp(w * math.log(base))


# ------------------------------------------------------------ lattice sums

@dataclass(frozen=True)
class LatticeIndexSet:
    variant: str
    N: int
    cutoff: int

    def mask(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        M = self.cutoff
        m, n = np.meshgrid(np.arange(-M, M + 1), np.arange(-M, M + 1), indexing="ij")
        g = np.gcd(m, n)
        if self.variant == "L":
            keep = np.gcd(self.N * m, n) == g
        elif self.variant == "R":
            keep = np.gcd(m, self.N * n) == g
        else:
            raise DomainError(f"unknown variant {self.variant!r}")
        keep &= (m != 0) | (n != 0)
        return m[keep], n[keep], keep


@dataclass(frozen=True)
class DirectSum:
    value: complex
    tail: float


def direct_g(N: int, variant: str, z: complex, alpha, beta, cutoff: int = DEFAULT_CUTOFF) -> DirectSum:
    """Truncated lattice sum over |m|, |n| <= cutoff."""
    q, k = _weight(alpha, beta)
    if q.real <= 2:
        raise ConvergenceError("the lattice sum needs Re(alpha + beta) > 2")
    if z.imag <= 0:
        raise DomainError("z must lie in the upper half plane")
    if cutoff < 10:
        raise DomainError("cutoff must be at least 10")
    if variant == "full":
        a = direct_g(N, "L", z, alpha, beta, cutoff)
        b = direct_g(N, "R", z, alpha, beta, cutoff)
        return DirectSum(a.value + b.value, a.tail + b.tail)
    m, n, _ = LatticeIndexSet(variant, N, cutoff).mask()
    rN = math.sqrt(N)
    w = rN * m * z + n if variant == "L" else m * z + rN * n
    r = np.abs(w)
    terms = np.exp(-q * np.log(r)) * (w / r) ** (-k)
    # pairwise summation keeps the result reproducible
    value = complex(np.sum(terms))
    # shortest vector of the lattice times the cutoff bounds the excluded region
    short = min(abs(z) * (rN if variant == "L" else 1), 1 if variant == "L" else rN, z.imag)
    tail = 2 * math.pi * (short * cutoff) ** (2 - q.real) / (q.real - 2) / short ** 2
    return DirectSum(value, tail)


def direct_G(N: int, z: complex, sp: SpectralPoint, cutoff: int = DEFAULT_CUTOFF) -> DirectSum:
    d = direct_g(N, "full", z, sp.alpha, sp.beta, cutoff)
    scale = 0.5 * _pow(z.imag, sp.s)
    return DirectSum(scale * d.value, abs(scale) * d.tail)


# ---------------------------------------------------------- Fourier side

@dataclass
class FourierExpansion:
    """g_N(z) = constant(y) + sum_n coefficient_n(y) e^{2 pi i n x / sqrt N}."""
    N: int
    alpha: complex
    beta: complex
    n_max: int
    constant: complex
    constant_parts: dict
    coefficients: dict = field(default_factory=dict)
    tail: float = 0.0

    def value(self, x: float) -> complex:
        period = math.sqrt(self.N)
        total = self.constant
        for n in sorted(self.coefficients, key=lambda t: (abs(t), t)):
            total += self.coefficients[n] * cmath.exp(2j * math.pi * n * x / period)
        return total


def _level_bracket(b: int, N: int, q: complex) -> complex:
    """zeta(q) [N^{-q/2} L(b, 1_{N.}, q) + L(b, 1_., q) / L_N(b, 1_., q)], poles cancelled."""
    zl = zeta_times_L_trivial(b, q)
    return zl * (_pow(N, -q / 2) * _shift_ratio(b, N, q) + 1 / L_level(b, N, q))


def fourier_expansion(N: int, y: float, alpha, beta, n_max: int | None = None) -> FourierExpansion:
    q, k = _weight(alpha, beta)
    if y <= 0:
        raise DomainError("y must be positive")
    n_max = auto_terms(N, y, n_max)
    rN = math.sqrt(N)
    sign = (-1) ** (k // 2)
    # m = 0 vectors: both index sets contain them when N = 1, only L otherwise
    zeta_q = zeta(q)
    const_flat = 2 * zeta_q * (2 if N == 1 else 1)
    h0 = 2 * math.pi * _gamma(q - 1) * _rgamma(alpha) * _rgamma(beta) if _rgamma(q - 1) != 0 else None
    if h0 is None:
        raise PoleError(f"Gamma(q - 1) has a pole at q = {q}", "Gamma(q-1)", q)
    const_power = (2 * sign * _pow(N, -q / 2) * _pow(2 * y / rN, 1 - q) * h0
                   * _level_bracket(0, N, q)) if h0 != 0 else 0j
    exp = FourierExpansion(N, complex(alpha), complex(beta), n_max, const_flat + const_power,
                           {"flat": const_flat, "power": const_power})
    ns = np.arange(1, n_max + 1)
    Y = 2 * math.pi * ns * y / rN
    pref = 2 * sign * _pow(math.sqrt(2) * math.pi / rN, q)
    for eps in (1, -1):
        rg = _rgamma(q / 2 + eps * k / 2)
        if rg == 0:
            for n in ns:
                exp.coefficients[int(eps * n)] = 0j
            continue
        W = Y ** (-q / 2) * whittaker_w(eps * k / 2, (q - 1) / 2, 2 * Y)
        for n, w in zip(ns, W):
            nn = int(eps * n)
            exp.coefficients[nn] = pref * rg * _pow(n, q - 1) * w * _level_bracket(nn, N, q)
    last = max(abs(exp.coefficients[n_max]), abs(exp.coefficients[-n_max]))
    ratio = math.exp(-2 * math.pi * y / rN)
    exp.tail = last * ratio / (1 - ratio) * 2
    return exp


def fourier_g(N: int, z: complex, alpha, beta, n_max: int | None = None) -> DirectSum:
    z = complex(z)
    exp = fourier_expansion(N, z.imag, alpha, beta, n_max)
    return DirectSum(exp.value(z.real), exp.tail)


def fourier_G(N: int, z: complex, sp: SpectralPoint, n_max: int | None = None) -> DirectSum:
    z = complex(z)
    g = fourier_g(N, z, sp.alpha, sp.beta, n_max)
    scale = 0.5 * _pow(z.imag, sp.s)
    return DirectSum(scale * g.value, abs(scale) * g.tail)


# ------------------------------------------------------ completed series

def completion_factor(N: int, sp: SpectralPoint) -> complex:
    """(pi/sqrt N)^{-s-k/2} Gamma(s + k/2 + |k|/2) f_N(s)."""
    s, k = sp.s, sp.k
    return (_pow(math.pi / math.sqrt(N), -s - k / 2) * _gamma(s + k / 2 + abs(k) / 2)
            * f_N(N, s, k))


def _check_squarefree(N: int) -> None:
    if N < 1 or not is_squarefree(N):
        raise DomainError(f"level {N} must be square-free")


def g_hat(N: int, k: int, z: complex, s, n_max: int | None = None) -> DirectSum:
    """The completed series through its definition: completion factor times G_{N,k}.

    The Gamma factors are combined before evaluation so that the poles of
    Gamma(s + k/2 + |k|/2) cancel against the reciprocal Gammas of the
    expansion."""
    _check_squarefree(N)
    z = complex(z)
    sp = SpectralPoint(s, k)
    s, q, y = sp.s, sp.q, z.imag
    n_max = auto_terms(N, y, n_max)
    rN = math.sqrt(N)
    big = s + k / 2 + abs(k) / 2
    front = _pow(math.pi / rN, -s - k / 2) * f_N(N, s, k) * 0.5 * _pow(y, s)
    sign = (-1) ** (k // 2)
    flat = 2 * zeta(q) * (2 if N == 1 else 1) * _gamma(big)
    # Gamma(big) / (Gamma(alpha) Gamma(beta)) with one of the two cancelled
    cancel = _rgamma(s) if k >= 0 else _rgamma(s + k)
    power = (2 * sign * _pow(N, -q / 2) * _pow(2 * y / rN, 1 - q) * 2 * math.pi
             * _gamma(q - 1) * cancel * _level_bracket(0, N, q))
    total = flat + power
    ns = np.arange(1, n_max + 1)
    Y = 2 * math.pi * ns * y / rN
    pref = 2 * sign * _pow(math.sqrt(2) * math.pi / rN, q)
    coeff_last = 0.0
    for eps in (1, -1):
        lower = s + k / 2 + eps * k / 2
        ratio = _gamma_ratio(big, lower)
        if ratio == 0:
            continue
        W = Y ** (-q / 2) * whittaker_w(eps * k / 2, (q - 1) / 2, 2 * Y)
        for n, w in zip(ns, W):
            nn = int(eps * n)
            c = pref * ratio * _pow(n, q - 1) * w * _level_bracket(nn, N, q)
            total += c * cmath.exp(2j * math.pi * nn * z.real / rN)
            if n == n_max:
                coeff_last = max(coeff_last, abs(c))
    r = math.exp(-2 * math.pi * y / rN)
    tail = abs(front) * coeff_last * 2 * r / (1 - r)
    return DirectSum(front * total, tail)


def _gamma_ratio(top, bottom) -> complex:
    """Gamma(top)/Gamma(bottom) for top - bottom a non-negative integer (a rising factorial)."""
    diff = top - bottom
    j = int(round(diff.real))
    if abs(diff - j) < 1e-12 and j >= 0:
        out = 1 + 0j
        for i in range(j):
            out *= bottom + i
        return out
    return _gamma(top) * _rgamma(bottom)


def g_tilde(N: int, k: int, z: complex, s, n_max: int | None = None) -> DirectSum:
    s = complex(s)
    factor = (s + k / 2) * (s + k / 2 - 1)
    g = g_hat(N, k, z, s, n_max)
    return DirectSum(factor * g.value, abs(factor) * g.tail)


def completed_zeta(s) -> complex:
    s = complex(s)
    return complex(mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s))


def g_hat_expansion(N: int, k: int, z: complex, s, n_max: int | None = None) -> DirectSum:
    """The completed series from its closed three-part expansion (square-free N > 1)."""
    _check_squarefree(N)
    if N == 1:
        raise DomainError("the three-part expansion is stated for N > 1; see g_hat_level_one")
    z = complex(z)
    sp = SpectralPoint(s, k)
    s, y = sp.s, z.imag
    n_max = auto_terms(N, y, n_max)
    rN = math.sqrt(N)
    big = s + k / 2 + abs(k) / 2
    sign = (-1) ** (k // 2)
    primes = [p for p, _ in factorize(N)]
    fN = f_N(N, s, k)
    first = (_gamma_ratio(big, s + k / 2) * completed_zeta(2 * s + k) * _pow(y, s)
             * _pow(rN, s + k / 2) * fN)
    local_a = math.prod(((1 - 1 / p) / (1 - _pow(p, -2 * s - k)) for p in primes), start=1 + 0j)
    local_b = math.prod(((1 - _pow(p, 1 - k - 2 * s)) / (1 - _pow(p, -2 * s - k)) for p in primes),
                        start=1 + 0j)
    second = (sign * _gamma(s + k / 2) * _gamma(big) * _rgamma(s + k) * _rgamma(s)
              * completed_zeta(2 - k - 2 * s) * _pow(y, 1 - k - s) * fN
              * (_pow(rN, 1 - s - k / 2) * local_a + _pow(rN, -1 + s + k / 2) * local_b))
    total = first + second
    ns = np.arange(1, n_max + 1)
    arg = 4 * math.pi * ns * y / rN
    coeff_last = 0.0
    for eps in (1, -1):
        ratio = _gamma_ratio(big, s + k / 2 + eps * k / 2)
        if ratio == 0:
            continue
        W = whittaker_w(eps * k / 2, s + (k - 1) / 2, arg)
        for n, w in zip(ns, W):
            nn = int(eps * n)
            c = (sign * _pow(y, -k / 2) * ratio * _pow(n, -s - k / 2)
                 * sigma_power(n, 2 * s + k - 1) * w * f_Nb(N, nn, 1 - k - s, k) * fN)
            total += c * cmath.exp(2j * math.pi * nn * z.real / rN)
            if n == n_max:
                coeff_last = max(coeff_last, abs(c))
    r = math.exp(-2 * math.pi * y / rN)
    return DirectSum(total, coeff_last * 2 * r / (1 - r))


def g_hat_level_one(k: int, z: complex, s, n_max: int | None = None) -> DirectSum:
    """Completed series for SL_2(Z), pi^{-s-k/2} Gamma(s+k/2+|k|/2) G_k(z, s), by its expansion."""
    z = complex(z)
    sp = SpectralPoint(s, k)
    s, y = sp.s, z.imag
    n_max = auto_terms(1, y, n_max)
    big = s + k / 2 + abs(k) / 2
    sign = (-1) ** (k // 2)
    total = _gamma_ratio(big, s + k / 2) * completed_zeta(2 * s + k) * _pow(y, s)
    total += (sign * _gamma(s + k / 2) * _gamma(big) * _rgamma(s + k) * _rgamma(s)
              * completed_zeta(2 - 2 * s - k) * _pow(y, 1 - s - k))
    ns = np.arange(1, n_max + 1)
    arg = 4 * math.pi * ns * y
    for eps in (1, -1):
        ratio = _gamma_ratio(big, s + k / 2 + eps * k / 2)
        if ratio == 0:
            continue
        W = whittaker_w(eps * k / 2, s + (k - 1) / 2, arg)
        for n, w in zip(ns, W):
            c = sign * _pow(y, -k / 2) * ratio * _pow(n, -s - k / 2) * sigma_power(n, 2 * s + k - 1) * w
            total += c * cmath.exp(2j * math.pi * eps * n * z.real)
    return DirectSum(total, 0.0)


# ----------------------------------------------------------- Taylor data

def taylor_numeric(N: int, k: int, m: int, z: complex, radius: float = 0.1,
                   points: int = 32, n_max: int | None = None) -> complex:
    """m-th Taylor coefficient of the doubly completed series at s = 0 by the
    trapezoid rule for Cauchy's integral on |s| = radius."""
    theta = 2 * math.pi * (np.arange(points) + 0.5) / points
    nodes = radius * np.exp(1j * theta)
    vals = np.array([g_tilde(N, k, z, complex(s), n_max).value for s in nodes])
    return complex(np.mean(vals * nodes ** (-m)))


def taylor_T(p: int, k: int, m: int, z: complex, n_max: int | None = None) -> complex:
    """T_{p,m,k}(z), the m-th Taylor coefficient of the doubly completed series at s = 0.

    (k, m) = (0, 0), (0, 1) and (2, 1) have closed forms; everything else is
    extracted numerically from a circle of radius 1e-2 around s = 0."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    z = complex(z)
    y = z.imag
    n_max = auto_terms(p, y, n_max)
    rp = math.sqrt(p)
    if (k, m) == (0, 0):
        return p / (2 * (p + 1)) + 0j
    if (k, m) == (0, 1):
        # Laurent data of the k = 0 series at s = 0, with f_p(s) = 1/(1 + p^{s-1})
        f0 = p / (p + 1)
        const = (-(float(mpmath.euler) + 1) / 2 + 0.5 * math.log(4 * math.pi) + 0.25 * math.log(p)
                 + 0.5 * math.log(y) - math.log(p) / (2 * (p + 1))
                 - math.pi / 12 * (rp + 1 / rp) * y)
        series = sum(sigma_power(n, -1) * f_Nb(p, n, 1, 0).real
                     * 2 * math.cos(2 * math.pi * n * z.real / rp) * math.exp(-2 * math.pi * n * y / rp)
                     for n in range(1, n_max + 1))
        return complex(f0 * (const - series))
    if (k, m) == (2, 1):
        return f_N(p, 0, 2).real * weight_two_quasimodular(p, z, n_max)
    return taylor_numeric(p, k, m, z, radius=1e-2, points=32, n_max=n_max)


def weight_two_quasimodular(p: int, z: complex, n_max: int | None = None) -> complex:
    """(pi/6) sqrt p - p/((1+p) y) - (4 pi/sqrt p) sum sigma_1(n) f_{p,n}(-1) e^{2 pi i n z/sqrt p}.

    Twice the first Taylor coefficient of the weight 2 doubly completed series;
    an almost holomorphic modular form of weight 2 for R(p)."""
    z = complex(z)
    n_max = auto_terms(p, z.imag, n_max)
    rp = math.sqrt(p)
    q = cmath.exp(2j * math.pi * z / rp)
    series = sum(sigma_power(n, 1) * f_Nb(p, n, -1, 2) * q ** n for n in range(1, n_max + 1))
    return math.pi / 6 * rp - p / ((1 + p) * z.imag) - 4 * math.pi / rp * series


# ------------------------------------------------------------------ checks

@dataclass(frozen=True)
class Residual:
    value: float
    tail: float
    details: dict = field(default_factory=dict)


def check_functional_equation(p: int, k: int, z: complex, s, n_max: int | None = None) -> Residual:
    """|G^(z, s) - G^(z, 1-k-s)|, with the doubly completed version in details."""
    sp = SpectralPoint(s, k)
    a = g_hat(p, k, z, sp.s, n_max)
    b = g_hat(p, k, z, sp.dual.s, n_max)
    ta = g_tilde(p, k, z, sp.s, n_max)
    tb = g_tilde(p, k, z, sp.dual.s, n_max)
    return Residual(abs(a.value - b.value), a.tail + b.tail,
                    {"hat": [a.value, b.value], "tilde_residual": abs(ta.value - tb.value)})


def automorphy_factor(gamma: GroupElement, z: complex) -> complex:
    """c z + d for the real matrix of gamma: c sqrt(N) z + d (plus) or c z + d sqrt(N) (minus)."""
    (_, _), (C, D) = gamma.matrix()
    return C * complex(z) + D


def G_value(N: int, k: int, z: complex, s, mode: str = "fourier", n_max: int | None = None,
            cutoff: int = DEFAULT_CUTOFF) -> DirectSum:
    sp = SpectralPoint(s, k)
    if mode == "direct":
        return direct_G(N, complex(z), sp, cutoff)
    if mode == "fourier":
        return fourier_G(N, complex(z), sp, n_max)
    raise DomainError(f"unknown mode {mode!r}")


def check_modular_invariance(N: int, k: int, z: complex, s, gamma: GroupElement,
                             mode: str = "fourier", n_max: int | None = None,
                             cutoff: int = DEFAULT_CUTOFF) -> Residual:
    """|j(gamma, z)^{-k} G(gamma z) - G(z)| for the weight-k slash action."""
    if gamma.N != N:
        raise DomainError("gamma lives at a different level")
    z = complex(z)
    w = act(gamma, z)
    j = automorphy_factor(gamma, z)
    left = G_value(N, k, w, s, mode, n_max, cutoff)
    right = G_value(N, k, z, s, mode, n_max, cutoff)
    jk = j ** (-k)
    return Residual(abs(jk * left.value - right.value), abs(jk) * left.tail + right.tail,
                    {"gamma_z": w, "j": j})


def laplacian_fd(f, k: int, z: complex, h: float) -> complex:
    """Five-point weight-k hyperbolic Laplacian y^2 (f_xx + f_yy) - i k y (f_x + i f_y)."""
    z = complex(z)
    y = z.imag
    c = f(z)
    e, w_, n, s_ = f(z + h), f(z - h), f(z + 1j * h), f(z - 1j * h)
    fxx = (e + w_ - 2 * c) / h ** 2
    fyy = (n + s_ - 2 * c) / h ** 2
    fx = (e - w_) / (2 * h)
    fy = (n - s_) / (2 * h)
    return y * y * (fxx + fyy) - 1j * k * y * (fx + 1j * fy)


def check_eigenfunction(N: int, k: int, z: complex, s, h: float = 1e-3,
                        n_max: int | None = None) -> Residual:
    """|Delta_k G - s(s+k-1) G| with the finite-difference Laplacian at step h."""
    sp = SpectralPoint(s, k)
    z = complex(z)
    n_max = auto_terms(N, z.imag - h, n_max)
    f = lambda w: fourier_G(N, w, sp, n_max).value
    lap = laplacian_fd(f, k, z, h)
    eig = sp.s * (sp.s + k - 1)
    return Residual(abs(lap - eig * f(z)), 0.0, {"laplacian": lap, "eigenvalue": eig})


def fourier_table(N: int, k: int, z: complex, s, n_max: int) -> list[tuple[int, complex, float]]:
    """Rows (n, coefficient, tail bound) of G_{N,k}(., s) = sum_n c_n(y) e^{2 pi i n x/sqrt N},
    n from -n_max to n_max; the tail bound is that of the whole truncated series."""
    sp = SpectralPoint(s, k)
    z = complex(z)
    exp = fourier_expansion(N, z.imag, sp.alpha, sp.beta, n_max)
    scale = 0.5 * _pow(z.imag, sp.s)
    rows = []
    for n in range(-n_max, n_max + 1):
        c = exp.constant if n == 0 else exp.coefficients[n]
        rows.append((n, scale * c, abs(scale) * exp.tail))
    return rows
