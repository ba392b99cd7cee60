"""Dual characters, Gauss sums and the Dirichlet series built from them.

A dual character is described prime by prime: for each prime power l^e a
modulus Q and a function on (Z/Q)^x.  Moduli of coprime indices multiply and
the value of chi_{mn} at a Q_n + b Q_m is chi_m(a) chi_n(b).
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import mpmath
import numpy as np

from .arith import (DomainError, divisors, factorize, is_prime, is_squarefree,
                    omega, p_valuation, primes_upto, ramanujan_sum, sigma_power)


class PoleError(ArithmeticError):
    """A factor of a closed form vanishes or blows up at the requested point."""

    def __init__(self, message: str, factor: str = "", location=None):
        super().__init__(message)
        self.factor = factor
        self.location = location


def zeta(s) -> complex:
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1", "zeta", 1)
    return complex(mpmath.zeta(s))


def _pow(p: float, w: complex) -> complex:
    return cmath.exp(w * math.log(p))


def zeta_local(p: int, s) -> complex:
    """zeta_p(s) = (1 - p^{-s})^{-1}."""
    d = 1 - _pow(p, -complex(s))
    if d == 0:
        raise PoleError(f"zeta_{p} has a pole at s = {s}", f"zeta_{p}", s)
    return 1 / d


def zeta_truncated(p: int, s, v: int) -> complex:
    """zeta_p(s; v) = sum_{n=0}^{v} p^{-ns}."""
    x = _pow(p, -complex(s))
    return sum(x ** n for n in range(v + 1))


# ---------------------------------------------------------------- characters

@dataclass(frozen=True)
class Component:
    modulus: int
    values: Mapping[int, complex] | None = None  # None means identically 1 on units

    def __call__(self, a: int) -> complex:
        a %= self.modulus
        if math.gcd(a, self.modulus) != 1:
            return 0
        if self.values is None:
            return 1
        return self.values[a]


TRIVIAL_COMPONENT = Component(1)


@dataclass(frozen=True)
class DualCharacter:
    """Either the principal dual character (modulus n at index n) or a finitely
    generated one, given by its generators {l: (Q_l, values)}."""

    generators: Mapping[int, tuple[int, Mapping[int, complex]]] = field(default_factory=dict)
    principal: bool = False

    def __post_init__(self):
        if self.principal and self.generators:
            raise DomainError("the principal dual character has no generators")
        for ell, (Q, values) in self.generators.items():
            if not is_prime(ell):
                raise DomainError(f"generator index {ell} is not prime")
            if factorize(Q) and {p for p, _ in factorize(Q)} != {ell}:
                raise DomainError(f"modulus {Q} of the generator at {ell} is not a power of {ell}")
            for a, val in values.items():
                if math.gcd(a, Q) == 1 and abs(abs(val) - 1) > 1e-12:
                    raise DomainError(f"value at {a} is not of modulus one")

    @classmethod
    def trivial(cls) -> "DualCharacter":
        return cls(principal=True)

    @property
    def finitely_generated(self) -> bool:
        return not self.principal

    def component(self, ell: int, e: int) -> Component:
        if e == 0:
            return TRIVIAL_COMPONENT
        if self.principal:
            return Component(ell ** e)
        if ell in self.generators:
            Q, values = self.generators[ell]
            return Component(Q, dict(values))
        return TRIVIAL_COMPONENT

    def modulus(self, n: int) -> int:
        return math.prod(self.component(l, e).modulus for l, e in factorize(n))

    def value(self, n: int, a: int) -> complex:
        """chi_n(a), assembled from the prime-power components."""
        parts = [self.component(l, e) for l, e in factorize(n)]
        Qn = math.prod(c.modulus for c in parts)
        out = 1
        for c in parts:
            if c.modulus == 1:
                continue
            cofactor = Qn // c.modulus
            # a = sum_i a_i * (Qn / Q_i), so a_i = a * (Qn / Q_i)^{-1} mod Q_i
            out *= c(a * pow(cofactor, -1, c.modulus))
        return out


def gauss_sum(chi: DualCharacter, n: int, b: int) -> complex:
    """G(b, chi_n) = sum over a in (Z/Q_n)^x of chi_n(a) zeta_{Q_n}^{ab}."""
    if n < 1:
        raise DomainError("gauss_sum needs n >= 1")
    Q = chi.modulus(n)
    total = 0j
    for a in range(Q):
        if math.gcd(a, Q) == 1:
            total += chi.value(n, a) * cmath.exp(2j * math.pi * (a * b % Q) / Q)
    return total


# ------------------------------------------------------- principal character

def L_trivial(b: int, s) -> complex:
    """sum_n G(b, 1_n) n^{-s} = sigma_{s-1}(b) / (zeta(s) |b|^{s-1}); for b = 0 it is
    zeta(s-1)/zeta(s)."""
    s = complex(s)
    z = zeta(s)
    if z == 0:
        raise PoleError(f"zeta vanishes at s = {s}", "1/zeta", s)
    return zeta_times_L_trivial(b, s) / z


def zeta_times_L_trivial(b: int, s) -> complex:
    """zeta(s) L(b, 1, s), which is entire in s for b != 0."""
    s = complex(s)
    if b == 0:
        return zeta(s - 1)
    return sigma_power(b, s - 1) * _pow(abs(b), 1 - s)


def L_local_trivial(b: int, p: int, s) -> complex:
    """sum_m G(b, 1_{p^m}) p^{-ms}."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    s = complex(s)
    if b == 0:
        return (1 - _pow(p, -s)) * zeta_local(p, s - 1)
    v = p_valuation(b, p)
    return (1 - _pow(p, -s)) * zeta_truncated(p, s - 1, v)


def L_local_partial(b: int, p: int, s, v: int) -> complex:
    """sum_{m=0}^{v} G(b, 1_{p^m}) p^{-ms}; the terms use the Gauss-sum table."""
    s = complex(s)
    return sum(ramanujan_sum(b, p ** m) * _pow(p, -m * s) for m in range(v + 1))


def L_level(b: int, N: int, s) -> complex:
    return math.prod((L_local_trivial(b, p, s) for p, _ in factorize(N)), start=1 + 0j)


def _shift_ratio(b: int, N: int, s) -> complex:
    """N^s prod_{p|N} (L_p - L_p(.; v_p(N) - 1)) / L_p."""
    s = complex(s)
    out = _pow(N, s)
    for p, e in factorize(N):
        lp = L_local_trivial(b, p, s)
        if lp == 0:
            raise PoleError(f"local factor at {p} vanishes", f"L_{p}", s)
        out *= (lp - L_local_partial(b, p, s, e - 1)) / lp
    return out


def L_shifted(b: int, N: int, s) -> complex:
    """sum_n G(b, 1_{Nn}) n^{-s}."""
    if N < 1:
        raise DomainError("L_shifted needs N >= 1")
    return L_trivial(b, s) * _shift_ratio(b, N, s)


# ------------------------------------------------------- finitely generated

def L_fingen_closed(chi: DualCharacter, b: int, s) -> complex:
    if not chi.finitely_generated:
        raise DomainError("the principal dual character is not finitely generated")
    s = complex(s)
    primes = sorted(chi.generators)
    out = zeta(s) * math.prod((1 - _pow(p, -s) for p in primes), start=1 + 0j)
    bracket = 1 + 0j
    for r in range(1, len(primes) + 1):
        for subset in itertools.combinations(primes, r):
            den = math.prod((_pow(p, s) - 1 for p in subset), start=1 + 0j)
            if den == 0:
                raise PoleError(f"p^s = 1 for some p in {subset}", "p^s - 1", s)
            bracket += gauss_sum(chi, math.prod(subset), b) / den
    return out * bracket


# -------------------------------------------------------------- direct sums

@lru_cache(maxsize=8)
def _sieves(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Mobius and Euler phi on 0..n."""
    mu = np.ones(n + 1, dtype=np.int64)
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
        phi[p::p] -= phi[p::p] // p
    mu[0] = 0
    return mu, phi


def ramanujan_table(b: int, n_max: int) -> np.ndarray:
    """c[n] = G(b, 1_n) for 0 <= n <= n_max (c[0] unused), via sum_{d | (b, n)} d mu(n/d)."""
    mu, phi = _sieves(n_max)
    if b == 0:
        return phi.copy()
    c = np.zeros(n_max + 1, dtype=np.int64)
    for d in divisors(abs(b)):
        if d > n_max:
            break
        c[d::d] += d * mu[1:n_max // d + 1]
    return c


def L_trivial_direct(b: int, s, terms: int = 10 ** 5) -> complex:
    c = ramanujan_table(b, terms)[1:]
    n = np.arange(1, terms + 1, dtype=float)
    return complex(np.sum(c * np.exp(-complex(s) * np.log(n))))


def L_shifted_direct(b: int, N: int, s, terms: int = 10 ** 5) -> complex:
    c = ramanujan_table(b, N * terms)[N::N]
    n = np.arange(1, terms + 1, dtype=float)
    return complex(np.sum(c * np.exp(-complex(s) * np.log(n))))


def L_direct(chi: DualCharacter, b: int, s, terms: int = 2000) -> complex:
    """Partial sum of sum_n G(b, chi_n) n^{-s} for a finitely generated chi.

    chi_n only sees which generator primes divide n, so the n are bucketed by
    that set and one Gauss sum per bucket is computed from scratch (at the
    smallest n in the bucket)."""
    if not chi.finitely_generated:
        raise DomainError("use L_trivial_direct for the principal dual character")
    s = complex(s)
    n = np.arange(1, terms + 1)
    weights = np.exp(-s * np.log(n.astype(float)))
    primes = sorted(chi.generators)
    support = np.zeros(terms, dtype=np.int64)
    for i, p in enumerate(primes):
        support |= (n % p == 0).astype(np.int64) << i
    total = 0j
    for key in np.unique(support):
        sel = support == key
        total += gauss_sum(chi, int(n[sel][0]), b) * weights[sel].sum()
    return complex(total)


# ------------------------------------------------ normalising factors f, psi

def _check_level(N: int) -> None:
    if N < 1 or not is_squarefree(N):
        raise DomainError(f"level {N} must be a square-free positive integer")


_SMALL = 1e-6


def _removable_limit(fn, s, radius: float = 1e-3, points: int = 16) -> complex:
    """Value at s of a function with a removable singularity there: the mean over
    a small circle, which for a holomorphic function is exact up to O(radius^points)."""
    ring = s + radius * np.exp(2j * math.pi * np.arange(points) / points)
    return complex(np.mean([fn(complex(w)) for w in ring]))


def _quotient(raw, s: complex, name: str) -> complex:
    """num/den from raw(s) = (num, den), switching to the circle mean when both
    parts are small, where direct division would cancel catastrophically."""
    num, den = raw(s)
    if abs(den) > _SMALL or abs(num) > _SMALL:
        if abs(den) <= 1e-12:
            raise PoleError(f"{name} has a pole at s = {s}", f"{name} denominator", s)
        return num / den
    return _removable_limit(lambda w: complex.__truediv__(*raw(w)), s)


def _f_Nb_raw(N: int, b: int, s: complex, k: int) -> tuple[complex, complex]:
    w = 2 * s + k - 2
    num = _pow(N, -(s - 1) - k / 2)
    den = 1 + 0j
    for p, _ in factorize(N):
        v = p_valuation(b, p)
        head = sum((p - 1) * _pow(p, i - 1 + i * w) for i in range(1, v + 1))
        num *= head - _pow(p, v + (v + 1) * w)
        den *= (1 - _pow(p, w)) * zeta_truncated(p, -w - 1, v)
    return num + 1, den


def f_Nb(N: int, b: int, s, k: int) -> complex:
    _check_level(N)
    if b == 0:
        raise DomainError("f_Nb needs b != 0")
    return _quotient(lambda w: _f_Nb_raw(N, b, w, k), complex(s), f"f_{N},{b}")


def _f_N_raw(N: int, s: complex, k: int) -> tuple[complex, complex]:
    den = math.prod((1 - _pow(p, 2 * s + k - 2) for p, _ in factorize(N)), start=1 + 0j)
    return (-1) ** omega(N) * _pow(N, s - 1 + k / 2) + 1, den


def f_N(N: int, s, k: int) -> complex:
    _check_level(N)
    return _quotient(lambda w: _f_N_raw(N, w, k), complex(s), f"f_{N}")


def psi_p(p: int, s, k: int) -> complex:
    s = complex(s)
    return (1 + _pow(p, s + k / 2 - 1)) / (1 + _pow(p, -s - k / 2))


def psi_Nb(N: int, b: int, s, k: int) -> complex:
    """f_{N,b}(1-k-s) / f_{N,b}(s)."""
    s = complex(s)
    return f_Nb(N, b, 1 - k - s, k) / f_Nb(N, b, s, k)
