"""Exact elementary number theory used throughout the package."""
from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd, isqrt


class DomainError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as ((p, e), ...), ascending."""
    n = abs(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _positive(n: int) -> None:
    if n <= 0:
        raise DomainError(f"expected a positive integer, got {n}")


def divisors(n: int) -> list[int]:
    _positive(n)
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    _positive(n)
    fac = factorize(n) if n > 1 else ()
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    _positive(n)
    result = n
    for p, _ in (factorize(n) if n > 1 else ()):
        result -= result // p
    return result


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    _positive(n)
    return len(factorize(n)) if n > 1 else 0


def is_squarefree(n: int) -> bool:
    _positive(n)
    return n == 1 or all(e == 1 for _, e in factorize(n))


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ramanujan_sum(b: int, n: int) -> int:
    """Sum of the b-th powers of the primitive n-th roots of unity (von Sterneck)."""
    _positive(n)
    g = gcd(b, n)
    m = n // g
    mu = mobius(m)
    if mu == 0:
        return 0
    return mu * euler_phi(n) // euler_phi(m)


def ramanujan_sum_direct(b: int, n: int) -> complex:
    """Root-of-unity summation, kept as an independent check."""
    _positive(n)
    return sum(cmath.exp(2j * cmath.pi * a * b / n) for a in range(1, n + 1) if gcd(a, n) == 1)


def sigma_power(n: int, w) -> complex | int:
    """Sum of d**w over positive divisors d of |n|; exact for integer w >= 0."""
    if n == 0:
        raise DomainError("sigma of 0 is undefined")
    divs = divisors(abs(n))
    if isinstance(w, int) and w >= 0:
        return sum(d**w for d in divs)
    return sum(complex(d) ** w for d in divs)
