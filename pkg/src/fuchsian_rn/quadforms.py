"""Positive definite integral binary quadratic forms."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .arith import DomainError


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def act(self, m) -> "QuadForm":
        """The form (x, y) -> f(r x + s y, t x + u y) for m = ((r, s), (t, u))."""
        (r, s), (t, u) = m
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * r * r + b * r * t + c * t * t,
            2 * a * r * s + b * (r * u + s * t) + 2 * c * t * u,
            a * s * s + b * s * u + c * u * u,
        )

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (-a < b <= a <= c):
            return False
        if a == c and b < 0:
            return False
        return True

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class FormClass:
    reduced: QuadForm
    disc: int
    primitive: bool


def discriminant(f: QuadForm) -> int:
    return f.disc


def _matmul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _check_definite(f: QuadForm) -> None:
    if f.disc >= 0 or f.a <= 0:
        raise DomainError(f"{f.as_tuple()} is not positive definite")


def reduce(f: QuadForm) -> tuple[FormClass, tuple[tuple[int, int], tuple[int, int]]]:
    """Return the reduced class of f and M (det 1) with f = reduced.act(M)."""
    _check_definite(f)
    g = f
    # track N with g = f.act(N); at the end f = g.act(N^{-1})
    n = ((1, 0), (0, 1))
    while True:
        a, b, c = g.a, g.b, g.c
        if not (-a < b <= a):
            # translate x -> x + k y to bring b into (-a, a]
            k = (a - b) // (2 * a)
            t = ((1, k), (0, 1))
            g = g.act(t)
            n = _matmul(n, t)
            continue
        if a > c or (a == c and b < 0):
            s = ((0, -1), (1, 0))
            g = g.act(s)
            n = _matmul(n, s)
            continue
        break
    (p, q), (r, s_) = n
    inverse = ((s_, -q), (-r, p))
    cls = FormClass(g, g.disc, g.content == 1)
    return cls, inverse


def enumerate_reduced(D: int, include_imprimitive: bool = True) -> list[FormClass]:
    """All reduced forms of discriminant D, via a scan over |b| <= sqrt(|D|/3)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    out = []
    bmax = isqrt(-D // 3)
    for b in range(-bmax, bmax + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        a = max(abs(b), 1)
        while a * a <= ac:
            if ac % a == 0:
                f = QuadForm(a, b, ac // a)
                if f.is_reduced():
                    prim = f.content == 1
                    if prim or include_imprimitive:
                        out.append(FormClass(f, D, prim))
            a += 1
    out.sort(key=lambda fc: (fc.reduced.a, fc.reduced.c, fc.reduced.b))
    return out


def class_number(D: int) -> int:
    return sum(1 for _ in enumerate_reduced(D, include_imprimitive=False))


def is_properly_equivalent(f: QuadForm, g: QuadForm) -> bool:
    if f.disc != g.disc:
        raise DomainError("forms have different discriminants")
    return reduce(f)[0].reduced == reduce(g)[0].reduced
