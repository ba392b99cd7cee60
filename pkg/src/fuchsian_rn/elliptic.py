"""Elliptic points and cusps of R(p) for prime p.

Points are stored through integers only.  Plus-side classes use
z = (a + i)/(c sqrt p) (trace 0) or z = (2a - 1 + sqrt(3) i)/(2 c sqrt p)
(trace 1); minus-side classes use z = (a sqrt p + i)/c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, factorize, is_prime
from .group import MINUS, PLUS, GroupElement, act, invert, multiply
from .quadforms import FormClass, QuadForm, enumerate_reduced, reduce


@dataclass(frozen=True)
class EllipticClass:
    p: int
    trace: int
    side: int
    a: int
    c: int
    stabilizer: GroupElement
    form_class: FormClass | None = None

    @property
    def order(self) -> int:
        return 3 if self.trace == 1 else 2

    def point(self) -> complex:
        r = math.sqrt(self.p)
        if self.side == MINUS:
            return complex(self.a * r, 1.0) / self.c
        if self.trace == 0:
            return complex(self.a, 1.0) / (self.c * r)
        return complex(2 * self.a - 1, math.sqrt(3)) / (2 * self.c * r)

    def scaled_coordinates(self) -> tuple[Fraction, Fraction]:
        """(sqrt(p) * Re z, p * (Im z)^2), both rational."""
        a, c, p = self.a, self.c, self.p
        if self.side == MINUS:
            return Fraction(p * a, c), Fraction(p, c * c)
        if self.trace == 0:
            return Fraction(a, c), Fraction(1, c * c)
        return Fraction(2 * a - 1, 2 * c), Fraction(3, 4 * c * c)

    def as_dict(self) -> dict:
        z = self.point()
        out = {
            "trace": self.trace,
            "side": "+" if self.side == PLUS else "-",
            "a": self.a,
            "c": self.c,
            "z": [z.real, z.imag],
            "order": self.order,
            "stabilizer": self.stabilizer.as_dict(),
        }
        if self.form_class is not None:
            out["form"] = list(self.form_class.reduced.as_tuple())
        return out


@dataclass(frozen=True)
class CuspWitness:
    p: int
    numerator: int
    denominator: int
    matrix: GroupElement

    def verify(self) -> bool:
        return sends_to_infinity(self.matrix, self.numerator, self.denominator)


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


# -- plus side --------------------------------------------------------------

def _plus_trace0(p: int, a: int, c: int = 1) -> EllipticClass:
    num = a * a + 1
    if num % (p * c):
        raise DomainError("not a trace-0 elliptic point")
    b = -num // (p * c)
    g = GroupElement(p, PLUS, a, b, c, -a)
    return EllipticClass(p, 0, PLUS, a, c, g)


def _plus_trace1(p: int, a: int, c: int = 1) -> EllipticClass:
    num = a * a - a + 1
    if num % (p * c):
        raise DomainError("not a trace-1 elliptic point")
    b = -num // (p * c)
    g = GroupElement(p, PLUS, a, b, c, 1 - a)
    return EllipticClass(p, 1, PLUS, a, c, g)


def ell_plus_classes(p: int) -> list[EllipticClass]:
    """Representatives of the plus-side elliptic classes (one per nonempty trace)."""
    _require_prime(p)
    out = []
    roots0 = [x for x in range(p) if (x * x + 1) % p == 0]
    if roots0:
        out.append(_plus_trace0(p, roots0[0]))
    roots1 = [x for x in range(p) if (x * x - x + 1) % p == 0]
    if roots1:
        out.append(_plus_trace1(p, roots1[0]))
    return out


def ell_plus_count(p: int) -> int:
    return len(ell_plus_classes(p))


def small_prime_elliptic_points(p: int) -> list[complex]:
    """All elliptic classes for p = 2, 3 (the Hecke triangle group cases)."""
    if p == 2:
        return [1j, (1 + 1j) / math.sqrt(2)]
    if p == 3:
        return [1j, (math.sqrt(3) + 1j) / 2]
    raise DomainError("only p = 2, 3 are tabulated")


# -- minus side and quadratic forms ----------------------------------------

def _minus_class(p: int, a: int, c: int, form_class: FormClass | None = None) -> EllipticClass:
    num = a * a * p + 1
    if c <= 0 or num % c:
        raise DomainError("not a minus-side elliptic point")
    b = -(num // c)
    g = GroupElement(p, MINUS, a, b, c, -a)
    return EllipticClass(p, 0, MINUS, a, c, g, form_class)


def qf_of_elliptic(cls: EllipticClass) -> QuadForm:
    """The form (-p b, 2 p a, c) attached to the minus stabilizer (a sqrt p, b; c, -a sqrt p)."""
    if cls.side != MINUS:
        raise DomainError("quadratic forms are attached to minus-side points only")
    g = cls.stabilizer
    p = cls.p
    return QuadForm(-p * g.b, 2 * p * g.a, g.c)


def elliptic_of_qf(form, p: int | None = None) -> EllipticClass:
    """A minus-side elliptic point whose attached form lies in the class of `form`."""
    f = form.reduced if isinstance(form, FormClass) else form
    D = f.disc
    if p is None:
        if D % 4:
            raise DomainError("discriminant is not -4p")
        p = -D // 4
    if D != -4 * p or not is_prime(p):
        raise DomainError(f"discriminant {D} is not -4p for a prime p")
    A, B, C = f.a, f.b // 2, f.c
    if A % p == 0:
        # (pA', 2pB', C) ~ (C, -2pB', pA') by w
        a, c, minus_b = -(B // p), A // p, C
    else:
        s = (-B * pow(A, -1, p)) % p
        a = (s * A + B) // p
        c = (s * s * A + 2 * s * B + C) // p
        minus_b = A
    if minus_b * c != a * a * p + 1:
        raise AssertionError("surjectivity construction failed")
    cls = _minus_class(p, a, c)
    fc = reduce(f)[0]
    return EllipticClass(p, 0, MINUS, a, c, cls.stabilizer, fc)


def ell_minus_classes(p: int) -> list[EllipticClass]:
    _require_prime(p)
    if p < 5:
        raise DomainError("minus-side classes are enumerated for p >= 5")
    return [elliptic_of_qf(fc, p) for fc in enumerate_reduced(-4 * p, True)]


def stabilizer_size(cls: EllipticClass) -> int:
    """|R(p)_z| counted directly from the fixed-point equations."""
    p = cls.p
    X, Y2 = cls.scaled_coordinates()
    norm = (X * X + Y2) / p
    count = 0
    # plus elements: t^2/4 + c^2 * Y2 = 1
    cmax = int(math.isqrt(int(1 / Y2))) + 1
    for c in range(-cmax, cmax + 1):
        rest = 4 * (1 - c * c * Y2)
        if rest < 0 or rest.denominator != 1:
            continue
        t = math.isqrt(rest.numerator)
        if t * t != rest:
            continue
        for tt in {t, -t}:
            a2 = tt + 2 * c * X
            b = -c * norm
            if a2.denominator == 1 and a2.numerator % 2 == 0 and b.denominator == 1:
                count += 1
    # minus elements: p t^2/4 + C^2 Y2/p = 1
    cmax = int(math.isqrt(int(p / Y2))) + 1
    for C in range(-cmax, cmax + 1):
        rest = 4 * (1 - C * C * Y2 / p) / p
        if rest < 0 or rest.denominator != 1:
            continue
        t = math.isqrt(rest.numerator)
        if t * t != rest:
            continue
        for tt in {t, -t}:
            a2 = tt + 2 * C * X / p
            b = -C * norm
            if a2.denominator == 1 and a2.numerator % 2 == 0 and b.denominator == 1:
                count += 1
    return count


def order_of(cls: EllipticClass) -> int:
    return cls.order


def representation_count(f: QuadForm, value: int) -> int:
    """Number of (X, Y) in Z^2 with f(X, Y) = value, for positive definite f."""
    if f.disc >= 0 or f.a <= 0:
        raise DomainError("form is not positive definite")
    D = -f.disc
    ymax = math.isqrt(4 * f.a * value // D) + 1
    count = 0
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + (c y^2 - value) = 0
        disc = (f.b * y) ** 2 - 4 * f.a * (f.c * y * y - value)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for root in {r, -r}:
            num = -f.b * y + root
            if num % (2 * f.a) == 0:
                count += 1
    return count


# -- equivalence witnesses for the plus side --------------------------------

def _gauss_divmod(x, y):
    (a, b), (c, d) = x, y
    n = c * c + d * d
    re, im = a * c + b * d, b * c - a * d
    q = (_rdiv(re, n), _rdiv(im, n))
    r = (a - (q[0] * c - q[1] * d), b - (q[0] * d + q[1] * c))
    return q, r


def _rdiv(x: int, n: int) -> int:
    return (2 * x + n) // (2 * n)


def _gauss_gcd(x, y):
    while y != (0, 0):
        _, r = _gauss_divmod(x, y)
        x, y = y, r
    return x


def _eis_mul(x, y):
    (u1, v1), (u2, v2) = x, y
    return (u1 * u2 - v1 * v2, u1 * v2 + v1 * u2 - v1 * v2)


def _eis_gcd(x, y):
    # elements u + v*zeta3, norm u^2 - uv + v^2
    while y != (0, 0):
        u, v = y
        n = u * u - u * v + v * v
        num = _eis_mul(x, (u - v, -v))
        q = (_rdiv(num[0], n), _rdiv(num[1], n))
        qy = _eis_mul(q, y)
        x, y = y, (x[0] - qy[0], x[1] - qy[1])
    return x


def _check_two_squares_pre(c: int, a: int, a0: int, p: int) -> None:
    if c <= 0:
        raise DomainError("c must be positive")
    for q, _ in factorize(c):
        if q != 2 and q % 4 != 1:
            raise DomainError(f"prime factor {q} of c is not 2 or 1 mod 4")
    if (a - a0) % p or (a * a + 1) % p or ((a * a + 1) // p) % c:
        raise DomainError("congruence preconditions fail")


def _two_squares_ok(x, y, c, a, a0, p) -> bool:
    return (
        x * x + y * y == c
        and (x - a * y) % c == 0
        and (((a - a0) // p) * x + ((a0 * a + 1) // p) * y) % c == 0
    )


def two_squares_with_divisibility(c: int, a: int, a0: int, p: int) -> tuple[int, int]:
    """(x, y) with c = x^2 + y^2, c | x - a y and c | (a-a0)/p x + (a0 a + 1)/p y."""
    _check_two_squares_pre(c, a, a0, p)
    g = _gauss_gcd((a, 1), (c, 0))
    x, y = g
    for cand in ((x, y), (-y, x), (-x, -y), (y, -x), (x, -y), (y, x), (-x, y), (-y, -x)):
        if _two_squares_ok(*cand, c, a, a0, p):
            return cand
    return two_squares_scan(c, a, a0, p)


def two_squares_scan(c: int, a: int, a0: int, p: int) -> tuple[int, int]:
    r = math.isqrt(c)
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            if _two_squares_ok(x, y, c, a, a0, p):
                return (x, y)
    raise DomainError("no representation found")


def _eis_ok(x, y, c, a) -> bool:
    return 3 * x * x + y * y == c and ((2 * a - 1) * x + y) % c == 0


def three_squares_with_divisibility(c: int, a: int) -> tuple[int, int]:
    """(x, y) with c = 3x^2 + y^2 and c | (2a - 1) x + y, given c | a^2 - a + 1."""
    if c <= 0 or (a * a - a + 1) % c:
        raise DomainError("c must be a positive divisor of a^2 - a + 1")
    for q, _ in factorize(c):
        if q != 3 and q % 3 != 1:
            raise DomainError(f"prime factor {q} of c is not 3 or 1 mod 3")
    g = _eis_gcd((a, 1), (c, 0))
    assoc = []
    cur = g
    for _ in range(6):
        assoc.append(cur)
        assoc.append((cur[0] - cur[1], -cur[1]))  # conjugate
        cur = _eis_mul(cur, (0, 1))
    for u, v in assoc:
        for uu, vv in ((u, v), (-u, -v)):
            if vv % 2 == 0:
                # u^2 - uv + v^2 = (u - v/2)^2 + 3 (v/2)^2
                x, y = vv // 2, uu - vv // 2
                for cand in ((x, y), (-x, y), (x, -y), (-x, -y)):
                    if _eis_ok(*cand, c, a):
                        return cand
    r = math.isqrt(c)
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            if _eis_ok(x, y, c, a):
                return (x, y)
    raise DomainError("no representation found")


def _base_swap(p: int, trace: int, a0: int, a1: int) -> GroupElement:
    """A minus element sending the base point built from a0 to the one built from a1.

    The coefficients (Z, W) solve a positive definite norm equation of
    discriminant -4 or -3, so a small search always succeeds.
    """
    src = (_plus_trace0 if trace == 0 else _plus_trace1)(p, a0).point()
    dst = (_plus_trace0 if trace == 0 else _plus_trace1)(p, a1).point()
    r = math.sqrt(p)
    bound = 2 * p + 2
    for Z in range(-bound, bound + 1):
        for W in range(-bound, bound + 1):
            # X sqrt(p) src + Y = dst (Z src + W sqrt(p)), linear in real X, Y
            rhs = dst * (Z * src + W * r)
            if abs(src.imag) < 1e-300:
                continue
            X = rhs.imag / (r * src.imag)
            Y = rhs.real - X * r * src.real
            Xi, Yi = round(X), round(Y)
            if p * Xi * W - Yi * Z != 1:
                continue
            g = GroupElement(p, MINUS, Xi, Yi, Z, W)
            if abs(act(g, src) - dst) < 1e-9:
                return g
    raise AssertionError("no base swap found")


def plus_equivalence(cls: EllipticClass) -> GroupElement:
    """An element of R(p) sending the canonical base point of the same trace to cls.point()."""
    p, a, c = cls.p, cls.a, cls.c
    if cls.side != PLUS:
        raise DomainError("plus-side classes only")
    base = next(b for b in ell_plus_classes(p) if b.trace == cls.trace)
    if cls.trace == 0:
        a0 = a % p
        x0, y0 = two_squares_with_divisibility(c, a, a0, p)
        Z, W = y0, -x0 - a0 * y0
        nx = (a0 + a) * Z + W
        ny = -((a0 * a0 + 1) // p) * Z + ((a - a0) // p) * W
    else:
        a0 = a % p
        x0, y0 = three_squares_with_divisibility(c, a)
        Z, W = 2 * x0, -(2 * a0 - 1) * x0 + y0
        nx = (a0 + a - 1) * Z + W
        ny = -((a0 * a0 - a0 + 1) // p) * Z + ((a - a0) // p) * W
    if nx % c or ny % c:
        raise AssertionError("equivalence witness is not integral")
    g = GroupElement(p, PLUS, nx // c, ny // c, Z, W)
    if a0 != base.a:
        g = multiply(g, _base_swap(p, cls.trace, base.a, a0))
    return g


# -- cusps ------------------------------------------------------------------

def sends_to_infinity(g: GroupElement, num: int, den: int) -> bool:
    """Exact test that g maps x = (num/den) sqrt(p) to infinity."""
    if g.parity == PLUS:
        return g.c * g.N * num + g.d * den == 0
    return g.c * num + g.d * den == 0


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def cusp_to_infinity(p: int, num: int, den: int) -> CuspWitness:
    """Witness that the cusp (num/den) sqrt(p) is equivalent to infinity."""
    _require_prime(p)
    if den == 0:
        raise DomainError("denominator must be nonzero")
    if den < 0:
        num, den = -num, -den
    if math.gcd(num, den) != 1:
        raise DomainError("cusp must be given in lowest terms")
    if den % p:
        # plus (den, -num; t, u) with den*u + p*num*t = 1
        _, u, t = _ext_gcd(den, p * num)
        m = GroupElement(p, PLUS, den, -num, t, u)
    else:
        c1 = den // p
        # minus (c1, -num; t, u) with p*c1*u + num*t = 1
        _, u, t = _ext_gcd(p * c1, num)
        m = GroupElement(p, MINUS, c1, -num, t, u)
    zero_to_inf = GroupElement(p, MINUS, 1, -1, 1, 0)
    w = CuspWitness(p, num, den, multiply(zero_to_inf, m))
    if not w.verify():
        raise AssertionError("cusp witness failed")
    return w


def fixes(g: GroupElement, z: complex, tol: float = 1e-12) -> bool:
    return abs(act(g, z) - z) <= tol * max(1.0, abs(z))


def conjugate_class(cls: EllipticClass, gamma: GroupElement) -> EllipticClass:
    """The minus-side class of gamma(z), with stabilizer gamma S gamma^-1."""
    if cls.side != MINUS:
        raise DomainError("minus-side classes only")
    s = multiply(multiply(gamma, cls.stabilizer), invert(gamma))
    if s.c < 0:
        s = GroupElement(s.N, s.parity, -s.a, -s.b, -s.c, -s.d)
    return _minus_class(cls.p, s.a, s.c)


__all__ = [
    "EllipticClass", "CuspWitness", "ell_plus_classes", "ell_plus_count",
    "ell_minus_classes", "qf_of_elliptic", "elliptic_of_qf", "order_of",
    "stabilizer_size", "representation_count", "two_squares_with_divisibility",
    "three_squares_with_divisibility", "plus_equivalence", "cusp_to_infinity",
    "sends_to_infinity", "small_prime_elliptic_points", "conjugate_class", "fixes",
]
