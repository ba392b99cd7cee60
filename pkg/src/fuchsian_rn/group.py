"""Exact arithmetic in the groups R(N) and generator reduction for prime level.

A plus element is [[a, b*sqrt(N)], [c*sqrt(N), d]] with ad - Nbc = 1, a minus
element is [[a*sqrt(N), b], [c, d*sqrt(N)]] with Nad - bc = 1.  Everything is
stored as integers, so products and comparisons are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .arith import DomainError, divisors, is_prime

PLUS = 1
MINUS = -1


class InvalidElementError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    N: int
    parity: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.parity not in (PLUS, MINUS):
            raise InvalidElementError("parity must be +1 or -1")
        if self.N < 1:
            raise InvalidElementError("level must be positive")
        if self.det_condition() != 1:
            raise InvalidElementError(
                f"determinant condition fails for {self.as_dict()}"
            )

    def det_condition(self) -> int:
        if self.parity == PLUS:
            return self.a * self.d - self.N * self.b * self.c
        return self.N * self.a * self.d - self.b * self.c

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.N, self.parity, -self.a, -self.b, -self.c, -self.d)

    @property
    def T(self) -> "GroupElement":
        return transpose(self)

    def matrix(self) -> np.ndarray:
        r = math.sqrt(self.N)
        if self.parity == PLUS:
            m = [[self.a, self.b * r], [self.c * r, self.d]]
        else:
            m = [[self.a * r, self.b], [self.c, self.d * r]]
        return np.array(m, dtype=float)

    def trace_sq_times(self) -> int:
        """Squared trace, an integer (N*(a+d)^2 for minus elements)."""
        t = self.a + self.d
        return t * t if self.parity == PLUS else self.N * t * t

    def is_identity_up_to_sign(self) -> bool:
        return (
            self.parity == PLUS
            and self.b == 0
            and self.c == 0
            and self.a == self.d
            and abs(self.a) == 1
        )

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "parity": "+" if self.parity == PLUS else "-",
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GroupElement":
        parity = PLUS if data["parity"] in ("+", 1, "plus") else MINUS
        return cls(data["N"], parity, data["a"], data["b"], data["c"], data["d"])


def make_element(N: int, parity, a: int, b: int, c: int, d: int) -> GroupElement:
    if isinstance(parity, str):
        parity = {"plus": PLUS, "+": PLUS, "minus": MINUS, "-": MINUS}[parity]
    return GroupElement(N, parity, a, b, c, d)


def identity(N: int) -> GroupElement:
    return GroupElement(N, PLUS, 1, 0, 0, 1)


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    if g1.N != g2.N:
        raise InvalidElementError(f"level mismatch {g1.N} vs {g2.N}")
    N = g1.N
    a1, b1, c1, d1 = g1.a, g1.b, g1.c, g1.d
    a2, b2, c2, d2 = g2.a, g2.b, g2.c, g2.d
    if g1.parity == PLUS and g2.parity == PLUS:
        return GroupElement(N, PLUS, a1 * a2 + N * b1 * c2, a1 * b2 + b1 * d2,
                            c1 * a2 + d1 * c2, N * c1 * b2 + d1 * d2)
    if g1.parity == PLUS:
        return GroupElement(N, MINUS, a1 * a2 + b1 * c2, a1 * b2 + N * b1 * d2,
                            N * c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)
    if g2.parity == PLUS:
        return GroupElement(N, MINUS, a1 * a2 + b1 * c2, N * a1 * b2 + b1 * d2,
                            c1 * a2 + N * d1 * c2, c1 * b2 + d1 * d2)
    return GroupElement(N, PLUS, N * a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
                        c1 * a2 + d1 * c2, c1 * b2 + N * d1 * d2)


def invert(g: GroupElement) -> GroupElement:
    return GroupElement(g.N, g.parity, g.d, -g.b, -g.c, g.a)


def transpose(g: GroupElement) -> GroupElement:
    return GroupElement(g.N, g.parity, g.a, g.c, g.b, g.d)


def power(g: GroupElement, e: int) -> GroupElement:
    base = g if e >= 0 else invert(g)
    out = identity(g.N)
    for _ in range(abs(e)):
        out = multiply(out, base)
    return out


def product(elements: Iterable[GroupElement], N: int) -> GroupElement:
    out = identity(N)
    for g in elements:
        out = multiply(out, g)
    return out


def equal_up_to_sign(g1: GroupElement, g2: GroupElement) -> bool:
    return g1 == g2 or g1 == -g2


def act(g: GroupElement, z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("act expects a point of the upper half plane")
    (A, B), (C, D) = g.matrix()
    return (A * z + B) / (C * z + D)


# -- generators for prime level ---------------------------------------------

def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def T_gen(p: int) -> GroupElement:
    return GroupElement(p, PLUS, 1, 1, 0, 1)


def omega(N: int) -> GroupElement:
    """The involution [[0, -1], [1, 0]], a minus element at every level."""
    return GroupElement(N, MINUS, 0, -1, 1, 0)


def canonical_nhat(p: int, n: int) -> int:
    """The solution of n*nhat = -1 (mod p) lying in (-p/2, p/2]."""
    if n % p == 0:
        raise DomainError(f"{n} is not prime to {p}")
    r = (-pow(n, -1, p)) % p
    return r - p if 2 * r > p else r


def s_gen(p: int, n: int, nhat: int | None = None) -> GroupElement:
    if nhat is None:
        nhat = canonical_nhat(p, n)
    num = n * nhat + 1
    if num % p:
        raise DomainError(f"n*nhat + 1 = {num} is not divisible by {p}")
    return GroupElement(p, MINUS, num // p, n, nhat, 1)


def standard_generators(p: int) -> list[GroupElement]:
    _require_prime(p)
    gens = [T_gen(p), omega(p)]
    half = (p + 1) // 2
    for n in range(-half, half + 1):
        if n != 0 and n % p:
            gens.append(s_gen(p, n))
    return gens


@dataclass(frozen=True)
class Token:
    name: str           # "T", "w" or "s"
    exponent: int       # +1 or -1
    n: int = 0
    nhat: int = 0

    def element(self, p: int) -> GroupElement:
        if self.name == "T":
            g = T_gen(p)
        elif self.name == "w":
            g = omega(p)
        else:
            g = s_gen(p, self.n, self.nhat)
        return g if self.exponent == 1 else invert(g)

    def label(self) -> str:
        base = {"T": "T", "w": "w"}.get(self.name, f"s({self.n},{self.nhat})")
        return base if self.exponent == 1 else base + "^-1"

    def inverse(self) -> "Token":
        return Token(self.name, -self.exponent, self.n, self.nhat)


@dataclass
class GeneratorWord:
    p: int
    tokens: list[Token] = field(default_factory=list)

    def evaluate(self) -> GroupElement:
        return product((t.element(self.p) for t in self.tokens), self.p)

    def labels(self) -> list[str]:
        return [t.label() for t in self.tokens]

    def __len__(self):
        return len(self.tokens)


def _t_tokens(m: int) -> list[Token]:
    return [Token("T", 1 if m > 0 else -1)] * abs(m)


def _round_div(x: int, y: int) -> int:
    """Nearest integer to x/y (exact rational rounding, ties to even)."""
    q, r = divmod(x, y)
    if y < 0:
        q, r = divmod(-x, -y)
        y = -y
    if 2 * r > y or (2 * r == y and q % 2):
        q += 1
    return q


def _simplify(tokens: list[Token]) -> list[Token]:
    """Free cancellation, plus w w = -I which is trivial up to sign."""
    out: list[Token] = []
    for t in tokens:
        if out and (out[-1] == t.inverse() or (t.name == "w" and out[-1].name == "w")):
            out.pop()
        else:
            out.append(t)
    return out


def express_in_generators(g: GroupElement) -> GeneratorWord:
    """Write g (up to sign) as a word in T, w and the s_p(n) with |n| <= (p+1)/2.

    Descent on |a| for the minus element (a*sqrt(p), b; ...): a power of T
    makes |b| <= p|a|/2, then s_p(n) w replaces a by a*n + b with |a*n + b| < |a|.
    """
    p = g.N
    _require_prime(p)
    if g.parity == PLUS and g.c == 0:
        # +-T^k
        return GeneratorWord(p, _t_tokens(g.a * g.b))
    right: list[Token] = []
    m = g
    if m.parity == PLUS:
        m = multiply(m, omega(p))
        right.append(Token("w", 1))
    while m.a != 0:
        a, b = m.a, m.b
        shift = -_round_div(b, p * a)
        if shift:
            m = multiply(m, power(T_gen(p), shift))
            right.extend(_t_tokens(shift))
            a, b = m.a, m.b
        n = -_round_div(b, a)
        if n == 0:
            n = -1 if a * b > 0 else 1
        nh = canonical_nhat(p, n)
        m = multiply(multiply(m, s_gen(p, n, nh)), omega(p))
        right.append(Token("s", 1, n, nh))
        right.append(Token("w", 1))
    # m = [[0, b], [-b, d sqrt p]] = b * w^-1 T^(-b d)
    tokens = [Token("w", -1)] + _t_tokens(-m.b * m.d)
    tokens += [t.inverse() for t in reversed(right)]
    word = GeneratorWord(p, _simplify(tokens))
    if not equal_up_to_sign(word.evaluate(), g):
        raise AssertionError("descent produced an inconsistent word")
    return word


# -- dependence -------------------------------------------------------------

@dataclass(frozen=True)
class DependenceWitness:
    kind: str                 # "+" or "-"
    n1hat: int
    lhs: tuple[Token, ...]
    rhs: Token

    def verify(self, p: int) -> bool:
        left = product((t.element(p) for t in self.lhs), p)
        return left == self.rhs.element(p)


def _nhat_candidates(p: int, n1: int, target: int):
    """n1hat = -n1^-1 mod p with a1 = (n1*n1hat + 1)/p a nonzero divisor of target."""
    base = canonical_nhat(p, n1)
    span = abs(target) + 2
    for k in range(-span, span + 1):
        nh = base + p * k
        a1 = (n1 * nh + 1) // p
        if a1 != 0 and target % a1 == 0:
            yield nh, a1


def check_dependence(p: int, n1: int, n2: int, n3: int) -> DependenceWitness | None:
    """Witness that (n1, n2, n3) lies in one of the dependence sets D_p^+ / D_p^-.

    D_p^+: n2*a1 + n1 = 1 and n3 = -n1hat*n2, witnessed by
        T w s(n1, n1hat) s(n2, n2hat) = s(-n1hat*n2, a1*a2*p + n1*n2hat).
    D_p^-: n2*a1 + n1 = -1 and n3 = n1hat*n2, witnessed by
        T^-1 w^-1 s(n1, n1hat) s(n2, n2hat) = s(n1hat*n2, -a1*a2*p - n1*n2hat).
    """
    _require_prime(p)
    for n in (n1, n2, n3):
        if n % p == 0:
            raise DomainError(f"{n} is not prime to {p}")
    if any(abs(n) == 1 for n in (n1, n2, n3)):
        return None
    n2h = canonical_nhat(p, n2)
    a2 = (n2 * n2h + 1) // p
    for kind, target in (("+", 1 - n1), ("-", -1 - n1)):
        for nh, a1 in _nhat_candidates(p, n1, target):
            if n2 * a1 != target:
                continue
            if kind == "+":
                if n3 != -nh * n2:
                    continue
                lhs = (Token("T", 1), Token("w", 1),
                       Token("s", 1, n1, nh), Token("s", 1, n2, n2h))
                rhs = Token("s", 1, -nh * n2, a1 * a2 * p + n1 * n2h)
            else:
                if n3 != nh * n2:
                    continue
                lhs = (Token("T", -1), Token("w", -1),
                       Token("s", 1, n1, nh), Token("s", 1, n2, n2h))
                rhs = Token("s", 1, nh * n2, -a1 * a2 * p - n1 * n2h)
            w = DependenceWitness(kind, nh, lhs, rhs)
            if w.verify(p):
                return w
    return None


def dependent_triples(p: int, bound: int) -> list[tuple[int, int, int]]:
    """All triples of D_p^+ and D_p^- with |n1| <= bound and no entry +-1 or 0 mod p."""
    out = []
    for n1 in range(-bound, bound + 1):
        if n1 % p == 0 or abs(n1) == 1:
            continue
        for sign in (1, -1):
            target = 1 - n1 if sign > 0 else -1 - n1
            for nh, a1 in _nhat_candidates(p, n1, target):
                n2 = target // a1
                n3 = -nh * n2 if sign > 0 else nh * n2
                if any(x % p == 0 or abs(x) == 1 for x in (n2, n3)):
                    continue
                out.append((n1, n2, n3))
    return out


def _pair_dependences(p: int) -> list[tuple[int, int]]:
    """Dependent pairs from n*nhat + 1 = p (n ~ -nhat, n ~ -n) and n*nhat + 1 = -p."""
    pairs = []
    for n in range(-p, p + 1):
        if n % p == 0:
            continue
        for target, plus in ((p - 1, True), (-p - 1, False)):
            if target % n:
                continue
            nh = target // n
            if plus:
                pairs.append((n, -nh))
                pairs.append((n, -n))
            else:
                pairs.append((n, nh))
    return pairs


def generated_residues(p: int, indices: Iterable[int]) -> set[int]:
    """Residues n mod p whose s_p(n) is forced into <T, w, s_p(m): m in indices>
    by the pair and triple dependence identities."""
    known = {n % p for n in indices} | {1, p - 1}
    triples = [tuple(x % p for x in t) for t in dependent_triples(p, p)]
    pairs = [(a % p, b % p) for a, b in _pair_dependences(p)]
    changed = True
    while changed:
        changed = False
        for t in triples:
            hits = sum(x in known for x in t)
            if hits == 2:
                known.update(t)
                changed = True
        for a, b in pairs:
            if (a in known) != (b in known):
                known.update((a, b))
                changed = True
    return known


def reduction_steps(p: int) -> list[int]:
    """The index set left after the seven divisor-based removal steps."""
    half = (p - 1) // 2
    S = set(range(2, half + 1))
    S -= {d for d in divisors(p - 1) if d * d > p - 1}
    S -= {d for d in divisors(p + 1) if d * d > p + 1}
    removed = []
    for M in (p - 1, p + 1):
        for d in divisors(M):
            if (d + 1) ** 2 >= p:
                continue
            for m in (M // d - 1, M // d + 1):
                removed.append((m, d))
                S.discard(m)
    for m, d in removed:
        for mp in range(1, half + 1):
            if (m * mp - 1) % p == 0 or (m * mp + 1) % p == 0:
                if mp > d + 1:
                    S.discard(mp)
    S -= {d for d in divisors(p - 2) if d != p - 2 and d * d > p - 2}
    S -= {d for d in divisors(p + 2) if d != p + 2 and d * d > p + 2}
    return sorted(S)


@dataclass(frozen=True)
class ReducedGenerators:
    p: int
    step_indices: tuple[int, ...]
    S: tuple[int, ...]
    signed: tuple[int, ...]
    complete: bool

    def generators(self, transposed: bool = True) -> list[GroupElement]:
        out = [T_gen(self.p), omega(self.p)]
        for n in self.signed:
            g = s_gen(self.p, n)
            out.append(transpose(g) if transposed else g)
        return out


def reduce_generator_indices(p: int) -> ReducedGenerators:
    """Steps 1-7 followed by a redundancy sweep over the dependence identities.

    Each surviving index n is kept only if s_p(+-n) is not already forced by the
    earlier survivors; -n is then added wherever it is not forced.
    """
    _require_prime(p)
    if p < 5:
        return ReducedGenerators(p, (), (), (), True)
    steps = reduction_steps(p)
    keep: list[int] = []
    for n in steps:
        if n % p in generated_residues(p, keep + [-m for m in keep]):
            continue
        keep.append(n)
    signed = list(keep)
    for n in keep:
        if (-n) % p not in generated_residues(p, signed):
            signed.append(-n)
    complete = len(generated_residues(p, signed)) == p - 1
    signed.sort(key=lambda x: (abs(x), -x))
    return ReducedGenerators(p, tuple(steps), tuple(keep), tuple(signed), complete)
