"""Unit-disk geometry for R(p): isometric circles, Dirichlet domains, areas and
the genus-zero certificate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import DomainError, is_prime
from .group import GroupElement, T_gen, omega, reduce_generator_indices, s_gen, transpose
from .quadforms import class_number

# rho(z) = (z - 2i)/(z + 2i), normalised to determinant one
RHO = np.array([[1, -2j], [1, 2j]], dtype=complex) / np.sqrt(4j)
RHO_INV = np.linalg.inv(RHO)

MERGE_TOL = 1e-9
AREA_TOL = 1e-6


class NoCircleError(ValueError):
    """The element fixes 0 in the disk, so it has no isometric circle."""


@dataclass(frozen=True)
class IsoCircle:
    center: complex
    radius: float

    def conj(self) -> "IsoCircle":
        return IsoCircle(self.center.conjugate(), self.radius)

    def contains_strictly(self, w: complex, tol: float = MERGE_TOL) -> bool:
        return abs(w - self.center) < self.radius - tol


@dataclass
class HyperbolicPolygon:
    vertices: list[complex]
    sides: list[frozenset]          # circle ids (and "U" for the unit circle) at each vertex
    angles: list[float]
    circles: list[IsoCircle]
    free_arcs: int = 0

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def ideal(self) -> list[bool]:
        return ["U" in s for s in self.sides]

    @property
    def bounded(self) -> bool:
        return self.free_arcs == 0


def to_disk(g) -> np.ndarray:
    """rho g rho^-1 as a complex matrix of determinant one."""
    m = g.matrix() if isinstance(g, GroupElement) else np.asarray(g, dtype=complex)
    return RHO @ m.astype(complex) @ RHO_INV


def isometric_circle(d: np.ndarray) -> IsoCircle:
    c, dd = d[1, 0], d[1, 1]
    if abs(c) < 1e-14:
        raise NoCircleError("lower-left entry vanishes")
    return IsoCircle(complex(-dd / c), float(1 / abs(c)))


def _circle_points(c1: IsoCircle, c2: IsoCircle) -> list[complex]:
    d = abs(c2.center - c1.center)
    r1, r2 = c1.radius, c2.radius
    if d < 1e-12 or d > r1 + r2 + 1e-12 or d < abs(r1 - r2) - 1e-12:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    u = (c2.center - c1.center) / d
    base = c1.center + a * u
    return [base + h * 1j * u, base - h * 1j * u]


def _unit_points(c: IsoCircle) -> list[complex]:
    d = abs(c.center)
    if d < 1e-12:
        return []
    a = (1 - c.radius ** 2 + d * d) / (2 * d)
    if abs(a) > 1 + 1e-12:
        return []
    h = math.sqrt(max(1 - a * a, 0.0))
    u = c.center / d
    return [(a + 1j * h) * u, (a - 1j * h) * u]


def _dedupe(circles: list[IsoCircle]) -> list[IsoCircle]:
    out: list[IsoCircle] = []
    for c in circles:
        if not any(abs(c.center - e.center) < MERGE_TOL and abs(c.radius - e.radius) < MERGE_TOL for e in out):
            out.append(c)
    return out


def polygon_from_circles(circles: list[IsoCircle]) -> HyperbolicPolygon:
    """Boundary of {|w| <= 1} minus the open disks bounded by the circles."""
    circles = _dedupe(circles)
    if not circles:
        raise DomainError("no circles given")

    def hidden(w, skip):
        return any(c.contains_strictly(w) for k, c in enumerate(circles) if k not in skip)

    cand: list[tuple[complex, set]] = []
    for i, c1 in enumerate(circles):
        for j in range(i + 1, len(circles)):
            for w in _circle_points(c1, circles[j]):
                if abs(w) <= 1 + MERGE_TOL and not hidden(w, {i, j}):
                    cand.append((w, {i, j}))
        for w in _unit_points(c1):
            if not hidden(w, {i}):
                cand.append((w, {i, "U"}))
    verts: list[list] = []
    for w, s in cand:
        for v in verts:
            if abs(v[0] - w) < 1e-7:
                v[1].update(s)
                break
        else:
            verts.append([w, set(s)])
    if len(verts) < 3:
        raise DomainError("degenerate domain")
    verts.sort(key=lambda v: math.atan2(v[0].imag, v[0].real))
    free = sum(1 for _, s in verts if "U" in s and len(s) == 2)
    angles = _vertex_angles(verts, circles)
    return HyperbolicPolygon(
        [v[0] for v in verts], [frozenset(v[1]) for v in verts], angles, circles, free
    )


def _vertex_angles(verts, circles) -> list[float]:
    out = []
    m = len(verts)
    for k, (w, s) in enumerate(verts):
        if "U" in s:
            out.append(0.0)
            continue
        prev, nxt = verts[k - 1], verts[(k + 1) % m]
        ids = [i for i in s if i != "U"]
        try:
            ia = next(i for i in ids if i in prev[1])
            ib = next(i for i in ids if i in nxt[1] and i != ia)
        except StopIteration:
            raise DomainError("polygon sides could not be matched at a vertex") from None

        def tangent(i, target):
            rad = w - circles[i].center
            t = 1j * rad / abs(rad)
            return t if ((target - w) * t.conjugate()).real > 0 else -t

        t1, t2 = tangent(ia, prev[0]), tangent(ib, nxt[0])
        cosang = max(-1.0, min(1.0, (t1 * t2.conjugate()).real))
        out.append(math.acos(cosang))
    return out


def dirichlet_domain(gens: list, include_inverses: bool = True) -> HyperbolicPolygon:
    if not gens:
        raise DomainError("empty generator list")
    circles = []
    for g in gens:
        d = to_disk(g)
        mats = [d, np.linalg.inv(d)] if include_inverses else [d]
        for m in mats:
            try:
                circles.append(isometric_circle(m))
            except NoCircleError:
                pass
    return polygon_from_circles(circles)


def hyperbolic_area(poly: HyperbolicPolygon) -> float:
    """Gauss-Bonnet area; infinite when the domain meets the boundary in an arc."""
    if not poly.bounded:
        return math.inf
    return (poly.m - 2) * math.pi - sum(poly.angles)


# -- genus certificate ------------------------------------------------------

def h_p(p: int) -> Fraction:
    if not is_prime(p) or p < 5:
        raise DomainError("h_p is defined here for primes p >= 5")
    h4 = Fraction(class_number(-4 * p), 2)
    r = p % 12
    if r == 1:
        return Fraction(13, 6) + h4
    if r == 5:
        return Fraction(3, 2) + h4
    h1 = Fraction(class_number(-p), 2)
    if r == 7:
        return Fraction(5, 3) + h4 + h1
    return 1 + h4 + h1


def domain_generators(p: int) -> list[GroupElement]:
    """T, w and the transposes of s_p(n), s_p(-n) for the indices surviving the removal steps."""
    red = reduce_generator_indices(p)
    gens = [T_gen(p), omega(p)]
    for n in red.step_indices:
        gens.append(transpose(s_gen(p, n)))
        gens.append(transpose(s_gen(p, -n)))
    return gens


@dataclass
class GenusCertificate:
    p: int
    m_p: int
    h_p: Fraction
    area: float
    certified: bool
    v_p: Fraction | None = None      # coefficient of 2*pi
    reason: str = ""
    polygon: HyperbolicPolygon | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        out = {
            "p": self.p,
            "m_p": self.m_p,
            "h_p": _frac(self.h_p),
            "certified": self.certified,
            "area": self.area,
        }
        if self.certified:
            out["v_p"] = f"2*pi*({_frac(self.v_p)})"
            out["genus"] = 0
        else:
            out["reason"] = self.reason
        return out


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def certify_genus_zero(p: int) -> GenusCertificate:
    hp = h_p(p)
    poly = dirichlet_domain(domain_generators(p))
    area = hyperbolic_area(poly)
    bound = Fraction(poly.m, 2) - 1
    if not poly.bounded:
        return GenusCertificate(p, poly.m, hp, area, False, None,
                                "domain has free boundary arcs", poly)
    if bound > hp:
        return GenusCertificate(p, poly.m, hp, area, False, None, "1/2*m_p-1 > h_p", poly)
    # too few generator circles leave a polygon larger than a fundamental domain
    if abs(area - 2 * math.pi * float(hp - 2)) > AREA_TOL:
        return GenusCertificate(p, poly.m, hp, area, False, None,
                                "polygon area differs from 2*pi*(h_p-2)", poly)
    return GenusCertificate(p, poly.m, hp, area, True, hp - 2, "", poly)


def svg_domain(poly: HyperbolicPolygon, size: int = 480) -> str:
    """A static picture: unit circle, isometric circles and the shaded polygon."""
    scale = size / 2.4
    cx = cy = size / 2

    def pt(w):
        return cx + scale * w.real, cy - scale * w.imag

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<circle cx="{cx}" cy="{cy}" r="{scale}" fill="none" stroke="black"/>']
    palette = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"]
    for k, c in enumerate(poly.circles):
        x, y = pt(c.center)
        col = palette[k % len(palette)]
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{scale * c.radius:.3f}" '
                     f'fill="none" stroke="{col}" stroke-width="0.8"/>')
    coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(pt, poly.vertices))
    parts.append(f'<polygon points="{coords}" fill="#88888855" stroke="black" stroke-width="1"/>')
    parts.append("</svg>")
    return "\n".join(parts)
