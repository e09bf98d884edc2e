"""Moment polytopes of toric divisors and their exact measures.

A polytope is stored as a list of halfspaces ``<m, normal> >= offset`` with
primitive integer normals; the vertex list is derived exactly.  Volumes are
lattice-normalised (a fundamental cell of M has volume 1) and facet
measures are taken in a unimodular basis of the facet lattice, so the
boundary measure of the standard simplex counts lattice length.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Sequence

from .exact import (
    affine_dimension,
    as_fraction,
    determinant,
    dot,
    interpolate,
    is_primitive,
    poly_eval,
    poly_integral,
    primitivize,
    rank,
    solve_linear,
    unimodular_completion,
)
from .fan import Fan

CUT = "cut"


class PolytopeError(ValueError):
    """Geometric rejection: empty, lower-dimensional or non-ample input."""


@dataclass(frozen=True)
class Halfspace:
    normal: tuple[int, ...]
    offset: Fraction
    label: object = None

    @classmethod
    def make(cls, normal: Sequence[int], offset, label=None) -> "Halfspace":
        prim, g = primitivize(normal)
        return cls(prim, as_fraction(offset) / g, label)

    def value(self, m: Sequence) -> Fraction:
        return dot(self.normal, m) - self.offset


@dataclass(frozen=True, eq=False)
class ToricDivisor:
    """``sum a_rho D_rho`` on the toric variety of ``fan``."""

    fan: Fan
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != len(self.fan.rays):
            raise ValueError(
                f"divisor has {len(coeffs)} coefficients but the fan has {len(self.fan.rays)} rays"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, ToricDivisor) and (self.fan, self.coeffs) == (other.fan, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.fan, self.coeffs))

    def __add__(self, other: "ToricDivisor") -> "ToricDivisor":
        if other.fan != self.fan:
            raise ValueError("divisors live on different fans")
        return ToricDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, t) -> "ToricDivisor":
        t = as_fraction(t)
        return ToricDivisor(self.fan, tuple(t * a for a in self.coeffs))

    @property
    def dim(self) -> int:
        return self.fan.dim

    @cached_property
    def polytope(self) -> "Polytope":
        return polytope_of(self)


class Polytope:
    """Bounded polyhedron ``{m : <m, normal_i> >= offset_i}`` with exact V-rep."""

    def __init__(self, dim: int, halfspaces: Sequence[Halfspace], fan: Fan | None = None,
                 ample: bool | None = None, vertices=None):
        self.dim = dim
        self.halfspaces = tuple(halfspaces)
        self.fan = fan
        self.ample = ample
        self._faces: dict[frozenset, list] = {}
        self._truncations: dict[tuple, Polytope] = {}
        if vertices is not None:
            self.__dict__["vertices"] = tuple(sorted(set(vertices)))

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={[tuple(map(str, v)) for v in self.vertices]})"

    @cached_property
    def vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        found = set()
        for combo in combinations(self.halfspaces, self.dim):
            try:
                m = solve_linear([h.normal for h in combo], [h.offset for h in combo])
            except ValueError:
                continue
            if all(h.value(m) >= 0 for h in self.halfspaces):
                found.add(m)
        return tuple(sorted(found))

    @cached_property
    def tight(self) -> tuple[frozenset, ...]:
        """For each halfspace, the indices of vertices on its boundary hyperplane."""
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if h.value(v) == 0)
            for h in self.halfspaces
        )

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def dimension(self) -> int:
        return affine_dimension(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.dim

    @property
    def is_lattice(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)

    def face_dimension(self, face: frozenset) -> int:
        return affine_dimension([self.vertices[i] for i in sorted(face)])

    def facet_indices(self) -> list[int]:
        """Halfspaces that support a facet; the others are redundant."""
        return [j for j, t in enumerate(self.tight) if self.face_dimension(t) == self.dim - 1]

    def normal_cones(self) -> set[tuple]:
        """Labels of the halfspaces tight at each vertex."""
        return {
            tuple(sorted(h.label for h, t in zip(self.halfspaces, self.tight) if i in t))
            for i in range(len(self.vertices))
        }

    def triangulate(self, face: frozenset | None = None, dim: int | None = None) -> list[tuple[int, ...]]:
        """Pulling triangulation of a face into simplices of vertex indices."""
        if face is None:
            face = frozenset(range(len(self.vertices)))
            dim = self.dimension
        elif dim is None:
            dim = self.face_dimension(face)
        if face in self._faces:
            return self._faces[face]
        if dim <= 0:
            out = [(min(face),)]
        else:
            apex = min(face)
            out, seen = [], set()
            for t in self.tight:
                sub = face & t
                if apex in sub or sub == face or len(sub) < dim or sub in seen:
                    continue
                seen.add(sub)
                if self.face_dimension(sub) != dim - 1:
                    continue
                out.extend((apex,) + s for s in self.triangulate(sub, dim - 1))
        self._faces[face] = out
        return out

    @cached_property
    def _measure(self) -> tuple[Fraction, tuple[Fraction, ...]]:
        if not self.is_full_dimensional:
            raise PolytopeError("not full-dimensional")
        n = self.dim
        total, moment = Fraction(0), [Fraction(0)] * n
        fact = math.factorial(n)
        for simplex in self.triangulate():
            pts = [self.vertices[i] for i in simplex]
            base = pts[0]
            vol = abs(determinant([[a - b for a, b in zip(p, base)] for p in pts[1:]])) / fact
            total += vol
            for k in range(n):
                moment[k] += vol * sum(p[k] for p in pts) / (n + 1)
        return total, tuple(c / total for c in moment)

    @property
    def volume(self) -> Fraction:
        """Lattice volume; zero for lower-dimensional or empty polytopes."""
        return self._measure[0] if self.is_full_dimensional else Fraction(0)

    def facet_measure(self, j: int) -> tuple[Fraction, tuple[Fraction, ...]]:
        """Lattice (n-1)-volume and centroid of the face cut out by halfspace ``j``.

        Faces of dimension below n-1 have measure zero (centroid then meaningless).
        """
        n = self.dim
        face = self.tight[j]
        zero = tuple(Fraction(0) for _ in range(n))
        if not face or self.face_dimension(face) != n - 1:
            return Fraction(0), zero
        m0, _ = unimodular_completion(self.halfspaces[j].normal)
        fact = math.factorial(n - 1)
        total, moment = Fraction(0), [Fraction(0)] * n
        for simplex in self.triangulate(face, n - 1):
            pts = [self.vertices[i] for i in simplex]
            base = pts[0]
            rows = [[a - b for a, b in zip(p, base)] for p in pts[1:]] + [list(m0)]
            vol = abs(determinant(rows)) / fact
            total += vol
            for k in range(n):
                moment[k] += vol * sum(p[k] for p in pts) / n
        return total, tuple(c / total for c in moment)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        out = []
        for a, b in combinations(range(len(self.vertices)), 2):
            common = [h.normal for h, t in zip(self.halfspaces, self.tight) if a in t and b in t]
            if len(common) >= self.dim - 1 and rank(common) == self.dim - 1:
                out.append((a, b))
        return tuple(out)

    def with_halfspace(self, h: Halfspace) -> "Polytope":
        """Intersect with one more halfspace; new vertices come from cut edges."""
        values = [h.value(v) for v in self.vertices]
        kept = [v for v, val in zip(self.vertices, values) if val >= 0]
        for a, b in self.edges:
            va, vb = values[a], values[b]
            if (va > 0 > vb) or (va < 0 < vb):
                s = va / (va - vb)
                kept.append(tuple(x + s * (y - x) for x, y in zip(self.vertices[a], self.vertices[b])))
        return Polytope(self.dim, self.halfspaces + (h,), self.fan, vertices=kept)


def _cone_vertex(fan: Fan, cone: Sequence[int], coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return solve_linear(fan.cone_matrix(cone), [-coeffs[i] for i in cone])


def polytope_of(divisor: ToricDivisor) -> Polytope:
    """``P_D = {m : <m, u_rho> >= -a_rho}`` with an ampleness flag."""
    fan, a = divisor.fan, divisor.coeffs
    halfspaces = [Halfspace(tuple(u), -a_rho, i) for i, (u, a_rho) in enumerate(zip(fan.rays, a))]
    # ample iff the cone vertices are distinct and strictly inside the off-cone halfspaces
    ample = True
    seen = set()
    for cone in fan.max_cones:
        m = _cone_vertex(fan, cone, a)
        if m in seen or any(halfspaces[i].value(m) <= 0 for i in range(len(a)) if i not in cone):
            ample = False
            break
        seen.add(m)
    return Polytope(fan.dim, halfspaces, fan, ample=ample)


def require_ample(divisor: ToricDivisor) -> Polytope:
    P = divisor.polytope
    if not P.ample:
        raise PolytopeError("divisor is not ample")
    return P


def measure(P: Polytope) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Lattice volume and barycentre of a full-dimensional polytope."""
    return P._measure


@dataclass(frozen=True)
class BoundaryMeasure:
    total: Fraction
    barycentre: tuple[Fraction, ...]
    facets: tuple[tuple[object, Fraction, tuple[Fraction, ...]], ...]


def boundary_measure(P: Polytope) -> BoundaryMeasure:
    """Total boundary measure, boundary barycentre and per-facet data."""
    n = P.dim
    total, moment, facets = Fraction(0), [Fraction(0)] * n, []
    for j, h in enumerate(P.halfspaces):
        vol, centroid = P.facet_measure(j)
        facets.append((h.label, vol, centroid))
        total += vol
        for k in range(n):
            moment[k] += vol * centroid[k]
    if total == 0:
        raise PolytopeError("polytope has no facets of full codimension one")
    return BoundaryMeasure(total, tuple(c / total for c in moment), tuple(facets))


def linear_range(P: Polytope, u: Sequence[int]) -> tuple[Fraction, Fraction]:
    if P.is_empty:
        raise PolytopeError("empty polytope")
    values = [dot(v, u) for v in P.vertices]
    return min(values), max(values)


def truncate(P: Polytope, u: Sequence[int], x) -> Polytope:
    """``P`` cut by ``<m, u> >= min_P <., u> + x`` for ``0 <= x <= width``."""
    x = as_fraction(x)
    key = (tuple(u), x)
    if key not in P._truncations:
        lo, hi = linear_range(P, u)
        if not 0 <= x <= hi - lo:
            raise ValueError(f"x = {x} outside [0, {hi - lo}]")
        P._truncations[key] = P.with_halfspace(Halfspace.make(u, lo + x, CUT))
    return P._truncations[key]


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces on consecutive intervals, coefficients ascending in x."""

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise ValueError("need one piece per interval")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase")

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x) -> int:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise ValueError(f"{x} outside the domain [{lo}, {hi}]")
        return min(bisect_right(self.breakpoints, x) - 1, len(self.pieces) - 1)

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        return poly_eval(self.pieces[self.piece_index(x)], x)

    def is_continuous(self) -> bool:
        return all(
            poly_eval(left, b) == poly_eval(right, b)
            for left, right, b in zip(self.pieces, self.pieces[1:], self.breakpoints[1:-1])
        )

    def degree(self) -> int:
        return max(len(p) - 1 for p in self.pieces)


def integrate(pp: PiecewisePolynomial) -> Fraction:
    return sum(
        (poly_integral(p, a, b) for p, a, b in zip(pp.pieces, pp.breakpoints, pp.breakpoints[1:])),
        Fraction(0),
    )


def _breakpoints(P: Polytope, u: Sequence[int]) -> tuple[Fraction, ...]:
    lo, _ = linear_range(P, u)
    return tuple(sorted({dot(v, u) - lo for v in P.vertices}))


def _fit_pieces(breaks: Sequence[Fraction], f: Callable[[Fraction], Fraction], degree: int,
                nodes: int) -> PiecewisePolynomial:
    # nodes > degree + 1, so every piece also checks its own degree bound
    pieces = []
    for a, b in zip(breaks, breaks[1:]):
        xs = [a + (b - a) * Fraction(k, nodes + 1) for k in range(1, nodes + 1)]
        poly = interpolate(xs, [f(x) for x in xs])
        if len(poly) - 1 > degree:
            raise ArithmeticError(f"piece on [{a}, {b}] is not a polynomial of degree <= {degree}")
        pieces.append(tuple(poly))
    return PiecewisePolynomial(tuple(breaks), tuple(pieces))


def piecewise_volume(P: Polytope, u: Sequence[int]) -> PiecewisePolynomial:
    """``x -> Vol_M(P ∩ {<m,u> >= min + x})`` on ``[0, width]``."""
    if not P.is_full_dimensional:
        raise PolytopeError("not full-dimensional")
    return _fit_pieces(_breakpoints(P, u), lambda x: truncate(P, u, x).volume, P.dim, P.dim + 2)


def piecewise_boundary(P: Polytope, u: Sequence[int]) -> tuple[PiecewisePolynomial, PiecewisePolynomial]:
    """Boundary measure of the truncations, split into old facets and the cut.

    The first function sums the facet measures of ``P_x`` on the hyperplanes
    of ``P`` itself; the second is the measure of the slice ``<m,u> = min + x``.
    Values at breakpoints are the one-sided limits of the pieces.
    """
    if not P.is_full_dimensional:
        raise PolytopeError("not full-dimensional")
    if not is_primitive(u):
        raise ValueError(f"{tuple(u)} is not primitive")
    old = range(len(P.halfspaces))

    def sigma_only(x):
        Px = truncate(P, u, x)
        return sum((Px.facet_measure(j)[0] for j in old), Fraction(0))

    def slice_facet(x):
        Px = truncate(P, u, x)
        return Px.facet_measure(len(Px.halfspaces) - 1)[0]

    breaks = _breakpoints(P, u)
    nodes = P.dim + 2
    return (_fit_pieces(breaks, sigma_only, P.dim - 1, nodes),
            _fit_pieces(breaks, slice_facet, P.dim - 1, nodes))


# --- exact LP by Fourier-Motzkin elimination ---------------------------------

Constraint = tuple[tuple[Fraction, ...], Fraction]  # sum coeff_i * var_i >= rhs


def _normalise(c: Constraint) -> Constraint:
    coeffs, rhs = c
    scale = next((abs(a) for a in coeffs if a), None)
    if scale is None:
        return coeffs, rhs
    return tuple(a / scale for a in coeffs), rhs / scale


class InfeasibleError(PolytopeError):
    pass


def fourier_motzkin(constraints: Sequence[Constraint], var: int) -> list[Constraint]:
    """Project the system ``A v >= b`` along coordinate ``var``."""
    pos, neg, rest = [], [], set()
    for coeffs, rhs in constraints:
        a = coeffs[var]
        if a > 0:
            pos.append((coeffs, rhs))
        elif a < 0:
            neg.append((coeffs, rhs))
        else:
            rest.add(_normalise((coeffs, rhs)))
    for cp, bp in pos:
        for cn, bn in neg:
            p, q = cp[var], -cn[var]
            coeffs = tuple(q * x + p * y for x, y in zip(cp, cn))
            rest.add(_normalise((coeffs, q * bp + p * bn)))
    out = []
    for coeffs, rhs in sorted(rest):
        if not any(coeffs):
            if rhs > 0:
                raise InfeasibleError("system is infeasible")
            continue
        out.append((coeffs, rhs))
    return out


def effective_threshold(L: ToricDivisor, D: ToricDivisor, max_dim: int = 4) -> Fraction:
    """Least ``t`` with ``t L + D`` effective, i.e. ``P_{tL+D}`` nonempty."""
    fan = L.fan
    n = fan.dim
    if n > max_dim:
        raise ValueError(f"Fourier-Motzkin threshold limited to dimension <= {max_dim}")
    require_ample(L)
    # variables (m_1..m_n, t):  <m,u_rho> + a_rho t >= -d_rho
    system = [
        (tuple(Fraction(c) for c in u) + (a,), -d)
        for u, a, d in zip(fan.rays, L.coeffs, D.coeffs)
    ]
    for k in range(n):
        system = fourier_motzkin(system, k)
    lower, upper = [], []
    for coeffs, rhs in system:
        alpha = coeffs[n]
        (lower if alpha > 0 else upper).append(rhs / alpha)
    if not lower:
        raise InfeasibleError("threshold unbounded below")
    t_min = max(lower)
    if upper and t_min > min(upper):
        raise InfeasibleError("no t makes the divisor effective")
    return t_min
