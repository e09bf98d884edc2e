"""Complete simplicial fans, minimal cones and star subdivisions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import determinant, is_primitive, solve_linear


class FanError(ValueError):
    """Raised for structurally invalid fans."""


@dataclass(frozen=True)
class Fan:
    """A fan given by primitive ray generators and maximal cones.

    ``max_cones`` holds index tuples into ``rays``; each maximal cone must
    have exactly ``dim`` rays.  Construct through :meth:`build` (or call
    :func:`validate`) to get the geometric checks.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> "Fan":
        rays = tuple(tuple(int(c) for c in r) for r in rays)
        if not rays:
            raise FanError("fan has no rays")
        fan = cls(
            dim=len(rays[0]),
            rays=rays,
            max_cones=tuple(tuple(sorted(int(i) for i in c)) for c in max_cones),
        )
        return validate(fan)

    def cone_matrix(self, cone: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]


@dataclass(frozen=True)
class ValuationData:
    """A toric valuation: primitive ``u_nu`` written over its minimal cone."""

    u_nu: tuple[int, ...]
    minimal_cone: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    log_discrepancy: Fraction
    is_ray: bool


def validate(fan: Fan) -> Fan:
    n = fan.dim
    if n < 1:
        raise FanError("dimension must be positive")
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise FanError(f"ray {i} has dimension {len(r)}, expected {n}")
        if not is_primitive(r):
            raise FanError(f"non-primitive ray {i}")
    if len(set(fan.rays)) != len(fan.rays):
        raise FanError("duplicate rays")
    if not fan.max_cones:
        raise FanError("fan has no maximal cones")
    for c in fan.max_cones:
        if len(c) != n or len(set(c)) != n:
            raise FanError(f"cone {c} is not simplicial of dimension {n}")
        if any(not 0 <= i < len(fan.rays) for i in c):
            raise FanError(f"cone {c} has an invalid ray index")
        if determinant(fan.cone_matrix(c)) == 0:
            raise FanError(f"degenerate cone {c}")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        raise FanError("duplicate maximal cones")
    if n == 1:
        if sorted(fan.rays) != [(-1,), (1,)] or len(fan.max_cones) != 2:
            raise FanError("incomplete: a complete 1-dimensional fan has rays +1 and -1")
        return fan

    # each codimension-one face must be shared by exactly two maximal cones,
    # lying on opposite sides of it
    owners: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for c in fan.max_cones:
        for face in combinations(c, n - 1):
            owners.setdefault(face, []).append(c)
    for face, cones in owners.items():
        if len(cones) == 1:
            raise FanError(f"incomplete: facet {face} of cone {cones[0]} is uncovered")
        if len(cones) > 2:
            raise FanError(f"overlapping cones at facet {face}")
        sides = []
        for c in cones:
            (apex,) = set(c) - set(face)
            sides.append(determinant(fan.cone_matrix(face) + [fan.rays[apex]]))
        if sides[0] * sides[1] >= 0:
            raise FanError(f"overlapping cones {cones[0]} and {cones[1]}")

    # covering degree one: an interior point of the first cone lies in no other cone
    first = fan.max_cones[0]
    probe = tuple(sum(fan.rays[i][k] for i in first) for k in range(n))
    for c in fan.max_cones[1:]:
        coeffs = solve_linear(_columns(fan.cone_matrix(c)), probe)
        if all(x >= 0 for x in coeffs):
            raise FanError(f"overlapping cones {first} and {c}")
    return fan


def _columns(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Matrix whose columns are the given vectors."""
    return [list(col) for col in zip(*vectors)]


def cone_coordinates(fan: Fan, cone: Sequence[int], v: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients of ``v`` in the generators of a maximal cone."""
    return solve_linear(_columns(fan.cone_matrix(cone)), v)


def minimal_cone_containing(fan: Fan, nu: Sequence[int]) -> ValuationData:
    """Locate primitive ``nu`` in its minimal cone and compute its log discrepancy."""
    nu = tuple(int(c) for c in nu)
    if len(nu) != fan.dim:
        raise ValueError(f"vector {nu} has the wrong dimension")
    if not any(nu):
        raise ValueError("zero vector has no direction")
    if not is_primitive(nu):
        raise ValueError(f"{nu} is not primitive; primitivize it first")
    for cone in fan.max_cones:
        coeffs = cone_coordinates(fan, cone, nu)
        if all(c >= 0 for c in coeffs):
            support = [(i, c) for i, c in zip(cone, coeffs) if c > 0]
            minimal = tuple(i for i, _ in support)
            cs = tuple(c for _, c in support)
            return ValuationData(
                u_nu=nu,
                minimal_cone=minimal,
                coefficients=cs,
                log_discrepancy=sum(cs, Fraction(0)),
                is_ray=len(minimal) == 1 and fan.rays[minimal[0]] == nu,
            )
    raise FanError(f"{nu} is not in the support of the fan (fan incomplete?)")


def log_discrepancy(fan: Fan, nu: Sequence[int]) -> Fraction:
    return minimal_cone_containing(fan, nu).log_discrepancy


def star_subdivision(fan: Fan, nu: Sequence[int]) -> Fan:
    """Star subdivision at primitive ``nu``; the new ray is appended last."""
    data = minimal_cone_containing(fan, nu)
    if data.is_ray:
        raise ValueError("already a ray; subdivision is identity")
    tau = set(data.minimal_cone)
    new_index = len(fan.rays)
    cones = []
    for cone in fan.max_cones:
        if not tau <= set(cone):
            cones.append(cone)
            continue
        for i in sorted(tau):
            cones.append(tuple(sorted([j for j in cone if j != i] + [new_index])))
    return Fan.build(fan.rays + (data.u_nu,), cones)


def anticanonical_divisor(fan: Fan):
    from .polytope import ToricDivisor

    return ToricDivisor(fan, tuple(Fraction(1) for _ in fan.rays))


def canonical_divisor(fan: Fan):
    from .polytope import ToricDivisor

    return ToricDivisor(fan, tuple(Fraction(-1) for _ in fan.rays))
