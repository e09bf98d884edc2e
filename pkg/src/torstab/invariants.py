"""Stability invariants of a polarised toric variety and its toric valuations.

Everything is exact.  ``beta_hat`` denotes the normalised beta invariant
``beta / n!``: the polytope formulas naturally produce volumes in lattice
units, and ``Vol(L) = n! Vol_M(P)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .exact import dot, is_primitive
from .fan import minimal_cone_containing, canonical_divisor
from .polytope import (
    ToricDivisor,
    boundary_measure,
    effective_threshold,
    integrate,
    linear_range,
    measure,
    piecewise_boundary,
    piecewise_volume,
    require_ample,
)

TORIC_DELTA_CAVEAT = "toric delta: infimum over toric valuations only"

DEFAULT_RADIUS = {1: 1, 2: 10, 3: 5}


def _check_nu(L: ToricDivisor, nu: Sequence[int]) -> tuple[int, ...]:
    nu = tuple(int(c) for c in nu)
    if len(nu) != L.dim:
        raise ValueError(f"vector {nu} has the wrong dimension")
    if not any(nu):
        raise ValueError("zero vector has no direction")
    if not is_primitive(nu):
        raise ValueError(f"{nu} is not primitive")
    return nu


def default_radius(n: int) -> int:
    return DEFAULT_RADIUS.get(n, 3)


def primitive_vectors(n: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Primitive integer vectors with sup-norm at most ``radius``, lexicographic."""
    for v in product(range(-radius, radius + 1), repeat=n):
        if any(v) and is_primitive(v):
            yield v


def slope_mu(L: ToricDivisor) -> Fraction:
    P = require_ample(L)
    vol, _ = measure(P)
    return boundary_measure(P).total / (L.dim * vol)


def barycentres(L: ToricDivisor) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Barycentres of the polytope and of its boundary."""
    P = require_ample(L)
    return measure(P)[1], boundary_measure(P).barycentre


def tau_S_j(L: ToricDivisor, nu: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    nu = _check_nu(L, nu)
    P = require_ample(L)
    vol, _ = measure(P)
    lo, hi = linear_range(P, nu)
    tau = hi - lo
    S = integrate(piecewise_volume(P, nu)) / vol
    j = math.factorial(L.dim) * vol * (tau - S)
    return tau, S, j


def expected_vanishing(L: ToricDivisor, nu: Sequence[int]) -> Fraction:
    """``S(nu)`` through the barycentre: mean of ``<m, u_nu> - min`` over P."""
    P = require_ample(L)
    lo, _ = linear_range(P, nu)
    return dot(measure(P)[1], nu) - lo


def beta_integral(L: ToricDivisor, nu: Sequence[int]) -> Fraction:
    """``beta / n!`` from the volume and derivative-of-volume integrals.

    The derivative of the volume in the direction of the pulled-back
    canonical class moves every original facet by one and the cut facet by
    the log discrepancy ``A``, hence the ``A * slice`` term.
    """
    nu = _check_nu(L, nu)
    P = require_ample(L)
    A = minimal_cone_containing(L.fan, nu).log_discrepancy
    vol, _ = measure(P)
    bvol = boundary_measure(P).total
    sigma_only, slice_facet = piecewise_boundary(P, nu)
    return (
        A * vol
        + bvol / vol * integrate(piecewise_volume(P, nu))
        - integrate(sigma_only)
        - A * integrate(slice_facet)
    )


def futaki_vector(L: ToricDivisor) -> tuple[Fraction, ...]:
    """``b_boundary - b_P``; pairing it with ``u`` gives the Futaki invariant."""
    b_P, b_dP = barycentres(L)
    return tuple(y - x for x, y in zip(b_P, b_dP))


def futaki(L: ToricDivisor, u: Sequence[int]) -> Fraction:
    return dot(futaki_vector(L), u)


def futaki_vanishes(L: ToricDivisor) -> bool:
    return not any(futaki_vector(L))


def beta_barycentre(L: ToricDivisor, nu: Sequence[int]) -> Fraction:
    """``beta / n!`` as ``Vol(dP) * <b_P - b_dP, u_nu>``."""
    nu = _check_nu(L, nu)
    return -boundary_measure(require_ample(L)).total * futaki(L, nu)


def beta_with_discrepancy_shift(L: ToricDivisor, nu: Sequence[int]) -> Fraction:
    """Barycentre value plus ``(A - 1) Vol_M(P)``, shown for comparison only.

    This is not a beta invariant: for (P^2, -K) and nu = (1, 1) it gives 9/2
    while the definition gives 0.
    """
    nu = _check_nu(L, nu)
    A = minimal_cone_containing(L.fan, nu).log_discrepancy
    return beta_barycentre(L, nu) + (A - 1) * measure(L.polytope)[0]


@dataclass(frozen=True)
class InvariantReport:
    mu: Fraction
    vol: Fraction
    tau: Fraction
    S: Fraction
    j: Fraction
    beta: Fraction
    beta_hat: Fraction
    beta_routes_agree: bool
    futaki_pairing: Fraction
    A: Fraction
    delta_toric: Fraction
    caveats: tuple[str, ...] = ()


def invariant_report(L: ToricDivisor, nu: Sequence[int]) -> InvariantReport:
    nu = _check_nu(L, nu)
    n = L.dim
    fact = math.factorial(n)
    tau, S, j = tau_S_j(L, nu)
    b_int = beta_integral(L, nu)
    b_bar = beta_barycentre(L, nu)
    caveats = [TORIC_DELTA_CAVEAT]
    if b_int != b_bar:
        caveats.append("beta routes disagree")
    return InvariantReport(
        mu=slope_mu(L),
        vol=fact * measure(L.polytope)[0],
        tau=tau,
        S=S,
        j=j,
        beta=fact * b_int,
        beta_hat=b_int,
        beta_routes_agree=b_int == b_bar,
        futaki_pairing=futaki(L, nu),
        A=minimal_cone_containing(L.fan, nu).log_discrepancy,
        delta_toric=delta_toric(L).delta,
        caveats=tuple(caveats),
    )


@dataclass(frozen=True)
class DeltaResult:
    delta: Fraction
    ray: int
    caveat: str = TORIC_DELTA_CAVEAT


def delta_toric(L: ToricDivisor) -> DeltaResult:
    """Minimum of ``A / S`` over toric valuations, attained on a ray.

    ``A`` and ``S`` are both linear on each maximal cone (the normal fan of
    P is the fan), so the ratio is minimised at a generator where A = 1.
    """
    require_ample(L)
    values = [(1 / expected_vanishing(L, u), i) for i, u in enumerate(L.fan.rays)]
    delta, ray = min(values)
    return DeltaResult(delta, ray)


def delta_toric_brute(L: ToricDivisor, radius: int) -> Fraction:
    if radius < 1:
        raise ValueError("radius must be >= 1")
    require_ample(L)
    return min(
        minimal_cone_containing(L.fan, nu).log_discrepancy / expected_vanishing(L, nu)
        for nu in primitive_vectors(L.dim, radius)
    )


@dataclass(frozen=True)
class DestabilizerResult:
    found: bool
    nu: tuple[int, ...] | None
    beta_hat: Fraction | None
    ratio: Fraction | None
    all_zero: bool
    searched: int
    notes: tuple[str, ...] = ()


def normalised_j(L: ToricDivisor, nu: Sequence[int]) -> Fraction:
    """``j / n!`` from the width and barycentre."""
    P = require_ample(L)
    lo, hi = linear_range(P, nu)
    return measure(P)[0] * (hi - lo - expected_vanishing(L, nu))


def destabilizer_search(L: ToricDivisor, radius: int | None = None) -> DestabilizerResult:
    """Minimise ``beta_hat / j_hat`` over primitive vectors in a sup-norm box.

    Ties go to the lexicographically smallest vector.
    """
    radius = default_radius(L.dim) if radius is None else radius
    if radius < 1:
        raise ValueError("radius must be >= 1")
    best = None
    all_zero = True
    count = 0
    for nu in primitive_vectors(L.dim, radius):
        count += 1
        b = beta_barycentre(L, nu)
        if b:
            all_zero = False
        ratio = b / normalised_j(L, nu)
        if best is None or ratio < best[0]:
            best = (ratio, nu, b)
    ratio, nu, b = best
    found = b < 0
    if found == futaki_vanishes(L):
        raise AssertionError("destabilizer search disagrees with the barycentre criterion")
    notes = ()
    if all_zero:
        notes = ("semistable with zeroes: beta vanishes on every searched valuation",)
    if not found:
        return DestabilizerResult(False, None, None, None, all_zero, count, notes)
    return DestabilizerResult(True, nu, b, ratio, all_zero, count, notes)


SATISFIED, BOUNDARY, NOT_SATISFIED = "SATISFIED", "BOUNDARY", "NOT_SATISFIED"


@dataclass(frozen=True)
class CriterionVerdict:
    verdict: str
    mu: Fraction
    delta_toric: Fraction
    gamma: Fraction
    threshold: Fraction
    t_min: Fraction
    caveats: tuple[str, ...] = field(default=(TORIC_DELTA_CAVEAT,))


def sufficient_criterion(L: ToricDivisor) -> CriterionVerdict:
    """Check effectivity of ``(mu + gamma) L + K`` with ``delta - mu = (n+1) gamma``.

    SATISFIED needs ``t_min < mu + gamma`` strictly: the uniform bound needs
    some room, and effectivity is open.  Equality is reported as BOUNDARY.
    """
    mu = slope_mu(L)
    delta = delta_toric(L).delta
    gamma = (delta - mu) / (L.dim + 1)
    threshold = mu + gamma
    t_min = effective_threshold(L, canonical_divisor(L.fan))
    if t_min < threshold:
        verdict = SATISFIED
    elif t_min == threshold:
        verdict = BOUNDARY
    else:
        verdict = NOT_SATISFIED
    return CriterionVerdict(verdict, mu, delta, gamma, threshold, t_min)


def alpha_lower_bound_constant(L: ToricDivisor) -> tuple[Fraction, bool]:
    """``mu / (n+1)`` and whether the semistability hypothesis (Futaki = 0) holds."""
    return slope_mu(L) / (L.dim + 1), futaki_vanishes(L)
