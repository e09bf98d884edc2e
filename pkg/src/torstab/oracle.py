"""Donaldson-Futaki invariants of toric valuations by counting lattice points.

For a toric valuation with primitive vector ``u`` the filtration of the
sections of ``kL`` is spanned by characters ``m`` of ``kP`` with
``ell_k(m) = <m, u> - k min_P <., u> >= j``.  Summing weights over the
lattice points of ``kP`` for several ``k`` and fitting polynomials gives the
Hilbert and weight coefficients, hence DF, without touching the volume code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import interpolate, is_primitive, poly_eval
from .invariants import beta_integral
from .polytope import Polytope, PolytopeError, ToricDivisor, linear_range, measure, require_ample


@dataclass(frozen=True)
class CountSample:
    k: int
    h: int
    w: Fraction
    f: Fraction


@dataclass(frozen=True)
class FittedCoefficients:
    a0: Fraction
    a1: Fraction
    b0: Fraction
    b1: Fraction
    f_top: Fraction
    f_sub: Fraction
    fit_verified: bool


def _require_lattice(P: Polytope) -> None:
    if P.is_empty or not P.is_lattice:
        raise PolytopeError("oracle requires a lattice polytope")


def lattice_points(P: Polytope, k: int) -> np.ndarray:
    """Integer points of ``kP`` as an (N, n) array, by bounding-box enumeration."""
    _require_lattice(P)
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = P.dim
    verts = np.array([[int(c) for c in v] for v in P.vertices], dtype=np.int64) * k
    axes = [np.arange(verts[:, i].min(), verts[:, i].max() + 1) for i in range(n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    keep = np.ones(len(grid), dtype=bool)
    for h in P.halfspaces:
        # <m, u> is an integer, so a rational bound can be rounded up
        bound = math.ceil(k * h.offset)
        keep &= grid @ np.array(h.normal, dtype=np.int64) >= bound
    return grid[keep]


def count_points(P: Polytope, k: int) -> int:
    return len(lattice_points(P, k))


def filtration_sums(P: Polytope, nu: Sequence[int], k: int) -> tuple[Fraction, Fraction]:
    """Total weight ``sum ell_k`` and filtration sum ``sum_{j>=0} dim F^j``."""
    lo, _ = linear_range(P, nu)
    pts = lattice_points(P, k)
    ell = pts @ np.array(nu, dtype=np.int64) - int(k * lo)
    w = int(ell.sum())
    f = int((np.floor(ell) + 1).sum())
    return Fraction(w), Fraction(f)


def sample(P: Polytope, nu: Sequence[int], k: int) -> CountSample:
    w, f = filtration_sums(P, nu, k)
    return CountSample(k, count_points(P, k), w, f)


def _coeff(poly: Sequence[Fraction], power: int) -> Fraction:
    return poly[power] if 0 <= power < len(poly) else Fraction(0)


def fit_coefficients(samples: Sequence[CountSample], n: int) -> FittedCoefficients:
    """Fit h (degree n) and w, f (degree n+1) on k = 1..n+3, check the rest."""
    by_k = {s.k: s for s in samples}
    fit_ks = list(range(1, n + 4))
    if any(k not in by_k for k in fit_ks):
        raise ValueError(f"need samples at k = 1..{n + 3}")
    held_out = [s for s in samples if s.k > n + 3]
    polys = {}
    for name, degree in (("h", n), ("w", n + 1), ("f", n + 1)):
        poly = interpolate(fit_ks, [getattr(by_k[k], name) for k in fit_ks])
        if len(poly) - 1 > degree:
            raise ArithmeticError("not polynomial — input violates lattice assumption")
        if any(poly_eval(poly, s.k) != getattr(s, name) for s in held_out):
            raise ArithmeticError("not polynomial — input violates lattice assumption")
        polys[name] = poly
    return FittedCoefficients(
        a0=_coeff(polys["h"], n),
        a1=_coeff(polys["h"], n - 1),
        b0=_coeff(polys["w"], n + 1),
        b1=_coeff(polys["w"], n),
        f_top=_coeff(polys["f"], n + 1),
        f_sub=_coeff(polys["f"], n),
        fit_verified=len(held_out) >= 2,
    )


def donaldson_futaki(a0, a1, b0, b1) -> Fraction:
    """``(b0 a1 - b1 a0) / a0`` from Hilbert and weight coefficients."""
    return (b0 * a1 - b1 * a0) / a0


@dataclass(frozen=True)
class DFResult:
    df: Fraction                 # normalised so that df * L^n = beta
    donaldson_raw: Fraction      # (b0 a1 - b1 a0) / a0
    filtration_formula: Fraction
    coefficients: FittedCoefficients
    samples: tuple[CountSample, ...]


def df_from_counts(L: ToricDivisor, nu: Sequence[int], k_max: int = 8) -> DFResult:
    """DF of the test configuration of a toric valuation, from lattice counts.

    The raw Donaldson quotient is rescaled by ``2 / a0``, which makes
    ``df * L^n`` the beta invariant.  The filtration formula uses
    ``n mu = 2 a1 / a0`` and the sum over ``j >= 1`` (``f - h``), whose
    coefficients are those of the weight; both values must agree.
    """
    P = require_ample(L)
    n = L.dim
    nu = tuple(int(c) for c in nu)
    if not any(nu) or not is_primitive(nu):
        raise ValueError(f"{nu} is not a primitive nonzero vector")
    if k_max < n + 5:
        raise ValueError(f"k_max must be at least {n + 5}")
    _require_lattice(P)
    samples = tuple(sample(P, nu, k) for k in range(1, k_max + 1))
    c = fit_coefficients(samples, n)
    raw = donaldson_futaki(c.a0, c.a1, c.b0, c.b1)
    df = 2 * raw / c.a0
    n_mu = 2 * c.a1 / c.a0
    shifted_sub = c.f_sub - c.a0
    formula = (n_mu * c.f_top - 2 * shifted_sub) / c.a0
    if formula != df:
        raise ArithmeticError(f"filtration formula {formula} disagrees with DF {df}")
    return DFResult(df, raw, formula, c, samples)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    df: Fraction
    df_times_volume: Fraction
    beta: Fraction
    lambda_max_ok: bool
    lambda_min_ok: bool
    hilbert_ok: bool
    details: tuple[str, ...] = ()


def verify_df_equals_beta(L: ToricDivisor, nu: Sequence[int], k_max: int = 8) -> VerificationReport:
    """Compare ``DF * L^n`` from counting with ``n! * beta_hat`` from integrals."""
    from .polytope import boundary_measure

    P = require_ample(L)
    n = L.dim
    fact = math.factorial(n)
    result = df_from_counts(L, nu, k_max)
    vol, _ = measure(P)
    lhs = result.df * fact * vol
    rhs = fact * beta_integral(L, nu)
    lo, hi = linear_range(P, nu)
    tau = hi - lo
    lam_max_ok = lam_min_ok = True
    for k in range(1, k_max + 1):
        ell = lattice_points(P, k) @ np.array(nu, dtype=np.int64) - int(k * lo)
        lam_max_ok &= Fraction(int(ell.max())) == k * tau
        lam_min_ok &= int(ell.min()) == 0
    c = result.coefficients
    hilbert_ok = c.a0 == vol and c.a1 == boundary_measure(P).total / 2
    details = []
    if lhs != rhs:
        details.append(f"DF * L^n = {lhs} but beta = {rhs}")
    if not hilbert_ok:
        details.append("Hilbert coefficients disagree with volume / boundary measure")
    passed = lhs == rhs and lam_max_ok and lam_min_ok and hilbert_ok and c.fit_verified
    return VerificationReport(passed, result.df, lhs, rhs, lam_max_ok, lam_min_ok, hilbert_ok, tuple(details))
