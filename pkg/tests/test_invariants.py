from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torstab import gallery
from torstab.exact import dot, is_primitive
from torstab.fan import minimal_cone_containing
from torstab.invariants import (
    BOUNDARY,
    NOT_SATISFIED,
    TORIC_DELTA_CAVEAT,
    alpha_lower_bound_constant,
    beta_barycentre,
    beta_integral,
    beta_with_discrepancy_shift,
    delta_toric,
    delta_toric_brute,
    destabilizer_search,
    expected_vanishing,
    futaki,
    futaki_vanishes,
    invariant_report,
    normalised_j,
    primitive_vectors,
    slope_mu,
    sufficient_criterion,
    tau_S_j,
)
from torstab.polytope import boundary_measure, integrate, measure, piecewise_volume, require_ample

F = Fraction
load = gallery.load
BLOWUP = load("blowup_p2:3,1")
P2 = load("p2_anticanonical")


def test_slope():
    assert slope_mu(P2) == 1
    assert slope_mu(load("p2:1")) == 3
    assert slope_mu(load("p1:2")) == 1
    assert slope_mu(load("p1:4")) == F(1, 2)


@pytest.mark.parametrize("y", [F(1, 2), 1, F(3, 2), 2, F(5, 2)])
def test_slope_of_blowup_classes(y):
    # -K.L = 3x - y and L^2 = x^2 - y^2 at x = 3, so mu = (9 - y)/(9 - y^2)
    assert slope_mu(load(f"blowup_p2:3,{y}")) == (9 - F(y)) / (9 - F(y) ** 2)


def test_anticanonical_slope_is_one():
    for name in ("p2_anticanonical", "blowup_p2:3,1", "p3_anticanonical", "p1xp1:2,2", "p1:2"):
        assert slope_mu(load(name)) == 1


def test_tau_S_j_examples():
    assert tau_S_j(P2, (1, 1)) == (3, 2, 9)
    assert tau_S_j(BLOWUP, (1, 1))[0] == 2
    d = 5
    assert tau_S_j(load(f"p1:{d}"), (1,)) == (d, F(d, 2), F(d * d, 2))


def test_tau_S_j_rejects_zero_and_non_primitive():
    with pytest.raises(ValueError, match="zero"):
        tau_S_j(P2, (0, 0))
    with pytest.raises(ValueError, match="primitive"):
        tau_S_j(P2, (2, 2))


def test_beta_examples():
    assert beta_integral(BLOWUP, (1, 1)) == F(-2, 3)
    assert beta_barycentre(BLOWUP, (1, 1)) == F(-2, 3)
    assert beta_integral(load("blowup_p2:3,2"), (1, 1)) == F(-4, 15)
    assert beta_integral(P2, (1, 1)) == 0
    for nu in [(1, 0), (2, -1), (-1, 3)]:
        assert beta_barycentre(P2, nu) == 0
        assert beta_barycentre(load("p1xp1:2,3"), nu) == 0


def test_discrepancy_shift_differs_from_definition():
    assert beta_with_discrepancy_shift(P2, (1, 1)) == F(9, 2)
    assert beta_integral(P2, (1, 1)) == 0


def test_futaki_examples():
    assert futaki(P2, (1, 0)) == 0
    assert futaki(BLOWUP, (1, 1)) == F(1, 12)
    assert futaki(BLOWUP, (0, 0)) == 0
    assert futaki_vanishes(P2)
    assert futaki_vanishes(load("p1xp1:2,3"))
    assert not futaki_vanishes(BLOWUP)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=F(1, 10), max_value=F(29, 10), max_denominator=10))
def test_blowup_futaki_never_vanishes(y):
    assert not futaki_vanishes(load(f"blowup_p2:3,{y}"))


def gallery_pairs(radius=2):
    for name in gallery.DEFAULT_GALLERY:
        n = load(name).dim
        for nu in primitive_vectors(n, radius if n < 3 else 1):
            yield name, nu


PAIRS = list(gallery_pairs())


@pytest.mark.parametrize("name, nu", PAIRS)
def test_pointwise_properties(name, nu):
    L = load(name)
    n = L.dim
    P = require_ample(L)
    vol = math.factorial(n) * measure(P)[0]
    tau, S, j = tau_S_j(L, nu)
    # both beta routes, and the Futaki pairing identity
    b = beta_integral(L, nu)
    assert b == beta_barycentre(L, nu)
    assert b == -boundary_measure(P).total * futaki(L, nu)
    # norm bounds
    assert tau / (n + 1) <= S <= tau
    assert vol * tau / (n + 1) <= j <= n * vol * tau / (n + 1)
    assert S == expected_vanishing(L, nu)
    assert normalised_j(L, nu) * math.factorial(n) == j
    # delta lower bound
    A = minimal_cone_containing(L.fan, nu).log_discrepancy
    assert A / S >= delta_toric(L).delta


FANO = ("p2_anticanonical", "blowup_p2:3,1", "p3_anticanonical", "p1xp1:2,2", "p1:2", "wp112")


@pytest.mark.parametrize("name, nu", [(name, nu) for name in FANO
                                      for nu in primitive_vectors(load(name).dim, 1)])
def test_fano_cross_check(name, nu):
    # for L = -K the derivative term collapses: beta_hat = A Vol_M - int Vol_M(P_x)
    L = load(name)
    P = require_ample(L)
    A = minimal_cone_containing(L.fan, nu).log_discrepancy
    assert beta_integral(L, nu) == A * measure(P)[0] - integrate(piecewise_volume(P, nu))


@pytest.mark.parametrize("name", gallery.DEFAULT_GALLERY)
def test_futaki_criterion_on_rays(name):
    L = load(name)
    ray_betas = [beta_barycentre(L, u) for u in L.fan.rays]
    assert futaki_vanishes(L) == all(b >= 0 for b in ray_betas) == all(b == 0 for b in ray_betas)


@pytest.mark.parametrize("name", gallery.DEFAULT_GALLERY)
def test_linear_relation_among_rays(name):
    # sum_rho t_rho u_rho = 0 with t > 0 forces sum t_rho beta(D_rho) = 0
    L = load(name)
    rays = L.fan.rays
    n = L.dim
    for cone in L.fan.max_cones:
        s = tuple(sum(rays[i][k] for i in cone) for k in range(n))
        # -s lies in some cone; write it there to close up a positive relation
        data = minimal_cone_containing(L.fan, _prim(tuple(-c for c in s)))
        g = math.gcd(*s)
        t = {i: F(1) for i in cone}
        for i, c in zip(data.minimal_cone, data.coefficients):
            t[i] = t.get(i, 0) + g * c
        assert all(sum(t[i] * rays[i][k] for i in t) == 0 for k in range(n))
        assert sum(t[i] * beta_barycentre(L, rays[i]) for i in t) == 0


def _prim(v):
    g = math.gcd(*v)
    return tuple(c // g for c in v)


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("name, nu", [p for p in PAIRS if max(map(abs, p[1])) <= 1])
def test_scaling(name, nu, k):
    L = load(name)
    n = L.dim
    kL = k * L
    assert beta_integral(kL, nu) == k ** n * beta_integral(L, nu)
    assert normalised_j(kL, nu) == k ** (n + 1) * normalised_j(L, nu)


def test_delta_examples():
    r = delta_toric(P2)
    assert r.delta == 1 and r.caveat == TORIC_DELTA_CAVEAT
    assert delta_toric(load("p1:2")).delta == 1
    assert delta_toric(BLOWUP).delta == F(6, 7)
    assert delta_toric_brute(P2, 5) == 1
    assert delta_toric_brute(P2, 1) == 1
    box = load("p1xp1:2,2")
    assert delta_toric_brute(box, 3) == delta_toric(box).delta
    with pytest.raises(ValueError):
        delta_toric_brute(P2, 0)


def test_destabilizer_search_examples():
    r = destabilizer_search(BLOWUP, 2)
    assert r.found and r.nu == (1, 1) and r.beta_hat == F(-2, 3) and r.beta_hat < 0
    r = destabilizer_search(P2, 3)
    assert not r.found and r.all_zero and r.nu is None
    assert any("semistable with zeroes" in note for note in r.notes)
    assert not destabilizer_search(load("p1xp1:1,1"), 2).found


def test_destabilizer_ratio_is_minimal():
    r = destabilizer_search(BLOWUP, 2)
    ratios = [beta_barycentre(BLOWUP, nu) / normalised_j(BLOWUP, nu) for nu in primitive_vectors(2, 2)]
    assert r.ratio == min(ratios)


def test_sufficient_criterion():
    v = sufficient_criterion(P2)
    assert (v.verdict, v.mu, v.delta_toric, v.gamma, v.t_min) == (BOUNDARY, 1, 1, 0, 1)
    assert TORIC_DELTA_CAVEAT in v.caveats
    v = sufficient_criterion(BLOWUP)
    assert v.verdict == NOT_SATISFIED
    assert v.delta_toric < v.mu
    assert sufficient_criterion(load("p1:2")).verdict == BOUNDARY


def test_alpha_constant():
    assert alpha_lower_bound_constant(P2) == (F(1, 3), True)
    # mu(-K) = 1 on the blow-up, so the constant is 1/3; the hypothesis fails
    assert alpha_lower_bound_constant(BLOWUP) == (F(1, 3), False)
    d = 3
    assert alpha_lower_bound_constant(load(f"p1:{d}")) == (F(1, d), True)


def test_invariant_report():
    rep = invariant_report(BLOWUP, (1, 1))
    assert rep.beta == F(-4, 3) and rep.beta_hat == F(-2, 3)
    assert rep.beta == math.factorial(2) * rep.beta_hat
    assert rep.beta_routes_agree
    assert rep.vol == 8 and rep.mu == 1 and rep.A == 1
    assert TORIC_DELTA_CAVEAT in rep.caveats
