import math
from fractions import Fraction

import pytest
import sympy

from halfweight.cuspgeom import (
    QDivisor,
    base_change_holds,
    counterexample_scan,
    degree_identities,
    enumerate_cusps,
    eps_inf,
    find_cusp,
    floor_degree,
    gamma1_equivalent,
    genus_gamma1,
    image_cusp,
    lies_over_half,
    maps_to_half,
    mu_bar,
    pullback_divisor,
    sigma_divisor,
)


def brute_force_cusps(M):
    """Orbit classes of coprime pairs mod M, by the raw equivalence predicate."""
    reps = []
    for c in range(M):
        for a in range(M):
            if math.gcd(math.gcd(a, c), M) != 1:
                continue
            if not any(gamma1_equivalent((a, c), r, M) for r in reps):
                reps.append((a, c))
    return reps


@pytest.mark.parametrize("M", [4, 5, 6, 8, 9, 12, 15, 16, 20])
def test_enumeration_matches_brute_force(M):
    cusps = enumerate_cusps(M)
    reps = brute_force_cusps(M)
    assert len(cusps) == len(reps)
    for r in reps:
        hits = [c for c in cusps if gamma1_equivalent((c.a % M, c.c % M), r, M)]
        assert len(hits) == 1


def test_level4():
    cusps = enumerate_cusps(4)
    assert [(c.label(), c.width) for c in cusps] == [("inf", 1), ("0", 4), ("1/2", 1)]
    assert sum(c.width for c in cusps) == mu_bar(4) == 6


def test_small_counts():
    assert len(enumerate_cusps(8)) == 6
    assert len(enumerate_cusps(20)) == 20
    with pytest.raises(ValueError):
        enumerate_cusps(3)


def test_representatives_are_coprime():
    for M in range(4, 101):
        for c in enumerate_cusps(M):
            assert math.gcd(c.a, c.c) == 1
            assert c.dgcd == math.gcd(c.c, M)


@pytest.mark.parametrize("M", range(8, 201, 4))
def test_widths_sum_to_index(M):
    assert sum(c.width for c in enumerate_cusps(M)) == mu_bar(M)


@pytest.mark.parametrize("M", range(5, 121))
def test_cusp_count_formula(M):
    assert len(enumerate_cusps(M)) == eps_inf(M)


def test_mu_bar_matches_sympy_product():
    for M in range(3, 200):
        r = sympy.Rational(M * M, 2)
        for p in sympy.primefactors(M):
            r *= 1 - sympy.Rational(1, p * p)
        assert mu_bar(M) == r


def test_maps_to_half():
    half = find_cusp(4, 1, 2)
    assert maps_to_half(half)
    for M in (4, 8, 20, 68):
        assert not maps_to_half(find_cusp(M, 1, 0))
    over = [c for c in enumerate_cusps(20) if maps_to_half(c)]
    assert sorted((c.a, c.c, c.width) for c in over) == [(1, 2, 10), (1, 6, 10), (1, 10, 2), (3, 10, 2)]
    with pytest.raises(ValueError):
        maps_to_half(enumerate_cusps(6)[0])


def test_maps_to_half_agrees_with_orbit_membership():
    for M in range(4, 201, 4):
        for c in enumerate_cusps(M):
            assert maps_to_half(c) == lies_over_half(c)
            assert maps_to_half(c) == (image_cusp(c, 4) == find_cusp(4, 1, 2))


def test_sigma_examples():
    s = sigma_divisor(4, 1)
    assert s.coefficients == {find_cusp(4, 1, 2): Fraction(1, 4)}
    s20 = sigma_divisor(20, 1)
    assert sorted(s20.coefficients.values()) == [Fraction(1, 2)] * 2 + [Fraction(5, 2)] * 2
    for j in range(5):
        k = 4 * j + 1
        assert sigma_divisor(4, k)[find_cusp(4, 1, 2)] == Fraction(k, 4)
    with pytest.raises(ValueError):
        sigma_divisor(10, 1)


@pytest.mark.parametrize("M", [20, 36, 68, 120])
def test_sigma_linear_in_k(M):
    base = sigma_divisor(M, 1)
    for k in (3, 5, 7):
        assert sigma_divisor(M, k) == base.scale(k)


def test_floor_degree():
    assert floor_degree(sigma_divisor(4, 1)) == 0
    assert floor_degree(sigma_divisor(20, 1)) == 4
    assert floor_degree(sigma_divisor(68, 3)) == 208
    assert sigma_divisor(20, 1).floor().degree() == 4


def test_genus():
    assert genus_gamma1(4) == 0
    assert genus_gamma1(20) == 3
    assert genus_gamma1(68) == 105
    # small levels of genus zero and the first positive genera
    assert [genus_gamma1(M) for M in range(5, 17)] == [0, 0, 0, 0, 0, 0, 1, 0, 2, 1, 1, 2]
    with pytest.raises(ValueError):
        genus_gamma1(3)


def test_base_change():
    assert not base_change_holds(20, 1)
    assert not base_change_holds(68, 3)
    assert base_change_holds(4, 1)


def test_scan():
    assert counterexample_scan(1, 400) == 20
    assert counterexample_scan(3, 400) == 68
    assert counterexample_scan(5, 400) is None
    assert counterexample_scan(1, 16) is None
    with pytest.raises(ValueError):
        counterexample_scan(2, 40)


def test_degree_identities_examples():
    r4 = degree_identities(4)
    assert r4.passed and r4.sigma4_degree == 1 and r4.genus == 0
    r20 = degree_identities(20)
    assert r20.passed and r20.sigma4_degree == 24
    assert r20.fiber_width_sums == {"inf": 24, "0": 96, "1/2": 24}
    assert set(r20.fiber_ramification_sums.values()) == {Fraction(24)}


def test_degree_identities_range():
    for M in range(4, 201, 4):
        assert degree_identities(M).passed, M


@pytest.mark.parametrize("N,M", [(4, 20), (4, 68), (20, 60), (12, 36), (8, 40)])
def test_pullback_compatibility(N, M):
    for k in (1, 3):
        assert pullback_divisor(sigma_divisor(N, k), M) == sigma_divisor(M, k)
        pulled = pullback_divisor(sigma_divisor(N, k), M)
        assert pulled.degree() == sigma_divisor(N, k).degree() * Fraction(mu_bar(M), mu_bar(N))


def test_qdivisor_rejects_foreign_cusps():
    with pytest.raises(ValueError):
        QDivisor(8, {enumerate_cusps(4)[0]: 1})


def test_image_cusp():
    c = find_cusp(20, 1, 10)
    assert image_cusp(c, 4) == find_cusp(4, 1, 2)
    with pytest.raises(ValueError):
        image_cusp(c, 8)
