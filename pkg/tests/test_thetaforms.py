import cmath
import random
from fractions import Fraction

import pytest

from halfweight.cyclonum import gauss_sum, jacobi_symbol, zeta
from halfweight.qlaurent import QSeries, SubstSpec, coefficient_at, qs_inv, qs_subst, scale_exponents
from halfweight.suites import SAMPLE_POINTS, random_gamma0_4
from halfweight.thetaforms import (
    Z4,
    Z4Q2,
    AdjustedExpansion,
    FourTorsionClass,
    GenericM,
    PrimeLevel,
    SubgroupZeta,
    SubgroupZetaQ,
    Z4kQ4,
    adjust_expansion,
    epsilon_numeric,
    is_holomorphic_expansion,
    pole_bound,
    theta_at_4torsion,
    theta_numeric,
    theta_series,
    theta_unit,
    verify_transformation_law,
)


def test_theta_series():
    t = theta_series(10)
    assert sorted(t.terms) == [0, 1, 4, 9]
    assert t.prec == 10
    assert theta_series(1) == QSeries.constant(1, 1)
    with pytest.raises(ValueError):
        theta_series(0)


def test_theta_at_half():
    t = theta_at_4torsion(Z4Q2, 13)
    assert t.denom == 4
    # q_4 sum q^(n^2+n): exponents 1/4 + (n^2 + n)
    assert [str(e) for e in t.exponents()] == ["1/4", "9/4", "25/4", "49/4"]
    assert all(c == 2 for c in t.terms.values())
    assert t.valuation() == Fraction(1, 4)


@pytest.mark.parametrize("k", [0, 1, 3])
def test_theta_at_zero_cusps(k):
    t = theta_at_4torsion(Z4kQ4(k), 6)
    const = (1 + zeta(4, k)).inverse()
    for n in range(5):
        assert coefficient_at(t, Fraction(n * n, 4)) == const * (2 if n else 1) * zeta(4, k * n * n)
    assert coefficient_at(t, Fraction(2, 4)) == 0


def test_four_torsion_class_validation():
    with pytest.raises(ValueError):
        Z4kQ4(2)
    with pytest.raises(ValueError):
        FourTorsionClass("Z4", 1)
    with pytest.raises(ValueError):
        FourTorsionClass("nonsense")
    assert FourTorsionClass.parse("half") == Z4Q2
    assert FourTorsionClass.parse("zero-3") == Z4kQ4(3)
    assert Z4Q2.over_half and not Z4.over_half
    with pytest.raises(ValueError):
        FourTorsionClass.parse("zero-2")


def test_unit_subgroup_zeta_examples():
    u = theta_unit(SubgroupZeta(3), 6)
    expected = qs_inv(theta_series(6)).scale(3)
    assert u == expected
    assert [coefficient_at(u, n) for n in range(6)] == [3, -6, 12, -24, 42, -72]


@pytest.mark.parametrize("l", [3, 5, 7])
def test_unit_subgroup_zeta_times_theta(l):
    P = 120
    lhs = theta_unit(SubgroupZeta(l), P) * theta_series(P)
    assert lhs == scale_exponents(theta_series(P), l * l).scale(l)
    assert lhs.prec == P


@pytest.mark.parametrize("m", [3, 9, 15])
def test_unit_generic_trivial_twist(m):
    u = theta_unit(GenericM(m, 0), 10)
    assert coefficient_at(u, 0) == 1
    assert all(c.is_rational() for c in u.terms.values())
    # times theta gives sum q^(n^2/m)
    assert u * theta_series(10) == qs_subst(theta_series(10 * m), SubstSpec(m))


def test_unit_generic_twisted():
    u = theta_unit(GenericM(9, 2), 6)
    numer = u * theta_series(6)
    for n in range(8):
        assert coefficient_at(numer, Fraction(n * n, 9)) == (2 if n else 1) * zeta(9, 2 * n * n)


def test_unit_prime_level():
    u = theta_unit(PrimeLevel(3, 1), 12)
    g = gauss_sum(3, zeta(3))
    assert coefficient_at(u, 0) == g
    assert u * theta_series(12) == scale_exponents(theta_series(4), 3).scale(g)


def test_unit_subgroup_zeta_q():
    l, j = 5, 2
    u = theta_unit(SubgroupZetaQ(l, j), 20)
    const = gauss_sum(l, zeta(l * l, l * j)).scale(jacobi_symbol(-1, l))
    numer = u * theta_series(20)
    for n in range(5):
        assert coefficient_at(numer, n * n) == const * (2 if n else 1) * zeta(l * l, l * j * n * n)


def test_unit_variant_validation():
    for bad in (lambda: GenericM(4), lambda: SubgroupZeta(9), lambda: SubgroupZetaQ(5, 10),
                lambda: PrimeLevel(3, 0), lambda: PrimeLevel(2)):
        with pytest.raises(ValueError):
            bad()


def test_adjust_cancels_division():
    inv = qs_inv(theta_series(50))
    adj = adjust_expansion(inv, Z4, 1)
    assert isinstance(adj, AdjustedExpansion) and adj.weight == 1
    assert adj == QSeries.constant(1, 50)
    assert is_holomorphic_expansion(adj)


def test_adjust_unit():
    adj = adjust_expansion(theta_unit(SubgroupZeta(3), 60), Z4, 1)
    assert adj == scale_exponents(theta_series(7), 9).scale(3)


def test_adjust_at_half_cancels_pole():
    # a raw value with the maximal allowed pole q_4^-k at the cusp 1/2 (N = 1)
    k = 3
    raw = QSeries({-k: 1, 0: 5}, 40, 4)
    adj = adjust_expansion(raw, Z4Q2, k)
    assert is_holomorphic_expansion(adj)
    assert coefficient_at(adj, 0) == 8
    assert pole_bound(1, k, True) == k
    worse = adjust_expansion(QSeries({-k - 1: 1}, 40, 4), Z4Q2, k)
    assert not is_holomorphic_expansion(worse)


def test_adjust_rejects_even_weight():
    with pytest.raises(ValueError):
        adjust_expansion(QSeries.constant(1, 5), Z4, 2)


def test_pole_bound():
    assert pole_bound(5, 3, True) == 15
    assert pole_bound(5, 3, False) == 0


def test_theta_numeric_matches_series():
    tau = 0.1 + 0.7j
    q = cmath.exp(2j * cmath.pi * tau)
    direct = sum(float(c.to_fraction()) * q ** m for m, c in theta_series(400).terms.items())
    assert abs(theta_numeric(tau, 30) - direct) < 1e-12


def test_transformation_law_identity_and_minus_identity():
    assert verify_transformation_law(1, 0, 0, 1, 0.3 + 1j, 50) == 0
    assert verify_transformation_law(-1, 0, 0, -1, 0.3 + 1j, 50) < 1e-14
    assert verify_transformation_law(1, 5, 0, 1, 0.1 + 0.5j, 200) < 1e-12


def test_transformation_law_random():
    rng = random.Random(11)
    worst = 0.0
    for _ in range(10):
        a, b, c, d = random_gamma0_4(rng)
        for tau in SAMPLE_POINTS:
            worst = max(worst, verify_transformation_law(a, b, c, d, tau, 400))
    assert worst < 1e-8


def test_transformation_law_detects_wrong_sign():
    # (a,b;c,d) = (1,0;4,1) satisfies the law; flipping the epsilon factor breaks it
    err = verify_transformation_law(1, 0, 4, 1, 0.2 + 0.4j, 200)
    assert err < 1e-10
    tau = 0.2 + 0.4j
    lhs = theta_numeric(tau / (4 * tau + 1), 200)
    wrong = -cmath.sqrt(4 * tau + 1) * theta_numeric(tau, 200)
    assert abs(lhs - wrong) > 0.1


def test_transformation_law_validation():
    with pytest.raises(ValueError):
        verify_transformation_law(1, 1, 1, 2, 1j, 10)
    with pytest.raises(ValueError):
        verify_transformation_law(1, 0, 2, 1, 1j, 10)
    with pytest.raises(ValueError):
        verify_transformation_law(1, 0, 0, 1, -1j, 10)


def test_epsilon_numeric():
    assert epsilon_numeric(5) == 1
    assert epsilon_numeric(7) == 1j
