import math
import random
from fractions import Fraction

import pytest

from halfweight.cyclonum import CycNumber, gauss_sum, jacobi_symbol, zeta
from halfweight.heckeops import (
    Character,
    HeckeContext,
    check_unit_integrality,
    coeff_valuation,
    normalized_unit_inverses,
    series_valuation,
    t_l2_closed,
    t_l2_geometric,
    u_l_closed,
    u_l_geometric,
    u_p2,
)
from halfweight.qlaurent import QSeries, coefficient_at, extract_arithmetic, qs_inv
from halfweight.thetaforms import Z4, AdjustedExpansion, SubgroupZeta, adjust_expansion, theta_series, theta_unit


def rand_series(seed, prec=400, n=25, low=0):
    rng = random.Random(seed)
    return QSeries({rng.randrange(low, prec): rng.randint(-9, 9) for _ in range(n)}, prec)


def naive_t_l2(a: dict, n: int, k: int, l: int, chi_l=1, chi_l2=1) -> Fraction:
    """Direct evaluation of the coefficient formula."""
    h = (k - 1) // 2
    b = Fraction(a.get(l * l * n, 0))
    b += chi_l * jacobi_symbol(-1, l) ** h * Fraction(l) ** (h - 1) * jacobi_symbol(n, l) * a.get(n, 0)
    if n % (l * l) == 0:
        b += chi_l2 * Fraction(l) ** (k - 2) * a.get(n // (l * l), 0)
    return b


# -- characters ---------------------------------------------------------------

def test_trivial_character():
    chi = Character.trivial(12)
    assert chi(5) == 1 and chi(7) == 1 and chi(2) == 0
    assert chi.is_trivial()


def test_quadratic_character():
    chi = Character.from_function(20, lambda a: jacobi_symbol(a, 5))
    assert chi(3) == -1 and chi(9) == 1 and chi(5) == 0
    assert not chi.is_trivial()


def test_character_validation():
    with pytest.raises(ValueError):
        Character.from_function(12, lambda a: 2)
    with pytest.raises(ValueError):
        Character.from_function(5, lambda a: -1 if a == 2 else 1)
    with pytest.raises(ValueError):
        Character(4, {1: 1})
    # order-4 character mod 5 with values in Q(zeta_4)
    chi = Character(5, {1: 1, 2: zeta(4), 4: -1, 3: -zeta(4)})
    assert chi(2) ** 4 == 1


def test_context_validation():
    with pytest.raises(ValueError):
        HeckeContext(6, 1)
    with pytest.raises(ValueError):
        HeckeContext(4, 2)
    with pytest.raises(ValueError):
        HeckeContext(8, 1, Character.trivial(4))
    assert HeckeContext(8, 3).chi.modulus == 8


# -- T_{l^2} ------------------------------------------------------------------

def test_t_l2_theta_l3():
    b = t_l2_closed(theta_series(900), HeckeContext(4, 1), 3)
    assert coefficient_at(b, 0) == Fraction(4, 3)
    assert coefficient_at(b, 1) == Fraction(8, 3)
    assert coefficient_at(b, 9) == Fraction(8, 3)
    assert coefficient_at(b, 2) == 0
    assert b.prec == 100


@pytest.mark.parametrize("l", [3, 5, 7])
def test_theta_is_eigenform(l):
    out = t_l2_closed(theta_series(l * l * 100), HeckeContext(4, 1), l)
    assert out == theta_series(100).scale(1 + Fraction(1, l))
    assert out.prec == 100


def test_t_l2_zero():
    out = t_l2_closed(QSeries.zero(90), HeckeContext(4, 1), 3)
    assert out.is_zero() and out.prec == 10


@pytest.mark.parametrize("k", [1, 3, 5])
@pytest.mark.parametrize("l", [3, 5])
def test_t_l2_matches_direct_formula(k, l):
    A = rand_series(k * 10 + l, prec=600, n=60)
    a = {m: c.to_fraction() for m, c in A.terms.items()}
    out = t_l2_closed(A, HeckeContext(4, k), l)
    for n in range(out.prec):
        assert coefficient_at(out, n) == naive_t_l2(a, n, k, l)


def test_t_l2_with_character():
    chi = Character.from_function(20, lambda a: jacobi_symbol(a, 5))
    A = rand_series(1, prec=450, n=40)
    a = {m: c.to_fraction() for m, c in A.terms.items()}
    out = t_l2_closed(A, HeckeContext(20, 3, chi), 3)
    for n in range(out.prec):
        assert coefficient_at(out, n) == naive_t_l2(a, n, 3, 3, chi_l=-1, chi_l2=1)


def test_t_l2_rejects_bad_input():
    ctx = HeckeContext(12, 1)
    with pytest.raises(ValueError):
        t_l2_closed(theta_series(90), ctx, 3)
    with pytest.raises(ValueError):
        t_l2_closed(theta_series(90), HeckeContext(4, 1), 9)
    with pytest.raises(ValueError):
        t_l2_closed(QSeries({1: 1}, 40, 4), HeckeContext(4, 1), 3)
    adj = adjust_expansion(QSeries.constant(1, 90), Z4, 3)
    with pytest.raises(ValueError):
        t_l2_closed(adj, HeckeContext(4, 1), 3)


def test_t_l2_commutes():
    ctx = HeckeContext(4, 3)
    for seed in range(20):
        A = rand_series(seed, prec=2500, n=40)
        x = t_l2_closed(t_l2_closed(A, ctx, 3), ctx, 5)
        y = t_l2_closed(t_l2_closed(A, ctx, 5), ctx, 3)
        assert x == y
        assert x.prec == y.prec == 11


def test_linearity():
    ctx = HeckeContext(12, 3)
    z = zeta(12)
    for seed in range(5):
        f, g = rand_series(seed), rand_series(seed + 50)
        c = Fraction(seed + 2, 7)
        assert t_l2_closed(f + g, HeckeContext(4, 3), 5) == t_l2_closed(f, HeckeContext(4, 3), 5) + t_l2_closed(g, HeckeContext(4, 3), 5)
        assert t_l2_closed(f.scale(c), HeckeContext(4, 3), 5) == t_l2_closed(f, HeckeContext(4, 3), 5).scale(c)
        assert u_l_closed(f + g, ctx, 3, z) == u_l_closed(f, ctx, 3, z) + u_l_closed(g, ctx, 3, z)
        assert u_l_closed(f.scale(c), ctx, 3, z) == u_l_closed(f, ctx, 3, z).scale(c)
        assert u_p2(f + g, 3) == u_p2(f, 3) + u_p2(g, 3)
        assert u_p2(f.scale(c), 5) == u_p2(f, 5).scale(c)


@pytest.mark.parametrize("level,k,l", [(4, 1, 3), (4, 3, 3), (20, 1, 3), (8, 5, 3)])
def test_oracle_small(level, k, l):
    P = 25
    theta = theta_series(l * l * P)
    for A in (theta, theta ** 3, theta * rand_series(3, prec=l * l * P, n=8)):
        raw = A * qs_inv(theta) ** k
        closed = t_l2_closed(adjust_expansion(raw, Z4, k), HeckeContext(level, k), l).truncate_exponent(P)
        assert closed == t_l2_geometric(raw, HeckeContext(level, k), l, P)


def test_oracle_with_character():
    chi = Character.from_function(20, lambda a: jacobi_symbol(a, 5))
    ctx = HeckeContext(20, 1, chi)
    P = 25
    theta = theta_series(9 * P)
    raw = theta * theta * rand_series(9, prec=9 * P, n=6)
    closed = t_l2_closed(adjust_expansion(raw, Z4, 1), ctx, 3).truncate_exponent(P)
    assert closed == t_l2_geometric(raw, ctx, 3, P)


def test_oracle_zero():
    out = t_l2_geometric(QSeries.zero(90), HeckeContext(4, 1), 3, 10)
    assert out.is_zero()


# -- U_l ----------------------------------------------------------------------

def test_u_l_closed_example():
    A = QSeries({n: n + 1 for n in range(60)}, 60)
    out = u_l_closed(A, HeckeContext(12, 1), 3, zeta(12))
    g = gauss_sum(3, zeta(3))
    assert out == QSeries({n: 3 * n + 1 for n in range(20)}, 20).scale(g)
    killed = QSeries({n: 1 for n in range(60) if n % 3}, 60)
    assert u_l_closed(killed, HeckeContext(12, 1), 3, zeta(12)).is_zero()


def test_u_l_twice_scalar_for_every_primitive_root():
    A = rand_series(4, prec=900, n=80)
    ctx = HeckeContext(12, 1)
    for j in (1, 5, 7, 11):
        z = zeta(12, j)
        twice = u_l_closed(u_l_closed(A, ctx, 3, z), ctx, 3, z)
        assert twice == extract_arithmetic(A, 9).scale(-3)


@pytest.mark.parametrize("k", [1, 3])
def test_u_l_oracle_level12(k):
    P = 40
    ctx = HeckeContext(12, k)
    theta = theta_series(3 * P)
    for raw in (theta ** 2, QSeries.constant(1, 3 * P), rand_series(k, prec=3 * P, n=12)):
        for j in (1, 5):
            z = zeta(12, j)
            closed = u_l_closed(adjust_expansion(raw, Z4, k), ctx, 3, z).truncate_exponent(P)
            assert closed == u_l_geometric(raw, ctx, 3, z, P)


def test_u_l_oracle_level20_l5():
    P = 20
    ctx = HeckeContext(20, 1)
    raw = rand_series(8, prec=5 * P, n=15)
    z = zeta(20, 3)
    closed = u_l_closed(adjust_expansion(raw, Z4, 1), ctx, 5, z).truncate_exponent(P)
    assert closed == u_l_geometric(raw, ctx, 5, z, P)


def test_u_l_all_ones():
    P = 30
    ones = QSeries({n: 1 for n in range(3 * P)}, 3 * P)
    raw = ones * qs_inv(theta_series(3 * P))
    out = u_l_geometric(raw, HeckeContext(12, 1), 3, zeta(12), P)
    assert out == QSeries({n: 1 for n in range(P)}, P).scale(gauss_sum(3, zeta(3)))


def test_u_l_oracle_zero():
    assert u_l_geometric(QSeries.zero(90), HeckeContext(12, 1), 3, zeta(12), 30).is_zero()


def test_u_l_errors():
    with pytest.raises(ValueError):
        u_l_closed(theta_series(30), HeckeContext(20, 1), 3, zeta(20))
    with pytest.raises(ValueError):
        u_l_closed(theta_series(30), HeckeContext(12, 1), 3, zeta(6))
    with pytest.raises(ValueError):
        u_l_closed(theta_series(30), HeckeContext(12, 1), 3, zeta(12, 2))


# -- U_{p^2} and integrality -----------------------------------------------------

@pytest.mark.parametrize("p", [3, 5])
def test_u_p2_theta(p):
    out = u_p2(theta_series(p * p * 100), p)
    assert out == theta_series(100) and out.prec == 100


def test_u_p2_examples():
    ones = QSeries({n: 1 for n in range(90)}, 90)
    assert u_p2(ones, 3) == QSeries({n: 1 for n in range(10)}, 10)
    assert u_p2(QSeries({n: 1 for n in range(90) if n % 9}, 90), 3).is_zero()
    adj = AdjustedExpansion.wrap(theta_series(90), 3)
    assert u_p2(adj, 3).weight == 3
    with pytest.raises(ValueError):
        u_p2(theta_series(90), 4)


def test_u_p2_does_not_lower_valuation():
    rng = random.Random(0)
    for _ in range(20):
        f = QSeries({rng.randrange(200): Fraction(rng.randint(1, 50), rng.choice([1, 3, 9, 25])) for _ in range(40)}, 200)
        for p in (3, 5):
            assert series_valuation(u_p2(f, p), p) >= series_valuation(f, p)


def test_coeff_valuation():
    assert coeff_valuation(CycNumber.rational(Fraction(1, 5)), 5) == -1
    assert coeff_valuation(zeta(3) + 3, 5) == 0
    assert coeff_valuation(zeta(12).scale(5), 5) == 1
    assert coeff_valuation(CycNumber.rational(0, 3), 5) == math.inf
    with pytest.raises(ValueError):
        coeff_valuation(zeta(5), 5)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_unit_integrality(p):
    r = check_unit_integrality(p, 120)
    assert r.passed
    assert r.minima == {"<zeta_p2>": 0, "<zeta_p2 q_p>": 0, "<q_p2>": 1}
    assert r.unscaled_minima["<zeta_p2>"] == -1
    assert min(r.literal_minima.values()) < 0


def test_unscaled_unit_inverse_has_pole_in_p():
    inv = qs_inv(theta_unit(SubgroupZeta(5), 50))
    assert series_valuation(inv, 5) == -1
    assert coefficient_at(inv, 0) == Fraction(1, 5)


def test_normalized_unit_inverses_grids():
    series = normalized_unit_inverses(5, 100)
    assert series["<q_p2>"].denom == 25 and series["<q_p2>"].prec == 100
    assert series["<zeta_p2>"].prec == 100
    assert coefficient_at(series["<zeta_p2>"], 0) == 1
