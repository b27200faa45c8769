"""Hecke operators on adjusted q-expansions of half-integral weight forms.

Each operator has two realisations:

* a closed coefficient formula acting on the adjusted expansion
  ``A = sum a_n q^n``;
* a geometric oracle that takes the raw rule value ``F(Tate(q), zeta_4N)``
  and sums the substituted series over the Tate-curve subgroups of the
  relevant order, weighting each by the appropriate power of a modular
  unit.  The result is re-adjusted by ``theta^k`` so that both
  realisations return comparable expansions.

Agreement of the two is checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .cyclonum import (
    CycNumber,
    gauss_sum,
    is_prime,
    is_root_of_unity,
    jacobi_symbol,
    lcm,
    p_valuation,
    zeta,
)
from .qlaurent import (
    QSeries,
    SubstSpec,
    _integral,
    extract_arithmetic,
    qs_add,
    qs_inv,
    qs_mul,
    qs_subst,
    scale_exponents,
)
from .thetaforms import (
    AdjustedExpansion,
    GenericM,
    PrimeLevel,
    SubgroupZeta,
    SubgroupZetaQ,
    theta_series,
    theta_unit,
)


# ---------------------------------------------------------------------------
# characters and context
# ---------------------------------------------------------------------------

def _as_cyc(x) -> CycNumber:
    return x if isinstance(x, CycNumber) else CycNumber.rational(x)


class Character:
    """A Dirichlet character modulo ``modulus`` with cyclotomic values."""

    def __init__(self, modulus: int, values: Mapping[int, Union[CycNumber, int]]):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        units = [a for a in range(modulus) if math.gcd(a, modulus) == 1]
        table = {a % modulus: _as_cyc(v) for a, v in values.items()}
        if sorted(table) != units:
            raise ValueError(f"character values must be given on exactly the units mod {modulus}")
        for a in units:
            if not is_root_of_unity(table[a]):
                raise ValueError(f"chi({a}) = {table[a]} is not a root of unity")
        for a in units:
            for b in units:
                if table[a] * table[b] != table[a * b % modulus]:
                    raise ValueError(f"not multiplicative: chi({a}) chi({b}) != chi({a * b % modulus})")
        self.modulus = modulus
        self._values = table

    @classmethod
    def trivial(cls, modulus: int) -> "Character":
        one = CycNumber.rational(1)
        return cls(modulus, {a: one for a in range(modulus) if math.gcd(a, modulus) == 1})

    @classmethod
    def from_function(cls, modulus: int, f: Callable[[int], Union[CycNumber, int]]) -> "Character":
        return cls(modulus, {a: f(a) for a in range(modulus) if math.gcd(a, modulus) == 1})

    @property
    def conductor_hint(self) -> int:
        """lcm of the cyclotomic conductors of the values."""
        out = 1
        for v in self._values.values():
            out = lcm(out, v.conductor)
        return out

    def __call__(self, a: int) -> CycNumber:
        a %= self.modulus
        if math.gcd(a, self.modulus) != 1:
            return CycNumber.rational(0)
        return self._values[a]

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self._values.values())

    def __repr__(self) -> str:
        return f"Character(modulus={self.modulus}{', trivial' if self.is_trivial() else ''})"


@dataclass
class HeckeContext:
    level: int
    k: int
    chi: Optional[Character] = field(default=None)

    def __post_init__(self):
        if self.level < 4 or self.level % 4:
            raise ValueError(f"level must be a positive multiple of 4, got {self.level}")
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be odd and positive, got {self.k}")
        if self.chi is None:
            self.chi = Character.trivial(self.level)
        elif self.chi.modulus != self.level:
            raise ValueError(f"character modulus {self.chi.modulus} does not match level {self.level}")


def _check_weight(A: QSeries, ctx: HeckeContext) -> None:
    w = getattr(A, "weight", None)
    if w is not None and w != ctx.k:
        raise ValueError(f"expansion has weight {w}/2 but the context has weight {ctx.k}/2")


def _check_hecke_prime(l: int, ctx: HeckeContext) -> None:
    if l < 3 or not is_prime(l):
        raise ValueError(f"l must be an odd prime, got {l}")
    if ctx.level % l == 0:
        raise ValueError(f"l = {l} divides the level {ctx.level}")


def _check_u_prime(l: int, ctx: HeckeContext, zeta_choice: CycNumber) -> None:
    if l < 3 or not is_prime(l):
        raise ValueError(f"l must be an odd prime, got {l}")
    if (ctx.level // 4) % l:
        raise ValueError(f"l = {l} does not divide N = {ctx.level // 4}")
    M = ctx.level
    if zeta_choice ** M != 1 or any(zeta_choice ** (M // p) == 1 for p in _primes_of(M)):
        raise ValueError(f"{zeta_choice} is not a primitive {M}-th root of unity")


def _primes_of(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]


def _wrap(series: QSeries, k: int) -> AdjustedExpansion:
    return AdjustedExpansion.wrap(series.reduced(), k)


# ---------------------------------------------------------------------------
# T_{l^2}
# ---------------------------------------------------------------------------

def t_l2_closed(A: QSeries, ctx: HeckeContext, l: int) -> AdjustedExpansion:
    """b_n = a_{l^2 n} + chi(l) (-1/l)^((k-1)/2) l^((k-1)/2 - 1) (n/l) a_n
    + chi(l^2) l^(k-2) a_{n/l^2}."""
    _check_hecke_prime(l, ctx)
    _check_weight(A, ctx)
    A = _integral(A, "t_l2_closed")
    k, chi = ctx.k, ctx.chi
    h = (k - 1) // 2
    mid = chi(l).scale(Fraction(jacobi_symbol(-1, l) ** h) * Fraction(l) ** (h - 1))
    low = chi(l * l).scale(Fraction(l) ** (k - 2))
    L2 = l * l
    prec = A.prec // L2
    a = A.terms
    keys = set()
    for m in a:
        keys.update((m, m * L2))
        if m % L2 == 0:
            keys.add(m // L2)
    out = {}
    for n in keys:
        if n >= prec:
            continue
        b = a.get(n * L2)
        b = CycNumber.rational(0) if b is None else b
        s = jacobi_symbol(n, l)
        if s and n in a:
            b = b + mid * a[n] if s == 1 else b - mid * a[n]
        if n % L2 == 0 and n // L2 in a:
            b = b + low * a[n // L2]
        out[n] = b
    return AdjustedExpansion.wrap(QSeries(out, prec, 1, None), k)


def t_l2_geometric(raw: QSeries, ctx: HeckeContext, l: int, prec: int) -> AdjustedExpansion:
    """(1/l^2) pi_1* (pi_2* F . Theta_{l^2}^k) as a sum over the cyclic
    subgroups of order l^2 of Tate(q): <zeta_{l^2}>, <zeta_{l^2}^i q_{l^2}>
    and <zeta_{l^2}^j q_l>.

    ``prec`` is the integer q-exponent bound of the result; ``raw`` must be
    known to at least ``l^2 * prec``.
    """
    _check_hecke_prime(l, ctx)
    k, chi = ctx.k, ctx.chi
    L2 = l * l
    # <zeta_{l^2}>: the quotient curve is Tate(q^{l^2})
    total = qs_mul(
        scale_exponents(raw, L2),
        theta_unit(SubgroupZeta(l), prec) ** k,
    ).scale(chi(L2))
    # <zeta_{l^2}^i q_{l^2}>: quotient Tate(zeta_{l^2}^i q_{l^2})
    for i in range(L2):
        term = qs_mul(
            qs_subst(raw, SubstSpec(L2, i)),
            theta_unit(GenericM(L2, i), prec) ** k,
        )
        total = qs_add(total, term)
    # <zeta_{l^2}^j q_l>: quotient Tate(zeta_l^j q)
    for j in range(1, l):
        term = qs_mul(
            qs_subst(raw, SubstSpec(1, j, order=l)),
            theta_unit(SubgroupZetaQ(l, j), prec) ** k,
        ).scale(chi(l))
        total = qs_add(total, term)
    result = qs_mul(total, theta_series(prec) ** k).scale(Fraction(1, L2))
    return _wrap(result.truncate_exponent(prec), k)


# ---------------------------------------------------------------------------
# U_l for l | N
# ---------------------------------------------------------------------------

def _root_index(z: CycNumber, l: int) -> int:
    for t in range(1, l):
        if zeta(l, t) == z:
            return t
    raise ValueError(f"{z} is not a primitive {l}-th root of unity")


def u_l_closed(A: QSeries, ctx: HeckeContext, l: int, zeta_choice: CycNumber) -> AdjustedExpansion:
    """sum a_n q^n -> g_l(zeta^(4N/l)) sum a_(l n) q^n."""
    _check_u_prime(l, ctx, zeta_choice)
    _check_weight(A, ctx)
    g = gauss_sum(l, zeta_choice ** (ctx.level // l))
    return AdjustedExpansion.wrap(extract_arithmetic(A, l).scale(g), ctx.k)


def u_l_geometric(
    raw: QSeries, ctx: HeckeContext, l: int, zeta_choice: CycNumber, prec: int
) -> AdjustedExpansion:
    """Sum over the subgroups <zeta_l^i q_l> weighted by Theta_l^-k.

    The unit is normalised by the rational constant ((-1/l) l)^((k+1)/2) =
    g^(k+1) so that the outcome carries the single Gauss-sum factor of the
    closed formula; without it the sum equals g^-k sum a_(l n) q^n.
    ``raw`` must be known to ``l * prec``.
    """
    _check_u_prime(l, ctx, zeta_choice)
    k = ctx.k
    t = _root_index(zeta_choice ** (ctx.level // l), l)
    unit = theta_unit(PrimeLevel(l, t), l * prec)
    total = None
    for i in range(l):
        spec = SubstSpec(l, i)
        term = qs_mul(qs_subst(raw, spec), qs_inv(qs_subst(unit, spec)) ** k)
        total = term if total is None else qs_add(total, term)
    norm = Fraction(jacobi_symbol(-1, l) * l) ** ((k + 1) // 2) / l
    result = qs_mul(total, theta_series(prec) ** k).scale(norm)
    return _wrap(result.truncate_exponent(prec), k)


# ---------------------------------------------------------------------------
# U_{p^2} and integrality
# ---------------------------------------------------------------------------

def u_p2(A: QSeries, p: int) -> AdjustedExpansion:
    """sum a_n q^n -> sum a_(p^2 n) q^n."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    out = extract_arithmetic(A, p * p)
    return AdjustedExpansion.wrap(out, getattr(A, "weight", 0) or 0)


def _coord_valuation(x: CycNumber, p: int) -> Union[int, float]:
    if x.is_zero():
        return math.inf
    vden = p_valuation(x.denominator, p)
    return min(p_valuation(n, p) for n in x.numerators if n) - vden


def coeff_valuation(x: CycNumber, p: int) -> Union[int, float]:
    """min over power-basis coordinates of v_p; +inf for zero.

    Only meaningful as a valuation when p does not divide the conductor.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if x.conductor % p == 0:
        raise ValueError(f"p = {p} ramifies in Q(zeta_{x.conductor})")
    return _coord_valuation(x, p)


def series_valuation(f: QSeries, p: int) -> Union[int, float]:
    """Minimum coordinate-wise p-adic valuation over the coefficients of f.

    Coordinates in the power basis of Z[zeta_L]; this detects integrality
    exactly also when p divides L, since the power basis is a Z-basis of the
    ring of integers.
    """
    return min((_coord_valuation(c, p) for c in f.terms.values()), default=math.inf)


def normalized_unit_inverses(p: int, prec: int) -> dict[str, QSeries]:
    """p * Theta_{p^2}^-1 at the cusps <zeta_{p^2}>, <zeta_{p^2} q_p>, <q_{p^2}>.

    ``prec`` counts grid steps of each series' own grid.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    P2 = p * p
    q_p2 = theta_unit(GenericM(P2, 0), -(-prec // P2)).truncate(prec)
    series = {
        "<zeta_p2>": theta_unit(SubgroupZeta(p), prec),
        "<zeta_p2 q_p>": theta_unit(SubgroupZetaQ(p, 1), prec),
        "<q_p2>": q_p2,
    }
    return {name: qs_inv(s).scale(p) for name, s in series.items()}


@dataclass
class IntegralityReport:
    p: int
    prec: int
    minima: dict
    unscaled_minima: dict
    literal_minima: dict

    @property
    def passed(self) -> bool:
        return all(v >= 0 for v in self.minima.values())

    def to_json(self) -> dict:
        fix = lambda d: {k: (None if v == math.inf else v) for k, v in d.items()}
        return {
            "p": self.p,
            "prec": self.prec,
            "minima": fix(self.minima),
            "unscaled_minima": fix(self.unscaled_minima),
            "literal_minima": fix(self.literal_minima),
            "passed": self.passed,
        }


def check_unit_integrality(p: int, prec: int) -> IntegralityReport:
    """Minimum coordinate valuations of p * Theta_{p^2}^-1 at the three cusps.

    Passes iff every minimum is >= 0.  For comparison the report also holds
    the minima of Theta_{p^2}^-1 itself and of (p Theta_{p^2})^-1; both
    differ from the main ones by an exact power of p.
    """
    scaled = normalized_unit_inverses(p, prec)
    minima = {name: series_valuation(s, p) for name, s in scaled.items()}
    unscaled = {name: v - 1 for name, v in minima.items()}
    literal = {name: v - 2 for name, v in minima.items()}
    return IntegralityReport(p, prec, minima, unscaled, literal)
