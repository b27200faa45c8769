"""Theta, its expansions at the 4-torsion cusps, and the modular units Theta_m.

Precisions in this module are integer q-exponent bounds: ``prec=10`` means
every coefficient of q^e with e < 10 is exact, whatever grid the series
lives on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .cyclonum import (
    epsilon_d,
    gauss_sum,
    is_prime,
    jacobi_symbol,
    zeta,
)
from .qlaurent import (
    QSeries,
    SubstSpec,
    qs_inv,
    qs_mul,
    qs_subst,
    scale_exponents,
)


# ---------------------------------------------------------------------------
# points of order 4 on Tate(q)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourTorsionClass:
    """Isomorphism class of (Tate(q), P) with P of order 4.

    ``kind`` is "Z4" (P = zeta_4), "Z4Q2" (P = zeta_4 q_2) or "Z4kQ4"
    (P = zeta_4^k q_4, k in {0, 1, 3}).
    """

    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("Z4", "Z4Q2", "Z4kQ4"):
            raise ValueError(f"unknown 4-torsion class {self.kind!r}")
        if self.kind == "Z4kQ4":
            if self.k not in (0, 1, 2, 3):
                raise ValueError(f"k must be in 0..3, got {self.k}")
            if self.k == 2:
                # the prefactor 1/(1 + zeta_4^k) is undefined at k = 2
                raise ValueError("no expansion is available for the class zeta_4^2 q_4")
        elif self.k:
            raise ValueError(f"{self.kind} takes no k")

    @property
    def over_half(self) -> bool:
        return self.kind == "Z4Q2"

    @property
    def name(self) -> str:
        return {"Z4": "inf", "Z4Q2": "half"}.get(self.kind, f"zero-{self.k}")

    @classmethod
    def parse(cls, name: str) -> "FourTorsionClass":
        """CLI names: "inf", "half", "zero-k"."""
        if name == "inf":
            return Z4
        if name == "half":
            return Z4Q2
        if name.startswith("zero-"):
            return Z4kQ4(int(name[5:]))
        raise ValueError(f"unknown cusp name {name!r}; expected inf, half or zero-k")


Z4 = FourTorsionClass("Z4")
Z4Q2 = FourTorsionClass("Z4Q2")


def Z4kQ4(k: int) -> FourTorsionClass:
    return FourTorsionClass("Z4kQ4", k)


# ---------------------------------------------------------------------------
# Theta_m variants
# ---------------------------------------------------------------------------

def _check_odd_prime(l: int) -> None:
    if l < 3 or not is_prime(l):
        raise ValueError(f"expected an odd prime, got {l}")


@dataclass(frozen=True)
class GenericM:
    """Point P of order 4m with 4P = zeta_m^t q_m and mP = zeta_4."""

    m: int
    t: int = 0

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"m must be odd and positive, got {self.m}")


@dataclass(frozen=True)
class SubgroupZeta:
    """(Tate(q), zeta_4, <zeta_{l^2}>) for Theta_{l^2}."""

    l: int

    def __post_init__(self):
        _check_odd_prime(self.l)


@dataclass(frozen=True)
class SubgroupZetaQ:
    """(Tate(q), zeta_4, <zeta_{l^2}^j q_l>) for Theta_{l^2}."""

    l: int
    j: int = 1

    def __post_init__(self):
        _check_odd_prime(self.l)
        if self.j % self.l == 0:
            raise ValueError(f"j must be prime to {self.l}, got {self.j}")


@dataclass(frozen=True)
class PrimeLevel:
    """Point P of order 4l with 4P = zeta_l^t and lP = zeta_4, for Theta_l."""

    l: int
    t: int = 1

    def __post_init__(self):
        _check_odd_prime(self.l)
        if self.t % self.l == 0:
            raise ValueError(f"t must be prime to {self.l}, got {self.t}")


ThetaUnitVariant = Union[GenericM, SubgroupZeta, SubgroupZetaQ, PrimeLevel]


class AdjustedExpansion(QSeries):
    """A q-expansion after multiplication by theta_P^k; remembers k."""

    __slots__ = ("weight",)

    @classmethod
    def wrap(cls, series: QSeries, weight: int) -> "AdjustedExpansion":
        obj = cls.__new__(cls)
        obj.terms = series.terms
        obj.prec = series.prec
        obj.denom = series.denom
        obj.conductor = series.conductor
        obj.weight = weight
        return obj

    def __repr__(self) -> str:
        return f"AdjustedExpansion(weight={self.weight}/2, {self})"


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def theta_series(prec: int) -> QSeries:
    """sum_{n in Z} q^(n^2) = 1 + 2q + 2q^4 + ... + O(q^prec)."""
    if prec < 1:
        raise ValueError(f"precision must be >= 1, got {prec}")
    terms = {0: 1}
    n = 1
    while n * n < prec:
        terms[n * n] = 2
        n += 1
    return QSeries(terms, prec)


def theta_at_4torsion(c: FourTorsionClass, prec: int) -> QSeries:
    """The expansion of theta at (Tate(q), P) for the given class of P."""
    if c.kind == "Z4":
        return theta_series(prec)
    bound = 4 * prec
    if c.kind == "Z4Q2":
        # q_4 * sum q^(n^2+n); n and -n-1 give the same exponent
        terms = {}
        n = 0
        while 1 + 4 * n * (n + 1) < bound:
            terms[1 + 4 * n * (n + 1)] = 2
            n += 1
        return QSeries(terms, bound, 4)
    # (1 + zeta_4^k)^-1 sum zeta_4^(k n^2) q_4^(n^2)
    series = qs_subst(theta_series(bound), SubstSpec(4, c.k))
    return series.scale((1 + zeta(4, c.k)).inverse())


def theta_unit(v: ThetaUnitVariant, prec: int) -> QSeries:
    """Expansion of the relevant Theta_m at the cusp described by ``v``."""
    inv_theta = qs_inv(theta_series(prec))
    if isinstance(v, GenericM):
        numer = qs_subst(theta_series(v.m * prec), SubstSpec(v.m, v.t))
        return qs_mul(numer, inv_theta)
    l = v.l
    if isinstance(v, SubgroupZeta):
        numer = scale_exponents(theta_series(-(-prec // (l * l))), l * l)
        return qs_mul(numer, inv_theta).scale(l)
    if isinstance(v, SubgroupZetaQ):
        # zeta_{l^2}^(l j) is zeta_l^j, so the twist is written over conductor l
        root = zeta(l, v.j)
        numer = qs_subst(theta_series(prec), SubstSpec(1, v.j, order=l))
        const = gauss_sum(l, root).scale(jacobi_symbol(-1, l))
        return qs_mul(numer, inv_theta).scale(const)
    if isinstance(v, PrimeLevel):
        numer = scale_exponents(theta_series(-(-prec // l)), l)
        return qs_mul(numer, inv_theta).scale(gauss_sum(l, zeta(l, v.t)))
    raise TypeError(f"unknown unit variant {v!r}")


def adjust_expansion(raw: QSeries, c: FourTorsionClass, k: int) -> AdjustedExpansion:
    """raw * theta_P^k: the classical expansion of a weight k/2 rule value."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"weight numerator must be odd and positive, got {k}")
    # enough theta to cover the raw series including a principal part
    bound = Fraction(raw.prec, raw.denom) - min(0, raw.valuation())
    theta = theta_at_4torsion(c, math.ceil(bound) + 1)
    return AdjustedExpansion.wrap(qs_mul(raw, theta ** k), k)


def pole_bound(N: int, k: int, over_half: bool) -> int:
    """Allowed pole order e in q_{4N} of a rule value at a cusp."""
    return N * k if over_half else 0


def is_holomorphic_expansion(adj: QSeries) -> bool:
    return all(m >= 0 for m in adj.terms)


# ---------------------------------------------------------------------------
# numerical check of the theta transformation law
# ---------------------------------------------------------------------------

def theta_numeric(tau: complex, n_terms: int) -> complex:
    """sum_{|n| <= n_terms} exp(2 pi i n^2 tau) in double precision."""
    x, y = tau.real, tau.imag
    total = 0j
    for n in range(n_terms, 0, -1):
        n2 = n * n
        mag = math.exp(-2 * math.pi * n2 * y)
        if mag == 0.0:
            continue
        phase = (n2 * x) % 1.0
        total += mag * cmath.exp(2j * math.pi * phase)
    return 1 + 2 * total


def verify_transformation_law(a: int, b: int, c: int, d: int, tau: complex, n_terms: int) -> float:
    """Relative error of theta(g tau) = eps_d^-1 (c/d) (c tau + d)^(1/2) theta(tau).

    The square root is the principal branch, argument in (-pi/2, pi/2].
    """
    if a * d - b * c != 1:
        raise ValueError(f"determinant of ({a},{b};{c},{d}) is not 1")
    if c % 4:
        raise ValueError(f"lower-left entry {c} is not divisible by 4")
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau = {tau} is not in the upper half-plane")
    j = c * tau + d
    image = (a * tau + b) / j
    eps = epsilon_numeric(d)
    rhs = jacobi_symbol(c, d) / eps * cmath.sqrt(j) * theta_numeric(tau, n_terms)
    lhs = theta_numeric(image, n_terms)
    base = theta_numeric(tau, n_terms)
    return abs(lhs - rhs) / abs(base)


def epsilon_numeric(d: int) -> complex:
    """eps_d as a Python complex (1 or i)."""
    e = epsilon_d(d)
    return 1 if e == 1 else 1j
