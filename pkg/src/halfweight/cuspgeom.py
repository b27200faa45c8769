"""Cusps of Gamma_1(M), the divisor Sigma_{4N,k}, and the base-change inequality.

A cusp of Gamma_1(M) is an orbit of coprime pairs (a : c) under

    (a', c') = +-(a + j c, c)  (mod M)  for some j,

so it is determined by c mod M together with a mod gcd(c, M), up to a
simultaneous sign.  Each orbit is stored through its lexicographically least
residue pair (c mod M, a mod gcd(c, M)) and a coprime integer lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .cyclonum import divisors, euler_phi, prime_factors


@dataclass(frozen=True, order=True)
class Cusp:
    level: int
    c: int
    a: int
    width: int = field(compare=False)

    @property
    def dgcd(self) -> int:
        return math.gcd(self.c, self.level)

    @property
    def key(self) -> tuple[int, int]:
        return _canonical(self.a, self.c, self.level)

    def label(self) -> str:
        if self.c == 0:
            return "inf"
        if self.c == 1:
            return str(self.a)
        return f"{self.a}/{self.c}"

    def __str__(self) -> str:
        return f"({self.a}:{self.c})"

    def to_json(self) -> dict:
        return {"a": self.a, "c": self.c, "label": self.label(), "width": self.width}


def _canonical(a: int, c: int, M: int) -> tuple[int, int]:
    """Least residue pair (c mod M, a mod gcd(c, M)) of the +- orbit."""
    g = math.gcd(c, M)
    return min((c % M, a % g), ((-c) % M, (-a) % g))


def gamma1_equivalent(x: tuple[int, int], y: tuple[int, int], M: int) -> bool:
    """Brute-force orbit test: (a', c') = +-(a + j c, c) mod M for some j."""
    (a, c), (a2, c2) = x, y
    for s in (1, -1):
        if (s * c - c2) % M:
            continue
        for j in range(M):
            if (s * (a + j * c) - a2) % M == 0:
                return True
    return False


def _lift(c0: int, a0: int, M: int) -> tuple[int, int]:
    """A coprime integer pair (a, c) in the orbit with residues (c0, a0)."""
    g = math.gcd(c0, M)
    if c0 == 0:
        return (1, 0) if a0 == 1 else (a0, M)
    a = a0
    while math.gcd(a, c0) != 1:
        a += g
    return a, c0


_LEVEL4_WIDTHS = {(0, 1): 1, (1, 0): 4, (2, 1): 1}   # inf, 0, 1/2


@lru_cache(maxsize=None)
def _cusps(M: int) -> tuple[Cusp, ...]:
    out = []
    for c0 in range(M // 2 + 1):
        g = math.gcd(c0, M)
        for a0 in range(g):
            if math.gcd(a0, g) != 1 or _canonical(a0, c0, M) != (c0, a0):
                continue
            a, c = _lift(c0, a0, M)
            width = _LEVEL4_WIDTHS[(c0, a0)] if M == 4 else M // g
            out.append(Cusp(M, c, a, width))
    return tuple(sorted(out, key=lambda x: x.key))


def enumerate_cusps(M: int) -> list[Cusp]:
    if M < 4:
        raise ValueError(f"level must be at least 4, got {M}")
    return list(_cusps(M))


def find_cusp(M: int, a: int, c: int) -> Cusp:
    """The enumerated cusp of level M containing the pair (a : c)."""
    if math.gcd(a, c) != 1:
        raise ValueError(f"({a}:{c}) is not a coprime pair")
    key = _canonical(a, c, M)
    for cusp in enumerate_cusps(M):
        if cusp.key == key:
            return cusp
    raise AssertionError(f"cusp ({a}:{c}) missing from level {M}")  # pragma: no cover


def image_cusp(cusp: Cusp, N: int) -> Cusp:
    """Image of a level-M cusp on X_1(N) for N | M."""
    if cusp.level % N:
        raise ValueError(f"{N} does not divide {cusp.level}")
    return find_cusp(N, cusp.a, cusp.c)


def _check_level4(M: int) -> None:
    if M < 4 or M % 4:
        raise ValueError(f"level must be a positive multiple of 4, got {M}")


def maps_to_half(cusp: Cusp) -> bool:
    _check_level4(cusp.level)
    return cusp.c % 4 == 2


def lies_over_half(cusp: Cusp) -> bool:
    """Same as maps_to_half, by explicit Gamma_1(4) orbit membership."""
    _check_level4(cusp.level)
    return gamma1_equivalent((cusp.a % 4, cusp.c % 4), (1, 2), 4)


# ---------------------------------------------------------------------------
# Q-divisors
# ---------------------------------------------------------------------------

@dataclass
class QDivisor:
    level: int
    coefficients: dict = field(default_factory=dict)   # Cusp -> Fraction

    def __post_init__(self):
        known = set(_cusps(self.level))
        for cusp in self.coefficients:
            if cusp not in known:
                raise ValueError(f"{cusp} is not an enumerated cusp of level {self.level}")
        self.coefficients = {c: Fraction(v) for c, v in self.coefficients.items() if v}

    def __getitem__(self, cusp: Cusp) -> Fraction:
        return self.coefficients.get(cusp, Fraction(0))

    def degree(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))

    def floor(self) -> "QDivisor":
        return QDivisor(self.level, {c: math.floor(v) for c, v in self.coefficients.items()})

    def scale(self, r) -> "QDivisor":
        return QDivisor(self.level, {c: v * r for c, v in self.coefficients.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QDivisor):
            return NotImplemented
        return self.level == other.level and self.coefficients == other.coefficients

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "coefficients": [
                {**c.to_json(), "coefficient": str(v)}
                for c, v in sorted(self.coefficients.items(), key=lambda cv: cv[0].key)
            ],
        }


def sigma_divisor(fourN: int, k: int) -> QDivisor:
    """Sigma_{4N,k} = sum over cusps c above 1/2 of (k w_c / 4) c."""
    _check_level4(fourN)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return QDivisor(
        fourN,
        {c: Fraction(k * c.width, 4) for c in _cusps(fourN) if maps_to_half(c)},
    )


def floor_degree(D: QDivisor) -> int:
    return sum(math.floor(v) for v in D.coefficients.values())


def ramification_index(cusp: Cusp, N: int) -> Fraction:
    """e_c of X_1(M) -> X_1(N) at c, as the ratio of widths."""
    return Fraction(cusp.width, image_cusp(cusp, N).width)


def pullback_divisor(D: QDivisor, M: int) -> QDivisor:
    """pi^* D along X_1(M) -> X_1(D.level)."""
    if M % D.level:
        raise ValueError(f"{D.level} does not divide {M}")
    out = {}
    for c in _cusps(M):
        base = image_cusp(c, D.level)
        if D[base]:
            out[c] = ramification_index(c, D.level) * D[base]
    return QDivisor(M, out)


# ---------------------------------------------------------------------------
# genus and the base-change inequality
# ---------------------------------------------------------------------------

def mu_bar(M: int) -> int:
    """Index of +-Gamma_1(M) in SL_2(Z)."""
    if M < 1:
        raise ValueError(f"level must be positive, got {M}")
    if M <= 2:
        return {1: 1, 2: 3}[M]
    r = Fraction(M * M, 2)
    for p in prime_factors(M):
        r *= 1 - Fraction(1, p * p)
    assert r.denominator == 1
    return int(r)


def eps_inf(M: int) -> int:
    """Number of cusps from the divisor-sum formula (valid for M >= 5)."""
    total = sum(euler_phi(d) * euler_phi(M // d) for d in divisors(M))
    return total // 2


def genus_gamma1(M: int) -> int:
    if M < 4:
        raise ValueError(f"level must be at least 4, got {M}")
    if M == 4:
        return 0
    g = 1 + Fraction(mu_bar(M), 12) - Fraction(eps_inf(M), 2)
    assert g.denominator == 1
    return int(g)


def base_change_holds(fourN: int, k: int) -> bool:
    """deg floor(Sigma_{4N,k}) > 2g - 2."""
    return floor_degree(sigma_divisor(fourN, k)) > 2 * genus_gamma1(fourN) - 2


def counterexample_scan(k: int, max_level: int) -> Optional[int]:
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be odd and positive, got {k}")
    for level in range(4, max_level + 1, 4):
        if not base_change_holds(level, k):
            return level
    return None


# ---------------------------------------------------------------------------
# degree bookkeeping
# ---------------------------------------------------------------------------

_BASE_NAMES = {(0, 1): "inf", (1, 0): "0", (2, 1): "1/2"}


@dataclass
class DegreeReport:
    level: int
    genus: int
    cusp_count: int
    cusp_count_formula: int
    index: int
    width_total: int
    sigma4_degree: Fraction
    fiber_width_sums: dict
    fiber_ramification_sums: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "genus": self.genus,
            "cusp_count": self.cusp_count,
            "cusp_count_formula": self.cusp_count_formula,
            "index": self.index,
            "width_total": self.width_total,
            "sigma4_degree": str(self.sigma4_degree),
            "fiber_width_sums": self.fiber_width_sums,
            "fiber_ramification_sums": {k: str(v) for k, v in self.fiber_ramification_sums.items()},
            "checks": [{"name": n, "passed": ok} for n, ok in self.checks],
            "passed": self.passed,
        }


def degree_identities(fourN: int) -> DegreeReport:
    """Check deg Sigma_{4N,4} = deg Omega^1 + #cusps and the fiber degrees
    of X_1(4N) -> X_1(4), together with width and cusp-count bookkeeping."""
    _check_level4(fourN)
    cusps = _cusps(fourN)
    g = genus_gamma1(fourN)
    index = mu_bar(fourN)
    n_cusps = len(cusps)
    formula = eps_inf(fourN) if fourN >= 5 else 3
    widths = sum(c.width for c in cusps)
    deg4 = sigma_divisor(fourN, 4).degree()
    fiber_w = {name: 0 for name in _BASE_NAMES.values()}
    fiber_e = {name: Fraction(0) for name in _BASE_NAMES.values()}
    for c in cusps:
        base = image_cusp(c, 4)
        name = _BASE_NAMES[base.key]
        fiber_w[name] += c.width
        fiber_e[name] += Fraction(c.width, base.width)
    degree = Fraction(index, mu_bar(4))
    checks = [
        ("deg Sigma_4 = (2g - 2) + #cusps", deg4 == 2 * g - 2 + n_cusps),
        ("fiber degrees equal index ratio", all(v == degree for v in fiber_e.values())),
        ("total width = index", widths == index),
        ("cusp count = divisor-sum formula", n_cusps == formula),
    ]
    return DegreeReport(
        fourN, g, n_cusps, formula, index, widths, deg4, fiber_w, fiber_e, checks
    )
