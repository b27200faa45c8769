"""Sparse truncated Laurent series in a fractional power of q.

A ``QSeries`` stores the coefficient of q^(m/D) under the integer key m.
Its precision P means every coefficient with m < P is known exactly and
nothing is claimed at or beyond q^(P/D).  All coefficients live in one
ambient cyclotomic field Q(zeta_L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .cyclonum import (
    CycNumber,
    _reduce,
    euler_phi,
    jacobi_symbol,
    lcm,
    zeta,
)

try:  # GMP multiplication for the big Kronecker products
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

Coefficient = Union[CycNumber, int, Fraction]

# products with more estimated scalar work than this go through Kronecker packing
_KRONECKER_THRESHOLD = 40_000


class PrecisionError(ValueError):
    """A coefficient was requested beyond the known precision."""


def _as_cyc(c: Coefficient) -> CycNumber:
    if isinstance(c, CycNumber):
        return c
    return CycNumber.rational(c)


class QSeries:
    __slots__ = ("terms", "prec", "denom", "conductor")

    def __init__(
        self,
        terms: Mapping[int, Coefficient],
        prec: int,
        denom: int = 1,
        conductor: Optional[int] = None,
    ):
        if denom < 1:
            raise ValueError(f"denominator must be positive, got {denom}")
        cyc = {int(m): _as_cyc(c) for m, c in terms.items()}
        if conductor is None:
            conductor = lcm(*(c.conductor for c in cyc.values())) if cyc else 1
        clean = {}
        for m, c in cyc.items():
            if m < prec and c:
                clean[m] = c.embed(conductor)
        self.terms = clean
        self.prec = int(prec)
        self.denom = denom
        self.conductor = conductor

    @classmethod
    def _raw(cls, terms: dict, prec: int, denom: int, conductor: int) -> "QSeries":
        # trusted constructor: coefficients already nonzero, embedded and below prec
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.prec = prec
        obj.denom = denom
        obj.conductor = conductor
        return obj

    @classmethod
    def from_coefficients(
        cls, coeffs: Iterable[Coefficient], prec: Optional[int] = None, start: int = 0
    ) -> "QSeries":
        """Integer-grid series sum coeffs[i] q^(start+i) + O(q^prec)."""
        coeffs = list(coeffs)
        if prec is None:
            prec = start + len(coeffs)
        return cls({start + i: c for i, c in enumerate(coeffs)}, prec)

    @classmethod
    def zero(cls, prec: int, denom: int = 1, conductor: int = 1) -> "QSeries":
        return cls._raw({}, prec, denom, conductor)

    @classmethod
    def constant(cls, c: Coefficient, prec: int, conductor: Optional[int] = None) -> "QSeries":
        return cls({0: c}, prec, 1, conductor)

    # -- inspection ----------------------------------------------------------

    def valuation(self) -> Fraction:
        """Least exponent with a nonzero coefficient (the precision if none)."""
        if not self.terms:
            return Fraction(self.prec, self.denom)
        return Fraction(min(self.terms), self.denom)

    def _vnum(self) -> int:
        return min(self.terms) if self.terms else self.prec

    def exponents(self) -> list[Fraction]:
        return [Fraction(m, self.denom) for m in sorted(self.terms)]

    def is_zero(self) -> bool:
        return not self.terms

    def has_integral_support(self) -> bool:
        return all(m % self.denom == 0 for m in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- grid changes --------------------------------------------------------

    def with_denom(self, denom: int) -> "QSeries":
        """Same series written over the finer grid q^(1/denom)."""
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError(f"cannot rewrite denominator {self.denom} as {denom}")
        s = denom // self.denom
        return QSeries._raw(
            {m * s: c for m, c in self.terms.items()}, self.prec * s, denom, self.conductor
        )

    def with_conductor(self, conductor: int) -> "QSeries":
        if conductor == self.conductor:
            return self
        return QSeries._raw(
            {m: c.embed(conductor) for m, c in self.terms.items()},
            self.prec,
            self.denom,
            conductor,
        )

    def reduced(self) -> "QSeries":
        """Rewrite over the coarsest grid supporting every stored exponent."""
        g = self.denom
        for m in self.terms:
            g = math.gcd(g, m)
            if g == 1:
                return self
        if g == 1:
            return self
        # exponents m/D < P/D with g | m  <=>  m/g < ceil(P/g)
        return QSeries._raw(
            {m // g: c for m, c in self.terms.items()},
            -((-self.prec) // g),
            self.denom // g,
            self.conductor,
        )

    def truncate(self, prec: int) -> "QSeries":
        """Forget everything at or beyond numerator ``prec``."""
        if prec >= self.prec:
            return self
        return QSeries._raw(
            {m: c for m, c in self.terms.items() if m < prec}, prec, self.denom, self.conductor
        )

    def truncate_exponent(self, bound: Union[int, Fraction]) -> "QSeries":
        """Forget every exponent >= bound (a q-exponent, not a numerator)."""
        p = math.ceil(Fraction(bound) * self.denom)
        return self.truncate(p)

    # -- operators -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QSeries):
            return qs_add(self, other)
        if isinstance(other, (int, Fraction, CycNumber)):
            return qs_add(self, QSeries.constant(other, self.prec_exponent_ceiling()))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(
            {m: -c for m, c in self.terms.items()}, self.prec, self.denom, self.conductor
        )

    def __sub__(self, other):
        if isinstance(other, (QSeries, int, Fraction, CycNumber)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, qs_inv(other))
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scale(_as_cyc(other).inverse())
        return NotImplemented

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return qs_inv(self) ** (-n)
        if n == 0:
            return QSeries.constant(1, self.prec_exponent_ceiling(), self.conductor)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else qs_mul(result, base)
            n >>= 1
            if n:
                base = qs_mul(base, base)
        return result

    def prec_exponent_ceiling(self) -> int:
        """Smallest integer exponent not below the precision bound."""
        return -((-self.prec) // self.denom)

    def scale(self, c: Coefficient) -> "QSeries":
        c = _as_cyc(c)
        if not c:
            return QSeries.zero(self.prec, self.denom, lcm(self.conductor, c.conductor))
        L = lcm(self.conductor, c.conductor)
        c = c.embed(L)
        if c.is_rational():
            f = c.to_fraction()
            terms = {m: a.embed(L).scale(f) for m, a in self.terms.items()}
        else:
            terms = {m: a * c for m, a in self.terms.items()}
        return QSeries._raw(terms, self.prec, self.denom, L)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        D = lcm(self.denom, other.denom)
        f, g = self.with_denom(D), other.with_denom(D)
        bound = min(f.prec, g.prec)
        keys = {m for m in f.terms if m < bound} | {m for m in g.terms if m < bound}
        for m in keys:
            a, b = f.terms.get(m), g.terms.get(m)
            if a is None or b is None or a != b:
                return False
        return True

    __hash__ = None  # overlap equality is not transitive

    def __repr__(self) -> str:
        return f"QSeries({format_series(self)})"

    def __str__(self) -> str:
        return format_series(self)

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "denom": self.denom,
            "prec": self.prec,
            "terms": [[m, self.terms[m].to_json()] for m in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        conductor = int(data["conductor"])
        terms = {}
        for m, c in data["terms"]:
            terms[int(m)] = CycNumber.from_json(c)
        return cls(terms, int(data["prec"]), int(data["denom"]), conductor)


@dataclass(frozen=True)
class SubstSpec:
    """q^(1/D) -> zeta_M^twist * q^(1/(scale*D)).

    The coefficient at numerator m keeps its numerator, moves to the grid
    with denominator scale*D and is multiplied by zeta_M^(twist*m), where M
    defaults to scale*D.
    """

    scale: int = 1
    twist: int = 0
    order: Optional[int] = None

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError(f"substitution scale must be >= 1, got {self.scale}")
        if self.order is not None and self.order < 1:
            raise ValueError(f"twist order must be positive, got {self.order}")


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def _common(f: QSeries, g: QSeries) -> tuple[QSeries, QSeries]:
    D = lcm(f.denom, g.denom)
    L = lcm(f.conductor, g.conductor)
    return f.with_denom(D).with_conductor(L), g.with_denom(D).with_conductor(L)


def qs_add(f: QSeries, g: QSeries) -> QSeries:
    f, g = _common(f, g)
    prec = min(f.prec, g.prec)
    terms = {m: c for m, c in f.terms.items() if m < prec}
    for m, c in g.terms.items():
        if m >= prec:
            continue
        if m in terms:
            s = terms[m] + c
            if s:
                terms[m] = s
            else:
                del terms[m]
        else:
            terms[m] = c
    return QSeries._raw(terms, prec, f.denom, f.conductor)


def qs_sub(f: QSeries, g: QSeries) -> QSeries:
    return qs_add(f, -g)


def _integer_vectors(f: QSeries, bound: int) -> tuple[int, dict[int, tuple[int, ...]]]:
    """Common denominator and integer numerator vectors of the terms below bound."""
    items = [(m, c) for m, c in f.terms.items() if m < bound]
    den = lcm(*(c.denominator for _, c in items)) if items else 1
    return den, {m: tuple(x * (den // c.denominator) for x in c.numerators) for m, c in items}


def _mul_naive(A: dict, B: dict, prec: int, width: int) -> dict[int, list[int]]:
    acc: dict[int, list[int]] = {}
    bitems = sorted(B.items())
    for m1, u in A.items():
        unz = [(i, x) for i, x in enumerate(u) if x]
        for m2, v in bitems:
            m = m1 + m2
            if m >= prec:
                break
            slot = acc.get(m)
            if slot is None:
                slot = acc[m] = [0] * width
            for j, y in enumerate(v):
                if y:
                    for i, x in unz:
                        slot[i + j] += x * y
    return acc


def _mul_kronecker(A: dict, B: dict, prec: int, phi: int) -> dict[int, list[int]]:
    """Exact product by packing (key, basis index) into one big integer."""
    W = 2 * phi - 1
    va, vb = min(A), min(B)
    top_a = min(max(A), prec - vb - 1)
    top_b = min(max(B), prec - va - 1)
    bits_a = max(abs(x).bit_length() for v in A.values() for x in v)
    bits_b = max(abs(x).bit_length() for v in B.values() for x in v)
    terms = min(len(A), len(B)) * phi
    nbits = bits_a + bits_b + terms.bit_length() + 2
    nb = (nbits + 7) // 8

    def pack(vecs, base, top):
        n = (top - base + 1) * W * nb
        pos, neg = bytearray(n), bytearray(n)
        for m, vec in vecs.items():
            if m > top:
                continue
            off = (m - base) * W * nb
            for j, x in enumerate(vec):
                if x > 0:
                    pos[off + j * nb: off + (j + 1) * nb] = x.to_bytes(nb, "little")
                elif x < 0:
                    neg[off + j * nb: off + (j + 1) * nb] = (-x).to_bytes(nb, "little")
        return _bigint(int.from_bytes(pos, "little") - int.from_bytes(neg, "little"))

    pa = pack(A, va, top_a)
    pb = pack(B, vb, top_b)
    prod = int(pa * pb)
    nslots = ((top_a - va) + (top_b - vb) + 1) * W
    half = 1 << (8 * nb - 1)
    offset = int.from_bytes(half.to_bytes(nb, "little") * nslots, "little")
    raw = (prod + offset).to_bytes(nslots * nb, "little")
    acc: dict[int, list[int]] = {}
    limit = min(prec - va - vb, (top_a - va) + (top_b - vb) + 1)
    for k in range(limit):
        base = k * W * nb
        vec = [
            int.from_bytes(raw[base + j * nb: base + (j + 1) * nb], "little") - half
            for j in range(W)
        ]
        if any(vec):
            acc[k + va + vb] = vec
    return acc


def qs_mul(f: QSeries, g: QSeries) -> QSeries:
    """Cauchy product; precision min(P_f + v_g, P_g + v_f)."""
    f, g = _common(f, g)
    prec = min(f.prec + g._vnum(), g.prec + f._vnum())
    L = f.conductor
    if not f.terms or not g.terms:
        return QSeries.zero(prec, f.denom, L)
    phi = euler_phi(L)
    bound_f = prec - g._vnum()
    bound_g = prec - f._vnum()
    den_f, A = _integer_vectors(f, bound_f)
    den_g, B = _integer_vectors(g, bound_g)
    if not A or not B:
        return QSeries.zero(prec, f.denom, L)
    work = len(A) * len(B) * phi * phi
    if work > _KRONECKER_THRESHOLD and len(A) > 8 and len(B) > 8:
        acc = _mul_kronecker(A, B, prec, phi)
    else:
        acc = _mul_naive(A, B, prec, 2 * phi - 1)
    den = den_f * den_g
    terms = {}
    for m, vec in acc.items():
        red = _reduce(L, vec) if phi > 1 else vec
        if any(red):
            terms[m] = CycNumber._make(L, red, den)
    return QSeries._raw(terms, prec, f.denom, L)


def qs_inv(f: QSeries, target_prec: Optional[int] = None) -> QSeries:
    """Multiplicative inverse.

    For f = c q^v (1 + ...) known below P, the inverse is determined below
    P - 2v; ``target_prec`` (a numerator on f's grid) can only lower that.
    """
    if not f.terms:
        raise ZeroDivisionError("cannot invert a series with no known nonzero coefficient")
    v = min(f.terms)
    prec = f.prec - 2 * v
    if target_prec is not None:
        prec = min(prec, target_prec)
    n = prec + v  # number of relative coefficients needed
    L = f.conductor
    unit = sorted((m - v, c) for m, c in f.terms.items() if m - v < n)
    lead = unit[0][1]
    rest = unit[1:]
    if all(c.is_rational() for _, c in unit):
        inv0 = 1 / lead.to_fraction()
        ur = [(k, c.to_fraction()) for k, c in rest]
        if inv0.denominator == 1 and all(c.denominator == 1 for _, c in ur):
            inv0 = int(inv0)
            ur = [(k, int(c)) for k, c in ur]
        b = [inv0] + [0] * (n - 1)
        for i in range(1, n):
            s = 0
            for k, c in ur:
                if k > i:
                    break
                if b[i - k]:
                    s += c * b[i - k]
            b[i] = -s * inv0
        terms = {i - v: CycNumber.rational(x, L) for i, x in enumerate(b) if x}
        return QSeries._raw(terms, prec, f.denom, L)
    inv0 = lead.inverse()
    b: list[Optional[CycNumber]] = [inv0] + [None] * (n - 1)
    for i in range(1, n):
        s = None
        for k, c in rest:
            if k > i:
                break
            prev = b[i - k]
            if prev is not None:
                t = c * prev
                s = t if s is None else s + t
        if s is not None and s:
            b[i] = -(s * inv0)
    terms = {i - v: x for i, x in enumerate(b) if x is not None and x}
    return QSeries._raw(terms, prec, f.denom, L)


# ---------------------------------------------------------------------------
# substitutions and coefficient maps
# ---------------------------------------------------------------------------

def qs_subst(f: QSeries, spec: SubstSpec) -> QSeries:
    """Apply q^(1/D) -> zeta_M^s q^(1/(rD)); numerators and precision keep their values."""
    D = f.denom * spec.scale
    M = spec.order or D
    if spec.twist % M == 0 or not f.terms:
        return QSeries._raw(dict(f.terms), f.prec, D, f.conductor)
    L = lcm(f.conductor, M)
    step = L // M
    roots: dict[int, CycNumber] = {}
    terms = {}
    for m, c in f.terms.items():
        e = (spec.twist * m) % M
        root = roots.get(e)
        if root is None:
            root = roots[e] = zeta(L, e * step)
        terms[m] = c.embed(L) * root
    return QSeries._raw(terms, f.prec, D, L)


def scale_exponents(f: QSeries, r: int) -> QSeries:
    """q -> q^r: exponent e becomes r*e, precision is multiplied by r."""
    if r < 1:
        raise ValueError(f"exponent scale must be >= 1, got {r}")
    return QSeries._raw(
        {m * r: c for m, c in f.terms.items()}, f.prec * r, f.denom, f.conductor
    )


def _integral(f: QSeries, what: str) -> QSeries:
    if not f.has_integral_support():
        raise ValueError(f"{what} needs a series supported on integer exponents")
    if f.denom == 1:
        return f
    D = f.denom
    return QSeries._raw(
        {m // D: c for m, c in f.terms.items()}, -((-f.prec) // D), 1, f.conductor
    )


def extract_arithmetic(f: QSeries, l: int) -> QSeries:
    """sum a_n q^n -> sum a_(l n) q^n."""
    if l < 1:
        raise ValueError(f"step must be positive, got {l}")
    f = _integral(f, "extract_arithmetic")
    prec = f.prec // l
    terms = {m // l: c for m, c in f.terms.items() if m % l == 0 and m // l < prec}
    return QSeries._raw(terms, prec, 1, f.conductor)


def legendre_twist(f: QSeries, l: int) -> QSeries:
    """a_n -> (n/l) a_n."""
    f = _integral(f, "legendre_twist")
    terms = {}
    for m, c in f.terms.items():
        s = jacobi_symbol(m, l)
        if s:
            terms[m] = c if s == 1 else -c
    return QSeries._raw(terms, f.prec, 1, f.conductor)


def coefficient_at(f: QSeries, e: Union[int, Fraction, str]) -> CycNumber:
    e = Fraction(e)
    if e * f.denom >= f.prec:
        raise PrecisionError(f"exponent {e} is not below the precision {Fraction(f.prec, f.denom)}")
    x = e * f.denom
    if x.denominator != 1:
        return CycNumber.rational(0, f.conductor)
    return f.terms.get(int(x), CycNumber.rational(0, f.conductor))


# ---------------------------------------------------------------------------
# display
# ---------------------------------------------------------------------------

def _format_power(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e.numerator}"
    return f"q^({e})"


def format_series(f: QSeries, with_order: bool = True) -> str:
    """Human-readable sum like 1+2q+2q^4+O(q^5)."""
    parts = []
    for m in sorted(f.terms):
        c = f.terms[m]
        power = _format_power(Fraction(m, f.denom))
        if c.is_rational():
            x = c.to_fraction()
            if power and x == 1:
                s = power
            elif power and x == -1:
                s = "-" + power
            elif power:
                s = f"{x}*{power}" if x.denominator != 1 else f"{x}{power}"
            else:
                s = str(x)
        else:
            s = f"({c})" + (f"*{power}" if power else "")
        parts.append(s)
    if with_order:
        parts.append(f"O({_format_power(Fraction(f.prec, f.denom)) or '1'})")
    out = "+".join(parts) if parts else "0"
    return out.replace("+-", "-")
