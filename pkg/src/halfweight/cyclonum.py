"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements are stored in the power basis 1, z, ..., z^(phi(L)-1) reduced
modulo the L-th cyclotomic polynomial.  Internally a number is an integer
numerator vector over one positive common denominator, which keeps
products cheap; ``coords`` exposes the coordinates as ``Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


# ---------------------------------------------------------------------------
# small integer helpers
# ---------------------------------------------------------------------------

def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return prime_factors(n) == [n]


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def moebius(n: int) -> int:
    result = 1
    for p in prime_factors(n):
        n //= p
        if n % p == 0:
            return 0
        result = -result
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def p_valuation(n: int, p: int) -> int:
    """v_p of a nonzero integer."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables
# ---------------------------------------------------------------------------

def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # den monic; exact division over Z, coefficients low -> high
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn]
        out[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _cyclotomic(L: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (L - 1) + [1]
    for d in divisors(L)[:-1]:
        poly = _poly_divexact(poly, list(_cyclotomic(d)))
    return tuple(poly)


def cyclotomic_polynomial(L: int) -> list[int]:
    """Coefficients of Phi_L, lowest degree first (so Phi_4 is [1, 0, 1])."""
    if L < 1:
        raise ValueError(f"conductor must be positive, got {L}")
    return list(_cyclotomic(L))


@lru_cache(maxsize=None)
def _power_table(L: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coordinates of zeta_L^j, 0 <= j < L."""
    phi = euler_phi(L)
    cyc = _cyclotomic(L)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(L):
        rows.append(tuple(cur))
        # multiply by x and reduce with x^phi = -sum cyc[i] x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(rows)


def _reduce(L: int, poly: Sequence[int]) -> list[int]:
    """Reduce an integer polynomial (any degree) modulo Phi_L."""
    phi = euler_phi(L)
    if len(poly) <= phi:
        return list(poly) + [0] * (phi - len(poly))
    table = _power_table(L)
    out = list(poly[:phi])
    for j in range(phi, len(poly)):
        c = poly[j]
        if c:
            row = table[j % L]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over Q (for inversion only)
# ---------------------------------------------------------------------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
    return _trim(q), a


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for i, c in enumerate(b):
        a[i] -= c
    return _trim(a)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


# ---------------------------------------------------------------------------
# the field element
# ---------------------------------------------------------------------------

class CycNumber:
    """An element of Q(zeta_L) in reduced power-basis form.

    Two numbers with different conductors compare equal when they agree
    after embedding both into Q(zeta_lcm).
    """

    __slots__ = ("conductor", "_num", "_den")

    def __init__(self, conductor: int, coords: Sequence[RationalLike]):
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        phi = euler_phi(conductor)
        if len(coords) != phi:
            raise ValueError(
                f"expected {phi} coordinates for conductor {conductor}, got {len(coords)}"
            )
        fr = [Fraction(c) for c in coords]
        den = lcm(*(f.denominator for f in fr))
        self._set(conductor, [f.numerator * (den // f.denominator) for f in fr], den)

    def _set(self, conductor: int, num: list[int], den: int) -> None:
        g = math.gcd(den, *num)
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.conductor = conductor
        self._num = tuple(num)
        self._den = den

    @classmethod
    def _make(cls, conductor: int, num: list[int], den: int = 1) -> "CycNumber":
        obj = cls.__new__(cls)
        obj._set(conductor, num, den)
        return obj

    @classmethod
    def from_poly(cls, conductor: int, coeffs: Iterable[RationalLike]) -> "CycNumber":
        """sum coeffs[i] * zeta_L^i for a coefficient list of any length."""
        fr = [Fraction(c) for c in coeffs]
        den = lcm(*(f.denominator for f in fr)) if fr else 1
        ints = [f.numerator * (den // f.denominator) for f in fr]
        table = _power_table(conductor)
        phi = euler_phi(conductor)
        out = [0] * phi
        for i, c in enumerate(ints):
            if c:
                row = table[i % conductor]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return cls._make(conductor, out, den)

    @classmethod
    def rational(cls, value: RationalLike, conductor: int = 1) -> "CycNumber":
        f = Fraction(value)
        num = [0] * euler_phi(conductor)
        num[0] = f.numerator
        return cls._make(conductor, num, f.denominator)

    # -- inspection -------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self._den) for n in self._num)

    @property
    def denominator(self) -> int:
        """Least positive integer d with d * self in Z[zeta_L]."""
        return self._den

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- conductor changes ------------------------------------------------

    def embed(self, conductor: int) -> "CycNumber":
        """Image in Q(zeta_M) under zeta_L -> zeta_M^(M/L); requires L | M."""
        L = self.conductor
        if conductor == L:
            return self
        if conductor % L:
            raise ValueError(f"cannot embed conductor {L} into {conductor}")
        step = conductor // L
        table = _power_table(conductor)
        phi = euler_phi(conductor)
        out = [0] * phi
        for i, c in enumerate(self._num):
            if c:
                row = table[i * step]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNumber._make(conductor, out, self._den)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "CycNumber":
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNumber.rational(x)
        raise TypeError(f"cannot treat {type(x).__name__} as a cyclotomic number")

    @staticmethod
    def _common(a: "CycNumber", b: "CycNumber"):
        if a.conductor == b.conductor:
            return a, b
        L = lcm(a.conductor, b.conductor)
        return a.embed(L), b.embed(L)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._common(self, other)
        den = a._den * b._den // math.gcd(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        num = [x * fa + y * fb for x, y in zip(a._num, b._num)]
        return CycNumber._make(a.conductor, num, den)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._make(self.conductor, [-x for x in self._num], self._den)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: RationalLike) -> "CycNumber":
        """Multiplication by a rational number."""
        f = Fraction(factor)
        return CycNumber._make(
            self.conductor, [x * f.numerator for x in self._num], self._den * f.denominator
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._common(self, other)
        L = a.conductor
        an, bn = a._num, b._num
        if not any(an[1:]):
            return b.scale(Fraction(an[0], a._den))
        if not any(bn[1:]):
            return a.scale(Fraction(bn[0], b._den))
        bnz = [(j, y) for j, y in enumerate(bn) if y]
        prod = [0] * (2 * len(an) - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in bnz:
                    prod[i + j] += x * y
        return CycNumber._make(L, _reduce(L, prod), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNumber.rational(Fraction(self._den, self._num[0]), self.conductor)
        modulus = [Fraction(c) for c in _cyclotomic(self.conductor)]
        a = _trim([Fraction(c) for c in self._num])
        r0, r1 = modulus, a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        # r0 is a nonzero constant since Phi_L is irreducible
        c = r0[0]
        inv = [x * self._den / c for x in s0]
        return CycNumber.from_poly(self.conductor, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / Fraction(other))
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "CycNumber":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNumber.rational(1, self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._common(self, other)
        return a._den == b._den and a._num == b._num

    def __hash__(self) -> int:
        # trace to Q divided by the degree does not depend on the ambient field
        L = self.conductor
        t = Fraction(0)
        for i, c in enumerate(self._num):
            if c:
                m = L // math.gcd(i, L)
                t += Fraction(c * moebius(m), euler_phi(m))
        return hash(t / self._den)

    # -- display / serialisation -------------------------------------------

    def __repr__(self) -> str:
        return f"CycNumber({self.conductor}, {[str(c) for c in self.coords]})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            mono = f"z{self.conductor}" + (f"^{i}" if i > 1 else "")
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coords": [str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNumber":
        return cls(int(data["conductor"]), [Fraction(c) for c in data["coords"]])


def zeta(L: int, k: int = 1) -> CycNumber:
    """The root of unity zeta_L^k."""
    num = list(_power_table(L)[k % L])
    return CycNumber._make(L, num, 1)


def cyc_add(a: CycNumber, b: CycNumber) -> CycNumber:
    return a + b


def cyc_mul(a: CycNumber, b: CycNumber) -> CycNumber:
    return a * b


def cyc_inv(a: CycNumber) -> CycNumber:
    return a.inverse()


def galois_apply(a: CycNumber, t: int) -> CycNumber:
    """Apply the automorphism zeta_L -> zeta_L^t."""
    L = a.conductor
    if math.gcd(t, L) != 1:
        raise ValueError(f"exponent {t} is not a unit modulo {L}")
    table = _power_table(L)
    phi = euler_phi(L)
    out = [0] * phi
    for i, c in enumerate(a.numerators):
        if c:
            row = table[(i * t) % L]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
    return CycNumber._make(L, out, a.denominator)


def is_root_of_unity(x: CycNumber) -> bool:
    L = x.conductor
    order = lcm(2, L)
    return x ** order == 1


# ---------------------------------------------------------------------------
# quadratic symbols and Gauss sums
# ---------------------------------------------------------------------------

def jacobi_symbol(c: int, d: int) -> int:
    """Jacobi symbol (c/d) for odd d, with the extension to negative d.

    For d < 0 we use (c/d) = (c/|d|), negated when c and d are both
    negative; (0/1) = (0/-1) = 1.
    """
    if d % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd modulus, got {d}")
    sign = -1 if (c < 0 and d < 0) else 1
    n = abs(d)
    a = c % n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return sign * result if n == 1 else 0


def epsilon_d(d: int) -> CycNumber:
    """1 if d = 1 (mod 4), i = zeta_4 if d = 3 (mod 4)."""
    if d % 2 == 0:
        raise ValueError(f"epsilon_d is defined for odd d, got {d}")
    return CycNumber.rational(1, 4) if d % 4 == 1 else zeta(4)


def gauss_sum(l: int, z: CycNumber) -> CycNumber:
    """Quadratic Gauss sum sum_{a=1}^{l-1} (a/l) z^a for an l-th root of unity z."""
    if l < 3 or not is_prime(l):
        raise ValueError(f"Gauss sums need an odd prime, got {l}")
    if z ** l != 1:
        raise ValueError(f"{z} is not an {l}-th root of unity")
    total = CycNumber.rational(0, z.conductor)
    power = z
    for a in range(1, l):
        s = jacobi_symbol(a, l)
        total = total + power if s == 1 else total - power
        power = power * z
    return total
