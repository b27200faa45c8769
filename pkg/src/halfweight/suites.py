"""Self-check suites run by ``halfweight verify``.

Every suite returns a Report of individually named cases; default
precisions are fixed here so a run is reproducible.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, Callable

from .cuspgeom import degree_identities
from .cyclonum import gauss_sum, is_prime, jacobi_symbol, zeta
from .heckeops import HeckeContext, check_unit_integrality, t_l2_closed, t_l2_geometric
from .qlaurent import QSeries, qs_inv
from .thetaforms import Z4, adjust_expansion, theta_series, verify_transformation_law

ORACLE_CASES = ((4, 1, 3), (4, 3, 3), (4, 1, 5), (20, 1, 3))
ORACLE_PREC = 60
EIGEN_PREC = 100
INTEGRALITY_PREC = 200
TRANSFORM_TERMS = 400


@dataclass
class Case:
    description: str
    passed: bool
    expected: Any = None
    actual: Any = None


@dataclass
class Report:
    suite: str
    cases: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, description: str, passed: bool, expected=None, actual=None) -> None:
        self.cases.append(Case(description, bool(passed), expected, actual))

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def n_failed(self) -> int:
        return len(self.cases) - self.n_passed

    @property
    def ok(self) -> bool:
        return self.n_failed == 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.n_passed,
            "failed": self.n_failed,
            "cases": [
                {"description": c.description, "passed": c.passed,
                 "expected": _plain(c.expected), "actual": _plain(c.actual)}
                for c in self.cases
            ],
        }

    def render(self) -> str:
        lines = [f"[{self.suite}] {self.n_passed} passed, {self.n_failed} failed"]
        for c in self.cases:
            if not c.passed:
                lines.append(f"  FAIL {c.description}: expected {c.expected}, got {c.actual}")
        return "\n".join(lines)


def _plain(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return None if math.isinf(x) else x
    return str(x)


# ---------------------------------------------------------------------------

def _gauss(report: Report, max_prime: int = 97) -> None:
    for l in range(3, max_prime + 1, 2):
        if not is_prime(l):
            continue
        z = zeta(l)
        g = gauss_sum(l, z)
        report.add(f"g_{l}^2 = (-1/{l}) {l}", g * g == jacobi_symbol(-1, l) * l)
        bad = [j for j in range(l) if gauss_sum(l, z ** j) != g.scale(jacobi_symbol(j, l))]
        report.add(f"g_{l}(zeta^j) = (j/{l}) g_{l}(zeta)", not bad, [], bad)


def oracle_inputs(prec: int) -> list[tuple[str, QSeries]]:
    """Adjusted expansions A fed to the T_{l^2} oracle comparison."""
    rng = random.Random(20)
    sparse = {0: 1}
    for e in rng.sample(range(1, prec), 6):
        sparse[e] = rng.randint(-5, 5)
    theta = theta_series(prec)
    return [
        ("theta", theta),
        ("theta^3", theta ** 3),
        ("theta*sparse", theta * QSeries(sparse, prec)),
    ]


def oracle_cases(report: Report, level: int, k: int, l: int, prec: int = ORACLE_PREC) -> None:
    """Closed T_{l^2} versus the subgroup-sum oracle on every oracle input."""
    ctx = HeckeContext(level, k)
    for name, A in oracle_inputs(l * l * prec):
        raw = A * qs_inv(theta_series(A.prec)) ** k
        closed = t_l2_closed(adjust_expansion(raw, Z4, k), ctx, l).truncate_exponent(prec)
        geo = t_l2_geometric(raw, ctx, l, prec)
        report.add(f"T_{l}^2 oracle, level {level}, k={k}, input {name}", closed == geo)


def _oracle(report: Report, prec: int = ORACLE_PREC) -> None:
    for level, k, l in ORACLE_CASES:
        oracle_cases(report, level, k, l, prec)


def _eigen(report: Report, prec: int = EIGEN_PREC) -> None:
    ctx = HeckeContext(4, 1)
    for l in (3, 5, 7):
        theta = theta_series(l * l * prec)
        got = t_l2_closed(theta, ctx, l)
        want = theta_series(prec).scale(1 + Fraction(l) ** -1)
        report.add(f"T_{l}^2 theta = (1 + 1/{l}) theta", got == want and got.prec == prec)


def _degrees(report: Report, max_level: int = 200) -> None:
    for M in range(4, max_level + 1, 4):
        r = degree_identities(M)
        failed = [name for name, ok in r.checks if not ok]
        report.add(f"degree identities at level {M}", not failed, [], failed)


def _integrality(report: Report, prec: int = INTEGRALITY_PREC) -> None:
    for p in (5, 7):
        r = check_unit_integrality(p, prec)
        report.add(f"p Theta_{p}^2^-1 integral at three cusps", r.passed, ">= 0", r.minima)
        report.add(f"Theta_{p}^2^-1 at <zeta_p2> has minimum -1",
                   r.unscaled_minima["<zeta_p2>"] == -1, -1, r.unscaled_minima["<zeta_p2>"])


def random_gamma0_4(rng: random.Random, bound: int = 50) -> tuple[int, int, int, int]:
    """A matrix in Gamma_0(4) with entries roughly bounded by ``bound``."""
    while True:
        c = 4 * rng.randint(-(bound // 4), bound // 4)
        d = rng.randint(-bound, bound)
        if d % 2 == 0 or math.gcd(c, d) != 1:
            continue
        if c == 0:
            return d, rng.randint(-bound, bound), 0, d
        a = pow(d, -1, abs(c))
        b = (a * d - 1) // c
        return a, b, c, d


SAMPLE_POINTS = (1j, 0.25 + 0.5j, -1 / 3 + 2j)


def _transform(report: Report, n_terms: int = TRANSFORM_TERMS) -> None:
    rng = random.Random(4)
    for _ in range(25):
        a, b, c, d = random_gamma0_4(rng)
        for tau in SAMPLE_POINTS:
            err = verify_transformation_law(a, b, c, d, tau, n_terms)
            report.add(f"theta law for ({a},{b};{c},{d}) at {tau}", err < 1e-8, "< 1e-8", err)


SUITES: dict[str, Callable[[Report], None]] = {
    "gauss": _gauss,
    "oracle": _oracle,
    "eigen": _eigen,
    "degrees": _degrees,
    "integrality": _integrality,
    "transform": _transform,
}


def verify(suite: str) -> list[Report]:
    names = list(SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        report = Report(name)
        start = time.perf_counter()
        SUITES[name](report)
        report.seconds = time.perf_counter() - start
        reports.append(report)
    return reports
