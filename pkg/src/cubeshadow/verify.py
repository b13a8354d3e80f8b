"""Seeded randomized suites checking exact theorems on small partitions.

Each suite draws ``count`` instances from a PCG64 stream seeded with
``seed``.  The first failure stops the suite and is reported with enough
parameters to rebuild the instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import boolean_partition_upper_bound, influence_projection_check, uniform_cover_check
from .constructions import product
from .core import CoordSet
from .measure import projection_volumes
from .search import full_projection_witness, random_partition

SUITES = (
    "influence-projection",
    "uniform-cover",
    "sauer-shelah",
    "product-factorization",
    "boolean-upper-bound",
)


class SuiteFailure(AssertionError):
    def __init__(self, suite, reproducer):
        self.suite = suite
        self.reproducer = reproducer
        super().__init__(f"{suite} failed: {reproducer}")


@dataclass
class SuiteReport:
    suite: str
    seed: int
    count: int
    passed: int
    checks: int
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None and self.passed == self.count


def _influence_projection(rng, index):
    n, N, c = int(rng.integers(2, 5)), int(rng.integers(2, 4)), int(rng.integers(1, 4))
    seed = int(rng.integers(2**63))
    f = random_partition(n, N, c, seed)
    checks = 0
    for mask in range(1, (1 << n) - 1):
        result = influence_projection_check(f, CoordSet(mask))
        checks += 1
        if not result.holds:
            return checks, {"n": n, "N": N, "c": c, "seed": seed, "S": list(CoordSet(mask).coords),
                            "c_rho": str(result.c_rho), "one_plus_gamma": str(result.one_plus_gamma)}
    return checks, None


def _uniform_cover(rng, index):
    n, N, c = int(rng.integers(1, 5)), int(rng.integers(2, 4)), int(rng.integers(1, 4))
    seed = int(rng.integers(2**63))
    f = random_partition(n, N, c, seed)
    checks = 0
    for alpha in range(1, c + 1):
        K = f.labels == alpha
        for d in range(1, n + 1):
            result = uniform_cover_check(K, CoordSet.all_of_size(n, d), math.comb(n - 1, d - 1), N)
            checks += 1
            if not result.holds:
                return checks, {"n": n, "N": N, "c": c, "seed": seed, "part": alpha, "d": d,
                                "lhs": str(result.lhs), "rhs": str(result.rhs)}
    return checks, None


def _sauer_shelah(rng, index):
    n, N = int(rng.integers(1, 5)), int(rng.integers(2, 4))
    c = int(rng.integers(1, min(3, n) + 1))
    seed = int(rng.integers(2**63))
    f = random_partition(n, N, c, seed)
    checks = 0
    for d in range(1, n // c + 1):
        checks += 1
        if full_projection_witness(f, d) is None:
            return checks, {"n": n, "N": N, "c": c, "seed": seed, "d": d}
    return checks, None


def _product_factorization(rng, index):
    n1 = int(rng.integers(1, 4))
    n2 = int(rng.integers(1, 5 - n1))
    N = int(rng.integers(2, 4))
    c1, c2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    s1, s2 = int(rng.integers(2**63)), int(rng.integers(2**63))
    f1, f2 = random_partition(n1, N, c1, s1), random_partition(n2, N, c2, s2)
    f = product(f1, f2)
    n = n1 + n2
    vol1, vol2 = f1.part_volumes(), f2.part_volumes()
    checks = 0
    for i in range(1, n + 1):
        rest = CoordSet.of(j for j in range(1, n + 1) if j != i)
        whole = projection_volumes(f, rest)
        if i <= n1:
            side = projection_volumes(f1, [j for j in range(1, n1 + 1) if j != i])
        else:
            side = projection_volumes(f2, [j - n1 for j in range(n1 + 1, n + 1) if j != i])
        for a in range(1, c1 + 1):
            for b in range(1, c2 + 1):
                checks += 1
                color = (a - 1) * c2 + b
                expected = side[a - 1] * vol2[b - 1] if i <= n1 else vol1[a - 1] * side[b - 1]
                if whole[color - 1] != expected:
                    return checks, {"n1": n1, "n2": n2, "N": N, "c1": c1, "c2": c2, "seed1": s1,
                                    "seed2": s2, "i": i, "part": [a, b],
                                    "measured": str(whole[color - 1]), "expected": str(expected)}
    return checks, None


def _boolean_upper_bound(rng, index):
    n, c = int(rng.integers(2, 5)), int(rng.integers(1, 4))
    seed = int(rng.integers(2**63))
    f = random_partition(n, 2, c, seed)
    report = boolean_partition_upper_bound(f)
    if not report.holds:
        return 1, {"n": n, "N": 2, "c": c, "seed": seed, "bound": str(report.value),
                   "measured": str(report.measured)}
    return 1, None


_RUNNERS = {
    "influence-projection": _influence_projection,
    "uniform-cover": _uniform_cover,
    "sauer-shelah": _sauer_shelah,
    "product-factorization": _product_factorization,
    "boolean-upper-bound": _boolean_upper_bound,
}


def run_suite(suite: str, seed: int = 0, count: int = 500, raise_on_failure: bool = False) -> SuiteReport:
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    rng = np.random.Generator(np.random.PCG64(seed))
    runner = _RUNNERS[suite]
    passed = checks = 0
    for index in range(count):
        done, failure = runner(rng, index)
        checks += done
        if failure is not None:
            failure = {"suite": suite, "seed": seed, "index": index, **failure}
            if raise_on_failure:
                raise SuiteFailure(suite, failure)
            return SuiteReport(suite, seed, count, passed, checks, failure)
        passed += 1
    return SuiteReport(suite, seed, count, passed, checks)
