"""Lower and upper bounds on projection volumes, and exact checkers.

Inequalities with fractional exponents are compared after raising both sides
to an integer power, so every check is decided in exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .core import CoordSet, GridPartition, PartitionError, as_coordset
from .measure import (
    balance_deviation,
    influence,
    max_influence_k,
    mpv,
    projection_volumes,
    set_projection_volume,
    set_volume,
)
from .constructions import NotBooleanGrid


class BadParams(PartitionError):
    pass


class NotUniformCover(PartitionError):
    pass


DEFAULT_PRECISION = 40


@dataclass
class BoundReport:
    name: str
    params: dict
    value: object  # Fraction or Decimal
    measured: Fraction | None = None
    holds: bool | None = None
    extra: dict = field(default_factory=dict)


def _decimal(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def general_lower_bound(n: int, d: int, c: int, precision: int = DEFAULT_PRECISION) -> BoundReport:
    """``(1/c)^(d/n)`` and its first-order floor ``1 - d ln(c) / n``."""
    if not (1 <= d <= n) or c < 1:
        raise BadParams(f"need 1 <= d <= n and c >= 1, got n={n}, d={d}, c={c}")
    with localcontext() as ctx:
        ctx.prec = precision
        log_c = Decimal(c).ln()
        value = (-(Decimal(d) * log_c) / Decimal(n)).exp()
        taylor = 1 - Decimal(d) * log_c / Decimal(n)
    return BoundReport(
        "general_lower_bound",
        {"n": n, "d": d, "c": c},
        +value,
        extra={"taylor_floor": taylor},
    )


def meets_general_lower_bound(value: Fraction, n: int, d: int, c: int) -> bool:
    """Exact test of ``value >= (1/c)^(d/n)`` as ``value^n * c^d >= 1``."""
    value = Fraction(value)
    return value**n * c**d >= 1


@dataclass
class UniformCoverResult:
    lhs: Fraction
    rhs: Fraction
    k: int
    holds: bool


def uniform_cover_check(K: np.ndarray, D, k: int | None = None, N: int | None = None) -> UniformCoverResult:
    """Evaluate ``|K|^k <= prod_{A in D} |K_A|`` for a cell set ``K``.

    ``D`` is a list of coordinate sets in which every coordinate must appear
    exactly ``k`` times (``k`` is inferred when omitted).
    """
    K = np.asarray(K, dtype=bool)
    n = K.ndim
    N = K.shape[0] if N is None else N
    D = [as_coordset(A) for A in D]
    counts = [sum(1 for A in D if j in A) for j in range(1, n + 1)]
    if k is None:
        k = counts[0]
    bad = [j + 1 for j, m in enumerate(counts) if m != k]
    if bad:
        raise NotUniformCover(f"coordinates {bad} are not covered exactly {k} times")
    lhs = set_volume(K) ** k
    rhs = Fraction(1)
    for A in D:
        rhs *= set_projection_volume(K, A, N)
    return UniformCoverResult(lhs, rhs, k, lhs <= rhs)


@dataclass
class VolumeFloorResult:
    volume: Fraction
    best: Fraction
    witness: CoordSet
    holds: bool


def volume_projection_floor(K: np.ndarray, d: int) -> VolumeFloorResult:
    """Check ``max_A |K_A|^n >= |K|^d`` over all ``d``-subsets ``A``."""
    K = np.asarray(K, dtype=bool)
    n = K.ndim
    if not 1 <= d <= n:
        from .core import BadDimension

        raise BadDimension(f"d={d} outside [1, {n}]")
    N = K.shape[0]
    best, witness = Fraction(-1), None
    for A in CoordSet.all_of_size(n, d):
        v = set_projection_volume(K, A, N)
        if v > best:
            best, witness = v, A
    volume = set_volume(K)
    return VolumeFloorResult(volume, best, witness, best**n >= volume**d)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def iterated_ceiling(x, n: int) -> int:
    """``ceil(x * ceil(x * ... ))`` nested ``n`` times, starting from 1."""
    x = Fraction(x)
    if x < 1 or n < 0:
        raise BadParams(f"need x >= 1 and n >= 0, got x={x}, n={n}")
    value = 1
    for _ in range(n):
        value = _ceil(x * value)
    return value


def rho_2_1(c: int) -> Fraction:
    """Smallest 1-dimensional projection bound attainable by a ``c``-cover of
    the square: ``min_q max(q/c, 1/q)`` over ``1 <= q <= c``."""
    if c < 1:
        raise BadParams("c must be positive")
    return min(max(Fraction(q, c), Fraction(1, q)) for q in range(1, c + 1))


@dataclass
class InfluenceProjectionResult:
    c_rho: Fraction
    one_plus_gamma: Fraction
    rho: Fraction
    gamma: Fraction
    holds: bool


def influence_projection_check(partition: GridPartition, S) -> InfluenceProjectionResult:
    """Compare ``c * max_a |f^-1(a)_S|`` with ``1 + Inf(complement of S)``."""
    S = as_coordset(S)
    if len(S) == 0 or len(S) == partition.n:
        raise BadParams("S must be nonempty and proper")
    rho = max(projection_volumes(partition, S))
    gamma = influence(partition, S.complement(partition.n))
    c_rho = partition.c * rho
    return InfluenceProjectionResult(c_rho, 1 + gamma, rho, gamma, c_rho >= 1 + gamma)


def boolean_partition_upper_bound(partition: GridPartition) -> BoundReport:
    """``mpv(f; n, n-1) <= (1/c)(1 + c*gamma/2 + c*eps)`` on the Boolean cube."""
    if partition.N != 2:
        raise NotBooleanGrid(f"needs N=2, got N={partition.N}")
    if partition.n < 2:
        raise BadParams("needs n >= 2")
    c = partition.c
    gamma, _ = max_influence_k(partition, 1)
    eps = balance_deviation(partition)
    bound = Fraction(1, c) * (1 + c * gamma / 2 + c * eps)
    measured, _ = mpv(partition, partition.n - 1)
    return BoundReport(
        "boolean_partition_upper_bound",
        {"n": partition.n, "c": c},
        bound,
        measured=measured,
        holds=measured <= bound,
        extra={"gamma": gamma, "eps": eps},
    )


def round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _exact_log(b: Fraction, base: str):
    """``log(1/b)`` as a Fraction when exactly representable, else None."""
    if base != "2":
        return Fraction(0) if b == 1 else None
    inv = 1 / b
    if inv.denominator == 1 and inv.numerator & (inv.numerator - 1) == 0:
        return Fraction(inv.numerator.bit_length() - 1)
    return None


@dataclass
class ConjectureThreshold:
    b: Fraction
    n: int
    delta: Fraction
    log_base: str
    c: int
    threshold: Decimal
    threshold_exact: Fraction | None
    excess: Decimal  # b * log(1/b)


def conjecture_j_threshold(b, n: int, delta, log_base: str = "2", precision: int = DEFAULT_PRECISION):
    """Diagnostic threshold ``(1/c)(1 + delta * b * log(1/b))`` with
    ``c = 2^round(b n)`` (halves rounded up).  Not a pass/fail check."""
    b, delta = Fraction(b), Fraction(delta)
    if not 0 < b < 1 or n < 1 or delta < 0:
        raise BadParams(f"need 0 < b < 1, n >= 1, delta >= 0; got b={b}, n={n}, delta={delta}")
    if log_base not in ("2", "e"):
        raise BadParams("log base must be '2' or 'e'")
    c = 2 ** round_half_up(b * n)
    with localcontext() as ctx:
        ctx.prec = precision
        log_inv = (1 / _decimal(b)).ln()
        if log_base == "2":
            log_inv /= Decimal(2).ln()
        excess = _decimal(b) * log_inv
        threshold = (1 + _decimal(delta) * excess) / c
    exact = _exact_log(b, log_base)
    threshold_exact = None
    if exact is not None:
        threshold_exact = Fraction(1, c) * (1 + delta * b * exact)
    elif delta == 0:
        threshold_exact = Fraction(1, c)
    return ConjectureThreshold(b, n, delta, log_base, c, +threshold, threshold_exact, +excess)


LOWER_BOUND_C2_ADVISORY = (
    "For c = 2 and d = n-1 the optimum exceeds 1/2 by a term of order log(n)/n "
    "(constant unspecified); reported as text only, never checked."
)
