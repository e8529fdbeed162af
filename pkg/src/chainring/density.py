"""Asymptotic densities of free submodules.

As the ambient rank n grows, the probability that a random fixed-length
submodule of R^n is free converges to the reciprocal of the multi-index series

    sum over k_2, ..., k_s >= 0 with s | K_2 + ... + K_s of
        x^(K_2^2 + ... + K_s^2 - (K_2 + ... + K_s)^2 / s) / ((x)_{k_2} ... (x)_{k_s})

at x = 1/q, where K_i = k_2 + ... + k_i and (x)_k is the finite Pochhammer
symbol.  The quadratic exponent is the inverse-Cartan form of the A_{s-1} root
system, which bounds it below by (K_2^2 + ... + K_s^2)/s and makes the tail
super-geometric; that bound drives the certified truncation used here.

The same machinery evaluates the Andrews-Gordon series/product pair, which
sandwiches the density: the series at 1/q from below and at 1/q^(s^2-s) from
above.  For s = 2 there is also a closed form in half-base Pochhammer symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .approx import ApproxReal, TruncationPolicy, default_policy
from .errors import ParameterError, VerificationError
from .modcount import (
    ChainRingSpec,
    count_by_type,
    free_fraction_by_rank,
    types_of_length,
)
from .qseries import euler_function, pochhammer_infinite

_EPS = 2.0 ** -52


def cartan_quadratic_form(kvec: tuple[int, ...], s: int) -> Fraction:
    """Evaluate v C^{-1} v^T with C^{-1}_{ij} = min(i, j) - ij/s, exactly.

    Computed both by direct matrix evaluation and by the closed form
    K_2^2 + ... + K_s^2 - (K_2 + ... + K_s)^2 / s (partial sums K); the two
    must agree exactly or a VerificationError is raised.
    """
    if s < 2:
        raise ParameterError("the quadratic form needs s >= 2")
    if len(kvec) != s - 1:
        raise ParameterError(f"index vector must have {s - 1} entries, got {len(kvec)}")
    direct = Fraction(0)
    for i in range(1, s):
        for j in range(1, s):
            direct += kvec[i - 1] * kvec[j - 1] * (Fraction(min(i, j)) - Fraction(i * j, s))
    partial = 0
    sum_sq = 0
    total = 0
    for k in kvec:
        partial += k
        sum_sq += partial * partial
        total += partial
    closed = Fraction(sum_sq) - Fraction(total * total, s)
    if direct != closed:
        raise VerificationError(f"quadratic form mismatch: {direct} != {closed} at {kvec}")
    return closed


def _index_vectors(s: int, cap: int):
    """All (k_2, ..., k_s) >= 0 with k_2 + ... + k_s <= cap, with partial sums."""

    def descend(i, remaining, prefix, partials):
        if i == s - 1:
            yield prefix, partials
            return
        running = partials[-1] if partials else 0
        for k in range(remaining + 1):
            yield from descend(i + 1, remaining - k, prefix + (k,), partials + (running + k,))

    yield from descend(0, cap, (), ())


def _divides_partial_sums(kvec, partials, s) -> bool:
    # the two transcriptions of the summation condition are provably equal;
    # evaluate both and insist on it
    by_partials = sum(partials) % s == 0
    by_weights = sum(k * (s - i) for i, k in enumerate(kvec, start=1)) % s == 0
    if by_partials != by_weights:
        raise VerificationError(f"divisibility conditions disagree at {kvec}")
    return by_partials


def _euler_floor(x: float, policy) -> float:
    e = euler_function(x, policy)
    lower = e.value - e.abs_error
    if lower <= 0.0:
        raise ParameterError("cannot certify a positive lower bound for (x; x)_inf")
    return lower


def _cutoff(x: float, s: int, scale: int, policy: TruncationPolicy, euler_low: float):
    """Smallest cap T with certified tail <= target_tail, and that tail bound.

    Terms with index sum T are at most x^(T^2/scale) / (x)_inf^(s-1) each and
    number at most (T+1)^(s-2) <= 2^(T(s-2)), so for caps >= T the tail is at
    most rho^(T+1) / (1 - rho) / (x)_inf^(s-1) with rho = 2^(s-2) x^((T+1)/scale).
    """
    prefactor = euler_low ** -(s - 1)
    best = math.inf
    for cap in range(1, policy.max_index + 1):
        rho = 2.0 ** (s - 2) * x ** ((cap + 1) / scale)
        if rho >= 1.0:
            continue
        best = prefactor * rho ** (cap + 1) / (1.0 - rho)
        if best <= policy.target_tail:
            return cap, best
    return policy.max_index, best


def _poch_table(x: float, cap: int) -> list[float]:
    table = [1.0]
    factor = 1.0
    power = x
    for _ in range(cap):
        factor *= 1.0 - power
        power *= x
        table.append(factor)
    return table


def limit_free_density(ring: ChainRingSpec, policy: TruncationPolicy | None = None) -> ApproxReal:
    """Limit, as n grows, of the probability that a fixed-length submodule is free.

    For s = 1 the ring is a field and every module is free, so the value is
    exactly 1.  Otherwise the reciprocal of the divisibility-constrained
    series described in the module docstring, truncated with a certified tail.
    """
    if ring.s == 1:
        return ApproxReal(1.0, 0.0)
    s = ring.s
    x = 1.0 / ring.q
    policy = policy or default_policy()
    euler_low = _euler_floor(x, policy)
    cap, tail = _cutoff(x, s, s, policy, euler_low)
    poch = _poch_table(x, cap)
    log_x = math.log(x)

    terms = []
    for kvec, partials in _index_vectors(s, cap):
        if not _divides_partial_sums(kvec, partials, s):
            continue
        total = sum(partials)
        sum_sq = sum(p * p for p in partials)
        exponent = (s * sum_sq - total * total) / s
        term = math.exp(exponent * log_x)
        for k in kvec:
            term /= poch[k]
        terms.append(term)
    series_value = math.fsum(terms)
    rounding = series_value * (2 * cap + 2 * s + 16) * _EPS
    series = ApproxReal(series_value, tail + rounding)
    return series.reciprocal()


def andrews_gordon_series(qinv, s: int, policy: TruncationPolicy | None = None) -> ApproxReal:
    """Multi-sum side of the Andrews-Gordon identity at base qinv in (0, 1).

    sum over n_1, ..., n_{s-1} >= 0 of qinv^(N_1^2 + ... + N_{s-1}^2) divided
    by (qinv)_{n_1} ... (qinv)_{n_{s-1}}, with suffix sums N_i = n_i + ... +
    n_{s-1}.  s = 2 is the first Rogers-Ramanujan series.
    """
    if s < 2:
        raise ParameterError("the Andrews-Gordon series needs s >= 2")
    x = float(qinv)
    if not 0.0 < x < 1.0:
        raise ParameterError("base must lie in (0, 1)")
    policy = policy or default_policy()
    euler_low = _euler_floor(x, policy)
    cap, tail = _cutoff(x, s, 1, policy, euler_low)
    poch = _poch_table(x, cap)
    log_x = math.log(x)

    terms = []
    for nvec, _ in _index_vectors(s, cap):
        total = 0
        sum_sq = 0
        for n_i in reversed(nvec):
            total += n_i
            sum_sq += total * total
        term = math.exp(sum_sq * log_x)
        for n_i in nvec:
            term /= poch[n_i]
        terms.append(term)
    value = math.fsum(terms)
    rounding = value * (2 * cap + 2 * s + 16) * _EPS
    return ApproxReal(value, tail + rounding)


def andrews_gordon_product(qinv, s: int, policy: TruncationPolicy | None = None) -> ApproxReal:
    """Product side of the Andrews-Gordon identity at base qinv in (0, 1).

    (x^s; x^(2s+1)) (x^(s+1); x^(2s+1)) (x^(2s+1); x^(2s+1)) / (x; x), all
    infinite products, assembled with propagated error bounds.
    """
    if s < 2:
        raise ParameterError("the Andrews-Gordon product needs s >= 2")
    x = float(qinv)
    if not 0.0 < x < 1.0:
        raise ParameterError("base must lie in (0, 1)")
    policy = policy or default_policy()
    step = x ** (2 * s + 1)
    top = (
        pochhammer_infinite(x ** s, step, policy)
        * pochhammer_infinite(x ** (s + 1), step, policy)
        * pochhammer_infinite(step, step, policy)
    )
    return top / pochhammer_infinite(x, x, policy)


@dataclass(frozen=True)
class DensityResult:
    """Certified lower bound, exact-series value and upper bound of the density."""

    lower: ApproxReal
    value: ApproxReal
    upper: ApproxReal
    ring: ChainRingSpec

    def ordered(self) -> bool:
        return (
            self.lower.value - self.lower.abs_error
            <= self.value.value
            <= self.upper.value + self.upper.abs_error
        )


def density_bounds(ring: ChainRingSpec, policy: TruncationPolicy | None = None) -> DensityResult:
    """Sandwich the limit density between two Andrews-Gordon reciprocals.

    Lower bound at base 1/q, upper bound at base 1/q^(s^2-s); requires s >= 2.
    """
    if ring.s < 2:
        raise ParameterError("density bounds need s >= 2")
    policy = policy or default_policy()
    lower = andrews_gordon_series(1.0 / ring.q, ring.s, policy).reciprocal()
    upper = andrews_gordon_series(float(ring.q) ** -(ring.s * ring.s - ring.s), ring.s, policy).reciprocal()
    value = limit_free_density(ring, policy)
    return DensityResult(lower=lower, value=value, upper=upper, ring=ring)


def depth_two_density(q: int, policy: TruncationPolicy | None = None) -> ApproxReal:
    """Closed form of the limit density for nilpotency index 2.

    2 / ((-sqrt(x); x)_inf + (sqrt(x); x)_inf) at x = 1/q.
    """
    if q < 2:
        raise ParameterError("q must be >= 2")
    policy = policy or default_policy()
    x = 1.0 / q
    root = math.sqrt(x)
    plus = pochhammer_infinite(-root, x, policy)
    minus = pochhammer_infinite(root, x, policy)
    return ApproxReal(2.0, 0.0) / (plus + minus)


def rank_density_trend(ring: ChainRingSpec, rate: Fraction, n_list) -> list[Fraction]:
    """Exact free probabilities at rank = rate * n for each listed n.

    Decreasing toward 0 when rate > 1/2, increasing toward 1 when rate < 1/2,
    and at least the Andrews-Gordon lower bound when rate = 1/2.
    """
    rate = Fraction(rate)
    if not 0 < rate < 1:
        raise ParameterError(f"rate must lie strictly between 0 and 1, got {rate}")
    values = []
    for n in n_list:
        rank = rate * n
        if rank.denominator != 1:
            raise ParameterError(f"rate * n must be an integer, got {rank} at n = {n}")
        values.append(free_fraction_by_rank(n, ring, int(rank)))
    return values


def type_counts_sorted(n: int, ring: ChainRingSpec, ell: int) -> list[tuple[tuple[int, ...], int]]:
    """All types of length ell with exact counts, most frequent first.

    Ties are broken by ascending lexicographic order on the type, so the
    output is byte-stable.
    """
    pairs = [(t, count_by_type(n, ring, t)) for t in types_of_length(ring.s, n, ell)]
    pairs.sort(key=lambda item: (-item[1], item[0]))
    return pairs


TABLE1_GRID = tuple((s, q) for s in (2, 3, 4) for q in (2, 3, 5, 7, 11))

TABLE2_GRID = (
    (2, 2, 50, 100),
    (2, 2, 40, 100),
    (2, 2, 60, 100),
    (2, 3, 50, 100),
    (2, 3, 40, 100),
    (2, 3, 60, 100),
    (3, 2, 50, 100),
    (3, 2, 40, 100),
    (3, 2, 60, 100),
)


@lru_cache(maxsize=None)
def table1_rows(policy: TruncationPolicy | None = None) -> tuple[tuple[int, int, DensityResult], ...]:
    """Density sandwich for the standard grid s in {2,3,4} x q in {2,3,5,7,11}."""
    return tuple((s, q, density_bounds(ChainRingSpec(q=q, s=s), policy)) for s, q in TABLE1_GRID)


def table2_rows() -> tuple[tuple[int, int, int, int, Fraction], ...]:
    """Exact free-module probabilities (q, s, K, n, value) for the reference grid."""
    return tuple(
        (q, s, k, n, free_fraction_by_rank(n, ChainRingSpec(q=q, s=s), k))
        for q, s, k, n in TABLE2_GRID
    )
