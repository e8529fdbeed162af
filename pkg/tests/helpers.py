"""Brute-force oracles shared by the unit and acceptance tests.

Everything here is deliberately naive: direct enumeration, no shortcuts, kept
independent of the library code paths it is used to check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def f2_subspace_count(n: int, k: int) -> int:
    """Count k-dimensional subspaces of F_2^n by enumerating all spans."""
    vectors = list(itertools.product((0, 1), repeat=n))

    def span(generators):
        space = {(0,) * n}
        for g in generators:
            for v in list(space):
                space.add(tuple((a + b) % 2 for a, b in zip(v, g)))
        # closure under repeated addition
        changed = True
        while changed:
            changed = False
            for a in list(space):
                for b in list(space):
                    c = tuple((x + y) % 2 for x, y in zip(a, b))
                    if c not in space:
                        space.add(c)
                        changed = True
        return frozenset(space)

    seen = set()
    for gens in itertools.combinations(vectors, k):
        sp = span(gens)
        if len(sp) == 2 ** k:
            seen.add(sp)
    return len(seen)


def all_tuples(mod: int, n: int):
    return itertools.product(range(mod), repeat=n)


def brute_ball_counts(n: int, symbol_weights) -> dict[Fraction, int]:
    """Exact weight distribution of (Z/mod)^n by full enumeration."""
    mod = len(symbol_weights)
    distribution: dict[Fraction, int] = {}
    for vec in all_tuples(mod, n):
        w = sum((symbol_weights[x] for x in vec), Fraction(0))
        distribution[w] = distribution.get(w, 0) + 1
    return distribution


def brute_ball_volume(n: int, radius, symbol_weights, closed: bool) -> int:
    radius = Fraction(radius)
    dist = brute_ball_counts(n, symbol_weights)
    if closed:
        return sum(c for w, c in dist.items() if w <= radius)
    return sum(c for w, c in dist.items() if w < radius)


def naive_q_multinomial(n: int, ell: int, s: int, base):
    """Literal unconstrained composition sum of the depth-s coefficient."""
    from chainring.qseries import gaussian_binomial

    total = 0
    for mu in itertools.product(range(ell + 1), repeat=s):
        if sum(mu) != ell:
            continue
        term = gaussian_binomial(n, mu[0], base)
        for j in range(s - 1):
            term *= base ** ((n - mu[j]) * mu[j + 1])
            term *= gaussian_binomial(mu[j], mu[j + 1], base)
        total += term
    return total
