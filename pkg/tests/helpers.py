"""Shared generators for the property tests: seeded random admissible data."""

from __future__ import annotations

import random

from mcf import PartialQuotients, PeriodicSpec, check_admissible, unroll


def random_admissible_m2(rng: random.Random, length: int, max_q: int = 5,
                         head=(None, None)) -> PartialQuotients:
    """Random admissible m=2 sequences: a_n >= 1, 0 <= b_n <= a_n, and
    b_{n+1} >= 1 forced whenever a_n = b_n.  Index 0 defaults to small
    nonnegative values unless pinned by `head`."""
    a = [head[0] if head[0] is not None else rng.randint(0, max_q)]
    b = [head[1] if head[1] is not None else rng.randint(0, max_q)]
    force_next_b = False
    for _ in range(1, length):
        a_n = rng.randint(1, max_q)
        lo_b = 1 if force_next_b else 0
        if lo_b > a_n:
            a_n = lo_b
        b_n = rng.randint(lo_b, a_n)
        a.append(a_n)
        b.append(b_n)
        force_next_b = a_n == b_n
    if force_next_b:
        # can't leave a dangling tie at the end of a finite prefix we unroll further
        pass
    return PartialQuotients.from_lists(a, b)


def random_admissible(rng: random.Random, m: int, length: int, max_q: int = 5) -> PartialQuotients:
    """Random admissible sequences for any m.

    For m = 2 ties are allowed (with the forced follow-up); for m != 2 the
    trailing coordinates are kept strictly below the head, which breaks
    every lexicographic chain at its first comparison.
    """
    if m == 2:
        return random_admissible_m2(rng, length, max_q)
    seqs = [[rng.randint(0, max_q)] for _ in range(m)]
    for _ in range(1, length):
        head = rng.randint(1, max_q)
        seqs[0].append(head)
        for j in range(1, m):
            seqs[j].append(rng.randint(0, head - 1) if head > 1 else 0)
    return PartialQuotients.from_lists(*seqs)


def random_periodic_spec(rng: random.Random, k_max: int = 3, h_max: int = 4,
                         max_q: int = 4, zero_head: bool = False) -> PeriodicSpec:
    """Random admissible periodic spec (rejection sampling over the wrap checks)."""
    for _ in range(10_000):
        k = rng.randint(1 if zero_head else 0, k_max)
        h = rng.randint(1, h_max)
        pre_a, pre_b, per_a, per_b = [], [], [], []
        for i in range(k):
            if i == 0 and zero_head:
                pre_a.append(0)
                pre_b.append(0)
            elif i == 0:
                pre_a.append(rng.randint(0, max_q))
                pre_b.append(rng.randint(0, max_q))
            else:
                pre_a.append(rng.randint(1, max_q))
                pre_b.append(rng.randint(0, max_q))
        for i in range(h):
            if k == 0 and i == 0:
                # index 0 of a purely periodic spec re-occurs at n = h >= 1
                per_a.append(rng.randint(1, max_q))
            else:
                per_a.append(rng.randint(1, max_q))
            per_b.append(rng.randint(0, max_q))
        spec = PeriodicSpec(tuple(pre_a), tuple(pre_b), tuple(per_a), tuple(per_b))
        probe = unroll(spec, spec.k + 2 * spec.h + 2)
        if check_admissible(probe).ok:
            return spec
    raise AssertionError("rejection sampling failed to find an admissible spec")


def pq_prefix_equal(x: PartialQuotients, y: PartialQuotients, upto: int) -> bool:
    return all(
        x.seqs[j][: upto + 1] == y.seqs[j][: upto + 1] for j in range(min(x.m, y.m))
    )


def random_pq_with_power_hypothesis(rng: random.Random, d: int, length: int,
                                    cap: int = 6) -> PartialQuotients:
    """Random admissible m=2 sequences with a_(n+1) < C_n^d for all n >= 1."""
    from mcf.convergents import ConvergentState

    a, b = [0, 2], [0, 0]
    state = ConvergentState.initial(2)
    state.step((a[0], b[0]))
    col = state.step((a[1], b[1]))
    force_b = a[1] == b[1]
    for _ in range(2, length):
        hi = min(cap, col.C**d - 1)
        a_n = rng.randint(1, max(1, hi))
        lo_b = 1 if force_b else 0
        b_n = rng.randint(lo_b, a_n) if a_n >= lo_b else lo_b
        a.append(a_n)
        b.append(b_n)
        force_b = a_n == b_n
        col = state.step((a_n, b_n))
    return PartialQuotients.from_lists(a, b)
