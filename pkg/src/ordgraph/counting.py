"""Exact and sampled counting of ordered (induced) copies.

All exact counts are arbitrary-precision integers.  Counting is deterministic;
when ORDGRAPH_THREADS is set above 1, work is split over the image of the
first pattern vertex and partial sums are combined in a fixed order, so the
result is bit-identical to a sequential run.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from . import config, kernels
from .graphs import OrderedGraph, VertexSet, fork


class PatternTooLarge(ValueError):
    pass


_FORK = fork()


def _fadj_rows(f: OrderedGraph) -> tuple[int, ...]:
    return tuple(f.row(i) for i in range(f.n))


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ORDGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def _check_pattern_size(f: OrderedGraph, cap: int | None):
    cap = config.MAX_PATTERN_VERTICES if cap is None else cap
    if f.n > cap:
        raise PatternTooLarge(
            f"pattern has {f.n} vertices; the configured cap is {cap}"
        )


def _count(f: OrderedGraph, g: OrderedGraph, induced: bool, cap: int | None) -> int:
    _check_pattern_size(f, cap)
    if f.n == 0:
        return 1
    if f.n > g.n:
        return 0
    threads = _thread_count()
    fadj = _fadj_rows(f)
    if threads == 1 or g.n < 4 * threads:
        return kernels.count_pattern(g.n, g._rows, fadj, induced)
    from concurrent.futures import ThreadPoolExecutor

    bounds = [g.n * i // threads for i in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(
                kernels.count_pattern, g.n, g._rows, fadj, induced, bounds[i], bounds[i + 1]
            )
            for i in range(threads)
        ]
        return sum(fut.result() for fut in futures)


def count_induced(f: OrderedGraph, g: OrderedGraph, *, max_pattern_vertices=None) -> int:
    """Order-preserving injections V(f) -> V(g) mapping edges to edges and
    non-edges to non-edges."""
    return _count(f, g, True, max_pattern_vertices)


def count_copies(f: OrderedGraph, g: OrderedGraph, *, max_pattern_vertices=None) -> int:
    """As count_induced without the non-edge condition."""
    return _count(f, g, False, max_pattern_vertices)


def count_induced_forks(g: OrderedGraph) -> int:
    """Induced copies of the fork, one forward neighbourhood at a time.

    Equals count_induced(fork(), g); implemented directly as the number of
    non-adjacent pairs inside each vertex's forward neighbourhood.
    """
    return kernels.count_forks(g.n, g._rows)


def count_sequences(n: int, sets: Sequence[VertexSet]) -> int:
    """Increasing transversals v_1 < ... < v_k with v_i in sets[i].

    Single left-to-right pass, O(nk).  Sets must be pairwise disjoint.
    """
    k = len(sets)
    if k == 0:
        raise ValueError("need at least one set")
    union = 0
    total = 0
    for s in sets:
        union |= s.mask
        total += len(s)
    if union.bit_count() != total:
        raise ValueError("sets must be pairwise disjoint")
    owner = {}
    for j, s in enumerate(sets):
        for v in s:
            if v >= n:
                raise ValueError(f"vertex {v} out of range for n={n}")
            owner[v] = j
    ways = [1] + [0] * k
    for v in sorted(owner):
        j = owner[v]
        ways[j + 1] += ways[j]
    return ways[k]


def enumerate_copies(
    f: OrderedGraph, g: OrderedGraph, induced: bool = True
) -> Iterator[tuple[int, ...]]:
    """All image tuples in lexicographic order."""
    return kernels.enumerate_pattern(g.n, g._rows, _fadj_rows(f), induced)


def find_induced_fork(g: OrderedGraph) -> tuple[int, int, int] | None:
    """First (lexicographic) induced fork, or None."""
    for x in range(g.n):
        fwd = g.forward_row(x)
        if fwd.bit_count() < 2:
            continue
        m = fwd
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            non_nbrs = m & ~g.row(y)
            if non_nbrs:
                z = (non_nbrs & -non_nbrs).bit_length() - 1
                return (x, y, z)
    return None


def pack_disjoint_copies(
    f: OrderedGraph, g: OrderedGraph, induced: bool = True
) -> list[VertexSet]:
    """Greedy first-fit family of copies of f sharing at most one vertex.

    Copies are scanned in lexicographic order; a copy is kept iff it shares
    at most one vertex with every copy already kept.  When the copies are
    edge-disjoint the family size is a lower bound on the number of edge
    edits needed to destroy all copies of f.
    """
    taken_pairs = set()
    out = []
    for tup in enumerate_copies(f, g, induced):
        pairs = [
            (tup[i], tup[j]) for i in range(len(tup)) for j in range(i + 1, len(tup))
        ]
        if any(p in taken_pairs for p in pairs):
            continue
        taken_pairs.update(pairs)
        out.append(VertexSet(tup))
    return out


def estimate_induced(
    f: OrderedGraph, g: OrderedGraph, samples: int, rng_seed: int
) -> Fraction:
    """Unbiased estimate of count_induced(f, g) / C(n, v(f)).

    Samples uniform increasing v(f)-tuples; deterministic for a given seed.
    One-sided: the estimate is 0 whenever g is induced-f-free.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    k = f.n
    if k > g.n or k == 0:
        return Fraction(0) if k else Fraction(1)
    rng = random.Random(rng_seed)
    fadj = _fadj_rows(f)
    hits = 0
    for _ in range(samples):
        tup = sorted(rng.sample(range(g.n), k))
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                if (fadj[i] >> j & 1) != (g.row(tup[i]) >> tup[j] & 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            hits += 1
    return Fraction(hits, samples)


def induced_density(f: OrderedGraph, g: OrderedGraph) -> Fraction:
    """Exact induced-copy count normalised by the number of increasing tuples."""
    if f.n > g.n:
        return Fraction(0)
    return Fraction(count_induced(f, g), comb(g.n, f.n))
