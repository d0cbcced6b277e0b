"""Hard-instance generators: graphs with many disjoint copies but few total.

The machinery: integer sets free of weighted averaging equations (built by
digit/sphere methods and guided greedy search, always certified by the
exhaustive verifier), arithmetic tuple designs over a prime field, colored
pair patterns with goodness witnesses, and the blowup generator that plants
pair-disjoint copies along arithmetic progressions so that any extra copy
would force a forbidden equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import random

from . import config
from .counting import count_copies, count_induced, enumerate_copies
from .graphs import (
    OrderedGraph,
    VertexSet,
    blowup,
    complement,
    monotone_path,
    ordered_cycle4,
    ordered_path4,
    reverse,
)
from .hom import core, find_homomorphism, is_forest


class DomainRefusal(ValueError):
    """The requested object provably does not exist for this pattern."""


class InfeasibleParameters(ValueError):
    """Desk-scale parameters cannot realize the construction; the message
    names the binding constraint."""


# -- solution-free integer sets ------------------------------------------------


@dataclass(frozen=True)
class SolutionFreeSet:
    m: int
    k: int
    elements: tuple[int, ...]
    verified: bool


def _weightings(k: int):
    """All (t, weights) with 3 <= t <= k, positive weights summing to <= k."""
    out = []
    for t in range(3, k + 1):
        def rec(parts, remaining, acc):
            if parts == 0:
                out.append((t, tuple(acc)))
                return
            for p in range(1, remaining - (parts - 1) + 1):
                rec(parts - 1, remaining - p, acc + [p])
        rec(t - 1, k, [])
    return out


def verify_solution_free(elements: Iterable[int], k: int):
    """Exhaustively check every weighted averaging equation up to order k.

    Returns (True, None), or (False, (t, weights, tuple)) with a solution
    whose entries are not all equal.  Meet-in-the-middle keeps the check at
    O(|S|^(ceil((t+1)/2))) per weighting.
    """
    els = sorted(set(elements))
    if any(e < 1 for e in els):
        raise ValueError("elements must be positive integers")
    sset = set(els)
    for t, ps in _weightings(k):
        total = sum(ps)
        h = t // 2  # left weights ps[:h]; right weights ps[h:t-1]; plus s_t
        left_ps = ps[:h]
        right_ps = ps[h:]
        sums: dict[int, list[tuple[int, ...]]] = {}
        for left in product(els, repeat=len(left_ps)):
            v = sum(p * s for p, s in zip(left_ps, left))
            bucket = sums.setdefault(v, [])
            if len(bucket) < 2:
                bucket.append(left)
        for right in product(els, repeat=len(right_ps)):
            rsum = sum(p * s for p, s in zip(right_ps, right))
            for st in els:
                need = total * st - rsum
                bucket = sums.get(need)
                if not bucket:
                    continue
                for left in bucket:
                    tup = left + right + (st,)
                    if any(s != st for s in tup):
                        return False, (t, ps, tup)
    return True, None


def _creates_solution(sset: set, x: int, weightings) -> bool:
    """Would adding x to the solution-free set sset create a solution?"""
    pool = list(sset) + [x]
    pset = set(pool)
    for t, ps in weightings:
        total = sum(ps)
        # x in the right-hand role s_t
        for rest in product(pool, repeat=t - 2):
            v = total * x - sum(p * s for p, s in zip(ps[:-1], rest))
            if v % ps[-1] == 0:
                last = v // ps[-1]
                if last in pset:
                    tup = rest + (last, x)
                    if any(s != x for s in tup):
                        return True
        # x in a left-hand role r
        for r in range(t - 1):
            other_ps = ps[:r] + ps[r + 1 :]
            for rest in product(pool, repeat=t - 2):
                v = ps[r] * x + sum(p * s for p, s in zip(other_ps, rest))
                if v % total == 0 and v // total in pset:
                    st = v // total
                    if not (x == st and all(s == st for s in rest)):
                        return True
    return False


def _greedy_sweep(m: int, k: int, weightings, seed: set | None = None) -> list[int]:
    sset = set(seed or ())
    for x in range(1, m + 1):
        if x in sset:
            continue
        if not _creates_solution(sset, x, weightings):
            sset.add(x)
    return sorted(sset)


def _digit_cube_set(m: int, k: int) -> list[int]:
    """Elements 1 + sum a_i (k+1)^i with binary digits; always solution-free."""
    base = k + 1
    out = []
    digits = 1
    while True:
        top = 1 + (base**digits - 1) // (base - 1)
        if top > m:
            break
        digits += 1
    for vec in product((0, 1), repeat=digits):
        e = 1 + sum(a * base**i for i, a in enumerate(vec))
        if e <= m:
            out.append(e)
    return sorted(out)


def _sphere_sets(m: int, k: int) -> list[list[int]]:
    """Digit vectors of bounded height on a norm shell, mapped to integers."""
    out = []
    for d in range(k + 1, 200):
        u = (d - 1) // k
        if u < 1:
            continue
        dims = 2
        while 1 + u * (d ** (dims + 1) - 1) // (d - 1) <= m:
            dims += 1
        if 1 + u * (d**dims - 1) // (d - 1) > m:
            continue
        if (u + 1) ** dims > 400_000:
            continue
        shells: dict[int, list[int]] = {}
        for vec in product(range(u + 1), repeat=dims):
            e = 1 + sum(a * d**i for i, a in enumerate(vec))
            if e <= m:
                shells.setdefault(sum(a * a for a in vec), []).append(e)
        if shells:
            best = max(shells.values(), key=len)
            out.append(sorted(best))
    return out


_WINDOW_SEED_CACHE: dict[tuple[int, int], tuple] = {}


def _window_seeds(k: int, window: int, cap: int = 16) -> tuple:
    """Maximum solution-free subsets of [1..window] via branch and bound."""
    key = (k, window)
    if key in _WINDOW_SEED_CACHE:
        return _WINDOW_SEED_CACHE[key]
    weightings = _weightings(k)
    best_size = [0]
    seeds: list[frozenset] = []

    def dfs(x, sset):
        if len(sset) + (window - x + 1) < best_size[0]:
            return
        if x > window:
            if len(sset) > best_size[0]:
                best_size[0] = len(sset)
                seeds.clear()
                seeds.append(frozenset(sset))
            elif len(sset) == best_size[0] and len(seeds) < cap:
                seeds.append(frozenset(sset))
            return
        if not _creates_solution(sset, x, weightings):
            sset.add(x)
            dfs(x + 1, sset)
            sset.discard(x)
        dfs(x + 1, sset)

    dfs(1, set())
    _WINDOW_SEED_CACHE[key] = tuple(seeds)
    return _WINDOW_SEED_CACHE[key]


def _window_seeded_sets(m: int, k: int, weightings, window: int = 30):
    """Greedy sweeps seeded with every optimum of a small exact window; the
    seeds routinely extend to larger sets than the plain ascending sweep."""
    return [
        _greedy_sweep(m, k, weightings, seed=set(s))
        for s in _window_seeds(k, window)
    ]


def solution_free_set(m: int, k: int) -> SolutionFreeSet:
    """Largest set found among certified candidates in [1..m].

    Candidates: binary-digit sets, sphere shells, an ascending greedy sweep,
    and (for k = 3 at useful sizes) greedy sweeps seeded with every optimum
    of a small exact window.  The verifier is the source of truth: whatever
    construction wins is re-certified before being returned.
    """
    if m < 1 or k < 3:
        raise ValueError("need m >= 1 and k >= 3")
    weightings = _weightings(k)
    candidates: list[list[int]] = [[1]]
    candidates.append(_digit_cube_set(m, k))
    candidates.extend(_sphere_sets(m, k))
    if k == 3 or (k == 4 and m <= 2500) or (k >= 5 and m <= 400):
        candidates.append(_greedy_sweep(m, k, weightings))
    if k == 3 and m >= 60:
        candidates.extend(_window_seeded_sets(m, k, weightings))
    best: list[int] | None = None
    for cand in candidates:
        cand = [e for e in cand if 1 <= e <= m]
        if not cand:
            continue
        if best is not None and len(cand) <= len(best):
            continue
        ok, _ = verify_solution_free(cand, k)
        if ok:
            best = cand
    if best is None:
        best = [1]
    return SolutionFreeSet(m=m, k=k, elements=tuple(best), verified=True)


def greedy_solution_free_baseline(m: int, k: int) -> tuple[int, ...]:
    """Plain ascending first-fit sweep; the reference point for set sizes."""
    return tuple(_greedy_sweep(m, k, _weightings(k)))


# -- tuple designs over a prime field ------------------------------------------


def design_tuples(r: int, k: int) -> list[tuple[int, ...]]:
    """p^2 arithmetic tuples over [r] agreeing pairwise on <= 1 coordinate.

    p is the smallest prime in (r/2, r]; tuple (a,b) maps position i to
    ((a + i*b) mod p) + 1.  Requires r >= 2k so that p > k and distinct
    positions stay distinct mod p.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if r < 2 * k:
        raise ValueError(f"need r >= 2k (got r={r}, k={k})")
    p = _smallest_prime_above(r // 2, r)
    out = []
    for a in range(p):
        for b in range(p):
            out.append(tuple(((a + i * b) % p) + 1 for i in range(k)))
    return out


def _smallest_prime_above(lo: int, hi: int) -> int:
    """Smallest prime q with lo < q <= hi (exists for hi >= 2*lo', Bertrand)."""
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(math.isqrt(hi)) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    for q in range(lo + 1, hi + 1):
        if sieve[q]:
            return q
    raise ValueError(f"no prime in ({lo}, {hi}]")


def verify_design(tuples: Sequence[tuple[int, ...]]):
    """Exhaustive pairwise check; returns (True, None) or (False, (i, j))."""
    for i in range(len(tuples)):
        ti = tuples[i]
        for j in range(i + 1, len(tuples)):
            tj = tuples[j]
            agree = sum(1 for a, b in zip(ti, tj) if a == b)
            if agree > 1:
                return False, (i, j)
    return True, None


# -- colored pair patterns -------------------------------------------------------


BLACK, WHITE, GRAY = "black", "white", "gray"


@dataclass(frozen=True)
class Pattern:
    """Complete ordered graph on [k] with black/white/gray pair colors."""

    k: int
    colors: tuple  # ((i, j, color), ...) sorted; total on all pairs

    @classmethod
    def from_lists(cls, k: int, black=(), white=()) -> "Pattern":
        colors = {}
        for i, j in black:
            colors[(min(i, j), max(i, j))] = BLACK
        for i, j in white:
            pair = (min(i, j), max(i, j))
            if colors.get(pair) == BLACK:
                raise ValueError(f"pair {pair} colored both black and white")
            colors[pair] = WHITE
        full = []
        for i in range(k):
            for j in range(i + 1, k):
                full.append((i, j, colors.get((i, j), GRAY)))
        return cls(k=k, colors=tuple(full))

    def color(self, i: int, j: int) -> str:
        i, j = min(i, j), max(i, j)
        for a, b, c in self.colors:
            if (a, b) == (i, j):
                return c
        raise KeyError((i, j))

    def color_map(self) -> dict:
        return {(a, b): c for a, b, c in self.colors}

    def complemented(self) -> "Pattern":
        swap = {BLACK: WHITE, WHITE: BLACK, GRAY: GRAY}
        return Pattern(
            k=self.k, colors=tuple((a, b, swap[c]) for a, b, c in self.colors)
        )

    def reversed_(self) -> "Pattern":
        k = self.k
        out = []
        for a, b, c in self.colors:
            i, j = k - 1 - b, k - 1 - a
            out.append((i, j, c))
        return Pattern(k=k, colors=tuple(sorted(out)))

    def is_completion(self, f: OrderedGraph) -> bool:
        if f.n != self.k:
            return False
        for a, b, c in self.colors:
            if c == BLACK and not f.has_edge(a, b):
                return False
            if c == WHITE and f.has_edge(a, b):
                return False
        return True


def check_pattern(g: OrderedGraph, pattern: Pattern, parts: Sequence[VertexSet]):
    """Does g realize the pattern under the given ordered interval partition?

    Parts must be consecutive intervals in order (empty parts allowed) and
    partition V(g).  Returns (True, None) or (False, (u, v)) with the first
    offending vertex pair.
    """
    if len(parts) != pattern.k:
        raise ValueError("number of parts must match the pattern")
    flat = [v for part in parts for v in part.elements]
    if flat != list(range(g.n)):
        raise ValueError("parts must be consecutive ordered intervals covering V(g)")
    from .repair import _edges_within  # bit helper

    for part in parts:
        if _edges_within(g._rows, part.mask):
            for u in part:
                inner = g.row(u) & part.mask & ~((1 << (u + 1)) - 1)
                if inner:
                    return False, (u, (inner & -inner).bit_length() - 1)
    cmap = pattern.color_map()
    for i in range(pattern.k):
        for j in range(i + 1, pattern.k):
            c = cmap[(i, j)]
            if c == GRAY:
                continue
            for u in parts[i]:
                row = g.row(u) & parts[j].mask
                if c == BLACK and row != parts[j].mask:
                    missing = parts[j].mask & ~row
                    return False, (u, (missing & -missing).bit_length() - 1)
                if c == WHITE and row:
                    return False, (u, (row & -row).bit_length() - 1)
    return True, None


@dataclass(frozen=True)
class GoodnessSpec:
    """Pattern plus the vertex families every planted-host copy must realize.

    Invariant (checked): for every family member A there is a gray cycle in
    the pattern restricted to A that the permutation sigma makes increasing.
    """

    pattern: Pattern
    families: tuple
    sigma: tuple

    def __post_init__(self):
        k = self.pattern.k
        if sorted(self.sigma) != list(range(k)):
            raise ValueError("sigma must be a permutation of range(k)")
        for a in self.families:
            if not a:
                continue
            if not _has_increasing_gray_cycle(self.pattern, frozenset(a), self.sigma):
                raise ValueError(
                    f"family {sorted(a)} has no gray cycle increasing under sigma"
                )


def _has_increasing_gray_cycle(pattern: Pattern, a: frozenset, sigma) -> bool:
    cmap = pattern.color_map()
    members = sorted(a)
    for size in range(3, len(members) + 1):
        for sub in combinations(members, size):
            cyc = sorted(sub, key=lambda v: sigma[v])
            ok = True
            for idx in range(len(cyc)):
                u, w = cyc[idx], cyc[(idx + 1) % len(cyc)]
                if cmap[(min(u, w), max(u, w))] != GRAY:
                    ok = False
                    break
            if ok:
                return True
    return False


def sigma_for_cycle(k: int, cycle: Sequence[int]) -> tuple[int, ...]:
    """A permutation ranking the cycle's visiting order first."""
    sigma = [None] * k
    for rank, v in enumerate(cycle):
        sigma[v] = rank
    nxt = len(cycle)
    for v in range(k):
        if sigma[v] is None:
            sigma[v] = nxt
            nxt += 1
    return tuple(sigma)


def find_gray_cycle(pattern: Pattern, within: frozenset | None = None):
    """Shortest (then lexicographically first) gray cycle, or None."""
    cmap = pattern.color_map()
    verts = sorted(within) if within is not None else list(range(pattern.k))
    adj = {
        v: [u for u in verts if u != v and cmap[(min(u, v), max(u, v))] == GRAY]
        for v in verts
    }
    best = None
    for size in range(3, len(verts) + 1):
        for sub in combinations(verts, size):
            start = sub[0]
            rest = sub[1:]
            import itertools

            for perm in itertools.permutations(rest):
                cyc = (start,) + perm
                if all(
                    cyc[(i + 1) % size] in adj[cyc[i]] for i in range(size)
                ):
                    if best is None or cyc < best:
                        best = cyc
            if best is not None:
                return list(best)
        if best is not None:
            return list(best)
    return None


# -- goodness falsifier ----------------------------------------------------------


@dataclass(frozen=True)
class GoodnessCounterexample:
    graph: OrderedGraph
    parts: tuple
    copy: tuple


def falsify_goodness(
    f: OrderedGraph, spec: GoodnessSpec, budget: int = 200, seed: int = 0
):
    """Search for a patterned host with an induced copy realizing no family.

    First phase: exhaustive over single-copy configurations (every monotone
    assignment of copy vertices to parts consistent with the pattern).
    Second phase: random multi-vertex hosts, up to `budget` attempts.  A None
    result is evidence, not a certificate of goodness.
    """
    k = spec.pattern.k
    if f.n != k:
        raise ValueError("pattern size must match the graph")
    cmap = spec.pattern.color_map()

    def copy_realizes(adj_of, part_of, copy_vertices):
        by_part: dict[int, list[int]] = {}
        for v in copy_vertices:
            by_part.setdefault(part_of[v], []).append(v)
        for a in spec.families:
            members = sorted(a)
            if not members:
                continue
            if any(p not in by_part for p in members):
                continue
            for choice in product(*(by_part[p] for p in members)):
                if all(choice[s] < choice[s + 1] for s in range(len(choice) - 1)):
                    good = True
                    for s in range(len(members)):
                        for t2 in range(s + 1, len(members)):
                            want = f.has_edge(members[s], members[t2])
                            got = adj_of(choice[s], choice[t2])
                            if want != got:
                                good = False
                                break
                        if not good:
                            break
                    if good:
                        return True
        return False

    # phase 1: the host is the copy itself
    for assignment in combinations_with_replacement_monotone(k):
        ok = True
        for u in range(k):
            for v in range(u + 1, k):
                pu, pv = assignment[u], assignment[v]
                if pu == pv:
                    if f.has_edge(u, v):
                        ok = False
                        break
                else:
                    c = cmap[(min(pu, pv), max(pu, pv))]
                    if c == BLACK and not f.has_edge(u, v):
                        ok = False
                        break
                    if c == WHITE and f.has_edge(u, v):
                        ok = False
                        break
            if not ok:
                break
        if not ok:
            continue
        part_of = {v: assignment[v] for v in range(k)}
        if not copy_realizes(lambda a, b: f.has_edge(a, b), part_of, tuple(range(k))):
            parts = tuple(
                VertexSet([v for v in range(k) if assignment[v] == p])
                for p in range(k)
            )
            return GoodnessCounterexample(graph=f, parts=parts, copy=tuple(range(k)))

    # phase 2: random hosts
    rng = random.Random(seed)
    for _ in range(budget):
        sizes = [rng.randint(1, 3) for _ in range(k)]
        n = sum(sizes)
        starts = []
        acc = 0
        for s in sizes:
            starts.append(acc)
            acc += s
        part_of = {}
        for p in range(k):
            for v in range(starts[p], starts[p] + sizes[p]):
                part_of[v] = p
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                pu, pv = part_of[u], part_of[v]
                if pu == pv:
                    continue
                c = cmap[(min(pu, pv), max(pu, pv))]
                if c == BLACK or (c == GRAY and rng.random() < 0.5):
                    edges.append((u, v))
        g = OrderedGraph.from_edges(n, edges)
        for tup in enumerate_copies(f, g, induced=True):
            if not copy_realizes(lambda a, b: g.has_edge(a, b), part_of, tup):
                parts = tuple(
                    VertexSet(range(starts[p], starts[p] + sizes[p]))
                    for p in range(k)
                )
                return GoodnessCounterexample(graph=g, parts=parts, copy=tup)
    return None


def combinations_with_replacement_monotone(k: int):
    """All nondecreasing maps range(k) -> range(k)."""
    def rec(i, lo, acc):
        if i == k:
            yield tuple(acc)
            return
        for p in range(lo, k):
            acc.append(p)
            yield from rec(i + 1, p, acc)
            acc.pop()
    yield from rec(0, 0, [])


# -- the blowup generator ---------------------------------------------------------


@dataclass
class PlantedInstance:
    graph: OrderedGraph
    pattern: Pattern
    parts: list[VertexSet]
    planted_copies: list[tuple[int, ...]]
    census: int | None
    case: str | None = None
    edge_certificates: list[frozenset] | None = None
    base_graph: OrderedGraph | None = None
    m: int | None = None
    set_size: int | None = None


def instance_scale(epsilon, k: int, constant: float | None = None) -> int:
    """Largest m with exp(-c*sqrt(log m)) >= 4*k^4*epsilon (0 if infeasible).

    Transcendental bound; evaluated in floating point (the only non-rational
    computation in the generator) and used purely as a size parameter.
    """
    c = float(config.SOLUTION_FREE_CONSTANT if constant is None else constant)
    eps = float(Fraction(epsilon))
    target = 4 * k**4 * eps
    if target >= 1.0:
        return 0
    bound = (math.log(1.0 / target) / c) ** 2
    return int(math.floor(math.exp(bound)))


def build_planted_instance(
    f: OrderedGraph,
    spec: GoodnessSpec,
    epsilon,
    n: int,
    *,
    m: int | None = None,
    solution_set: SolutionFreeSet | None = None,
    compute_census: bool = True,
    validate: bool = True,
) -> PlantedInstance:
    """Blowup construction planting pair-disjoint induced copies of f.

    Builds the base host with parts of size (rank+1)*m, one planted copy per
    (offset, stride) pair with strides drawn from a certified solution-free
    set, black/white pairs completed/emptied, and free cells outside planted
    copies set opposite to f's adjacency.  The final graph is the
    floor(n/v(base))-blowup with planted copies fanned out along the tuple
    design.  Raises InfeasibleParameters naming the binding constraint when
    the scale does not admit the construction.
    """
    k = f.n
    if spec.pattern.k != k:
        raise ValueError("pattern size must match the planted graph")
    if not spec.pattern.is_completion(f):
        raise ValueError("the planted graph must be a completion of the pattern")
    if m is None:
        m = instance_scale(epsilon, k)
        if m < 1:
            raise InfeasibleParameters(
                "epsilon too large: the scale bound gives m < 1; pass m explicitly"
            )
    if m < 1:
        raise InfeasibleParameters("m must be at least 1")
    sset = solution_set or solution_free_set(m, max(k, 3))
    if len(sset.elements) < 1:
        raise InfeasibleParameters("empty solution-free set")
    if max(sset.elements) > m:
        raise ValueError("solution-free set exceeds the stride range")
    sigma1 = [s + 1 for s in spec.sigma]  # 1-based ranks
    sizes = [sigma1[i] * m for i in range(k)]
    starts = [0] * k
    for i in range(1, k):
        starts[i] = starts[i - 1] + sizes[i - 1]
    v_base = sum(sizes)
    if n < v_base:
        raise InfeasibleParameters(
            f"n too small: base graph needs {v_base} vertices (n={n})"
        )
    r = n // v_base
    if r < 2 * k:
        raise InfeasibleParameters(
            f"n too small for the clone design: need n >= {2 * k * v_base}"
        )

    # planted copies in the base graph
    base_copies = []
    copy_cells: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for x in range(1, m + 1):
        for s in sset.elements:
            pos = tuple(starts[i] + (x - 1) + (sigma1[i] - 1) * s for i in range(k))
            base_copies.append(pos)
            for i in range(k):
                for j in range(i + 1, k):
                    copy_cells.setdefault((i, j), set()).add((pos[i], pos[j]))

    rows = [0] * v_base
    def _set_edge(u, w):
        rows[u] |= 1 << w
        rows[w] |= 1 << u

    cmap = spec.pattern.color_map()
    for i in range(k):
        for j in range(i + 1, k):
            c = cmap[(i, j)]
            cells = copy_cells.get((i, j), set())
            if c == BLACK:
                for u in range(starts[i], starts[i] + sizes[i]):
                    for w in range(starts[j], starts[j] + sizes[j]):
                        _set_edge(u, w)
            elif c == WHITE:
                pass
            else:
                f_edge = f.has_edge(i, j)
                if f_edge:
                    for u, w in cells:
                        _set_edge(u, w)
                else:
                    for u in range(starts[i], starts[i] + sizes[i]):
                        for w in range(starts[j], starts[j] + sizes[j]):
                            if (u, w) not in cells:
                                _set_edge(u, w)
    base = OrderedGraph(v_base, rows)
    base_parts = [
        VertexSet(range(starts[i], starts[i] + sizes[i])) for i in range(k)
    ]
    if validate:
        ok, offender = check_pattern(base, spec.pattern, base_parts)
        if not ok:
            raise RuntimeError(f"internal: base graph violates the pattern at {offender}")
        for pos in base_copies[: min(len(base_copies), 64)]:
            for i in range(k):
                for j in range(i + 1, k):
                    if base.has_edge(pos[i], pos[j]) != f.has_edge(i, j):
                        raise RuntimeError("internal: planted copy is not induced")

    graph = blowup(base, r)
    parts = [
        VertexSet(range(starts[i] * r, (starts[i] + sizes[i]) * r)) for i in range(k)
    ]
    design = design_tuples(r, k)
    planted = []
    for pos in base_copies:
        for tup in design:
            planted.append(tuple(pos[i] * r + (tup[i] - 1) for i in range(k)))
    census = count_induced(f, graph) if compute_census else None
    return PlantedInstance(
        graph=graph,
        pattern=spec.pattern,
        parts=parts,
        planted_copies=planted,
        census=census,
        base_graph=base,
        m=m,
        set_size=len(sset.elements),
    )


# -- case analysis for induced hardness -------------------------------------------


def _has_triangle(f: OrderedGraph) -> bool:
    for x in range(f.n):
        fwd = f.forward_row(x)
        m = fwd
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            if f.row(y) & m:
                return True
    return False


def _triangles(f: OrderedGraph):
    out = []
    for x in range(f.n):
        fwd = f.forward_row(x)
        m = fwd
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            both = f.row(y) & m
            while both:
                lo2 = both & -both
                out.append(frozenset((x, y, lo2.bit_length() - 1)))
                both ^= lo2
    return out


_TRANSFORM_FNS = {
    "identity": lambda g: g,
    "complement": complement,
    "reverse": reverse,
    "reverse+complement": lambda g: reverse(complement(g)),
}


def _catalog_specs():
    """Goodness specifications transcribed for the small hard patterns."""
    specs = {}
    # ordered 4-cycle, consecutive order: it is a core; handled by core case
    # ordered 4-cycle variant 3 (visiting 1,2,4,3)
    p_c43 = Pattern.from_lists(4, white=[(1, 2)])
    specs["cycle4-3"] = (
        ordered_cycle4(3),
        GoodnessSpec(
            pattern=p_c43,
            families=(frozenset({0, 1, 3}), frozenset({0, 2, 3})),
            sigma=(0, 1, 2, 3),
        ),
    )
    # ordered 4-paths
    specs["path4-1"] = (
        ordered_path4(1),
        GoodnessSpec(
            pattern=Pattern.from_lists(4, white=[(0, 2), (1, 3)]),
            families=(frozenset({0, 1, 2, 3}),),
            sigma=(0, 1, 2, 3),
        ),
    )
    specs["path4-2"] = (
        ordered_path4(2),
        GoodnessSpec(
            pattern=Pattern.from_lists(4, white=[(1, 2), (1, 3)]),
            families=(frozenset({0, 2, 3}),),
            sigma=(0, 1, 2, 3),
        ),
    )
    specs["path4-3"] = (
        ordered_path4(3),
        GoodnessSpec(
            pattern=Pattern.from_lists(4, white=[(1, 3), (2, 3)]),
            families=(frozenset({0, 1, 2}),),
            sigma=(0, 1, 2, 3),
        ),
    )
    return specs


def monotone_path_spec(k: int) -> GoodnessSpec:
    gray = [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)]
    white = [
        (i, j)
        for i in range(k)
        for j in range(i + 1, k)
        if (i, j) not in gray
    ]
    return GoodnessSpec(
        pattern=Pattern.from_lists(k, white=white),
        families=(frozenset(range(k)),),
        sigma=tuple(range(k)),
    )


def triangle_case_spec(f: OrderedGraph) -> GoodnessSpec:
    white = [
        (i, j) for i in range(f.n) for j in range(i + 1, f.n) if not f.has_edge(i, j)
    ]
    return GoodnessSpec(
        pattern=Pattern.from_lists(f.n, white=white),
        families=tuple(_triangles(f)),
        sigma=tuple(range(f.n)),
    )


def core_case_spec(k_graph: OrderedGraph) -> GoodnessSpec:
    """Gray on edges, white on non-edges; family = the whole vertex set."""
    white = [
        (i, j)
        for i in range(k_graph.n)
        for j in range(i + 1, k_graph.n)
        if not k_graph.has_edge(i, j)
    ]
    pattern = Pattern.from_lists(k_graph.n, white=white)
    cycle = find_gray_cycle(pattern)
    if cycle is None:
        raise ValueError("graph has no cycle; the core construction needs one")
    return GoodnessSpec(
        pattern=pattern,
        families=(frozenset(range(k_graph.n)),),
        sigma=sigma_for_cycle(k_graph.n, cycle),
    )


def hard_instance_case(f: OrderedGraph) -> str:
    """Which hard-instance recipe applies to f (assumed not efficiently
    removable); the label mirrors the generator's dispatch."""
    if _has_triangle(f):
        return "triangle"
    if _has_triangle(complement(f)):
        return "complement-triangle"
    for name, t in _TRANSFORM_FNS.items():
        if t(f) == monotone_path(f.n):
            return f"monotone-path/{name}"
    if f.n == 5:
        return "cycle5-core"
    if f.n == 4:
        targets = {"cycle4-1": ordered_cycle4(1), "cycle4-2": ordered_cycle4(2),
                   "cycle4-3": ordered_cycle4(3)}
        targets.update({f"path4-{v}": ordered_path4(v) for v in (1, 2, 3)})
        for name, t in _TRANSFORM_FNS.items():
            tf = t(f)
            for label, target in targets.items():
                if tf == target:
                    return f"{label}/{name}"
    raise ValueError("case analysis incomplete for this pattern")


def _reverse_instance(inst: PlantedInstance) -> PlantedInstance:
    n = inst.graph.n
    parts = [
        VertexSet(n - 1 - v for v in part) for part in reversed(inst.parts)
    ]
    planted = [tuple(sorted(n - 1 - v for v in tup)) for tup in inst.planted_copies]
    return PlantedInstance(
        graph=reverse(inst.graph),
        pattern=inst.pattern.reversed_(),
        parts=parts,
        planted_copies=planted,
        census=inst.census,
        case=inst.case,
        base_graph=None,
        m=inst.m,
        set_size=inst.set_size,
    )


def _complement_instance(inst: PlantedInstance) -> PlantedInstance:
    return PlantedInstance(
        graph=complement(inst.graph),
        pattern=inst.pattern.complemented(),
        parts=inst.parts,
        planted_copies=inst.planted_copies,
        census=inst.census,
        case=inst.case,
        base_graph=None,
        m=inst.m,
        set_size=inst.set_size,
    )


def _apply_transform(inst: PlantedInstance, name: str) -> PlantedInstance:
    if name == "identity":
        return inst
    if name == "complement":
        return _complement_instance(inst)
    if name == "reverse":
        return _reverse_instance(inst)
    if name == "reverse+complement":
        return _reverse_instance(_complement_instance(inst))
    raise ValueError(name)


def hard_instance_induced(
    f: OrderedGraph, epsilon, n: int, *, m: int | None = None,
    compute_census: bool = True,
) -> PlantedInstance:
    """A graph far from induced-f-freeness yet with few induced copies.

    Refuses (DomainRefusal) when f admits efficient removal.  Dispatches on
    the structure of f: triangle / complement triangle, monotone path, the
    self-core 4- and 5-cycles, and the cataloged 4-vertex path and cycle
    orderings, applying order reversal and complementation as needed.
    """
    from .classify import classify_induced

    verdict = classify_induced(f)
    if verdict.polynomial:
        raise DomainRefusal(
            f"pattern admits efficient removal ({verdict.reason}); "
            "no hard instance exists"
        )
    case = verdict.case
    kwargs = dict(m=m, compute_census=compute_census)
    if case == "triangle":
        inst = build_planted_instance(f, triangle_case_spec(f), epsilon, n, **kwargs)
    elif case == "complement-triangle":
        fc = complement(f)
        inst = build_planted_instance(fc, triangle_case_spec(fc), epsilon, n, **kwargs)
        inst = _complement_instance(inst)
    elif case.startswith("monotone-path/"):
        tname = case.split("/", 1)[1]
        target = monotone_path(f.n)
        inst = build_planted_instance(
            target, monotone_path_spec(f.n), epsilon, n, **kwargs
        )
        inst = _apply_transform(inst, tname)
    elif case == "cycle5-core":
        k_core = core(f)
        if k_core != f:
            raise RuntimeError("internal: ordered 5-cycle expected to be its own core")
        inst = build_planted_instance(f, core_case_spec(f), epsilon, n, **kwargs)
    else:
        label, tname = case.split("/", 1)
        if label == "cycle4-1":
            target = ordered_cycle4(1)
            inst = build_planted_instance(
                target, core_case_spec(target), epsilon, n, **kwargs
            )
        elif label == "cycle4-2":
            # build for the complement (two stacked edges) under a black
            # pattern, then complement the output
            target = complement(ordered_cycle4(2))
            spec = GoodnessSpec(
                pattern=Pattern.from_lists(4, black=[(0, 1), (2, 3)]),
                families=(frozenset({0, 1, 2, 3}),),
                sigma=sigma_for_cycle(4, find_gray_cycle(
                    Pattern.from_lists(4, black=[(0, 1), (2, 3)])
                )),
            )
            inst = build_planted_instance(target, spec, epsilon, n, **kwargs)
            inst = _complement_instance(inst)
        else:
            target, spec = _catalog_specs()[label]
            inst = build_planted_instance(target, spec, epsilon, n, **kwargs)
        inst = _apply_transform(inst, tname)
    inst.case = case
    return inst


def hard_instance_noninduced(
    f: OrderedGraph, epsilon, n: int, *, m: int | None = None,
    compute_census: bool = True,
) -> PlantedInstance:
    """A graph far from f-freeness with few copies, via the core construction.

    Requires the core of f to contain a cycle (else DomainRefusal: for forest
    cores efficient removal is conjectured).  Returns the blown-up instance
    together with pairwise-disjoint edge certificates: each certificate set
    supports one planted copy of f, and destroying that copy must delete one
    of its edges.
    """
    k_core = core(f)
    if is_forest(k_core):
        raise DomainRefusal(
            "core is a forest: efficient removal is conjectured for this "
            "pattern; no hard instance is built"
        )
    eps_scaled = Fraction(epsilon) * f.n * f.n
    inner = build_planted_instance(
        k_core,
        core_case_spec(k_core),
        eps_scaled,
        n // f.n,
        m=m,
        compute_census=False,
    )
    graph = blowup(inner.graph, f.n)
    parts = [
        VertexSet(range(part.min() * f.n, (part.max() + 1) * f.n))
        for part in inner.parts
    ]
    phi = find_homomorphism(f, k_core)
    if phi is None:
        raise RuntimeError("internal: no homomorphism onto the core")
    planted = []
    certificates = []
    for pos in inner.planted_copies:
        offsets = {j: 0 for j in range(k_core.n)}
        copy = []
        for v in range(f.n):
            j = phi[v]
            copy.append(pos[j] * f.n + offsets[j])
            offsets[j] += 1
        planted.append(tuple(copy))
        cert = set()
        for a in range(k_core.n):
            for b in range(a + 1, k_core.n):
                if k_core.has_edge(a, b):
                    for u in range(pos[a] * f.n, (pos[a] + 1) * f.n):
                        for w in range(pos[b] * f.n, (pos[b] + 1) * f.n):
                            cert.add((min(u, w), max(u, w)))
        certificates.append(frozenset(cert))
    census = count_copies(f, graph) if compute_census else None
    return PlantedInstance(
        graph=graph,
        pattern=inner.pattern,
        parts=parts,
        planted_copies=planted,
        census=census,
        case="cyclic-core",
        edge_certificates=certificates,
        base_graph=inner.graph,
        m=inner.m,
        set_size=inner.set_size,
    )
