"""One-sided-error property-tester simulator for (induced) copy-freeness.

A single run samples q vertices uniformly with replacement, queries all pairs
among them, and rejects exactly when the sample spans an (induced) copy of
the pattern; the witness copy is returned.  A graph with no copies is never
rejected.  Per-trial randomness is derived from (seed, trial), so parallel
and serial sweeps agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .counting import enumerate_copies
from .graphs import OrderedGraph, induced_subgraph


@dataclass(frozen=True)
class TesterRun:
    accepted: bool
    witness: tuple[int, ...] | None
    sample: tuple[int, ...]  # distinct sampled vertices, sorted


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random((seed * 1_000_003 + trial) & 0xFFFFFFFFFFFF)


def run_tester(
    g: OrderedGraph, f: OrderedGraph, q: int, induced: bool = True, seed: int = 0,
    trial: int = 0,
) -> TesterRun:
    if q < f.n:
        raise ValueError("sample size must be at least the pattern size")
    rng = _trial_rng(seed, trial)
    raw = [rng.randrange(g.n) for _ in range(q)] if g.n else []
    distinct = tuple(sorted(set(raw)))
    sub = induced_subgraph(g, distinct)
    witness_local = next(iter(enumerate_copies(f, sub, induced)), None)
    if witness_local is None:
        return TesterRun(accepted=True, witness=None, sample=distinct)
    witness = tuple(distinct[i] for i in witness_local)
    # one-sidedness guard: a rejection always carries a verified copy
    for i in range(f.n):
        for j in range(i + 1, f.n):
            fe = f.has_edge(i, j)
            ge = g.has_edge(witness[i], witness[j])
            if fe != ge and (fe or induced):
                raise RuntimeError("internal: invalid tester witness")
    return TesterRun(accepted=False, witness=witness, sample=distinct)


def rejection_rate(
    g: OrderedGraph, f: OrderedGraph, q: int, trials: int, seed: int = 0,
    induced: bool = True,
) -> float:
    if trials < 1:
        raise ValueError("trials must be positive")
    rejected = 0
    for t in range(trials):
        if not run_tester(g, f, q, induced, seed, t).accepted:
            rejected += 1
    return rejected / trials


@dataclass(frozen=True)
class SweepRow:
    epsilon: object
    q_star: int | None  # None: target rate not reached below the cap
    rate: float | None


def query_complexity_sweep(
    g,
    f: OrderedGraph,
    epsilons: Sequence,
    trials: int,
    seed: int = 0,
    induced: bool = True,
    q_cap: int | None = None,
    target: float = 2 / 3,
) -> list[SweepRow]:
    """Minimal q reaching the target rejection rate, per epsilon row.

    g may be a single graph (reused for every row) or a sequence matched to
    epsilons, each asserted by the caller to be epsilon-far.  The search
    doubles q from v(f) and then bisects; rates at probed points use rng
    streams keyed by (seed, row, q, trial), so results are reproducible.
    """
    graphs = list(g) if isinstance(g, (list, tuple)) else [g] * len(epsilons)
    if len(graphs) != len(epsilons):
        raise ValueError("need one graph per epsilon")
    rows = []
    for row, (eps, graph) in enumerate(zip(epsilons, graphs)):
        cap = q_cap or max(f.n, 2 * graph.n)

        def rate(q):
            rejected = 0
            for t in range(trials):
                r = run_tester(graph, f, q, induced, seed * 7919 + row * 104729 + q, t)
                if not r.accepted:
                    rejected += 1
            return rejected / trials

        lo = f.n
        if rate(lo) >= target:
            rows.append(SweepRow(eps, lo, rate(lo)))
            continue
        hi = lo
        reached = False
        while hi < cap:
            hi = min(cap, hi * 2)
            if rate(hi) >= target:
                reached = True
                break
        if not reached:
            rows.append(SweepRow(eps, None, None))
            continue
        lo_fail, hi_ok = lo, hi
        while hi_ok - lo_fail > 1:
            mid = (lo_fail + hi_ok) // 2
            if rate(mid) >= target:
                hi_ok = mid
            else:
                lo_fail = mid
        rows.append(SweepRow(eps, hi_ok, rate(hi_ok)))
    return rows
