"""Removability classification for ordered patterns.

For the induced problem, edit-efficient removal (polynomial copy-count
threshold) holds exactly for patterns on at most two vertices and for the
four symmetric images of the fork.  For the non-induced problem, a cyclic
core rules it out; an acyclic (forest) core is conjectured sufficient but
not proven, and the verdict says so explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import OrderedGraph, complement, fork, monotone_path, reverse
from .hom import core, is_forest


_TRANSFORMS = (
    ("identity", lambda g: g),
    ("reverse", reverse),
    ("complement", complement),
    ("reverse+complement", lambda g: reverse(complement(g))),
)


def fork_orbit() -> tuple[OrderedGraph, ...]:
    """The fork and its images under order reversal and complementation."""
    seen = []
    for _, t in _TRANSFORMS:
        g = t(fork())
        if g not in seen:
            seen.append(g)
    return tuple(seen)


@dataclass(frozen=True)
class InducedVerdict:
    polynomial: bool
    reason: str
    case: str | None  # hard-instance recipe when not polynomial


@dataclass(frozen=True)
class NonInducedVerdict:
    verdict: str  # "not_polynomial" | "conjectured_polynomial"
    core: OrderedGraph
    reason: str


def _hard_case(f: OrderedGraph) -> str:
    """Name the hard-instance recipe that applies to a non-fork pattern.

    Mirrors the dispatch used by the instance generator; raises ValueError
    when no recipe applies (which cannot happen for classifiable inputs).
    """
    from .constructions import hard_instance_case

    return hard_instance_case(f)


def classify_induced(f: OrderedGraph) -> InducedVerdict:
    if f.n < 1:
        raise ValueError("pattern must have at least one vertex")
    if f.n <= 2:
        return InducedVerdict(True, f"{f.n} vertices: every tiny pattern is easy", None)
    for name, t in _TRANSFORMS:
        if t(f) == fork():
            return InducedVerdict(True, f"equals the fork under {name}", None)
    case = _hard_case(f)
    return InducedVerdict(False, f"hard-instance case: {case}", case)


def classify_noninduced(f: OrderedGraph) -> NonInducedVerdict:
    k = core(f)
    if not is_forest(k):
        return NonInducedVerdict(
            "not_polynomial", k, "core contains a cycle; hard instances exist"
        )
    return NonInducedVerdict(
        "conjectured_polynomial",
        k,
        "core is a forest; efficiency is conjectured, not proven",
    )
