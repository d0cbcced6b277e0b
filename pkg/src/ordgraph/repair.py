"""Constructive repair: make an ordered graph induced-fork-free.

Each procedure here has a checked count precondition and a verified
postcondition; the pipeline `repair_forks` chains them in six steps.  All
thresholds are compared in exact rational arithmetic (fractions.Fraction);
no floating point enters control flow, so traces are reproducible.

Edits are recorded as a sequential log (EditSet) that replays against the
source graph; every add must hit a non-edge and every delete an edge at its
position in the log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from . import config, kernels
from .counting import count_induced_forks, count_sequences
from .graphs import OrderedGraph, VertexSet, induced_subgraph


class RepairError(RuntimeError):
    pass


class PreconditionError(RepairError):
    """A checked hypothesis failed; carries the offending quantities.

    kind is one of "count", "size", "budget", "structure" (all of which a
    caller may retry with looser parameters) -- genuine input violations
    (non-cliques, overlapping sets) raise ValueError instead.
    """

    def __init__(self, kind: str, message: str, *, count=None, bound=None):
        super().__init__(message)
        self.kind = kind
        self.count = count
        self.bound = bound


class PipelineStepError(RepairError):
    def __init__(self, step: str, cause: Exception):
        super().__init__(f"{step}: {cause}")
        self.step = step
        self.cause = cause


# -- edit sets ---------------------------------------------------------------


@dataclass(frozen=True)
class Edit:
    u: int
    v: int
    add: bool  # False: delete
    step: str

    def __str__(self):
        return f"{'+' if self.add else '-'} {self.u} {self.v}"


class EditSet:
    """Sequential log of edge toggles with per-step provenance labels."""

    def __init__(self, edits: Iterable[Edit] = ()):
        self.edits: list[Edit] = list(edits)

    def __len__(self):
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)

    def extend(self, other: "EditSet"):
        self.edits.extend(other.edits)

    def counts_by_step(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.edits:
            out[e.step] = out.get(e.step, 0) + 1
        return out

    def to_text(self) -> str:
        return "".join(f"{'+' if e.add else '-'} {e.u} {e.v}\n" for e in self.edits)

    @classmethod
    def parse(cls, text: str, step: str = "file") -> "EditSet":
        out = cls()
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in "+-":
                raise ValueError(f"line {line_no}: expected '+ u v' or '- u v'")
            u, v = int(parts[1]), int(parts[2])
            if u > v:
                u, v = v, u
            out.edits.append(Edit(u, v, parts[0] == "+", step))
        return out


def apply_edits(g: OrderedGraph, edits: EditSet) -> OrderedGraph:
    """Replay the log; each add must hit a non-edge, each delete an edge."""
    rows = list(g._rows)
    for e in edits:
        bit_uv = rows[e.u] >> e.v & 1
        if e.add and bit_uv:
            raise ValueError(f"edit {e} adds an existing edge")
        if not e.add and not bit_uv:
            raise ValueError(f"edit {e} deletes a missing edge")
        rows[e.u] ^= 1 << e.v
        rows[e.v] ^= 1 << e.u
    return OrderedGraph(g.n, rows)


class _Editor:
    """Mutable working copy that logs every toggle."""

    def __init__(self, g: OrderedGraph):
        self.n = g.n
        self.rows = list(g._rows)
        self.edits = EditSet()

    def has_edge(self, u, v):
        return bool(self.rows[u] >> v & 1)

    def add(self, u, v, step):
        if u > v:
            u, v = v, u
        if self.rows[u] >> v & 1:
            raise RepairError(f"internal: adding existing edge ({u},{v})")
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u
        self.edits.edits.append(Edit(u, v, True, step))

    def delete(self, u, v, step):
        if u > v:
            u, v = v, u
        if not (self.rows[u] >> v & 1):
            raise RepairError(f"internal: deleting missing edge ({u},{v})")
        self.rows[u] &= ~(1 << v)
        self.rows[v] &= ~(1 << u)
        self.edits.edits.append(Edit(u, v, False, step))

    def graph(self) -> OrderedGraph:
        return OrderedGraph(self.n, self.rows)


# -- bitmask helpers (shared by the ops and by the exhaustive test loops) ----


def _mask_is_clique(rows, mask) -> bool:
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if (rows[v] & mask) != mask ^ low:
            return False
    return True


def _cross_edges(rows, amask, bmask) -> int:
    total = 0
    m = amask if amask.bit_count() <= bmask.bit_count() else bmask
    other = bmask if m is amask else amask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        total += (rows[v] & other).bit_count()
    return total


def _edges_within(rows, mask) -> int:
    total = 0
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        total += (rows[v] & m).bit_count()
    return total


def _count_forks_masked(n, rows, mask) -> int:
    masked = [rows[v] & mask if mask >> v & 1 else 0 for v in range(n)]
    return kernels.count_forks(n, masked)


def _find_fork_masked(n, rows, mask):
    """First induced fork inside the vertex subset given by mask."""
    m = mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        fwd = rows[x] & mask & ~((1 << (x + 1)) - 1)
        t = fwd
        while t:
            lo2 = t & -t
            y = lo2.bit_length() - 1
            t ^= lo2
            non = t & ~rows[y]
            if non:
                z = (non & -non).bit_length() - 1
                return (x, y, z)
    return None


def _suffix_mask_ok(host_mask, nmask) -> bool:
    """Is nmask (a subset of host_mask) upward-closed within host_mask?"""
    if nmask == 0:
        return True
    t = (nmask & -nmask).bit_length() - 1
    return nmask == host_mask & ~((1 << t) - 1)


def _two_clique_split(rows, amask, bmask, elems):
    """Maximal-suffix split for two cliques spanning `elems` (sorted union).

    Returns (start, verdict): elems[start:] is the largest suffix J whose
    (A cap J, B cap J) bipartite graph is complete; verdict is True iff the
    split additionally satisfies: empty bipartite graph on the I side, and
    every J-vertex sees a suffix of the other clique's I part.  The verdict
    is exactly induced-fork-freeness of the two-clique graph.
    """
    aj = bj = 0
    s = len(elems)
    while s > 0:
        v = elems[s - 1]
        vb = 1 << v
        rv = rows[v]
        if vb & amask:
            if (rv & bj) != bj:
                break
            aj |= vb
        else:
            if (rv & aj) != aj:
                break
            bj |= vb
        s -= 1
    start = s
    ai = amask & ~aj
    bi = bmask & ~bj
    # condition 1: no edges between A-side and B-side of I
    m = bi
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if rows[v] & ai:
            return start, False
    # condition 3: J-side B vertices see suffixes of A cap I
    m = bj
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if not _suffix_mask_ok(ai, rows[v] & ai):
            return start, False
    # condition 4: J-side A vertices see suffixes of B cap I
    m = aj
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if not _suffix_mask_ok(bi, rows[v] & bi):
            return start, False
    return start, True


def _require_clique(g_rows, vs: VertexSet, name: str):
    if not _mask_is_clique(g_rows, vs.mask):
        raise ValueError(f"{name} is not a clique")


def _require_disjoint(a: VertexSet, b: VertexSet):
    if a.mask & b.mask:
        raise ValueError("vertex sets must be disjoint")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# -- extraction and partition (dense near-cliques) ---------------------------


def extract_dense_subset(g: OrderedGraph, gamma, delta) -> VertexSet | None:
    """First forward neighbourhood of size >= gamma*n/2 and density >= 1-delta.

    Under e(g) >= gamma*n^2 and a small enough induced-fork count such a set
    exists; if the hypotheses fail this may return None.
    """
    gamma, delta = _frac(gamma), _frac(delta)
    if not (0 < gamma <= 1 and 0 < delta <= 1):
        raise ValueError("gamma and delta must lie in (0, 1]")
    return _extract_dense_in(g.n, g._rows, (1 << g.n) - 1, gamma, g.n, delta)


def _extract_dense_in(n, rows, mask, beta, scale_n, delta):
    """Scan forward neighbourhoods within `mask`; threshold beta*|mask|/2."""
    sub_n = mask.bit_count()
    need = Fraction(beta * sub_n, 2)
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        fwd = rows[v] & mask & ~((1 << (v + 1)) - 1)
        size = fwd.bit_count()
        if size < need:
            continue
        edges = _edges_within(rows, fwd)
        pairs = size * (size - 1) // 2
        if pairs == 0 or Fraction(edges, pairs) >= 1 - delta:
            return VertexSet.from_mask(fwd)
    return None


@dataclass
class NearCliquePartition:
    cliques: list[VertexSet]
    residue: VertexSet
    gamma: Fraction
    delta: Fraction
    n: int

    @property
    def m(self) -> int:
        return len(self.cliques)

    def validate(self, g: OrderedGraph):
        total = self.residue.mask
        for x in self.cliques:
            if x.mask & total:
                raise RepairError("partition parts overlap")
            total |= x.mask
        if total != (1 << g.n) - 1:
            raise RepairError("partition does not cover the vertex set")
        half = Fraction(self.gamma * g.n, 2)
        for x in self.cliques:
            if len(x) < half:
                raise RepairError("part below the size bound")
            pairs = len(x) * (len(x) - 1) // 2
            if pairs and Fraction(_edges_within(g._rows, x.mask), pairs) < 1 - self.delta:
                raise RepairError("part below the density bound")
        if _edges_within(g._rows, self.residue.mask) > self.gamma * g.n * g.n:
            raise RepairError("residue has too many edges")


def near_clique_partition(g: OrderedGraph, gamma, delta) -> NearCliquePartition:
    """Iteratively peel dense forward neighbourhoods until few edges remain.

    Checked precondition: induced-fork count <= delta*gamma^3*n^3/32.  An
    internal extraction failure means that bound was not sufficient at this
    scale; it is surfaced, never silently patched.
    """
    gamma, delta = _frac(gamma), _frac(delta)
    if not (0 < gamma <= 1 and 0 < delta <= 1):
        raise ValueError("gamma and delta must lie in (0, 1]")
    n = g.n
    cnt = count_induced_forks(g)
    bound = delta * gamma**3 * n**3 / 32
    if cnt > bound:
        raise PreconditionError(
            "count",
            f"induced-fork count {cnt} exceeds partition bound {bound}",
            count=cnt,
            bound=bound,
        )
    rows = g._rows
    live = (1 << n) - 1
    cliques = []
    while _edges_within(rows, live) > gamma * n * n:
        size = live.bit_count()
        beta = Fraction(gamma * n * n, size * size)
        x = _extract_dense_in(n, rows, live, beta, n, delta)
        if x is None:
            raise PreconditionError(
                "structure",
                "dense-subset extraction failed inside the peeling loop "
                f"(remaining {size} vertices); the count bound was not "
                "sufficient at this scale",
                count=cnt,
                bound=bound,
            )
        cliques.append(x)
        live &= ~x.mask
    part = NearCliquePartition(
        cliques=cliques,
        residue=VertexSet.from_mask(live),
        gamma=gamma,
        delta=delta,
        n=n,
    )
    part.validate(g)
    return part


# -- two-clique characterizations -------------------------------------------


def check_suffix_characterization(g: OrderedGraph, a: VertexSet, b: VertexSet):
    """For stacked cliques A < B: fork-free iff every B-vertex sees a suffix.

    Returns (True, None) or (False, witness) where the witness (x, y, z) is an
    induced fork with x, y in A and z in B.
    """
    _require_disjoint(a, b)
    _require_clique(g._rows, a, "a")
    _require_clique(g._rows, b, "b")
    if a and b and a.max() >= b.min():
        raise ValueError("expected max(a) < min(b)")
    amask = a.mask
    for z in b:
        nb = g.row(z) & amask
        if not _suffix_mask_ok(amask, nb):
            x = (nb & -nb).bit_length() - 1
            missing = amask & ~((1 << (x + 1)) - 1) & ~nb
            y = (missing & -missing).bit_length() - 1
            return False, (x, y, z)
    return True, None


def check_two_clique_characterization(g: OrderedGraph, a: VertexSet, b: VertexSet):
    """General two-clique test via the maximal-suffix split.

    Returns (True, (I, J)) with I < J partitioning A u B, the J side complete
    and the I side empty with suffix cross-neighbourhoods, or (False, witness)
    with witness an induced fork inside A u B.
    """
    _require_disjoint(a, b)
    _require_clique(g._rows, a, "a")
    _require_clique(g._rows, b, "b")
    elems = tuple(sorted(a.elements + b.elements))
    start, verdict = _two_clique_split(g._rows, a.mask, b.mask, elems)
    if verdict:
        return True, (VertexSet(elems[:start]), VertexSet(elems[start:]))
    witness = _find_fork_masked(g.n, g._rows, a.mask | b.mask)
    if witness is None:
        raise RepairError("internal: split verdict false but no fork found")
    return False, witness


# -- clique-pair repairs ------------------------------------------------------


def repair_stacked_clique_pair(
    g: OrderedGraph, a: VertexSet, b: VertexSet, gamma, *, step="clique_pair"
) -> EditSet:
    """Make two stacked cliques (A < B) fork-free by suffix completion.

    Checked precondition: the pair's induced-fork count is at most
    gamma^2*|A|^2*|B|/4; then at most gamma*|A|*|B| edges change, all of them
    between A and B.
    """
    gamma = _frac(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _require_disjoint(a, b)
    _require_clique(g._rows, a, "a")
    _require_clique(g._rows, b, "b")
    if a and b and a.max() >= b.min():
        raise ValueError("expected max(a) < min(b)")
    cnt = _count_forks_masked(g.n, g._rows, a.mask | b.mask)
    bound = gamma**2 * len(a) ** 2 * len(b) / 4
    if cnt > bound:
        raise PreconditionError(
            "count",
            f"pair fork count {cnt} exceeds {bound}",
            count=cnt,
            bound=bound,
        )
    editor = _Editor(g)
    _stacked_repair_into(editor, a, b, gamma, step)
    ok, _ = check_suffix_characterization(editor.graph(), a, b)
    if not ok:
        raise RepairError("internal: stacked repair left a non-suffix neighbourhood")
    return editor.edits


def _stacked_repair_into(editor: _Editor, a: VertexSet, b: VertexSet, gamma, step):
    amask = a.mask
    half = Fraction(gamma * len(a), 2)
    for z in b:
        nb = editor.rows[z] & amask
        if _suffix_mask_ok(amask, nb):
            continue  # already fork-free relative to A; nothing to fix
        non = amask & ~nb
        non_count = non.bit_count()
        if non_count <= half:
            m = non
            while m:
                low = m & -m
                editor.add(low.bit_length() - 1, z, step)
                m ^= low
            continue
        # largest suffix of A containing exactly ceil(gamma*|A|/2)
        # non-neighbours of z; complete z into it, cut z off from the rest
        target = math.ceil(half)
        seen = 0
        cut = 0  # suffix starts strictly above this vertex; 0 => whole A
        for y in reversed(a.elements):
            if non >> y & 1:
                seen += 1
                if seen == target + 1:
                    cut = y + 1
                    break
        suffix = amask & ~((1 << cut) - 1)
        m = suffix & ~nb
        while m:
            low = m & -m
            editor.add(low.bit_length() - 1, z, step)
            m ^= low
        m = nb & ~suffix
        while m:
            low = m & -m
            editor.delete(low.bit_length() - 1, z, step)
            m ^= low


def repair_clique_pair(
    g: OrderedGraph, a: VertexSet, b: VertexSet, gamma, *, step="clique_pair"
) -> EditSet:
    """Make two interleaved cliques fork-free with <= gamma*|A|*|B| edits.

    Requires |A|, |B| >= 8/gamma and induced-fork count at most
    (gamma^2/64)*|A|*|B|*min(|A|,|B|) (both checked).  Either completes the
    whole bipartite graph, or splits at a minimal suffix holding enough
    non-edges, empties the early side, completes the late side, and fixes the
    two cross quadrants with the stacked repair.
    """
    gamma = _frac(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _require_disjoint(a, b)
    _require_clique(g._rows, a, "a")
    _require_clique(g._rows, b, "b")
    na, nb_ = len(a), len(b)
    if na < Fraction(8, 1) / gamma or nb_ < Fraction(8, 1) / gamma:
        raise PreconditionError(
            "size",
            f"|A|={na}, |B|={nb_} below 8/gamma={Fraction(8, 1) / gamma}",
        )
    cnt = _count_forks_masked(g.n, g._rows, a.mask | b.mask)
    bound = gamma**2 * na * nb_ * min(na, nb_) / 64
    if cnt > bound:
        raise PreconditionError(
            "count", f"pair fork count {cnt} exceeds {bound}", count=cnt, bound=bound
        )
    editor = _Editor(g)
    bar_e = na * nb_ - _cross_edges(g._rows, a.mask, b.mask)
    if bar_e <= gamma * na * nb_:
        for u in a:
            missing = b.mask & ~editor.rows[u]
            while missing:
                low = missing & -missing
                editor.add(u, low.bit_length() - 1, step)
                missing ^= low
    else:
        elems = tuple(sorted(a.elements + b.elements))
        threshold = Fraction(gamma * na * nb_, 8)
        aj = bj = 0
        bar = 0
        idx = len(elems)
        while idx > 0 and bar < threshold:
            v = elems[idx - 1]
            vb = 1 << v
            if vb & a.mask:
                bar += (bj & ~editor.rows[v]).bit_count()
                aj |= vb
            else:
                bar += (aj & ~editor.rows[v]).bit_count()
                bj |= vb
            idx -= 1
        ai = a.mask & ~aj
        bi = b.mask & ~bj
        # empty the early quadrant, complete the late one
        m = ai
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            t = editor.rows[u] & bi
            while t:
                lo2 = t & -t
                editor.delete(u, lo2.bit_length() - 1, step)
                t ^= lo2
        m = aj
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            t = bj & ~editor.rows[u]
            while t:
                lo2 = t & -t
                editor.add(u, lo2.bit_length() - 1, step)
                t ^= lo2
        # cross quadrants: stacked-pair repair with rescaled parameters
        for first, second in (
            (VertexSet.from_mask(ai), VertexSet.from_mask(bj)),
            (VertexSet.from_mask(bi), VertexSet.from_mask(aj)),
        ):
            if not first or not second:
                continue
            sub_gamma = Fraction(gamma * na * nb_, 4 * len(first) * len(second))
            _stacked_repair_into(editor, first, second, sub_gamma, step)
    after = _count_forks_masked(g.n, editor.rows, a.mask | b.mask)
    if after != 0:
        raise RepairError(f"internal: clique-pair repair left {after} forks")
    return editor.edits


# -- sequence hitting ---------------------------------------------------------


@dataclass
class HittingSetResult:
    vertices: VertexSet
    sequence_count: int
    advisory_bound: Fraction
    advisory_ok: bool


def sequence_hitting_set(n: int, sets: Sequence[VertexSet], epsilon) -> HittingSetResult:
    """Minimum-cardinality set meeting every increasing transversal.

    Left-to-right dynamic program; state = longest transversal prefix
    realizable among surviving vertices.  The result is a true minimum, so it
    meets the |S| <= epsilon*n contract whenever any set of that size does.
    The count precondition (sequence count against the advisory bound) is
    reported as metadata, never enforced.
    """
    epsilon = _frac(epsilon)
    if not (0 < epsilon <= 1):
        raise ValueError("epsilon must lie in (0, 1]")
    k = len(sets)
    if k < 1:
        raise ValueError("need at least one set")
    seq_count = count_sequences(n, sets)  # also validates disjointness
    advisory_bound = Fraction(config.SEQUENCE_REMOVAL_CONSTANT) * epsilon**k * n**k
    owner = {}
    for j, s in enumerate(sets):
        for v in s:
            owner[v] = j
    verts = sorted(owner)
    INF = len(verts) + 1
    # table[i][state] = min deletions among the first i vertices so that the
    # longest realizable transversal prefix is exactly `state`
    table = [[0] + [INF] * k]
    for v in verts:
        j = owner[v]
        prev = table[-1]
        ndp = [INF] * (k + 1)
        for st in range(k + 1):
            cost = prev[st]
            if cost >= INF:
                continue
            nxt = st + 1 if j == st else st  # keep v
            if nxt <= k and cost < ndp[nxt]:
                ndp[nxt] = cost
            if cost + 1 < ndp[st]:  # delete v
                ndp[st] = cost + 1
        table.append(ndp)
    state = min(range(k), key=lambda st: (table[-1][st], st))
    deleted = []
    for i in range(len(verts) - 1, -1, -1):
        v = verts[i]
        j = owner[v]
        cost = table[i + 1][state]
        if state >= 1 and j == state - 1 and table[i][state - 1] == cost:
            state -= 1  # kept; raised the realizable prefix
        elif j != state and table[i][state] == cost:
            pass  # kept; no change
        elif table[i][state] == cost - 1:
            deleted.append(v)
        else:
            raise RepairError("internal: hitting-set reconstruction failed")
    deleted.reverse()
    result = VertexSet(deleted)
    survivors = [VertexSet.from_mask(s.mask & ~result.mask) for s in sets]
    if count_sequences(n, survivors) != 0:
        raise RepairError("internal: hitting set left a surviving sequence")
    return HittingSetResult(
        vertices=result,
        sequence_count=seq_count,
        advisory_bound=advisory_bound,
        advisory_ok=seq_count <= advisory_bound,
    )


# -- interval decomposition ----------------------------------------------------


@dataclass
class IntervalDecomposition:
    deleted: VertexSet
    intervals: list[VertexSet]
    # per interval: list of (clique vertices, source-clique index set)
    clique_map: list[list[tuple[VertexSet, frozenset]]]
    m: int
    gamma: Fraction
    sequence_advisory_ok: bool

    @property
    def t(self) -> int:
        return len(self.intervals)


def interval_partition(
    g: OrderedGraph, cliques: Sequence[VertexSet], gamma, c3=None
) -> IntervalDecomposition:
    """Split V(g) minus a small deleted set into intervals inducing clique unions.

    Requires the cliques to partition V(g) with every pair fork-free (checked;
    violation carries a fork witness).  Builds the common refinement of all
    pairwise splits, discards short intervals, repeatedly removes minimum
    hitting sets of rare clique-triple transversals (budget gamma/(2m^3) of the
    current interval per triple), refines by minimal covering subintervals, and
    verifies that every final interval induces a disjoint union of cliques,
    each the trace of a union of source cliques.  The fork-count bound against
    c*gamma^6*n^3/m^15 is recorded, not enforced.
    """
    gamma = _frac(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    c3 = Fraction(config.SEQUENCE_REMOVAL_CONSTANT) if c3 is None else _frac(c3)
    n = g.n
    rows = g._rows
    m = len(cliques)
    if m == 0:
        if n:
            raise ValueError("cliques must partition the vertex set")
        return IntervalDecomposition(VertexSet(()), [], [], 0, gamma, True)
    total = 0
    for i, x in enumerate(cliques):
        if x.mask & total:
            raise ValueError("cliques overlap")
        total |= x.mask
        _require_clique(rows, x, f"clique {i}")
    if total != (1 << n) - 1:
        raise ValueError("cliques must partition the vertex set")

    # pairwise splits -> global cut positions
    cuts = {0, n}
    for i in range(m):
        for j in range(i + 1, m):
            elems = tuple(sorted(cliques[i].elements + cliques[j].elements))
            start, verdict = _two_clique_split(rows, cliques[i].mask, cliques[j].mask, elems)
            if not verdict:
                witness = _find_fork_masked(n, rows, cliques[i].mask | cliques[j].mask)
                raise PreconditionError(
                    "structure",
                    f"cliques {i} and {j} are not fork-free together; witness {witness}",
                )
            cuts.add(elems[start] if start < len(elems) else n)
    cuts = sorted(cuts)
    coarse = [list(range(cuts[a], cuts[a + 1])) for a in range(len(cuts) - 1)]
    coarse = [iv for iv in coarse if iv]

    owner = {}
    for i, x in enumerate(cliques):
        for v in x:
            owner[v] = i

    cnt = count_induced_forks(g)
    advisory = cnt <= (c3 / 64) * gamma**6 * n**3 / Fraction(m**15)

    deleted: list[int] = []
    final_intervals: list[list[int]] = []
    small_bound = Fraction(gamma * n, m * m)
    eps_local = gamma / (2 * m**3)
    for iv in coarse:
        if len(iv) < small_bound:
            deleted.extend(iv)
            continue
        surviving = list(iv)
        processed = set()
        triples = [
            (i1, i2, i3)
            for i1 in range(m)
            for i2 in range(m)
            for i3 in range(m)
            if len({i1, i2, i3}) == 3
        ]
        changed = True
        while changed:
            changed = False
            live_mask = 0
            for v in surviving:
                live_mask |= 1 << v
            for tri in triples:
                if tri in processed:
                    continue
                sets = [VertexSet.from_mask(cliques[i].mask & live_mask) for i in tri]
                if any(not s for s in sets):
                    processed.add(tri)
                    continue
                cur = count_sequences(n, sets)
                if cur == 0:
                    processed.add(tri)
                    continue
                size = len(surviving)
                if cur > c3 * eps_local**3 * size**3:
                    continue
                res = sequence_hitting_set(n, sets, eps_local)
                budget = eps_local * size
                if len(res.vertices) > budget:
                    raise PreconditionError(
                        "budget",
                        f"triple {tri}: minimum hitting set {len(res.vertices)} "
                        f"exceeds budget {budget}",
                        count=len(res.vertices),
                        bound=budget,
                    )
                deleted.extend(res.vertices)
                surviving = [v for v in surviving if v not in res.vertices]
                live_mask &= ~res.vertices.mask
                processed.add(tri)
                changed = True
        if not surviving:
            continue
        # minimal covering subintervals per clique, then their refinement
        pos = {v: idx for idx, v in enumerate(surviving)}
        boundaries = set()
        for x in cliques:
            present = [pos[v] for v in x if v in pos]
            if present:
                boundaries.add(min(present))
                boundaries.add(max(present) + 1)
        boundaries |= {0, len(surviving)}
        bl = sorted(boundaries)
        for a in range(len(bl) - 1):
            piece = surviving[bl[a] : bl[a + 1]]
            if piece:
                final_intervals.append(piece)

    if len(final_intervals) > 2 * m**3:
        raise RepairError("internal: interval count exceeds 2*m^3")
    if len(deleted) > gamma * n:
        raise RepairError("internal: deleted more than gamma*n vertices")

    # verify the clique-union structure and build the clique map
    clique_map: list[list[tuple[VertexSet, frozenset]]] = []
    for piece in final_intervals:
        piece_mask = 0
        for v in piece:
            piece_mask |= 1 << v
        comps = _components_masked(rows, piece_mask)
        entry = []
        for comp in comps:
            if not _mask_is_clique(rows, comp):
                raise PreconditionError(
                    "structure",
                    "interval component is not a clique; the fork-count bound "
                    "was not sufficient at this scale",
                )
            members = frozenset(owner[v] for v in VertexSet.from_mask(comp))
            expected = 0
            for i in members:
                expected |= cliques[i].mask & piece_mask
            if expected != comp:
                raise PreconditionError(
                    "structure",
                    "interval component is not a trace of source cliques",
                )
            entry.append((VertexSet.from_mask(comp), members))
        clique_map.append(entry)

    return IntervalDecomposition(
        deleted=VertexSet(deleted),
        intervals=[VertexSet(piece) for piece in final_intervals],
        clique_map=clique_map,
        m=m,
        gamma=gamma,
        sequence_advisory_ok=advisory,
    )


def _components_masked(rows, mask):
    comps = []
    remaining = mask
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                nxt |= rows[v] & mask & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        remaining &= ~comp
    return comps


# -- interval pairs, triple removal, independent residue ----------------------


def repair_interval_pair(
    g: OrderedGraph,
    interval_a: VertexSet,
    interval_b: VertexSet,
    cliques_a: Sequence[VertexSet],
    cliques_b: Sequence[VertexSet],
    gamma,
    *,
    step="interval_pair",
) -> EditSet:
    """Fix a pair of clique-union intervals by editing only between them.

    Step 1 runs the stacked-pair repair on every big clique pair with
    delta = gamma^6/(2^16 m^3); step 2 deletes all edges of sparse or small
    pairs.  The result is verified fork-free by count.
    """
    gamma = _frac(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _require_disjoint(interval_a, interval_b)
    if interval_a and interval_b and interval_a.max() >= interval_b.min():
        raise ValueError("expected interval_a < interval_b")
    rows = g._rows
    for name, interval, parts in (
        ("interval_a", interval_a, cliques_a),
        ("interval_b", interval_b, cliques_b),
    ):
        cover = 0
        for c in parts:
            if c.mask & cover:
                raise ValueError(f"{name}: cliques overlap")
            cover |= c.mask
            _require_clique(rows, c, name)
        if cover != interval.mask:
            raise ValueError(f"{name}: cliques must partition the interval")
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if _cross_edges(rows, parts[i].mask, parts[j].mask):
                    raise ValueError(f"{name} is not a disjoint union of cliques")
    m = max(len(cliques_a), len(cliques_b), 1)
    ni, nj = len(interval_a), len(interval_b)
    cnt = _count_forks_masked(g.n, rows, interval_a.mask | interval_b.mask)
    bound = gamma**15 * ni * nj * min(ni, nj) / Fraction(2**40 * m**9)
    if cnt > bound:
        raise PreconditionError(
            "count", f"interval-pair fork count {cnt} exceeds {bound}",
            count=cnt, bound=bound,
        )
    delta = gamma**6 / Fraction(2**16 * m**3)
    editor = _Editor(g)
    big_a = Fraction(gamma * ni, 4 * m)
    big_b = Fraction(gamma * nj, 4 * m)
    for ca in cliques_a:
        if len(ca) < big_a:
            continue
        for cb in cliques_b:
            if len(cb) < big_b:
                continue
            _stacked_repair_into(editor, ca, cb, delta, step)
    for ca in cliques_a:
        for cb in cliques_b:
            e_cross = _cross_edges(editor.rows, ca.mask, cb.mask)
            if (
                e_cross <= Fraction(gamma * len(ca) * len(cb), 4)
                or len(ca) <= big_a
                or len(cb) <= big_b
            ):
                m2 = ca.mask
                while m2:
                    low = m2 & -m2
                    u = low.bit_length() - 1
                    m2 ^= low
                    t = editor.rows[u] & cb.mask
                    while t:
                        lo2 = t & -t
                        editor.delete(u, lo2.bit_length() - 1, step)
                        t ^= lo2
    after = _count_forks_masked(g.n, editor.rows, interval_a.mask | interval_b.mask)
    if after != 0:
        raise RepairError(f"internal: interval-pair repair left {after} forks")
    return editor.edits


def triple_clique_vertex_removal(
    g: OrderedGraph, a: VertexSet, b: VertexSet, c: VertexSet, s
) -> VertexSet:
    """Vertices of a greedy maximal family of disjoint forks across A < B < C.

    Requires the three pair unions fork-free and fork count <= s^3/12 (both
    checked); then the family has at most s members, so at most 3s vertices
    are returned, and their removal provably kills every fork in the union.
    """
    s = _frac(s)
    if s < 1:
        raise ValueError("s must be at least 1")
    rows = g._rows
    for x, y in ((a, b), (a, c), (b, c)):
        _require_disjoint(x, y)
    for name, x in (("a", a), ("b", b), ("c", c)):
        _require_clique(rows, x, name)
    if (a and b and a.max() >= b.min()) or (b and c and b.max() >= c.min()):
        raise ValueError("expected a < b < c")
    for name, (x, y) in (("a,b", (a, b)), ("a,c", (a, c)), ("b,c", (b, c))):
        elems = tuple(sorted(x.elements + y.elements))
        _, verdict = _two_clique_split(rows, x.mask, y.mask, elems)
        if not verdict:
            witness = _find_fork_masked(g.n, rows, x.mask | y.mask)
            raise PreconditionError(
                "structure", f"pair {name} is not fork-free; witness {witness}"
            )
    union = a.mask | b.mask | c.mask
    cnt = _count_forks_masked(g.n, rows, union)
    bound = s**3 / 12
    if cnt > bound:
        raise PreconditionError(
            "count", f"triple fork count {cnt} exceeds {bound}", count=cnt, bound=bound
        )
    used = 0
    chosen = []
    for x, y, z in _iter_forks_masked(g.n, rows, union):
        tri = (1 << x) | (1 << y) | (1 << z)
        if tri & used:
            continue
        if not (x in a and y in b and z in c):
            raise RepairError("internal: fork not transversal to the three cliques")
        used |= tri
        chosen.append((x, y, z))
    if len(chosen) > s:
        raise RepairError("internal: disjoint fork family larger than s")
    if _count_forks_masked(g.n, rows, union & ~used) != 0:
        raise RepairError("internal: vertex removal left a fork")
    return VertexSet.from_mask(used)


def _iter_forks_masked(n, rows, mask):
    m = mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        fwd = rows[x] & mask & ~((1 << (x + 1)) - 1)
        t = fwd
        while t:
            lo2 = t & -t
            y = lo2.bit_length() - 1
            t ^= lo2
            non = t & ~rows[y]
            while non:
                lo3 = non & -non
                z = lo3.bit_length() - 1
                non ^= lo3
                yield (x, y, z)


def repair_against_independent_set(
    g: OrderedGraph, x: VertexSet, y: VertexSet, gamma, *, step="independent_residue"
) -> EditSet:
    """Deletions only: clear X-before-Y edges, then prune each Y-vertex's
    forward neighbourhood to a clique via a maximum matching of its non-edges.

    Requires Y independent, G[X] fork-free, |Y| >= 4/gamma, and fork count at
    most (gamma^2/32)*|X|*|Y|*min(|X|,|Y|) (all checked).
    """
    gamma = _frac(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _require_disjoint(x, y)
    rows = g._rows
    if _edges_within(rows, y.mask):
        raise ValueError("y must be an independent set")
    if _count_forks_masked(g.n, rows, x.mask) != 0:
        raise ValueError("g[x] must be fork-free")
    if len(y) < Fraction(4, 1) / gamma:
        raise PreconditionError(
            "size", f"|Y|={len(y)} below 4/gamma={Fraction(4, 1) / gamma}"
        )
    union = x.mask | y.mask
    cnt = _count_forks_masked(g.n, rows, union)
    bound = gamma**2 * len(x) * len(y) * min(len(x), len(y)) / 32
    if cnt > bound:
        raise PreconditionError(
            "count", f"fork count {cnt} exceeds {bound}", count=cnt, bound=bound
        )
    editor = _Editor(g)
    # step A: delete every edge whose first endpoint lies in X, second in Y
    for u in x:
        t = editor.rows[u] & y.mask & ~((1 << (u + 1)) - 1)
        while t:
            low = t & -t
            editor.delete(u, low.bit_length() - 1, step)
            t ^= low
    # step B: prune forward neighbourhoods N_y to cliques
    for w in y:
        fwd = editor.rows[w] & x.mask & ~((1 << (w + 1)) - 1)
        members = []
        t = fwd
        while t:
            low = t & -t
            members.append(low.bit_length() - 1)
            t ^= low
        non_edges = [
            (members[i], members[j])
            for i in range(len(members))
            for j in range(i + 1, len(members))
            if not editor.has_edge(members[i], members[j])
        ]
        if not non_edges:
            continue
        h = nx.Graph()
        h.add_nodes_from(members)
        h.add_edges_from(non_edges)
        matching = nx.max_weight_matching(h, maxcardinality=True)
        for u1, u2 in sorted(tuple(sorted(p)) for p in matching):
            editor.delete(w, u1, step)
            editor.delete(w, u2, step)
    after = _count_forks_masked(g.n, editor.rows, union)
    if after != 0:
        raise RepairError(f"internal: independent-residue repair left {after} forks")
    return editor.edits


# -- the six-step pipeline -----------------------------------------------------

_ESCALATION_LIMIT = 80

_PRACTICAL_KEYS = (
    "gamma_partition",
    "delta_partition",
    "min_part_size",
    "gamma_pair",
    "sparse_pair_factor",
    "gamma_interval",
    "gamma_interval_pair",
    "residue_small_fraction",
    "live_small_fraction",
    "gamma_final",
    "c3",
)


def practical_defaults(epsilon) -> dict[str, Fraction]:
    eps = _frac(epsilon)
    return {
        "gamma_partition": eps / 32,
        "delta_partition": Fraction(1, 8),
        "min_part_size": Fraction(3),
        "gamma_pair": eps,
        "sparse_pair_factor": Fraction(1, 4),
        "gamma_interval": eps / 12,
        "gamma_interval_pair": eps,
        "residue_small_fraction": eps / 2,
        "live_small_fraction": eps / 2,
        "gamma_final": eps,
        "c3": Fraction(config.SEQUENCE_REMOVAL_CONSTANT),
    }


def theorem_cascade(epsilon) -> dict[str, Fraction]:
    """The exact rational parameter cascade of the six-step argument."""
    eps = _frac(epsilon)
    c3 = Fraction(config.SEQUENCE_REMOVAL_CONSTANT)
    c = c3 / 64
    eps1 = eps**5 / 1000
    eps2 = eps**3 * eps1**36 / Fraction(2**100)
    eps3 = min(
        c * eps**6 * eps1**15 / Fraction(2**40),
        eps1**18 * eps2**18 / Fraction(2**100),
    )
    delta = eps3**2 * eps1**3 / 512
    return {"eps1": eps1, "eps2": eps2, "eps3": eps3, "delta": delta, "c3": c3}


@dataclass
class RepairTrace:
    mode: str
    epsilon: Fraction
    n: int
    parameters: dict
    hypothesis_count: int = 0
    hypothesis_bound: Fraction | None = None
    hypothesis_ok: bool | None = None
    partition: NearCliquePartition | None = None
    decomposition_intervals: list[VertexSet] = field(default_factory=list)
    decomposition_deleted: VertexSet = field(default_factory=lambda: VertexSet(()))
    clique_map: list = field(default_factory=list)
    removed: VertexSet = field(default_factory=lambda: VertexSet(()))  # final S
    live: VertexSet = field(default_factory=lambda: VertexSet(()))  # X minus S
    residue_live: VertexSet = field(default_factory=lambda: VertexSet(()))
    routed: str | None = None
    escalations: list = field(default_factory=list)
    edits: EditSet = field(default_factory=EditSet)

    def subtotals(self) -> dict[str, int]:
        return self.edits.counts_by_step()

    def check_step_locality(self):
        """Assert the per-step edit footprints; raises RepairError on violation."""
        part = self.partition
        cliques = part.cliques if part else []
        residue_mask = part.residue.mask if part else (1 << self.n) - 1
        owner = {}
        for i, x in enumerate(cliques):
            for v in x:
                owner[v] = i
        interval_of = {}
        for j, iv in enumerate(self.decomposition_intervals):
            for v in iv:
                interval_of[v] = j
        for e in self.edits:
            if e.step == "step1":
                if e.add:
                    if owner.get(e.u) is None or owner.get(e.u) != owner.get(e.v):
                        raise RepairError(f"step1 addition {e} not inside one clique")
                else:
                    if not (residue_mask >> e.u & 1 and residue_mask >> e.v & 1):
                        raise RepairError(f"step1 deletion {e} not inside the residue")
            elif e.step == "step2":
                iu, iv_ = owner.get(e.u), owner.get(e.v)
                if iu is None or iv_ is None or iu == iv_:
                    raise RepairError(f"step2 edit {e} not between distinct cliques")
            elif e.step == "step3":
                ju, jv = interval_of.get(e.u), interval_of.get(e.v)
                if ju is None or jv is None or ju == jv:
                    raise RepairError(f"step3 edit {e} not between distinct intervals")
            elif e.step == "step4":
                raise RepairError("step4 must not edit edges")
            elif e.step == "step5":
                if e.add:
                    raise RepairError(f"step5 edit {e} is not a deletion")
                if not (e.u in self.removed or e.v in self.removed):
                    raise RepairError(f"step5 deletion {e} not incident to the removed set")
            elif e.step == "step6":
                if e.add:
                    raise RepairError(f"step6 edit {e} is not a deletion")
                in_live = (e.u in self.live) + (e.v in self.live)
                in_res = (e.u in self.residue_live) + (e.v in self.residue_live)
                if not (in_live == 1 and in_res == 1):
                    raise RepairError(f"step6 deletion {e} not between live part and residue")

    def to_text(self) -> str:
        lines = [
            f"mode: {self.mode}",
            f"epsilon: {self.epsilon}",
            f"n: {self.n}",
            f"hypothesis_count: {self.hypothesis_count}",
            f"hypothesis_bound: {self.hypothesis_bound}",
            f"hypothesis_ok: {self.hypothesis_ok}",
        ]
        for name, value in self.parameters.items():
            lines.append(f"param {name}: {value}")
        if self.partition:
            lines.append(f"partition m: {self.partition.m}")
            for i, x in enumerate(self.partition.cliques):
                lines.append(f"partition clique {i}: {len(x)} vertices")
            lines.append(f"partition residue: {len(self.partition.residue)} vertices")
        lines.append(f"intervals: {len(self.decomposition_intervals)}")
        for j, iv in enumerate(self.decomposition_intervals):
            lines.append(f"interval {j}: {len(iv)} vertices")
        lines.append(f"interval deleted: {len(self.decomposition_deleted)} vertices")
        lines.append(f"removed: {len(self.removed)} vertices")
        lines.append(f"routed: {self.routed}")
        for step, name, initial, used in self.escalations:
            lines.append(f"escalation {step} {name}: {initial} -> {used}")
        for step, count in sorted(self.subtotals().items()):
            lines.append(f"edits {step}: {count}")
        lines.append(f"edits total: {len(self.edits)}")
        return "\n".join(lines) + "\n"


def _peel_partition(g: OrderedGraph, gamma: Fraction, delta: Fraction, floor: int = 1):
    """The peeling loop without the entry count check; returns
    (cliques, residue_mask, clean) where clean is False iff extraction failed
    mid-way and the remainder was dumped into the residue.

    With floor > 1 this is the pipeline's best-effort variant: extracted
    neighbourhoods must have at least `floor` members, and members poorly
    connected inside the extracted set are pruned back into the pool.
    """
    n = g.n
    rows = g._rows
    live = (1 << n) - 1
    cliques = []
    clean = True
    while _edges_within(rows, live) > gamma * n * n:
        size = live.bit_count()
        beta = Fraction(gamma * n * n, size * size)
        if floor > 1:
            x = _practical_extract(n, rows, live, beta, delta, floor)
        else:
            x = _extract_dense_in(n, rows, live, beta, n, delta)
        if x is None:
            clean = False
            break
        cliques.append(x)
        live &= ~x.mask
    return cliques, live, clean


def _practical_extract(n, rows, live, beta, delta, floor):
    """Forward-neighbourhood extraction with a size floor and one pruning
    pass dropping members adjacent to less than (1-2*delta) of the set."""
    need = max(Fraction(beta * live.bit_count(), 2), Fraction(floor))
    m = live
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        fwd = rows[v] & live & ~((1 << (v + 1)) - 1)
        size = fwd.bit_count()
        if size < need:
            continue
        threshold = (1 - 2 * delta) * (size - 1)
        keep = 0
        t = fwd
        while t:
            lo2 = t & -t
            u = lo2.bit_length() - 1
            t ^= lo2
            if (rows[u] & fwd).bit_count() >= threshold:
                keep |= lo2
        ksize = keep.bit_count()
        if ksize < need or ksize < 2:
            continue
        pairs = ksize * (ksize - 1) // 2
        if Fraction(_edges_within(rows, keep), pairs) >= 1 - delta:
            return VertexSet.from_mask(keep)
    return None


def _int_cube_root_ceil(x: int) -> int:
    """Smallest s >= 1 with s^3 >= x (exact integer comparisons)."""
    if x <= 1:
        return 1
    s = max(1, round(x ** (1.0 / 3.0)))  # float seed only; refined exactly
    while s**3 < x:
        s += 1
    while s > 1 and (s - 1) ** 3 >= x:
        s -= 1
    return s


def repair_forks(
    g: OrderedGraph, epsilon, mode: str = "practical", overrides: dict | None = None
) -> tuple[EditSet, RepairTrace]:
    """Make g induced-fork-free in six steps; returns the edit log and trace.

    Theorem mode computes the exact rational parameter cascade and enforces
    every count precondition strictly -- at desk scale its hypothesis bound is
    rarely satisfiable for nontrivial inputs, so failures surface as
    PipelineStepError with the offending count.  Practical mode takes its step
    parameters from `overrides` (see practical_defaults) and, when a checked
    precondition fails, retries the failing call with the parameter doubled,
    recording every escalation in the trace.  In both modes a successful
    return guarantees the patched graph has induced-fork count zero.
    """
    eps = _frac(epsilon)
    if not (0 < eps < 1):
        raise ValueError("epsilon must lie in (0, 1)")
    if mode not in ("theorem", "practical"):
        raise ValueError("mode must be 'theorem' or 'practical'")
    strict = mode == "theorem"
    if strict and overrides:
        raise ValueError("theorem mode accepts no parameter overrides")
    n = g.n

    if strict:
        cascade = theorem_cascade(eps)
        params = {
            "gamma_partition": cascade["eps1"],
            "delta_partition": cascade["delta"],
            "gamma_pair": cascade["eps3"],
            "gamma_interval": eps / 12,
            "gamma_interval_pair": cascade["eps2"],
            "residue_small_fraction": eps / 2,
            "live_small_fraction": eps / 2,
            "gamma_final": eps,
            "c3": cascade["c3"],
        }
        trace_params = dict(cascade)
        trace_params.update(params)
    else:
        params = practical_defaults(eps)
        for key, value in (overrides or {}).items():
            if key not in _PRACTICAL_KEYS:
                raise ValueError(f"unknown parameter {key!r}")
            params[key] = _frac(value)
        trace_params = dict(params)

    trace = RepairTrace(mode=mode, epsilon=eps, n=n, parameters=trace_params)
    editor = _Editor(g)
    trace.edits = editor.edits

    cnt0 = count_induced_forks(g)
    trace.hypothesis_count = cnt0
    if strict:
        trace.hypothesis_bound = cascade["delta"] * cascade["eps1"] ** 3 * n**3 / 32
        trace.hypothesis_ok = cnt0 < trace.hypothesis_bound
    if cnt0 == 0:
        trace.residue_live = VertexSet(range(n))
        return editor.edits, trace

    def attempt(step, name, initial, fn):
        value = _frac(initial)
        last: Exception | None = None
        for _ in range(_ESCALATION_LIMIT):
            try:
                result = fn(value)
                if value != initial:
                    trace.escalations.append((step, name, _frac(initial), value))
                return result, value
            except PreconditionError as exc:
                if strict:
                    raise PipelineStepError(step, exc) from exc
                last = exc
                value = value * 2
        raise PipelineStepError(step, last)

    # partition into near-cliques plus a sparse residue
    if strict:
        try:
            partition = near_clique_partition(
                editor.graph(), params["gamma_partition"], params["delta_partition"]
            )
        except PreconditionError as exc:
            raise PipelineStepError("partition", exc) from exc
    else:
        gamma_p = params["gamma_partition"]
        delta_p = params["delta_partition"]
        floor = max(1, int(params["min_part_size"]))
        cliques, residue_mask, clean = _peel_partition(
            editor.graph(), gamma_p, delta_p, floor
        )
        while not clean and delta_p < 1:
            delta_p = min(Fraction(1), delta_p * 2)
            cliques, residue_mask, clean = _peel_partition(
                editor.graph(), gamma_p, delta_p, floor
            )
        if delta_p != params["delta_partition"]:
            trace.escalations.append(
                ("partition", "delta_partition", params["delta_partition"], delta_p)
            )
        partition = NearCliquePartition(
            cliques=cliques,
            residue=VertexSet.from_mask(residue_mask),
            gamma=gamma_p,
            delta=delta_p,
            n=n,
        )
    trace.partition = partition
    x_sets = partition.cliques
    m = len(x_sets)
    y_set = partition.residue
    x_mask = 0
    for x in x_sets:
        x_mask |= x.mask

    # step 1: complete each near-clique, empty the residue
    for x in x_sets:
        for u in x:
            missing = x.mask & ~editor.rows[u] & ~((1 << (u + 1)) - 1)
            missing &= ~(1 << u)
            while missing:
                low = missing & -missing
                editor.add(u, low.bit_length() - 1, "step1")
                missing ^= low
    for u in y_set:
        t = editor.rows[u] & y_set.mask & ~((1 << (u + 1)) - 1)
        while t:
            low = t & -t
            editor.delete(u, low.bit_length() - 1, "step1")
            t ^= low

    if m == 0:
        final = count_induced_forks(editor.graph())
        if final != 0:
            raise RepairError(f"internal: empty partition left {final} forks")
        trace.removed = VertexSet(())
        trace.residue_live = y_set
        return editor.edits, trace

    # step 2: make every pair of near-cliques fork-free
    for i in range(m):
        for j in range(i + 1, m):
            a, b = x_sets[i], x_sets[j]
            if not strict:
                cross = _cross_edges(editor.rows, a.mask, b.mask)
                if cross <= params["sparse_pair_factor"] * params["gamma_pair"] * len(
                    a
                ) * len(b):
                    _delete_cross(editor, a.mask, b.mask, "step2")
                    continue

            def run_pair(gv, a=a, b=b):
                return repair_clique_pair(editor.graph(), a, b, gv, step="step2")

            edits, _ = attempt("step2", f"gamma_pair[{i},{j}]", params["gamma_pair"], run_pair)
            _replay(editor, edits)

    # interval decomposition of the clique region
    x_all = VertexSet.from_mask(x_mask)
    glob = x_all.elements
    local_of = {v: idx for idx, v in enumerate(glob)}
    g_x = induced_subgraph(editor.graph(), x_all)
    local_cliques = [VertexSet(local_of[v] for v in x) for x in x_sets]

    def run_decomp(gv):
        return interval_partition(g_x, local_cliques, gv, c3=params["c3"])

    decomp, _ = attempt(
        "interval_partition", "gamma_interval", params["gamma_interval"], run_decomp
    )
    intervals = [VertexSet(glob[v] for v in piece) for piece in decomp.intervals]
    s_dec = VertexSet(glob[v] for v in decomp.deleted)
    clique_map = [
        [(VertexSet(glob[v] for v in comp), members) for comp, members in entry]
        for entry in decomp.clique_map
    ]
    trace.decomposition_intervals = intervals
    trace.decomposition_deleted = s_dec
    trace.clique_map = clique_map
    t = len(intervals)

    # step 3: make every pair of intervals fork-free (edits only between them)
    if t:
        small = params["gamma_interval_pair"] * len(x_all) / (4 * t)
        for i in range(t):
            for j in range(i + 1, t):
                ia, ib = intervals[i], intervals[j]
                if len(ia) < small or len(ib) < small:
                    _delete_cross(editor, ia.mask, ib.mask, "step3")
                    continue
                ca = [comp for comp, _ in clique_map[i]]
                cb = [comp for comp, _ in clique_map[j]]

                def run_ipair(gv, ia=ia, ib=ib, ca=ca, cb=cb):
                    return repair_interval_pair(
                        editor.graph(), ia, ib, ca, cb, gv, step="step3"
                    )

                edits, _ = attempt(
                    "step3",
                    f"gamma_interval_pair[{i},{j}]",
                    params["gamma_interval_pair"],
                    run_ipair,
                )
                _replay(editor, edits)

    # step 4: vertex removal for fork families spread over three intervals
    live_mask = x_mask & ~s_dec.mask
    interval_of = {}
    for j, iv in enumerate(intervals):
        for v in iv:
            interval_of[v] = j
    source_of = {}
    for i, x in enumerate(x_sets):
        for v in x:
            source_of[v] = i
    groups: dict[tuple, int] = {}
    for fx, fy, fz in _iter_forks_masked(n, editor.rows, live_mask):
        key = (
            (interval_of[fx], source_of[fx]),
            (interval_of[fy], source_of[fy]),
            (interval_of[fz], source_of[fz]),
        )
        groups[key] = groups.get(key, 0) + 1
    s4_mask = 0
    for key in sorted(groups):
        (j1, i1), (j2, i2), (j3, i3) = key
        if len({j1, j2, j3}) != 3:
            raise RepairError("internal: residual fork not spread over three intervals")
        a = VertexSet.from_mask(intervals[j1].mask & x_sets[i1].mask & live_mask)
        b = VertexSet.from_mask(intervals[j2].mask & x_sets[i2].mask & live_mask)
        c = VertexSet.from_mask(intervals[j3].mask & x_sets[i3].mask & live_mask)
        if strict:
            s_val = eps * n / Fraction(3 * m**3 * t**3)
            if s_val < 1:
                raise PipelineStepError(
                    "step4",
                    PreconditionError(
                        "size", f"removal budget s={s_val} below 1 at this scale"
                    ),
                )
            try:
                removed = triple_clique_vertex_removal(editor.graph(), a, b, c, s_val)
            except PreconditionError as exc:
                raise PipelineStepError("step4", exc) from exc
        else:
            cnt_grp = _count_forks_masked(n, editor.rows, a.mask | b.mask | c.mask)
            s_val = _int_cube_root_ceil(12 * cnt_grp)
            removed = triple_clique_vertex_removal(editor.graph(), a, b, c, s_val)
        s4_mask |= removed.mask

    s_total_mask = s_dec.mask | s4_mask

    # route tiny sides into the removed set (their edges go in step 5)
    live_now = x_mask & ~s_total_mask
    if len(y_set) <= params["residue_small_fraction"] * n and len(y_set) > 0:
        s_total_mask |= y_set.mask
        trace.routed = "residue"
    elif live_now.bit_count() <= params["live_small_fraction"] * n and live_now:
        s_total_mask |= live_now
        trace.routed = "live"

    # step 5: isolate the removed set
    s_total = VertexSet.from_mask(s_total_mask)
    trace.removed = s_total
    for u in s_total:
        t_row = editor.rows[u]
        while t_row:
            low = t_row & -t_row
            v = low.bit_length() - 1
            t_row ^= low
            editor.delete(u, v, "step5")

    # step 6: clear forks between the surviving clique region and the residue
    x_live = VertexSet.from_mask(x_mask & ~s_total_mask)
    y_live = VertexSet.from_mask(y_set.mask & ~s_total_mask)
    trace.live = x_live
    trace.residue_live = y_live
    if x_live and y_live:

        def run_final(gv):
            return repair_against_independent_set(
                editor.graph(), x_live, y_live, gv, step="step6"
            )

        edits, _ = attempt("step6", "gamma_final", params["gamma_final"], run_final)
        _replay(editor, edits)

    final = count_induced_forks(editor.graph())
    if final != 0:
        raise RepairError(f"internal: pipeline left {final} forks")
    trace.edits = editor.edits
    return editor.edits, trace


def _replay(editor: _Editor, edits: EditSet):
    for e in edits:
        if e.add:
            editor.add(e.u, e.v, e.step)
        else:
            editor.delete(e.u, e.v, e.step)


def _delete_cross(editor: _Editor, amask: int, bmask: int, step: str):
    m = amask
    while m:
        low = m & -m
        u = low.bit_length() - 1
        m ^= low
        t = editor.rows[u] & bmask
        while t:
            lo2 = t & -t
            editor.delete(u, lo2.bit_length() - 1, step)
            t ^= lo2
