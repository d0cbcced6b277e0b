"""Ordered graphs and their basic structural operations.

An ordered graph has vertices 0..n-1 under their natural order and a
symmetric, irreflexive adjacency relation.  The vertex order is always the
label order; no separate permutation is stored.  Adjacency is kept as one
bitmask row per vertex (bit v of row u set iff {u,v} is an edge), which makes
the counting kernels and the repair procedures mostly bit arithmetic.

The text format used by the CLI and by all file interfaces:

    n <count>
    <u> <v>
    ...

one edge per line with 0 <= u < v < n, '#' starts a comment, and writers emit
edges sorted lexicographically.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from . import config


class GraphFormatError(ValueError):
    """Malformed graph text; carries a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class OrderedGraph:
    __slots__ = ("n", "_rows")

    def __init__(self, n: int, rows: Sequence[int]):
        # Internal constructor; use from_edges / empty / complete.
        self.n = n
        self._rows = tuple(rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "OrderedGraph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if n > config.MAX_GRAPH_VERTICES:
            raise ValueError(
                f"vertex count {n} exceeds configured cap {config.MAX_GRAPH_VERTICES}"
            )
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> "OrderedGraph":
        return cls.from_edges(n, ())

    @classmethod
    def complete(cls, n: int) -> "OrderedGraph":
        g = cls.from_edges(n, ())
        full = (1 << n) - 1
        return cls(n, tuple((full ^ (1 << u)) for u in range(n)))

    # -- basic queries ----------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def row(self, u: int) -> int:
        """Adjacency bitmask of u."""
        return self._rows[u]

    def forward_row(self, u: int) -> int:
        """Bitmask of neighbours of u that come after u."""
        return self._rows[u] >> (u + 1) << (u + 1)

    def degree(self, u: int) -> int:
        return self._rows[u].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self._rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        for u in range(self.n):
            fwd = self.forward_row(u)
            while fwd:
                low = fwd & -fwd
                yield u, low.bit_length() - 1
                fwd ^= low

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OrderedGraph)
            and self.n == other.n
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self._rows))

    def __repr__(self) -> str:
        return f"OrderedGraph(n={self.n}, edges={list(self.edges())})"


class VertexSet:
    """Immutable sorted set of vertex labels with order-aware helpers."""

    __slots__ = ("_elems", "_members", "_mask")

    def __init__(self, elems: Iterable[int]):
        sorted_elems = tuple(sorted(set(elems)))
        if sorted_elems and sorted_elems[0] < 0:
            raise ValueError("vertex labels must be nonnegative")
        self._elems = sorted_elems
        self._members = frozenset(sorted_elems)
        mask = 0
        for v in sorted_elems:
            mask |= 1 << v
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        out = cls.__new__(cls)
        elems = []
        m = mask
        while m:
            low = m & -m
            elems.append(low.bit_length() - 1)
            m ^= low
        out._elems = tuple(elems)
        out._members = frozenset(elems)
        out._mask = mask
        return out

    @property
    def elements(self) -> tuple[int, ...]:
        return self._elems

    @property
    def mask(self) -> int:
        return self._mask

    def __len__(self) -> int:
        return len(self._elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self._elems)

    def __contains__(self, v) -> bool:
        return v in self._members

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self._elems == other._elems

    def __hash__(self) -> int:
        return hash(self._elems)

    def __repr__(self) -> str:
        return f"VertexSet({list(self._elems)})"

    def min(self) -> int:
        return self._elems[0]

    def max(self) -> int:
        return self._elems[-1]

    def isdisjoint(self, other: "VertexSet") -> bool:
        return not (self._mask & other._mask)

    def intersection(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & other._mask)

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask | other._mask)

    def difference(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & ~other._mask)

    def issubset(self, other: "VertexSet") -> bool:
        return not (self._mask & ~other._mask)

    def is_suffix_of(self, host: "VertexSet") -> bool:
        """True iff this set is upward-closed within host."""
        if not self._elems:
            return True
        if self._mask & ~host._mask:
            return False
        lo = self._elems[0]
        expected = host._mask & ~((1 << lo) - 1)
        return self._mask == expected

    def is_prefix_of(self, host: "VertexSet") -> bool:
        if not self._elems:
            return True
        if self._mask & ~host._mask:
            return False
        hi = self._elems[-1]
        expected = host._mask & ((1 << (hi + 1)) - 1)
        return self._mask == expected


# -- structural operations ------------------------------------------------


def complement(g: OrderedGraph) -> OrderedGraph:
    """Same vertices; a pair is adjacent iff it was not (no self-loops)."""
    full = (1 << g.n) - 1
    rows = tuple((~g.row(u)) & full & ~(1 << u) for u in range(g.n))
    return OrderedGraph(g.n, rows)


def reverse(g: OrderedGraph) -> OrderedGraph:
    """Reverse the vertex order; vertex i becomes n-1-i."""
    n = g.n
    rows = [0] * n
    for u, v in g.edges():
        ru, rv = n - 1 - u, n - 1 - v
        rows[ru] |= 1 << rv
        rows[rv] |= 1 << ru
    return OrderedGraph(n, rows)


def blowup(g: OrderedGraph, factor: int) -> OrderedGraph:
    """Replace each vertex by `factor` consecutive clones.

    Clone intervals are independent sets, ordered like their originals, with
    all-or-nothing adjacency between intervals.
    """
    if factor < 1:
        raise ValueError("blowup factor must be a positive integer")
    n = g.n * factor
    if n > config.MAX_GRAPH_VERTICES:
        raise ValueError("blown-up graph exceeds the configured vertex cap")
    block = (1 << factor) - 1
    expanded = []
    for u in range(g.n):
        row = g.row(u)
        new_row = 0
        while row:
            low = row & -row
            v = low.bit_length() - 1
            new_row |= block << (v * factor)
            row ^= low
        expanded.append(new_row)
    rows = []
    for u in range(g.n):
        rows.extend([expanded[u]] * factor)
    return OrderedGraph(n, rows)


def induced_subgraph(g: OrderedGraph, s: Iterable[int] | VertexSet) -> OrderedGraph:
    """Restrict to s, relabelling 0..|s|-1 in order."""
    elems = s.elements if isinstance(s, VertexSet) else tuple(sorted(set(s)))
    for v in elems:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    k = len(elems)
    rows = [0] * k
    for i in range(k):
        ri = g.row(elems[i])
        for j in range(i + 1, k):
            if ri >> elems[j] & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return OrderedGraph(k, rows)


# -- named small graphs ----------------------------------------------------


def fork() -> OrderedGraph:
    """Vertices x < y < z, edges {x,y} and {x,z}; the pair {y,z} is free."""
    return OrderedGraph.from_edges(3, [(0, 1), (0, 2)])


def single_edge() -> OrderedGraph:
    return OrderedGraph.from_edges(2, [(0, 1)])


def triangle() -> OrderedGraph:
    return OrderedGraph.complete(3)


def monotone_path(k: int) -> OrderedGraph:
    """Path 0-1-...-(k-1) along the vertex order."""
    return OrderedGraph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def ordered_cycle4(variant: int) -> OrderedGraph:
    """The three ordered 4-cycles, by the cyclic visiting order of 1..4."""
    orders = {1: (0, 1, 2, 3), 2: (0, 2, 1, 3), 3: (0, 1, 3, 2)}
    if variant not in orders:
        raise ValueError("variant must be 1, 2 or 3")
    seq = orders[variant]
    edges = [tuple(sorted((seq[i], seq[(i + 1) % 4]))) for i in range(4)]
    return OrderedGraph.from_edges(4, edges)


def ordered_path4(variant: int) -> OrderedGraph:
    """Ordered 4-vertex paths by visiting order: 1 -> 2143, 2 -> 2134, 3 -> 3214."""
    orders = {1: (1, 0, 3, 2), 2: (1, 0, 2, 3), 3: (2, 1, 0, 3)}
    if variant not in orders:
        raise ValueError("variant must be 1, 2 or 3")
    seq = orders[variant]
    edges = [tuple(sorted((seq[i], seq[i + 1]))) for i in range(3)]
    return OrderedGraph.from_edges(4, edges)


# -- text format ------------------------------------------------------------


def parse_graph(text: str) -> OrderedGraph:
    n = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphFormatError(line_no, "expected header 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, f"bad vertex count {parts[1]!r}")
            if n < 0:
                raise GraphFormatError(line_no, "vertex count must be nonnegative")
            continue
        if len(parts) != 2:
            raise GraphFormatError(line_no, "expected edge line '<u> <v>'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(line_no, f"bad edge line {line!r}")
        if not (0 <= u < v < n):
            raise GraphFormatError(line_no, f"edge ({u},{v}) violates 0 <= u < v < n")
        edges.append((u, v))
    if n is None:
        raise GraphFormatError(1, "missing header 'n <count>'")
    return OrderedGraph.from_edges(n, edges)


def format_graph(g: OrderedGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path) -> OrderedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: OrderedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
