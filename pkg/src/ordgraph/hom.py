"""Order-preserving homomorphisms and graph cores.

A homomorphism maps vertices monotonically (not necessarily injectively) and
edges to edges.  Because targets have no self-loops, the preimage of each
target vertex is an interval spanning an independent set; is_valid_homomorphism
checks all of this explicitly.

The core is the smallest induced subgraph receiving a homomorphism; the search
enumerates candidate vertex subsets by ascending size, breaking ties by
lexicographic vertex set, so the returned representative is canonical even
though minimality only determines it up to isomorphism.
"""

from __future__ import annotations

from itertools import combinations

from . import config
from .graphs import OrderedGraph, induced_subgraph


class InstanceTooLarge(ValueError):
    pass


def find_homomorphism(
    g1: OrderedGraph, g2: OrderedGraph, *, max_vertices=None
) -> tuple[int, ...] | None:
    """Lexicographically least order- and edge-preserving map, or None.

    Exhaustive backtracking over monotone maps; guarded by max_vertices
    (default config.MAX_HOM_VERTICES).
    """
    cap = config.MAX_HOM_VERTICES if max_vertices is None else max_vertices
    if g1.n > cap or g2.n > cap:
        raise InstanceTooLarge(
            f"instance too large: v(g1)={g1.n}, v(g2)={g2.n}, guard={cap}"
        )
    n1, n2 = g1.n, g2.n
    if n1 == 0:
        return ()
    if n2 == 0:
        return None
    image = [0] * n1

    def rec(i: int) -> bool:
        lo = image[i - 1] if i else 0
        back_edges = [j for j in range(i) if g1.has_edge(j, i)]
        for v in range(lo, n2):
            if all(g2.has_edge(image[j], v) for j in back_edges):
                image[i] = v
                if i == n1 - 1 or rec(i + 1):
                    return True
        return False

    if rec(0):
        return tuple(image)
    return None


def is_valid_homomorphism(g1: OrderedGraph, g2: OrderedGraph, phi) -> bool:
    """Edge- and order-preserving, with interval independent preimages."""
    if len(phi) != g1.n:
        return False
    if any(not (0 <= w < g2.n) for w in phi):
        return False
    if any(phi[i] > phi[i + 1] for i in range(g1.n - 1)):
        return False
    for u, v in g1.edges():
        if phi[u] == phi[v] or not g2.has_edge(phi[u], phi[v]):
            return False
    # preimages: monotone map => intervals; independence: no edge may collapse
    for w in set(phi):
        pre = [x for x in range(g1.n) if phi[x] == w]
        if pre != list(range(pre[0], pre[-1] + 1)):
            return False
        for a in pre:
            for b in pre:
                if a < b and g1.has_edge(a, b):
                    return False
    return True


def core(g: OrderedGraph, *, max_vertices=None) -> OrderedGraph:
    """Smallest induced subgraph receiving a homomorphism from g.

    Subsets are tried by ascending size, lexicographically within a size, so
    the output is deterministic.  core(core(g)) equals core(g), and the only
    self-homomorphism of the result is the identity.
    """
    cap = config.MAX_CORE_VERTICES if max_vertices is None else max_vertices
    if g.n > cap:
        raise InstanceTooLarge(f"instance too large: v(g)={g.n}, guard={cap}")
    hom_cap = max(cap, config.MAX_HOM_VERTICES)
    for size in range(1, g.n):
        for subset in combinations(range(g.n), size):
            candidate = induced_subgraph(g, subset)
            if find_homomorphism(g, candidate, max_vertices=hom_cap) is not None:
                return candidate
    return g


def is_core(g: OrderedGraph, *, max_vertices=None) -> bool:
    """True iff the only homomorphism from g to itself is the identity."""
    return core(g, max_vertices=max_vertices) == g


def is_forest(g: OrderedGraph) -> bool:
    """True iff the underlying unordered graph is acyclic (union-find)."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True
