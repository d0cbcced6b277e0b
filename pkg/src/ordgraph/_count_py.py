"""Pure-Python counting kernels over int-bitmask adjacency rows.

Reference implementation for the compiled kernels in _count_cy; selected at
import time by ordgraph.kernels.  Row u has bit v set iff {u,v} is an edge.
"""

BACKEND_NAME = "python"


def count_forks(n, rows, lo=0, hi=None):
    """Number of triples x < y < z with edges {x,y},{x,z} and no edge {y,z}.

    For each x this is the number of non-adjacent pairs inside the forward
    neighbourhood of x.
    """
    if hi is None:
        hi = n
    total = 0
    for x in range(lo, hi):
        fwd = rows[x] >> (x + 1) << (x + 1)
        c = fwd.bit_count()
        if c < 2:
            continue
        adjacent_pairs = 0
        m = fwd
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            adjacent_pairs += (rows[y] & m).bit_count()
        total += c * (c - 1) // 2 - adjacent_pairs
    return total


def count_pattern(n, rows, fadj, induced, lo=0, hi=None):
    """Count order-preserving injections of the k-vertex pattern into the host.

    fadj is a tuple of k bitmasks (pattern adjacency rows).  Edges must map to
    edges; with induced=True non-edges must also map to non-edges.  lo/hi
    bound the image of pattern vertex 0, so callers can split work over the
    first mapped vertex and sum the partial counts in order.
    """
    k = len(fadj)
    if hi is None:
        hi = n
    if k == 0:
        return 1
    full = (1 << n) - 1
    if k == 1:
        return max(0, hi - lo)

    inv_rows = None
    if induced:
        inv_rows = [(~r) & full for r in rows]

    first = full & ~((1 << lo) - 1) & ((1 << hi) - 1)

    def rec(level, cands, lowest):
        # cands[i] is the running candidate mask for pattern vertex level+i.
        m = cands[0] & ~((1 << lowest) - 1)
        if level == k - 1:
            return m.bit_count()
        total = 0
        frow = fadj[level]
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            rv = rows[v]
            nrv = inv_rows[v] if induced else full
            new = []
            ok = True
            for off in range(1, k - level):
                c = cands[off] & (rv if frow >> (level + off) & 1 else nrv)
                if not c:
                    ok = False
                    break
                new.append(c)
            if ok:
                total += rec(level + 1, new, v + 1)
        return total

    return rec(0, [first] + [full] * (k - 1), 0)


def enumerate_pattern(n, rows, fadj, induced):
    """Yield all image tuples in lexicographic order (same semantics as count)."""
    k = len(fadj)
    if k == 0:
        yield ()
        return
    full = (1 << n) - 1
    inv_rows = [(~r) & full for r in rows] if induced else None

    stack_image = []

    def rec(level, cands, lowest):
        m = cands[0] & ~((1 << lowest) - 1)
        frow = fadj[level]
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            stack_image.append(v)
            if level == k - 1:
                yield tuple(stack_image)
            else:
                rv = rows[v]
                nrv = inv_rows[v] if induced else full
                new = []
                ok = True
                for off in range(1, k - level):
                    c = cands[off] & (rv if frow >> (level + off) & 1 else nrv)
                    if not c:
                        ok = False
                        break
                    new.append(c)
                if ok:
                    yield from rec(level + 1, new, v + 1)
            stack_image.pop()

    yield from rec(0, [full] + [full] * (k - 1), 0)
