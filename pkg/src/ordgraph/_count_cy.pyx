# cython: language_level=3
"""Compiled counting kernels over packed uint64 adjacency rows.

Mirrors ordgraph._count_py exactly; results are identical big integers.
Partial sums are kept in C integers and flushed into a Python int before they
can overflow (per-flush additions are bounded by n << 2^62).
"""

import numpy as np

cimport numpy as cnp

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND_NAME = "cython"

ctypedef unsigned long long u64

cdef inline u64 _above_word(Py_ssize_t w, Py_ssize_t word, int bit) nogil:
    # Mask of bits strictly above `bit` within word index `word`.
    if w < word:
        return 0
    if w > word:
        return <u64>0xFFFFFFFFFFFFFFFF
    if bit == 63:
        return 0
    return (<u64>0xFFFFFFFFFFFFFFFF) << (bit + 1)


def count_forks(Py_ssize_t n, cnp.ndarray[cnp.uint64_t, ndim=2] rows,
                Py_ssize_t lo=0, hi=None):
    cdef Py_ssize_t stop = n if hi is None else <Py_ssize_t>hi
    cdef Py_ssize_t w = rows.shape[1]
    cdef Py_ssize_t x, y, wi, word, bit
    cdef u64 acc = 0
    cdef u64 fword, m, yrow_and
    cdef unsigned long long c, adj
    cdef u64[:, :] R = rows
    result = 0
    cdef u64[64] fwd_buf
    if w > 64:
        raise ValueError("graph too large for the fixed kernel buffer")
    for x in range(lo, stop):
        word = x >> 6
        bit = x & 63
        c = 0
        for wi in range(w):
            fword = R[x, wi] & _above_word(wi, word, bit)
            fwd_buf[wi] = fword
            c += __builtin_popcountll(fword)
        if c < 2:
            continue
        adj = 0
        for wi in range(w):
            m = fwd_buf[wi]
            while m:
                y = (wi << 6) + _ctz(m)
                m &= m - 1
                # adjacent pairs with both ends in fwd, counted once: pair (y, z>y)
                adj += __builtin_popcountll(R[y, wi] & m)
                for word in range(wi + 1, w):
                    adj += __builtin_popcountll(R[y, word] & fwd_buf[word])
        acc += c * (c - 1) // 2 - adj
        if acc > (<u64>1) << 62:
            result += acc
            acc = 0
    return result + acc


cdef inline int _ctz(u64 x) nogil:
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


def count_pattern(Py_ssize_t n, cnp.ndarray[cnp.uint64_t, ndim=2] rows,
                  fadj, bint induced, Py_ssize_t lo=0, hi=None):
    """Count order-preserving injections of the pattern given by bitmask rows
    fadj (tuple of Python ints, one per pattern vertex)."""
    cdef Py_ssize_t stop = n if hi is None else <Py_ssize_t>hi
    cdef Py_ssize_t k = len(fadj)
    if k == 0:
        return 1
    cdef Py_ssize_t w = rows.shape[1]
    if w > 64 or k > 16:
        raise ValueError("instance too large for the fixed kernel buffers")
    cdef u64[:, :] R = rows

    cdef cnp.ndarray[cnp.uint64_t, ndim=2] inv_arr
    inv_arr = np.zeros((n, w), dtype=np.uint64)
    cdef u64[:, :] INV = inv_arr
    cdef Py_ssize_t i, j
    cdef u64 tail
    if induced:
        for i in range(n):
            for j in range(w):
                INV[i, j] = ~R[i, j]
        # clear bits >= n and self-loops in the complement rows
        tail = 0 if (n & 63) == 0 else ((<u64>0xFFFFFFFFFFFFFFFF) >> (64 - (n & 63)))
        if tail:
            for i in range(n):
                INV[i, w - 1] &= tail
        for i in range(n):
            INV[i, i >> 6] &= ~((<u64>1) << (i & 63))

    cdef unsigned int[16] fmask
    for i in range(k):
        fmask[i] = <unsigned int>fadj[i]

    # cand[level][future_off][word]; future_off 0 is the current level's mask.
    cdef cnp.ndarray[cnp.uint64_t, ndim=3] cand_arr = np.zeros((k, k, w), dtype=np.uint64)
    cdef u64[:, :, :] C = cand_arr
    cdef Py_ssize_t[16] pos_word
    cdef int[16] pos_bit
    cdef Py_ssize_t level, off, wi, v
    cdef int bit
    cdef u64 m, lowbit
    cdef bint ok
    cdef u64 acc = 0
    result = 0

    # level 0 candidates: [lo, stop) for vertex 0, full range for the rest
    tail = 0 if (n & 63) == 0 else ((<u64>0xFFFFFFFFFFFFFFFF) >> (64 - (n & 63)))
    for off in range(k):
        for wi in range(w):
            C[0, off, wi] = <u64>0xFFFFFFFFFFFFFFFF
        if tail:
            C[0, off, w - 1] = tail
    # restrict vertex 0 to [lo, stop)
    for wi in range(w):
        if (wi << 6) + 63 < lo or (wi << 6) >= stop:
            C[0, 0, wi] = 0
        else:
            m = C[0, 0, wi]
            if (wi << 6) < lo:
                m &= (<u64>0xFFFFFFFFFFFFFFFF) << (lo - (wi << 6))
            if stop - (wi << 6) < 64:
                m &= ((<u64>1) << (stop - (wi << 6))) - 1
            C[0, 0, wi] = m

    # iterative DFS: at each level scan candidate bits above the previous pick
    cdef Py_ssize_t[16] scan_word
    cdef u64[16] scan_mask
    level = 0
    scan_word[0] = 0
    scan_mask[0] = C[0, 0, 0]
    while level >= 0:
        # advance scan at current level
        v = -1
        while scan_word[level] < w:
            if scan_mask[level]:
                lowbit = scan_mask[level] & (scan_mask[level] - 1) ^ scan_mask[level]
                bit = _ctz(lowbit)
                scan_mask[level] = scan_mask[level] & (scan_mask[level] - 1)
                v = (scan_word[level] << 6) + bit
                break
            scan_word[level] += 1
            if scan_word[level] < w:
                scan_mask[level] = C[level, 0, scan_word[level]]
        if v < 0:
            level -= 1
            continue
        if level == k - 1:
            # count this bit plus everything remaining at this level
            acc += 1
            acc += __builtin_popcountll(scan_mask[level])
            for wi in range(scan_word[level] + 1, w):
                acc += __builtin_popcountll(C[level, 0, wi])
            if acc > (<u64>1) << 62:
                result += acc
                acc = 0
            level -= 1
            continue
        # place v; build candidate masks for the next level
        ok = True
        for off in range(1, k - level):
            if fmask[level] >> (level + off) & 1:
                for wi in range(w):
                    C[level + 1, off - 1, wi] = C[level, off, wi] & R[v, wi]
            elif induced:
                for wi in range(w):
                    C[level + 1, off - 1, wi] = C[level, off, wi] & INV[v, wi]
            else:
                for wi in range(w):
                    C[level + 1, off - 1, wi] = C[level, off, wi]
            m = 0
            for wi in range(w):
                m |= C[level + 1, off - 1, wi]
            if m == 0:
                ok = False
                break
        if not ok:
            continue
        # next level scans bits strictly above v
        level += 1
        scan_word[level] = v >> 6
        scan_mask[level] = C[level, 0, v >> 6] & _above_word(v >> 6, v >> 6, v & 63)
    return result + acc
