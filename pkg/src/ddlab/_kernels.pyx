# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled all-subset row-counting kernel.

Same contract as ddlab._kernels_py.all_subset_costs: for every mask over the
truth-table index bits, count distinct rows of the (masked bits) x (other bits)
matrix. Rows are packed into 64-bit words and deduplicated with an
open-addressing hash table; equality always falls back to a full word compare,
so hash quality only affects speed, never the count.
"""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t
from libc.string cimport memset

cnp.import_array()


def all_subset_costs(table_obj, int n):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c"] table = np.ascontiguousarray(
        table_obj, dtype=np.uint8
    )
    cdef int64_t size = (<int64_t>1) << n
    if table.shape[0] != size:
        raise ValueError("table must have length 2**n")
    out = np.zeros(size, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] out_v = out

    # Worst-case packed storage over any single mask: with c = n - u column
    # bits, rows * words_per_row = 2**u * max(1, 2**(c-6)) <= 2**n words.
    cdef cnp.ndarray[cnp.uint64_t, ndim=1, mode="c"] row_words = np.zeros(
        max(size, 1), dtype=np.uint64
    )
    cdef int64_t cap_max = 1
    while cap_max < 2 * size:
        cap_max <<= 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] slots = np.empty(
        cap_max, dtype=np.int64
    )

    cdef uint8_t *tab = &table[0]
    cdef uint64_t *words = <uint64_t *>&row_words[0]
    cdef int64_t *slot = &slots[0]

    cdef int64_t full = size - 1
    cdef int64_t mask, cmask, rsub, csub, idx, r, j, n_rows, n_cols, words_per_row
    cdef int64_t count, cap, cap_mask, pos, cand, w, distinct
    cdef int u
    cdef uint64_t h
    cdef bint same

    for mask in range(size):
        cmask = full ^ mask
        u = 0
        idx = mask
        while idx:
            idx &= idx - 1
            u += 1
        n_rows = (<int64_t>1) << u
        n_cols = (<int64_t>1) << (n - u)
        words_per_row = (n_cols + 63) >> 6

        cap = 1
        while cap < 2 * n_rows:
            cap <<= 1
        cap_mask = cap - 1
        memset(slot, 0xff, cap * sizeof(int64_t))

        count = 0
        rsub = 0
        for r in range(n_rows):
            # Pack the row for this prefix assignment into the next free block.
            for w in range(words_per_row):
                words[count * words_per_row + w] = 0
            csub = 0
            for j in range(n_cols):
                idx = rsub | csub
                if tab[idx]:
                    words[count * words_per_row + (j >> 6)] |= (
                        (<uint64_t>1) << (j & 63)
                    )
                csub = (csub - cmask) & cmask
            # FNV-style hash over the packed words; compare-on-collision keeps
            # the count exact regardless of hash collisions.
            h = <uint64_t>14695981039346656037ULL
            for w in range(words_per_row):
                h ^= words[count * words_per_row + w]
                h *= <uint64_t>1099511628211ULL
            pos = <int64_t>(h & <uint64_t>cap_mask)
            while True:
                cand = slot[pos]
                if cand < 0:
                    slot[pos] = count
                    count += 1
                    break
                same = True
                for w in range(words_per_row):
                    if words[cand * words_per_row + w] != words[count * words_per_row + w]:
                        same = False
                        break
                if same:
                    break
                pos = (pos + 1) & cap_mask
            rsub = (rsub - mask) & mask
        out_v[mask] = count
    return out
