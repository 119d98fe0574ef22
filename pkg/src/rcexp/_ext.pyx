# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sweep kernels.

Same contracts as :mod:`rcexp._fallback`.  Every sweep walks an odometer whose
last digit moves fastest; bumping digit j adds one generator row (or one
parity-check column), and a wrap from q-1 to 0 is the same addition because q
copies of a vector sum to zero.
"""
import numpy as np

NAME = "cython"


cdef inline long long _rank(const long long* off, const long long* counts,
                            Py_ssize_t q, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef long long r = 0
    cdef long long rem = n
    cdef Py_ssize_t stride = (n + 1) * (n + 1)
    for i in range(q - 1):
        r += off[i * stride + rem * (n + 1) + counts[i]]
        rem -= counts[i]
    return r


def type_histogram(const long long[:, ::1] gen, int q,
                   const long long[:, :, ::1] offsets, Py_ssize_t ntypes):
    """Histogram of codeword types over all q**k messages."""
    cdef Py_ssize_t k = gen.shape[0]
    cdef Py_ssize_t n = gen.shape[1]
    hist_arr = np.zeros(ntypes, dtype=np.int64)
    word_arr = np.zeros(n, dtype=np.int64)
    digits_arr = np.zeros(k + 1, dtype=np.int64)
    counts_arr = np.zeros(q, dtype=np.int64)
    cdef long long[::1] hist = hist_arr
    cdef long long[::1] word = word_arr
    cdef long long[::1] digits = digits_arr
    cdef long long[::1] counts = counts_arr
    cdef const long long* off = &offsets[0, 0, 0]
    cdef long long total = 1
    cdef Py_ssize_t i, j, t
    cdef long long step, g, old, new
    for i in range(k):
        total *= q
    counts[0] = n
    with nogil:
        for step in range(total):
            hist[_rank(off, &counts[0], q, n)] += 1
            j = k - 1
            while j >= 0:
                for t in range(n):
                    g = gen[j, t]
                    if g != 0:
                        old = word[t]
                        new = old + g
                        if new >= q:
                            new -= q
                        counts[old] -= 1
                        counts[new] += 1
                        word[t] = new
                digits[j] += 1
                if digits[j] == q:
                    digits[j] = 0
                    j -= 1
                else:
                    break
    return hist_arr


def coset_leaders(const long long[:, ::1] check, int q, Py_ssize_t n,
                  const long long[:, :, ::1] offsets,
                  const long long[::1] levels):
    """Per syndrome, the lexicographically first word of lowest entropy level."""
    cdef Py_ssize_t m = check.shape[0]
    cdef long long nsyn = 1
    cdef long long total = 1
    cdef Py_ssize_t i, j, t
    for i in range(m):
        nsyn *= q
    for i in range(n):
        total *= q
    leader_arr = np.full(nsyn, -1, dtype=np.int64)
    best_arr = np.zeros(nsyn, dtype=np.int64)
    word_arr = np.zeros(n, dtype=np.int64)
    counts_arr = np.zeros(q, dtype=np.int64)
    syn_arr = np.zeros(m + 1, dtype=np.int64)
    place_arr = np.zeros(m + 1, dtype=np.int64)
    cdef long long[::1] leader = leader_arr
    cdef long long[::1] best = best_arr
    cdef long long[::1] word = word_arr
    cdef long long[::1] counts = counts_arr
    cdef long long[::1] syn = syn_arr
    cdef long long[::1] place = place_arr
    cdef const long long* off = &offsets[0, 0, 0]
    cdef long long idx, s, lvl, old, new, v
    cdef bint wrap
    for j in range(m):
        place[m - 1 - j] = 1 if j == 0 else place[m - j] * q
    counts[0] = n
    with nogil:
        for idx in range(total):
            s = 0
            for j in range(m):
                s += syn[j] * place[j]
            lvl = levels[_rank(off, &counts[0], q, n)]
            if leader[s] < 0 or lvl < best[s]:
                leader[s] = idx
                best[s] = lvl
            t = n - 1
            while t >= 0:
                old = word[t]
                new = old + 1
                wrap = new == q
                if wrap:
                    new = 0
                counts[old] -= 1
                counts[new] += 1
                word[t] = new
                for j in range(m):
                    v = syn[j] + check[j, t]
                    if v >= q:
                        v -= q
                    syn[j] = v
                if wrap:
                    t -= 1
                else:
                    break
    return leader_arr


def membership_counts(const long long[:, :, ::1] gens, int q, Py_ssize_t n):
    """For every word index, how many of the stacked codes contain it."""
    cdef Py_ssize_t ncodes = gens.shape[0]
    cdef Py_ssize_t k = gens.shape[1]
    cdef long long size = 1
    cdef long long total = 1
    cdef Py_ssize_t c, i, j, t
    for i in range(n):
        size *= q
    for i in range(k):
        total *= q
    out_arr = np.zeros(size, dtype=np.int64)
    word_arr = np.zeros(n, dtype=np.int64)
    digits_arr = np.zeros(k + 1, dtype=np.int64)
    place_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long[::1] word = word_arr
    cdef long long[::1] digits = digits_arr
    cdef long long[::1] place = place_arr
    cdef long long idx, step, g, old, new
    for t in range(n):
        place[n - 1 - t] = 1 if t == 0 else place[n - t] * q
    with nogil:
        for c in range(ncodes):
            idx = 0
            for step in range(total):
                out[idx] += 1
                j = k - 1
                while j >= 0:
                    for t in range(n):
                        g = gens[c, j, t]
                        if g != 0:
                            old = word[t]
                            new = old + g
                            if new >= q:
                                new -= q
                            idx += (new - old) * place[t]
                            word[t] = new
                    digits[j] += 1
                    if digits[j] == q:
                        digits[j] = 0
                        j -= 1
                    else:
                        break
    return out_arr
