"""Numpy implementations of the sweep kernels.

Used when the compiled ``rcexp._ext`` module is unavailable (or when
``RCEXP_PURE_PYTHON`` is set).  Sweeps are chunked so memory stays bounded.
"""
import numpy as np

NAME = "python"

CHUNK = 1 << 16


def _digits(start, stop, width, q):
    idx = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def _ranks(words, q, offsets):
    n = words.shape[1]
    counts = np.stack([(words == u).sum(axis=1) for u in range(q)], axis=1)
    rem = np.full(words.shape[0], n, dtype=np.int64)
    r = np.zeros(words.shape[0], dtype=np.int64)
    for i in range(q - 1):
        r += offsets[i, rem, counts[:, i]]
        rem -= counts[:, i]
    return r


def type_histogram(gen, q, offsets, ntypes):
    """Histogram of codeword types over all q**k messages."""
    gen = np.asarray(gen, dtype=np.int64)
    k, n = gen.shape
    total = q**k
    hist = np.zeros(ntypes, dtype=np.int64)
    for start in range(0, total, CHUNK):
        msgs = _digits(start, min(total, start + CHUNK), k, q)
        words = (msgs @ gen) % q
        hist += np.bincount(_ranks(words, q, offsets), minlength=ntypes)
    return hist


def coset_leaders(check, q, n, offsets, levels):
    """Per syndrome, the lexicographically first word of lowest entropy level."""
    check = np.asarray(check, dtype=np.int64)
    levels = np.asarray(levels, dtype=np.int64)
    m = check.shape[0]
    nsyn = q**m
    total = q**n
    place = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    leader = np.full(nsyn, -1, dtype=np.int64)
    best = np.zeros(nsyn, dtype=np.int64)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        words = _digits(start, idx[-1] + 1, n, q)
        syn = ((words @ check.T) % q) @ place if m else np.zeros(idx.size, dtype=np.int64)
        lvl = levels[_ranks(words, q, offsets)]
        order = np.lexsort((idx, lvl, syn))
        syn_sorted = syn[order]
        first = np.ones(order.size, dtype=bool)
        first[1:] = syn_sorted[1:] != syn_sorted[:-1]
        pick = order[first]
        s, cand_lvl, cand_idx = syn[pick], lvl[pick], idx[pick]
        # earlier chunks hold smaller indices, so only a strictly lower level wins
        take = (leader[s] < 0) | (cand_lvl < best[s])
        leader[s[take]] = cand_idx[take]
        best[s[take]] = cand_lvl[take]
    return leader


def membership_counts(gens, q, n):
    """For every word index, how many of the stacked codes contain it."""
    gens = np.asarray(gens, dtype=np.int64)
    ncodes, k, _ = gens.shape
    place = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    out = np.zeros(q**n, dtype=np.int64)
    total = q**k
    for start in range(0, total, CHUNK):
        msgs = _digits(start, min(total, start + CHUNK), k, q)
        for c in range(ncodes):
            idx = ((msgs @ gens[c]) % q) @ place
            out += np.bincount(idx, minlength=out.size)
    return out
