"""Types (compositions) of words over F_q and the quantities built on them.

All logarithms are to base q, so entropies of distributions on F_q lie in
``[0, 1]``.  Relative entropy returns ``math.inf`` deliberately when the
support condition fails; callers compare against it, never overflow into it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from numbers import Real
from typing import Sequence

import numpy as np

from rcexp.field import Word, as_word_array, check_modulus

__all__ = [
    "TypeVector",
    "Distribution",
    "type_of",
    "enumerate_types",
    "num_types",
    "type_class_size",
    "entropy",
    "relative_entropy",
    "type_class_prob",
    "TypeTable",
    "type_table",
]

PROB_TOL = 1e-12


@dataclass(frozen=True, order=True)
class TypeVector:
    """Composition ``(n*Q(0), ..., n*Q(q-1))`` of a length-n word."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) < 2 or any(c < 0 for c in counts):
            raise ValueError(f"invalid type counts {counts!r}")
        if sum(counts) < 1:
            raise ValueError("a type needs n >= 1")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def q(self) -> int:
        return len(self.counts)

    def distribution(self) -> "Distribution":
        n = self.n
        return Distribution(tuple(Fraction(c, n) for c in self.counts))

    def is_zero_type(self) -> bool:
        """True for the type of the all-zero word."""
        return self.counts[0] == self.n

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.counts) + ")"

    @classmethod
    def parse(cls, text: str) -> "TypeVector":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"bad type literal {text!r}")
        return cls(tuple(int(p) for p in body[1:-1].split(",")))


class Distribution:
    """Probability vector on F_q.

    Entries may be floats or exact rationals (:class:`fractions.Fraction`);
    exact entries propagate through :func:`type_class_prob` and the decoder's
    exact error probabilities.
    """

    __slots__ = ("probs",)

    def __init__(self, probs: Sequence[Real]):
        probs = tuple(probs)
        if len(probs) < 2:
            raise ValueError("a distribution on F_q needs q >= 2 entries")
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be non-negative")
        total = sum(probs)
        if abs(float(total) - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {float(total)!r}, not 1")
        self.probs = probs

    @classmethod
    def point_mass(cls, q: int, at: int = 0) -> "Distribution":
        return cls(tuple(Fraction(int(u == at)) for u in range(q)))

    @classmethod
    def uniform(cls, q: int) -> "Distribution":
        return cls((Fraction(1, q),) * q)

    @property
    def q(self) -> int:
        return len(self.probs)

    def support(self) -> tuple:
        return tuple(u for u, p in enumerate(self.probs) if p > 0)

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])

    def is_exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for p in self.probs)

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, u):
        return self.probs[u]

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.probs == other.probs

    def __hash__(self):
        return hash(self.probs)

    def __repr__(self):
        return "Distribution(" + ", ".join(str(p) for p in self.probs) + ")"


def _probs(d) -> tuple:
    if isinstance(d, Distribution):
        return d.probs
    if isinstance(d, TypeVector):
        return d.distribution().probs
    return tuple(d)


def type_of(x, q: int | None = None) -> TypeVector:
    if isinstance(x, Word):
        q = x.q
        symbols = x.symbols
    else:
        if q is None:
            raise ValueError("q is required for plain symbol sequences")
        symbols = [int(s) for s in x]
    counts = [0] * check_modulus(q)
    for s in symbols:
        counts[s] += 1
    return TypeVector(tuple(counts))


def num_types(n: int, q: int) -> int:
    """``|P_n(F_q)|`` = C(n+q-1, q-1)."""
    return comb(n + q - 1, q - 1)


def _compositions(n: int, parts: int):
    # first coordinate descends, so the all-zero word's type comes first
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def enumerate_types(n: int, q: int) -> list:
    """All of P_n(F_q), ordered as ``(n,0,..,0), (n-1,1,0,..), ..., (0,..,0,n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_modulus(q)
    return [TypeVector(c) for c in _compositions(n, q)]


def type_class_size(t: TypeVector) -> int:
    """``|T_Q^n|``, the multinomial coefficient, as an exact integer."""
    size = factorial(t.n)
    for c in t.counts:
        size //= factorial(c)
    return size


def _log(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def entropy(d, base: int | None = None) -> float:
    """Shannon entropy in base-q units (``q = len(d)`` unless ``base`` is given)."""
    probs = _probs(d)
    base = len(probs) if base is None else base
    h = 0.0
    for p in probs:
        p = float(p)
        if p > 0:
            h -= p * math.log(p)
    return max(h / math.log(base), 0.0)


def relative_entropy(qd, pd, base: int | None = None) -> float:
    """``D(Q||P)`` in base-q units; ``math.inf`` when supp Q is not inside supp P."""
    qs = _probs(qd)
    ps = _probs(pd)
    if len(qs) != len(ps):
        raise ValueError("distributions over different alphabets")
    base = len(qs) if base is None else base
    d = 0.0
    for a, b in zip(qs, ps):
        a = float(a)
        if a == 0:
            continue
        b = float(b)
        if b == 0:
            return math.inf
        d += a * math.log(a / b)
    return max(d / math.log(base), 0.0)


def type_class_prob(pd, t: TypeVector):
    """``P^n(T_Q^n)`` = |T_Q| * prod_u P(u)**count(u).

    Exact (``Fraction``) when ``pd`` has rational entries, float otherwise.
    """
    probs = _probs(pd)
    if len(probs) != t.q:
        raise ValueError("alphabet size mismatch")
    exact = all(isinstance(p, (int, Fraction)) for p in probs)
    value = Fraction(type_class_size(t)) if exact else float(type_class_size(t))
    for p, c in zip(probs, t.counts):
        if c:
            value *= (Fraction(p) if exact else float(p)) ** c
    return value


class TypeTable:
    """Precomputed per-(n, q) tables: types, class sizes, rank offsets, entropy levels.

    ``rank_offsets[i, rem, c]`` lets a composition be ranked in the
    :func:`enumerate_types` order as ``sum_i rank_offsets[i, rem_i, c_i]`` where
    ``rem_i`` is what remains of n before coordinate i.  ``entropy_levels``
    assigns equal integers to types with exactly equal entropy and orders them
    by entropy; the comparison is done on ``prod_u c_u**c_u`` in exact integers.
    """

    def __init__(self, n: int, q: int):
        self.n = n
        self.q = check_modulus(q)
        self.types = enumerate_types(n, q)
        self.index = {t: i for i, t in enumerate(self.types)}
        self.counts = np.array([t.counts for t in self.types], dtype=np.int64)
        self.sizes = [type_class_size(t) for t in self.types]

        offsets = np.zeros((q, n + 1, n + 1), dtype=np.int64)
        for i in range(q - 1):
            parts_after = q - 1 - i
            for rem in range(n + 1):
                acc = 0
                # compositions with a larger coordinate i come first
                for c in range(rem, -1, -1):
                    offsets[i, rem, c] = acc
                    acc += comb(rem - c + parts_after - 1, parts_after - 1)
        self.rank_offsets = offsets

        keys = []
        for t in self.types:
            k = 1
            for c in t.counts:
                k *= c**c
            keys.append(k)
        distinct = sorted(set(keys), reverse=True)
        level_of = {k: lvl for lvl, k in enumerate(distinct)}
        self.entropy_levels = np.array([level_of[k] for k in keys], dtype=np.int64)
        self.entropies = np.array([entropy(t) for t in self.types])

    def rank(self, counts) -> int:
        rem = self.n
        r = 0
        for i in range(self.q - 1):
            c = int(counts[i])
            r += int(self.rank_offsets[i, rem, c])
            rem -= c
        return r

    def zero_type(self) -> TypeVector:
        return self.types[0]

    def __len__(self):
        return len(self.types)


@lru_cache(maxsize=64)
def type_table(n: int, q: int) -> TypeTable:
    return TypeTable(n, q)


def word_type(x: Word | np.ndarray, q: int, n: int) -> TypeVector:
    arr = as_word_array(x, n, q)
    return TypeVector(tuple(int(c) for c in np.bincount(arr, minlength=q)))
