"""Linear codes over F_q, their type spectra, A-goodness and compatible pairs."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from rcexp import kernels
from rcexp.errors import BoundViolation, EnumerationTooLarge, FieldError
from rcexp.field import (
    FieldMatrix,
    Word,
    as_word_array,
    format_matrix,
    null_space_basis,
    parse_matrix,
    rref,
)
from rcexp.typeclasses import TypeVector, num_types, type_class_size, type_table

__all__ = [
    "LinearCode",
    "Spectrum",
    "GoodnessResult",
    "contains",
    "dual",
    "spectrum",
    "is_a_good",
    "spectrum_bound_check",
    "tight_spectrum_constant",
    "is_compatible_pair",
    "enumerate_codes",
    "format_code",
    "parse_code",
    "SPECTRUM_CAP",
]

SPECTRUM_CAP = 1 << 24
FLOAT_RTOL = 1e-9


class LinearCode:
    """An [n, k] linear code, held by the RREF of a generator matrix.

    Any spanning set of rows may be passed; the constructor canonicalises it,
    so two codes are equal exactly when they are the same subspace.
    """

    __slots__ = ("generator", "pivots", "_dual")

    def __init__(self, generator: FieldMatrix):
        reduced, pivots = rref(generator)
        self.generator = reduced
        self.pivots = pivots
        self._dual = None

    @classmethod
    def from_rows(cls, rows, q: int, n: int | None = None) -> "LinearCode":
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            if n is None:
                raise FieldError("n is required for an empty row list")
            rows = rows.reshape(0, n)
        return cls(FieldMatrix(rows, q))

    @classmethod
    def zero(cls, n: int, q: int) -> "LinearCode":
        return cls(FieldMatrix.zeros(0, n, q))

    @classmethod
    def full(cls, n: int, q: int) -> "LinearCode":
        return cls(FieldMatrix.identity(n, q))

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @property
    def q(self) -> int:
        return self.generator.q

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def parity_check(self) -> FieldMatrix:
        """Generator of the dual code, used as the parity-check matrix."""
        return dual(self).generator

    def codeword_array(self, cap: int = SPECTRUM_CAP) -> np.ndarray:
        """All q**k codewords as rows, in message order."""
        total = self.q**self.k
        if total > cap:
            raise EnumerationTooLarge(f"q^k = {total} exceeds the cap {cap}")
        powers = self.q ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
        msgs = (np.arange(total, dtype=np.int64)[:, None] // powers[None, :]) % self.q
        return (msgs @ self.generator.array) % self.q

    def codewords(self) -> Iterator[Word]:
        for row in self.codeword_array():
            yield Word(tuple(row), self.q)

    def __contains__(self, x) -> bool:
        return contains(self, x)

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.generator == other.generator

    def __hash__(self):
        return hash(self.generator)

    def __repr__(self):
        return f"LinearCode(n={self.n}, k={self.k}, q={self.q}, G={self.generator.tolist()})"


def contains(c: LinearCode, x) -> bool:
    """Membership by elimination against the RREF generator."""
    v = as_word_array(x, c.n, c.q).copy()
    g = c.generator.array
    for i, p in enumerate(c.pivots):
        if v[p]:
            v = (v - v[p] * g[i]) % c.q
    return not v.any()


def dual(c: LinearCode) -> LinearCode:
    if c._dual is None:
        c._dual = LinearCode(null_space_basis(c.generator))
    return c._dual


@dataclass(frozen=True)
class Spectrum:
    """Type spectrum ``M_Q(C)``; types absent from ``counts`` have count 0."""

    n: int
    q: int
    counts: Mapping

    def __post_init__(self):
        clean = {t: int(v) for t, v in self.counts.items() if v}
        object.__setattr__(self, "counts", MappingProxyType(clean))

    def __getitem__(self, t: TypeVector) -> int:
        return self.counts.get(t, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def without_zero(self) -> "Spectrum":
        """Spectrum of ``C \\ {0_n}``."""
        zero = type_table(self.n, self.q).zero_type()
        counts = dict(self.counts)
        if counts.get(zero, 0):
            counts[zero] -= 1
        return Spectrum(self.n, self.q, counts)

    def rows(self, include_zero_counts: bool = True):
        """``(type, count)`` pairs in the canonical type order."""
        for t in type_table(self.n, self.q).types:
            v = self[t]
            if v or include_zero_counts:
                yield t, v

    def to_csv(self) -> str:
        lines = ["type,count"]
        lines.extend(f"\"{t}\",{v}" for t, v in self.rows())
        return "\n".join(lines) + "\n"


def spectrum(c: LinearCode, cap: int = SPECTRUM_CAP) -> Spectrum:
    """Exact spectrum by enumerating every codeword; refuses beyond ``cap``."""
    total = c.q**c.k
    if total > cap:
        raise EnumerationTooLarge(f"enumeration too large: q^k = {total} > {cap}")
    table = type_table(c.n, c.q)
    gen = np.ascontiguousarray(c.generator.array, dtype=np.int64)
    hist = kernels.type_histogram(gen, c.q, table.rank_offsets, len(table))
    return Spectrum(c.n, c.q, {t: int(v) for t, v in zip(table.types, hist) if v})


@dataclass(frozen=True)
class GoodnessResult:
    good: bool
    witness: TypeVector | None = None
    count: int | None = None
    bound: object = None

    def __bool__(self):
        return self.good


def _is_exact(a) -> bool:
    return isinstance(a, (int, Fraction)) and not isinstance(a, bool)


def spectrum_bound_check(c: LinearCode, factor, spec: Spectrum | None = None) -> GoodnessResult:
    """Check ``M_Q(C) <= factor * q^(k-n) * |T_Q|`` for every nonzero type Q.

    Both sides are scaled by ``q^(n-k)`` so the comparison is in integers
    whenever ``factor`` is an int or Fraction; a float ``factor`` is compared
    with a relative tolerance of 1e-9.  On failure the first violating type
    (in canonical order) is returned with ``M_Q`` and the unscaled bound.
    """
    if spec is None:
        spec = spectrum(c)
    scale = c.q ** (c.n - c.k)
    exact = _is_exact(factor)
    factor = Fraction(factor) if exact else float(factor)
    for t, m in spec.rows(include_zero_counts=False):
        if t.is_zero_type():
            continue
        size = type_class_size(t)
        if exact:
            ok = m * scale <= factor * size
        else:
            ok = m * scale <= factor * size * (1 + FLOAT_RTOL)
        if not ok:
            return GoodnessResult(False, t, m, factor * size / scale)
    return GoodnessResult(True)


def is_a_good(c: LinearCode, a, spec: Spectrum | None = None) -> GoodnessResult:
    """A-goodness: ``M_Q(C) <= A (|P_n|-1) q^(-n(1-k/n)) |T_Q|`` for all nonzero Q."""
    factor = num_types(c.n, c.q) - 1
    scaled = Fraction(a) * factor if _is_exact(a) else float(a) * factor
    return spectrum_bound_check(c, scaled, spec)


def tight_spectrum_constant(c: LinearCode, spec: Spectrum | None = None) -> Fraction:
    """Smallest ``a`` with ``M_Q(C \\ {0}) <= a q^(k-n) |T_Q|`` for every type Q."""
    if spec is None:
        spec = spectrum(c)
    scale = c.q ** (c.n - c.k)
    best = Fraction(0)
    for t, m in spec.without_zero().rows(include_zero_counts=False):
        best = max(best, Fraction(m * scale, type_class_size(t)))
    return best


def is_compatible_pair(c1: LinearCode, c2: LinearCode) -> bool:
    """``C2^perp`` contained in ``C1``, checked together with ``C1^perp`` in ``C2``."""
    if c1.n != c2.n or c1.q != c2.q:
        raise FieldError("codes of different length or alphabet")
    forward = all(contains(c1, row) for row in dual(c2).generator.array)
    backward = all(contains(c2, row) for row in dual(c1).generator.array)
    if forward != backward:
        raise BoundViolation("css_cond equivalence", "the two containments disagree")
    return forward


def enumerate_codes(n: int, k: int, q: int) -> Iterator[LinearCode]:
    """Every k-dimensional subspace of F_q^n, one RREF generator each."""
    for pivots in itertools.combinations(range(n), k):
        free_slots = [
            (i, j)
            for i, p in enumerate(pivots)
            for j in range(p + 1, n)
            if j not in pivots
        ]
        for values in itertools.product(range(q), repeat=len(free_slots)):
            g = np.zeros((k, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                g[i, p] = 1
            for (i, j), v in zip(free_slots, values):
                g[i, j] = v
            yield LinearCode(FieldMatrix(g, q))


_CODE_HEADER = re.compile(r"^code n=(\d+) k=(\d+) q=(\d+)$")


def format_code(c: LinearCode) -> str:
    return f"code n={c.n} k={c.k} q={c.q}\n" + format_matrix(c.generator)


def parse_code(text: str) -> LinearCode:
    lines = text.splitlines()
    if not lines:
        raise FieldError("empty code file")
    match = _CODE_HEADER.match(lines[0].strip())
    if match is None:
        raise FieldError(f"bad code header: {lines[0]!r}")
    n, k, q = (int(g) for g in match.groups())
    g = parse_matrix(lines[1:])
    if g.q != q or g.cols != n:
        raise FieldError("code header disagrees with the matrix header")
    code = LinearCode(g)
    if code.k != k:
        raise FieldError(f"declared k={k} but the generator has rank {code.k}")
    return code
