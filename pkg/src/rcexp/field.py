"""Prime-field scalars, words and dense matrices over F_q.

Matrices are immutable wrappers around read-only ``int64`` numpy arrays whose
entries are always reduced to ``[0, q-1]``.  Only prime moduli are supported,
so the field arithmetic is plain modular integer arithmetic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from rcexp.errors import FieldError, SingularMatrixError

__all__ = [
    "is_prime",
    "check_modulus",
    "FieldElement",
    "Word",
    "FieldMatrix",
    "mat_mul",
    "mat_pow",
    "mat_inverse",
    "transpose",
    "rows_first",
    "rows_last",
    "rref",
    "rank",
    "row_space_basis",
    "null_space_basis",
    "format_matrix",
    "parse_matrix",
]


@lru_cache(maxsize=None)
def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def check_modulus(q) -> int:
    q = int(q)
    if not is_prime(q):
        raise FieldError(f"modulus must be prime, got q={q}")
    return q


class FieldElement:
    """An element of the prime field F_q."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int):
        self.q = check_modulus(q)
        self.value = int(value) % self.q

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise FieldError(f"modulus mismatch: {self.q} vs {other.q}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.q
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value + v, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value - v, self.q)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(v - self.value, self.q)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value * v, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.q)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return FieldElement(pow(self.value, self.q - 2, self.q), self.q)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FieldElement(v, self.q).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.q == other.q and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.q))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, q={self.q})"


@dataclass(frozen=True)
class Word:
    """A length-n word over F_q, stored as a tuple of residues."""

    symbols: tuple
    q: int

    def __post_init__(self):
        q = check_modulus(self.q)
        syms = tuple(int(s) for s in self.symbols)
        if not syms:
            raise FieldError("words have length n >= 1")
        if any(s < 0 or s >= q for s in syms):
            raise FieldError(f"symbols must lie in [0, {q - 1}]")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "q", q)

    @classmethod
    def zero(cls, n: int, q: int) -> "Word":
        return cls((0,) * n, q)

    @classmethod
    def from_index(cls, index: int, n: int, q: int) -> "Word":
        """Inverse of :meth:`index`; position 0 is the most significant digit."""
        digits = []
        for _ in range(n):
            index, d = divmod(index, q)
            digits.append(d)
        return cls(tuple(reversed(digits)), q)

    @property
    def n(self) -> int:
        return len(self.symbols)

    def index(self) -> int:
        """Lexicographic rank of the word among all q**n words."""
        v = 0
        for s in self.symbols:
            v = v * self.q + s
        return v

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def _check(self, other: "Word"):
        if self.q != other.q or self.n != other.n:
            raise FieldError("word length or modulus mismatch")

    def __add__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(tuple((a + b) % self.q for a, b in zip(self, other)), self.q)

    def __sub__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(tuple((a - b) % self.q for a, b in zip(self, other)), self.q)

    def dot(self, other: "Word") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self, other)) % self.q

    def as_array(self) -> np.ndarray:
        return np.array(self.symbols, dtype=np.int64)

    def __str__(self):
        sep = "" if self.q <= 10 else " "
        return sep.join(str(s) for s in self.symbols)


class FieldMatrix:
    """Immutable dense matrix over F_q.

    ``entries`` may be anything ``np.array`` accepts; values are reduced mod q.
    Zero-row matrices are allowed (they arise as bases of trivial spaces).
    """

    __slots__ = ("_a", "q")

    def __init__(self, entries, q: int):
        q = check_modulus(q)
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise FieldError(f"expected a 2-D array of entries, got ndim={a.ndim}")
        a %= q
        a.setflags(write=False)
        self._a = a
        self.q = q

    @classmethod
    def identity(cls, n: int, q: int) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), q)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> "FieldMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), q)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    @property
    def T(self) -> "FieldMatrix":
        return transpose(self)

    def row(self, i: int) -> Word:
        return Word(tuple(self._a[i]), self.q)

    def tolist(self):
        return self._a.tolist()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __pow__(self, e: int):
        return mat_pow(self, e)

    def __add__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        _same_shape(self, other)
        return FieldMatrix(self._a + other._a, self.q)

    def __sub__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        _same_shape(self, other)
        return FieldMatrix(self._a - other._a, self.q)

    def __neg__(self):
        return FieldMatrix(-self._a, self.q)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.q == other.q
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self):
        return hash((self.q, self._a.shape, self._a.tobytes()))

    def __repr__(self):
        return f"FieldMatrix({self._a.tolist()}, q={self.q})"


def _same_modulus(a: FieldMatrix, b: FieldMatrix):
    if a.q != b.q:
        raise FieldError(f"modulus mismatch: {a.q} vs {b.q}")


def _same_shape(a: FieldMatrix, b: FieldMatrix):
    _same_modulus(a, b)
    if a.shape != b.shape:
        raise FieldError(f"shape mismatch: {a.shape} vs {b.shape}")


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    _same_modulus(a, b)
    if a.cols != b.rows:
        raise FieldError(f"dimension mismatch: {a.shape} @ {b.shape}")
    # entries < q <= small prime, n <= a few dozen: int64 cannot overflow
    return FieldMatrix(a.array @ b.array, a.q)


def transpose(m: FieldMatrix) -> FieldMatrix:
    return FieldMatrix(m.array.T, m.q)


def mat_pow(m: FieldMatrix, e: int) -> FieldMatrix:
    """``m**e`` by square-and-multiply; negative ``e`` inverts first."""
    if not m.is_square():
        raise FieldError("matrix power needs a square matrix")
    e = int(e)
    if e < 0:
        m = mat_inverse(m)
        e = -e
    result = FieldMatrix.identity(m.rows, m.q)
    base = m
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def rref(m: FieldMatrix):
    """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
    q = m.q
    a = m.array.copy()
    nrows, ncols = a.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = pow(int(a[r, c]), q - 2, q)
        a[r] = (a[r] * inv) % q
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % q
        pivots.append(c)
        r += 1
    return FieldMatrix(a[:r], q), tuple(pivots)


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def row_space_basis(m: FieldMatrix) -> FieldMatrix:
    """Canonical (RREF) basis of the row space; equal spaces give equal matrices."""
    return rref(m)[0]


def null_space_basis(m: FieldMatrix) -> FieldMatrix:
    """Canonical basis of ``{y : m @ y^t = 0}``."""
    q = m.q
    reduced, pivots = rref(m)
    ncols = m.cols
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    r = reduced.array
    for j, f in enumerate(free):
        basis[j, f] = 1
        for i, pc in enumerate(pivots):
            basis[j, pc] = (-r[i, f]) % q
    return row_space_basis(FieldMatrix(basis, q))


def mat_inverse(m: FieldMatrix) -> FieldMatrix:
    """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
    if not m.is_square():
        raise FieldError("only square matrices can be inverted")
    n = m.rows
    aug = FieldMatrix(np.hstack([m.array, np.eye(n, dtype=np.int64)]), m.q)
    reduced, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or reduced.rows < n:
        raise SingularMatrixError("matrix is singular")
    return FieldMatrix(reduced.array[:n, n:], m.q)


def rows_first(m: FieldMatrix, count: int) -> FieldMatrix:
    if not 0 <= count <= m.rows:
        raise FieldError(f"row count {count} outside [0, {m.rows}]")
    return FieldMatrix(m.array[:count], m.q)


def rows_last(m: FieldMatrix, count: int) -> FieldMatrix:
    if not 0 <= count <= m.rows:
        raise FieldError(f"row count {count} outside [0, {m.rows}]")
    return FieldMatrix(m.array[m.rows - count:], m.q)


_HEADER = re.compile(r"^q=(\d+) rows=(\d+) cols=(\d+)$")


def format_matrix(m: FieldMatrix) -> str:
    lines = [f"q={m.q} rows={m.rows} cols={m.cols}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in m.array)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str | Iterable[str]) -> FieldMatrix:
    """Parse the header-plus-rows text format written by :func:`format_matrix`."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.rstrip("\r\n") for ln in lines]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FieldError("empty matrix text")
    match = _HEADER.match(lines[0].strip())
    if match is None:
        raise FieldError(f"bad matrix header: {lines[0]!r}")
    q, nrows, ncols = (int(g) for g in match.groups())
    body = lines[1:]
    if len(body) != nrows:
        raise FieldError(f"header declares {nrows} rows, found {len(body)}")
    entries = np.zeros((nrows, ncols), dtype=np.int64)
    for i, line in enumerate(body):
        parts = line.split(" ")
        if len(parts) != ncols or not all(p.isdigit() for p in parts):
            raise FieldError(f"row {i + 1}: expected {ncols} space-separated digits")
        vals = [int(p) for p in parts]
        if any(v >= q for v in vals):
            raise FieldError(f"row {i + 1}: entry out of range for q={q}")
        entries[i] = vals
    return FieldMatrix(entries, q)


def as_word_array(x, n: int, q: int) -> np.ndarray:
    """Coerce a Word or integer sequence of length n to an int64 array."""
    if isinstance(x, Word):
        if x.q != q:
            raise FieldError(f"modulus mismatch: {x.q} vs {q}")
        arr = x.as_array()
    else:
        arr = np.asarray(x, dtype=np.int64)
    if arr.shape != (n,):
        raise FieldError(f"expected a word of length {n}, got shape {arr.shape}")
    if np.any((arr < 0) | (arr >= q)):
        raise FieldError(f"symbols must lie in [0, {q - 1}]")
    return arr


def words_from_indices(indices: Sequence[int] | np.ndarray, n: int, q: int) -> np.ndarray:
    """Rows of symbols for lexicographic word indices (position 0 most significant)."""
    idx = np.asarray(indices, dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def indices_from_words(words: np.ndarray, q: int) -> np.ndarray:
    n = words.shape[-1]
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return words @ powers
