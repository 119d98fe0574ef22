"""Companion-matrix code ensembles and the counting arguments run over them.

For a primitive companion matrix T of degree n the ensemble is the ordered
list of pairs ``(rowspace(T^i first k1 rows), rowspace((T^-i)^t last k2 rows))``
for ``i = 1 .. q^n - 1``.  Every nonzero word lies in exactly ``q^k1 - 1`` of
the first codes (and ``q^k2 - 1`` of the second), which is what the averaging
and census functions below rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from rcexp import kernels
from rcexp.codes import LinearCode, Spectrum, is_a_good, spectrum
from rcexp.errors import BoundViolation, EnumerationTooLarge, FieldError
from rcexp.field import (
    FieldMatrix,
    Word,
    check_modulus,
    mat_inverse,
    rows_first,
    rows_last,
    transpose,
)
from rcexp.typeclasses import type_class_size, type_table

__all__ = [
    "MonicPolynomial",
    "EnsemblePair",
    "BalanceResult",
    "CensusResult",
    "companion_matrix",
    "prime_factors",
    "multiplicative_order_is",
    "is_primitive",
    "find_primitive_poly",
    "build_ensemble",
    "verify_balanced",
    "average_spectrum",
    "count_failing_members",
    "census_bad_codes",
    "field_closure_witness",
    "q_power",
]

SEARCH_CAP = 1 << 22
SWEEP_CAP = 1 << 22


@dataclass(frozen=True)
class MonicPolynomial:
    """``x^n - f_{n-1} x^{n-1} - ... - f_1 x - f_0`` over F_q.

    ``f`` holds ``f_0 .. f_{n-1}`` exactly as they appear in the companion
    matrix, i.e. the negated low-order coefficients.
    """

    f: tuple
    q: int

    def __post_init__(self):
        q = check_modulus(self.q)
        f = tuple(int(v) % q for v in self.f)
        if not f:
            raise FieldError("degree must be >= 1")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], q: int) -> "MonicPolynomial":
        """From ascending coefficients ``a_0 .. a_{n-1}`` of ``x^n + sum a_i x^i``."""
        return cls(tuple(-int(a) for a in coeffs), q)

    @classmethod
    def parse(cls, text: str, q: int) -> "MonicPolynomial":
        """Ascending coefficients including the leading 1, e.g. ``"1,1,0,0,1"``."""
        coeffs = [int(p) % q for p in text.replace(" ", "").split(",")]
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise FieldError(f"{text!r} is not a monic polynomial of degree >= 1")
        return cls.from_coefficients(coeffs[:-1], q)

    @property
    def degree(self) -> int:
        return len(self.f)

    def coefficients(self) -> tuple:
        """Ascending ``a_0 .. a_{n-1}`` of ``x^n + sum a_i x^i``."""
        return tuple((-v) % self.q for v in self.f)

    def evaluate(self, m: FieldMatrix) -> FieldMatrix:
        """``f(M) = M^n - sum f_i M^i``."""
        n = self.degree
        acc = FieldMatrix.zeros(m.rows, m.cols, self.q)
        power = FieldMatrix.identity(m.rows, self.q)
        for i in range(n):
            acc = acc - FieldMatrix(self.f[i] * power.array, self.q)
            power = power @ m
        return power + acc

    def __str__(self):
        terms = [f"x^{self.degree}" if self.degree > 1 else "x"]
        for i, a in reversed(list(enumerate(self.coefficients()))):
            if not a:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if a == 1:
                terms.append(mono)
            else:
                terms.append(f"{a}" if i == 0 else f"{a}{mono}")
        return " + ".join(terms)

    def to_text(self) -> str:
        return ",".join(str(a) for a in self.coefficients() + (1,))


def companion_matrix(f: MonicPolynomial) -> FieldMatrix:
    """First row ``(0 ... 0 f_0)``; below it ``I_{n-1}`` beside ``(f_1 .. f_{n-1})^t``."""
    n = f.degree
    t = np.zeros((n, n), dtype=np.int64)
    t[0, n - 1] = f.f[0]
    for i in range(1, n):
        t[i, i - 1] = 1
        t[i, n - 1] = f.f[i]
    return FieldMatrix(t, f.q)


def prime_factors(m: int) -> list:
    """Distinct prime factors by trial division."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def multiplicative_order_is(t: FieldMatrix, order: int) -> bool:
    ident = FieldMatrix.identity(t.rows, t.q)
    if t**order != ident:
        return False
    return all(t ** (order // p) != ident for p in prime_factors(order))


def is_primitive(f: MonicPolynomial) -> bool:
    """Whether the companion matrix of ``f`` has order exactly ``q^n - 1``."""
    if f.f[0] == 0:
        return False
    return multiplicative_order_is(companion_matrix(f), f.q**f.degree - 1)


def find_primitive_poly(q: int, n: int) -> MonicPolynomial:
    """Smallest primitive monic polynomial of degree n.

    Candidates are ordered by their ascending coefficient tuple read with the
    highest-degree coefficient most significant, so for q=2, n=4 the answer is
    ``x^4 + x + 1``.
    """
    q = check_modulus(q)
    if n < 1:
        raise FieldError("degree must be >= 1")
    if q**n > SEARCH_CAP:
        raise EnumerationTooLarge(f"search space too large: q^n = {q**n} > {SEARCH_CAP}")
    for value in range(q**n):
        coeffs = [(value // q**i) % q for i in range(n)]
        f = MonicPolynomial.from_coefficients(coeffs, q)
        if is_primitive(f):
            return f
    raise AssertionError("no primitive polynomial found")  # cannot happen for prime q


@dataclass(frozen=True)
class EnsemblePair:
    index: int
    c1: LinearCode
    c2: LinearCode


def build_ensemble(t: FieldMatrix, k1: int, k2: int, check_order: bool = True) -> list:
    """The ordered pairs ``(C_1^(i), C_2^(i))`` for ``i = 1 .. q^n - 1``."""
    if not t.is_square():
        raise FieldError("T must be square")
    n, q = t.rows, t.q
    if not 0 <= n - k2 <= k1 <= n:
        raise FieldError(f"need 0 <= n-k2 <= k1 <= n, got n={n}, k1={k1}, k2={k2}")
    size = q**n - 1
    if check_order and not multiplicative_order_is(t, size):
        raise FieldError(f"T does not have multiplicative order q^n - 1 = {size}")
    step_inv_t = transpose(mat_inverse(t))
    power = FieldMatrix.identity(n, q)
    inv_t_power = FieldMatrix.identity(n, q)
    pairs = []
    for i in range(1, size + 1):
        power = power @ t
        inv_t_power = inv_t_power @ step_inv_t
        c1 = LinearCode(rows_first(power, k1))
        c2 = LinearCode(rows_last(inv_t_power, k2))
        pairs.append(EnsemblePair(i, c1, c2))
    return pairs


def _common_params(codes: Sequence[LinearCode]):
    if not codes:
        raise ValueError("empty code list")
    n, q, k = codes[0].n, codes[0].q, codes[0].k
    for c in codes:
        if (c.n, c.q, c.k) != (n, q, k):
            raise ValueError("codes with heterogeneous (n, q, k)")
    return n, q, k


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    value: int | None
    witness: Word | None
    footnote_holds: bool | None
    members: int
    dimension: int

    def __bool__(self):
        return self.balanced


def verify_balanced(codes: Sequence[LinearCode]) -> BalanceResult:
    """Count, for every nonzero word, how many listed codes contain it.

    The counts come from enumerating each code's codewords (the pairs
    ``(x, C)`` counted from the code side), which equals the word-by-word
    membership count.  A constant count V is returned with the check
    ``V (q^n - 1) == N (q^k - 1)``; otherwise the first word whose count
    differs from that of the first nonzero word.
    """
    n, q, k = _common_params(codes)
    if q**n > SWEEP_CAP:
        raise EnumerationTooLarge(f"q^n = {q**n} exceeds the sweep cap {SWEEP_CAP}")
    gens = np.ascontiguousarray(np.stack([c.generator.array for c in codes]), dtype=np.int64)
    counts = kernels.membership_counts(gens, q, n)
    nonzero = counts[1:]
    v = int(nonzero[0])
    off = np.flatnonzero(nonzero != v)
    if off.size:
        witness = Word.from_index(int(off[0]) + 1, n, q)
        return BalanceResult(False, None, witness, None, len(codes), k)
    footnote = v * (q**n - 1) == len(codes) * (q**k - 1)
    return BalanceResult(True, v, None, footnote, len(codes), k)


def average_spectrum(codes: Sequence[LinearCode], spectra: Sequence[Spectrum] | None = None) -> dict:
    """Exact per-type average of ``M_Q`` over the list.

    For every nonzero type the average must equal
    ``(q^k - 1)/(q^n - 1) |T_Q|`` and stay below ``q^(k-n) |T_Q|``;
    a mismatch raises :class:`BoundViolation`.
    """
    n, q, k = _common_params(codes)
    if spectra is None:
        spectra = [spectrum(c) for c in codes]
    table = type_table(n, q)
    total = len(codes)
    ratio = Fraction(q**k - 1, q**n - 1)
    avg = {}
    for t in table.types:
        mean = Fraction(sum(s[t] for s in spectra), total)
        avg[t] = mean
        if t.is_zero_type():
            continue
        size = type_class_size(t)
        if mean != ratio * size:
            raise BoundViolation(
                "average-spectrum identity",
                f"type {t}: average {mean} != {ratio * size}",
            )
        if mean > Fraction(q**k, q**n) * size:
            raise BoundViolation("average-spectrum bound", f"type {t}")
    return avg


def count_failing_members(values, a) -> list:
    """Members x with ``f_w(x) > mean_w |W| a`` for some condition w.

    ``values[x][w]`` is a non-negative table (members by conditions).  The
    per-condition Markov step ``#{x : f_w(x) > |W| a mean_w} <= |S| / (|W| a)``
    is checked on the way and a violation raises :class:`BoundViolation`.
    Integer tables with int/Fraction ``a`` are handled exactly.
    """
    arr = np.asarray(values)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("need a non-empty members-by-conditions table")
    if np.any(arr < 0):
        raise ValueError("table entries must be non-negative")
    if not a > 0:
        raise ValueError("a must be positive")
    members, conds = arr.shape
    exact = np.issubdtype(arr.dtype, np.integer) and isinstance(a, (int, Fraction))
    failing = np.zeros(members, dtype=bool)
    for w in range(conds):
        col = arr[:, w]
        if exact:
            col_sum = sum(int(v) for v in col)
            # f > mean*|W|*a  <=>  f*|S| > sum*|W|*a
            threshold = Fraction(col_sum) * conds * Fraction(a)
            bad = np.array([int(v) * members > threshold for v in col], dtype=bool)
            markov_ok = col_sum == 0 or Fraction(int(bad.sum())) <= Fraction(members) / (conds * Fraction(a))
        else:
            mean = float(col.mean())
            bad = col > mean * conds * float(a)
            markov_ok = mean == 0 or bad.sum() <= members / (conds * float(a)) + 1e-12
        if not markov_ok:
            raise BoundViolation("Markov inequality", f"condition {w}")
        failing |= bad
    out = [int(i) for i in np.flatnonzero(failing)]
    if exact:
        ok = Fraction(len(out)) <= Fraction(members) / Fraction(a)
    else:
        ok = len(out) <= members / float(a) + 1e-12
    if not ok:
        raise BoundViolation("failing-member count", f"{len(out)} failing members of {members}")
    return out


def q_power(q: int, exponent):
    """``q**exponent``: exact when the exponent is an integer, float otherwise."""
    e = Fraction(exponent)
    if e.denominator == 1:
        return Fraction(q) ** int(e)
    return float(q) ** float(e)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class CensusResult:
    epsilon: float
    bad_count: int
    bound_z: int
    failing_count: int
    bad_indices: tuple
    goodness: object


def census_bad_codes(codes: Sequence[LinearCode], epsilon, spectra: Sequence[Spectrum] | None = None) -> CensusResult:
    """Count codes that are not ``q^(eps n)``-good and compare with ``floor(N q^(-eps n))``.

    ``count_failing_members`` is run on the members-by-nonzero-types spectrum table
    with ``a = q^(eps n)``; on a balanced list every code that is not
    ``a``-good is among its failing members, and both counts must stay within
    the bound.  Violations raise :class:`BoundViolation`.
    """
    n, q, k = _common_params(codes)
    if spectra is None:
        spectra = [spectrum(c) for c in codes]
    eps = _as_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    a = q_power(q, eps * n)
    total = len(codes)
    z = math.floor(Fraction(total) / a if isinstance(a, Fraction) else total / a)
    types = [t for t in type_table(n, q).types if not t.is_zero_type()]
    table = np.array([[s[t] for t in types] for s in spectra], dtype=np.int64)
    failing = set(count_failing_members(table, a))
    goodness = tuple(is_a_good(c, a, s) for c, s in zip(codes, spectra))
    bad = tuple(i for i, g in enumerate(goodness) if not g)
    if len(bad) > z:
        raise BoundViolation("bad-code census", f"{len(bad)} bad codes > z = {z} at epsilon={epsilon}")
    return CensusResult(float(epsilon), len(bad), z, len(failing), bad, goodness)


def field_closure_witness(t: FieldMatrix):
    """Check that ``{O, I, T, ..., T^(q^n - 2)}`` is closed under addition.

    Returns ``None`` when closed, else a pair of exponents ``(i, j)`` (with
    ``None`` standing for the zero matrix) whose sum leaves the set.
    """
    n, q = t.rows, t.q
    size = q**n - 1
    if q**n > 1 << 12:
        raise EnumerationTooLarge("closure check limited to q^n <= 4096")
    elements = [(None, FieldMatrix.zeros(n, n, q))]
    power = FieldMatrix.identity(n, q)
    for i in range(size):
        elements.append((i, power))
        power = power @ t
    keys = {m.array.tobytes() for _, m in elements}
    if len(keys) != len(elements):
        return ("duplicate", None)
    for i, a in elements:
        for j, b in elements:
            if (a + b).array.tobytes() not in keys:
                return (i, j)
    return None
