"""Minimum-entropy syndrome decoding and checks of its error probability.

The decoder keeps one representative per coset of F_q^n / C, chosen to have
the smallest type entropy in its coset (ties: lexicographically smallest
word).  Decoding ``y`` returns ``y - rep(syndrome(y))``, so it succeeds exactly
when the noise word is one of the representatives.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from rcexp import kernels
from rcexp.codes import LinearCode, dual, spectrum, tight_spectrum_constant
from rcexp.errors import BoundViolation, EnumerationTooLarge, FieldError, PremiseViolation
from rcexp.exponent import AdditiveChannel, good_code_error_bound
from rcexp.field import FieldMatrix, Word, as_word_array, indices_from_words, words_from_indices
from rcexp.typeclasses import TypeVector, entropy, num_types, type_class_size, type_table

__all__ = [
    "RepresentativeTable",
    "ErrorProbabilityReport",
    "PermutationAverageReport",
    "build_representatives",
    "decode",
    "exact_error_probability",
    "simulate_error_probability",
    "permuted_failure_average",
    "apply_permutation",
    "product_measure",
]

SWEEP_CAP = 1 << 22
PERMUTATION_MAX_N = 6
GENERAL_MEASURE_MAX_N = 4


@dataclass(frozen=True, eq=False)
class RepresentativeTable:
    """Coset representatives indexed by syndrome value.

    ``leaders[s]`` is the representative (as a symbol row) for the syndrome
    whose base-q digits, most significant first, give the integer ``s``.
    """

    code: LinearCode
    check: FieldMatrix
    leaders: np.ndarray
    leader_indices: np.ndarray

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def q(self) -> int:
        return self.code.q

    def syndrome(self, y) -> int:
        arr = as_word_array(y, self.n, self.q)
        syn = (self.check.array @ arr) % self.q
        value = 0
        for s in syn:
            value = value * self.q + int(s)
        return value

    def syndromes(self, words: np.ndarray) -> np.ndarray:
        """Syndrome integers for a batch of symbol rows."""
        m = self.check.rows
        if m == 0:
            return np.zeros(words.shape[0], dtype=np.int64)
        place = self.q ** np.arange(m - 1, -1, -1, dtype=np.int64)
        return ((words @ self.check.array.T) % self.q) @ place

    @property
    def reps(self) -> dict:
        """Mapping from syndrome (as a tuple of symbols) to representative word."""
        m = self.check.rows
        out = {}
        for s, row in enumerate(self.leaders):
            digits = tuple(int(d) for d in np.base_repr(s, self.q).rjust(m, "0")[-m:]) if m else ()
            out[digits] = Word(tuple(row), self.q)
        return out

    def representatives(self) -> list:
        return [Word(tuple(row), self.q) for row in self.leaders]

    def __len__(self):
        return len(self.leader_indices)


def build_representatives(c: LinearCode, cap: int = SWEEP_CAP) -> RepresentativeTable:
    """Sweep all of F_q^n and keep each coset's entropy-minimal word."""
    n, q = c.n, c.q
    if q**n > cap:
        raise EnumerationTooLarge(f"q^n = {q**n} exceeds the sweep cap {cap}")
    check = dual(c).generator
    table = type_table(n, q)
    chk = np.ascontiguousarray(check.array, dtype=np.int64).reshape(check.rows, n)
    idx = kernels.coset_leaders(chk, q, n, table.rank_offsets, table.entropy_levels)
    if np.any(idx < 0):
        raise AssertionError("a syndrome was never reached")  # parity checks have full rank
    leaders = words_from_indices(idx, n, q)
    leaders.setflags(write=False)
    idx.setflags(write=False)
    return RepresentativeTable(c, check, leaders, idx)


def decode(tbl: RepresentativeTable, y) -> Word:
    arr = as_word_array(y, tbl.n, tbl.q)
    rep = tbl.leaders[tbl.syndrome(arr)]
    return Word(tuple((arr - rep) % tbl.q), tbl.q)


def _type_histogram(words: np.ndarray, q: int) -> Counter:
    counts = np.stack([(words == u).sum(axis=1) for u in range(q)], axis=1)
    return Counter(tuple(int(v) for v in row) for row in counts)


def _mass_of(hist: Counter, law: Sequence, exact: bool):
    total = Fraction(0) if exact else 0.0
    for counts, mult in hist.items():
        p = Fraction(1) if exact else 1.0
        for u, c in enumerate(counts):
            if c:
                p *= (Fraction(law[u]) if exact else float(law[u])) ** c
        total += mult * p
    return total


def exact_error_probability(tbl: RepresentativeTable, w: AdditiveChannel, exact: bool = False):
    """``1 - sum_{x in I} W^n(x)``; a Fraction when ``exact`` (error law converted exactly)."""
    if w.q != tbl.q:
        raise ValueError("code and channel alphabets differ")
    hist = _type_histogram(tbl.leaders, tbl.q)
    success = _mass_of(hist, w.error_law.probs, exact)
    if exact:
        return 1 - success
    return max(0.0, 1.0 - success)


@dataclass(frozen=True)
class ErrorProbabilityReport:
    exact: float | None
    estimate: float
    trials: int
    std_error: float
    bound: float
    failures: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "exact": self.exact,
            "estimate": self.estimate,
            "trials": self.trials,
            "failures": self.failures,
            "std_error": self.std_error,
            "bound": self.bound,
            "seed": self.seed,
        }


def simulate_error_probability(tbl: RepresentativeTable, w: AdditiveChannel, trials: int, seed: int,
                               batch: int = 1 << 16) -> ErrorProbabilityReport:
    """Monte Carlo estimate of the decoding error; reproducible for a given seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if w.q != tbl.q:
        raise ValueError("code and channel alphabets differ")
    rng = np.random.default_rng(seed)
    law = w.error_law.as_array()
    law = law / law.sum()
    failures = 0
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        noise = rng.choice(tbl.q, size=(b, tbl.n), p=law)
        hit = tbl.leader_indices[tbl.syndromes(noise)] == indices_from_words(noise, tbl.q)
        failures += int(b - hit.sum())
        done += b
    est = failures / trials
    std = math.sqrt(est * (1 - est) / trials)
    a_n = max(Fraction(1), tight_spectrum_constant(tbl.code))
    bound = good_code_error_bound(tbl.code, w, a_n).value
    return ErrorProbabilityReport(exact_error_probability(tbl, w), est, trials, std, bound, failures, seed)


def apply_permutation(pi: Sequence[int], c: LinearCode) -> LinearCode:
    """``pi(C)`` where ``pi(x) = (x_{pi(0)}, ..., x_{pi(n-1)})``."""
    pi = [int(p) for p in pi]
    if sorted(pi) != list(range(c.n)):
        raise FieldError(f"{pi} is not a permutation of range({c.n})")
    return LinearCode(FieldMatrix(c.generator.array[:, pi], c.q))


def product_measure(w: AdditiveChannel, n: int, exact: bool = True) -> list:
    """``W^n`` on every word, listed by word index."""
    law = [Fraction(p) for p in w.error_law] if exact else [float(p) for p in w.error_law]
    words = words_from_indices(np.arange(w.q**n), n, w.q)
    out = []
    for row in words:
        p = Fraction(1) if exact else 1.0
        for s in row:
            p *= law[s]
        out.append(p)
    return out


@dataclass(frozen=True)
class PermutationAverageReport:
    lhs: Fraction
    rhs: float
    a_n: object
    t_param: object
    holds: bool
    permutation_counts_ok: bool
    balanced_perm_ok: bool
    premise_type: TypeVector | None = None

    @property
    def slack(self) -> float:
        return self.rhs - float(self.lhs)

    def to_dict(self) -> dict:
        return {
            "lhs": float(self.lhs),
            "lhs_exact": str(self.lhs),
            "rhs": self.rhs,
            "a_n": str(self.a_n),
            "T": str(self.t_param),
            "holds": self.holds,
            "permutation_counts_ok": self.permutation_counts_ok,
            "balanced_perm_ok": self.balanced_perm_ok,
            "binding_type": None if self.premise_type is None else str(self.premise_type),
        }


def permuted_failure_average(c: LinearCode, channel: AdditiveChannel | None = None, a_n=None,
                             t_param=None, measure: Sequence | None = None,
                             strict: bool = True) -> PermutationAverageReport:
    """Brute-force both sides of the permutation-averaged failure bound.

    lhs = (1/n!) sum_pi P_n(pi(I)^c), computed exactly over all of S_n;
    rhs = a_n |P_n| sum_Q P_n(T_Q) q^(-n |T - H(Q)|^+).

    ``measure`` (a probability per word index) replaces the i.i.d. channel
    law for n <= 4.  ``a_n`` defaults to the tight spectrum constant clamped
    at 1 and ``T`` to ``1 - k/n``.  On the way the per-type permutation count
    identity ``|T_Q| cnt_Q = n! M_Q(C \\ {0})`` and ``cnt_Q / n! <= a_n q^(-nT)``
    are checked.  With ``strict`` any failure raises :class:`BoundViolation`.
    """
    n, q, k = c.n, c.q, c.k
    if n > PERMUTATION_MAX_N:
        raise EnumerationTooLarge(f"n = {n} > {PERMUTATION_MAX_N}: too many permutations")
    if (channel is None) == (measure is None):
        raise ValueError("give exactly one of channel or measure")
    if measure is not None:
        if n > GENERAL_MEASURE_MAX_N:
            raise EnumerationTooLarge(f"general measures are limited to n <= {GENERAL_MEASURE_MAX_N}")
        pn = list(measure)
        if len(pn) != q**n:
            raise ValueError(f"measure must list {q**n} word probabilities")
    else:
        if channel.q != q:
            raise ValueError("code and channel alphabets differ")
        pn = product_measure(channel, n, exact=channel.error_law.is_exact())

    t_param = Fraction(n - k, n) if t_param is None else t_param
    spec = spectrum(c).without_zero()
    table = type_table(n, q)
    nt = Fraction(t_param) * n if isinstance(t_param, (int, Fraction)) else float(t_param) * n
    exact_t = isinstance(nt, Fraction) and nt.denominator == 1
    qnt = Fraction(q) ** int(nt) if exact_t else float(q) ** float(nt)

    # premise: M_Q(C\0)/|T_Q| <= a_n q^(-nT)
    ratios = {t: Fraction(m, type_class_size(t)) * qnt if exact_t else m / type_class_size(t) * qnt
              for t, m in spec.rows(include_zero_counts=False)}
    binding = max(ratios, key=ratios.get) if ratios else None
    tight = ratios[binding] if ratios else 0
    if a_n is None:
        a_n = max(Fraction(1), tight) if exact_t else max(1.0, tight)
    if a_n < 1:
        raise ValueError("a_n must be >= 1")
    for t, v in ratios.items():
        if v > a_n:
            raise PremiseViolation(f"premise fails at type {t}: ratio {v} > a_n = {a_n}", witness=t)

    tbl = build_representatives(c)
    reps = tbl.leaders
    codewords = c.codeword_array()
    nonzero_cw = codewords[codewords.any(axis=1)]
    total_mass = sum(pn)
    nfact = math.factorial(n)
    lhs_sum = 0
    hits = np.zeros(q**n, dtype=np.int64)
    for pi in itertools.permutations(range(n)):
        image = indices_from_words(reps[:, list(pi)], q)
        lhs_sum += total_mass - sum(pn[i] for i in image)
        if nonzero_cw.size:
            np.add.at(hits, indices_from_words(nonzero_cw[:, list(pi)], q), 1)
    lhs = lhs_sum / nfact
    if not isinstance(lhs, Fraction):
        lhs = Fraction(lhs)

    # the number of permutations covering y depends on its type only
    all_words = words_from_indices(np.arange(q**n), n, q)
    word_types = [table.types[table.rank(np.bincount(row, minlength=q))] for row in all_words]
    cnt = {}
    counts_ok = True
    for idx, t in enumerate(word_types):
        v = int(hits[idx])
        if cnt.setdefault(t, v) != v:
            counts_ok = False
    for t, v in cnt.items():
        if type_class_size(t) * v != nfact * spec[t]:
            counts_ok = False
    bp_limit = Fraction(a_n) / qnt if exact_t and not isinstance(a_n, float) else float(a_n) / float(qnt)
    balanced_ok = all(Fraction(v, nfact) <= bp_limit if isinstance(bp_limit, Fraction)
                      else v / nfact <= bp_limit * (1 + 1e-12) for v in cnt.values())

    type_mass = {}
    for idx, t in enumerate(word_types):
        type_mass[t] = type_mass.get(t, 0) + pn[idx]
    tf = float(t_param)
    acc = 0.0
    for t, mass in type_mass.items():
        acc += float(mass) * float(q) ** (-n * max(tf - entropy(t), 0.0))
    rhs = float(a_n) * num_types(n, q) * acc
    holds = float(lhs) <= rhs + 1e-12
    report = PermutationAverageReport(lhs, rhs, a_n, t_param, holds, counts_ok, balanced_ok, binding)
    if strict:
        if not counts_ok:
            raise BoundViolation("permutation count identity", str(c))
        if not balanced_ok:
            raise BoundViolation("permutation balance bound", str(c))
        if not holds:
            raise BoundViolation("permutation-averaged failure bound", f"lhs={float(lhs)} > rhs={rhs}")
    return report
