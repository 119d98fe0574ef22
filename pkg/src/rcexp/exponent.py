"""Additive channels over F_q and the exponents that bound their decoding error.

The random coding exponent is

    E_r(W, r) = min_Q  D(Q || W) + |1 - r - H(Q)|^+

with everything in base-q units.  ``exponent_over_types`` minimises the same
objective (with a free threshold T in place of 1 - r) exactly over the types of
length n; ``random_coding_exponent`` approximates the minimum over the whole
simplex.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from rcexp.codes import LinearCode, Spectrum, spectrum, spectrum_bound_check
from rcexp.field import Word
from rcexp.typeclasses import Distribution, entropy, num_types, type_table

__all__ = [
    "AdditiveChannel",
    "ExponentResult",
    "GoodCodeBound",
    "exponent_over_types",
    "random_coding_exponent",
    "good_code_error_bound",
    "type_exponent_error_bound",
    "inner_bound",
    "word_probability",
    "exponent_objective",
]

SPEC_TOL = 1e-9
RENORM_TOL = 1e-12
REFINE_TOL = 1e-6


class AdditiveChannel:
    """Memoryless channel ``y = x + e`` with i.i.d. noise ``e ~ error_law``."""

    __slots__ = ("error_law",)

    def __init__(self, error_law):
        if not isinstance(error_law, Distribution):
            error_law = Distribution(error_law)
        self.error_law = error_law

    @classmethod
    def from_spec(cls, text: str) -> "AdditiveChannel":
        """Parse ``"p0,p1,...,p_{q-1}"``; decimal strings are kept as exact rationals.

        Sums off by more than 1e-9 are rejected; sums off by more than 1e-12
        are renormalised with a warning.
        """
        probs = [Fraction(p.strip()) for p in text.split(",") if p.strip()]
        total = sum(probs)
        gap = abs(float(total) - 1.0)
        if gap > SPEC_TOL:
            raise ValueError(f"channel probabilities sum to {float(total)}")
        if total != 1:
            if gap > RENORM_TOL:
                warnings.warn(f"renormalising channel probabilities (sum {float(total)})")
            probs = [p / total for p in probs]
        return cls(Distribution(probs))

    @classmethod
    def binary(cls, p) -> "AdditiveChannel":
        p = Fraction(p) if isinstance(p, (str, int, Fraction)) else p
        return cls(Distribution((1 - p, p)))

    @classmethod
    def noiseless(cls, q: int) -> "AdditiveChannel":
        return cls(Distribution.point_mass(q))

    @classmethod
    def uniform(cls, q: int) -> "AdditiveChannel":
        return cls(Distribution.uniform(q))

    @property
    def q(self) -> int:
        return self.error_law.q

    def entropy(self) -> float:
        return entropy(self.error_law)

    def capacity(self) -> float:
        """``1 - H(W)`` in base-q units."""
        return 1.0 - self.entropy()

    def to_spec(self) -> str:
        return ",".join(str(p) for p in self.error_law)

    def __repr__(self):
        return f"AdditiveChannel({self.to_spec()})"


def word_probability(w: AdditiveChannel, x) -> float | Fraction:
    """``W^n(x) = prod_t W(x_t)``; exact for a rational error law."""
    law = w.error_law
    symbols = x.symbols if isinstance(x, Word) else [int(s) for s in x]
    if isinstance(x, Word) and x.q != w.q:
        raise ValueError("word and channel alphabets differ")
    value = Fraction(1) if law.is_exact() else 1.0
    for s in symbols:
        value *= law[s]
    return value


@dataclass(frozen=True)
class ExponentResult:
    value: float
    minimizer: Distribution
    resolution: str

    def __float__(self):
        return self.value


def exponent_objective(qd, w: AdditiveChannel, threshold: float) -> float:
    """``D(Q||W) + |threshold - H(Q)|^+`` in base-q units (``inf`` off the support)."""
    qv = qd.as_array() if isinstance(qd, Distribution) else np.asarray(qd, dtype=float)
    wv = w.error_law.as_array()
    lnq = math.log(w.q)
    d = 0.0
    h = 0.0
    for a, b in zip(qv, wv):
        if a > 0:
            if b == 0:
                return math.inf
            la = math.log(a)
            d += a * (la - math.log(b))
            h -= a * la
    return max(d / lnq, 0.0) + max(threshold - h / lnq, 0.0)


def exponent_over_types(w: AdditiveChannel, t_param: float, n: int) -> ExponentResult:
    """Exact ``min_{Q in P_n} D(Q||W) + |T - H(Q)|^+``.

    Types with infinite divergence are skipped; ties go to the
    lexicographically smallest count vector.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    wv = w.error_law.as_array()
    if not np.any(wv > 0):
        raise ValueError("channel with empty support")
    q = w.q
    table = type_table(n, q)
    qs = table.counts / n
    lnq = math.log(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        logq = np.where(qs > 0, np.log(np.where(qs > 0, qs, 1.0)), 0.0)
        logw = np.log(np.where(wv > 0, wv, 1.0))
        off_support = np.any((qs > 0) & (wv[None, :] == 0), axis=1)
        div = np.maximum((qs * (logq - logw[None, :])).sum(axis=1) / lnq, 0.0)
        ent = np.maximum(-(qs * logq).sum(axis=1) / lnq, 0.0)
    values = div + np.maximum(float(t_param) - ent, 0.0)
    values[off_support] = np.inf
    best = float(values.min())
    candidates = np.flatnonzero(values == best)
    pick = min(candidates, key=lambda i: table.types[i].counts)
    minimizer = table.types[pick].distribution()
    return ExponentResult(best, minimizer, f"types n={n}")


def _tilted(wv: np.ndarray, support: np.ndarray, lam: float) -> np.ndarray:
    out = np.zeros_like(wv)
    vals = np.exp(lam * np.log(wv[support]))
    out[support] = vals / vals.sum()
    return out


def _coordinate_descent(qv, f, support, step, tol):
    best = f(qv)
    while step >= tol:
        improved = False
        for i in support:
            for j in support:
                if i == j or qv[i] <= 0:
                    continue
                move = min(step, qv[i])
                cand = qv.copy()
                cand[i] -= move
                cand[j] += move
                val = f(cand)
                if val < best:
                    qv, best, improved = cand, val, True
        if not improved:
            step /= 2
    return qv, best


def _golden(f, lo, hi, tol=1e-12):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def random_coding_exponent(w: AdditiveChannel, r: float, resolution: int = 32,
                           tol: float = REFINE_TOL) -> ExponentResult:
    """``E_r(W, r)`` over the continuous simplex.

    Seeds with the best type of length ``resolution``, refines by pairwise
    coordinate descent on the support of W (step halving down to ``tol``),
    then polishes along the tilted family ``Q ~ W^lam``, ``lam in [0, 1]``,
    which contains the minimiser; the smaller value wins.
    """
    if not 0 <= r <= 1:
        raise ValueError(f"rate r={r} outside [0, 1]")
    threshold = 1.0 - float(r)
    wv = w.error_law.as_array()
    support = np.flatnonzero(wv > 0)
    if support.size == 0:
        raise ValueError("channel with empty support")
    label = f"types n={resolution} + descent tol={tol:g}"
    if support.size == 1:
        point = Distribution.point_mass(w.q, int(support[0]))
        return ExponentResult(max(threshold, 0.0), point, label)

    def f(qv):
        return exponent_objective(qv, w, threshold)

    seed = exponent_over_types(w, threshold, resolution)
    qv, best = _coordinate_descent(seed.minimizer.as_array(), f, support, 1.0 / resolution, tol)

    lam_grid = np.linspace(0.0, 1.0, 201)
    tilt_vals = [f(_tilted(wv, support, lam)) for lam in lam_grid]
    i = int(np.argmin(tilt_vals))
    lam = _golden(lambda x: f(_tilted(wv, support, x)),
                  float(lam_grid[max(i - 1, 0)]), float(lam_grid[min(i + 1, 200)]))
    tilt_q = _tilted(wv, support, lam)
    tilt_best = f(tilt_q)
    # the endpoint lam = 1 is W itself; the golden search never evaluates it
    if tilt_vals[-1] <= tilt_best:
        tilt_q, tilt_best = _tilted(wv, support, 1.0), tilt_vals[-1]
    if tilt_best < best:
        qv, best = tilt_q, tilt_best
    return ExponentResult(best, Distribution(tuple(float(v) for v in qv / qv.sum())), label)


@dataclass(frozen=True)
class GoodCodeBound:
    """Error bound ``a_n |P_n|^2 q^(-n E_r(W, k/n))`` (clamped to 1) and its premise audit."""

    value: float
    raw: float
    exponent: float
    a_n: object
    premise_holds: bool
    witness: object = None


def good_code_error_bound(c: LinearCode, w: AdditiveChannel, a_n, spec: Spectrum | None = None,
                     resolution: int = 32) -> GoodCodeBound:
    """Bound on the minimum-entropy decoding error of ``c`` over ``w``.

    The premise ``M_Q(C) <= a_n q^(k-n) |T_Q|`` (nonzero Q) is checked and
    reported in ``premise_holds``; the bound itself is returned either way.
    """
    if a_n < 1:
        raise ValueError("a_n must be >= 1")
    if w.q != c.q:
        raise ValueError("code and channel alphabets differ")
    check = spectrum_bound_check(c, a_n, spec if spec is not None else spectrum(c))
    er = random_coding_exponent(w, c.k / c.n, resolution).value
    raw = float(a_n) * num_types(c.n, c.q) ** 2 * float(c.q) ** (-c.n * er)
    return GoodCodeBound(min(raw, 1.0), raw, er, a_n, check.good, check.witness)


def type_exponent_error_bound(c: LinearCode, w: AdditiveChannel, a_n) -> float:
    """``a_n |P_n|^2 q^(-n E_gen(W, 1 - k/n))`` with the type-restricted exponent, clamped to 1."""
    eg = exponent_over_types(w, 1.0 - c.k / c.n, c.n).value
    return min(float(a_n) * num_types(c.n, c.q) ** 2 * float(c.q) ** (-c.n * eg), 1.0)


def inner_bound(n: int, q: int, exponent: float, epsilon: float) -> float:
    """``|P_n|^3 q^(-n (E - eps))``, clamped to 1."""
    return min(num_types(n, q) ** 3 * float(q) ** (-n * (exponent - float(epsilon))), 1.0)
