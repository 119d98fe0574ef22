import itertools
from fractions import Fraction

import numpy as np
import pytest

from oracles import decoding_error, min_entropy_leaders, permutation_average
from rcexp.codes import LinearCode, contains, enumerate_codes
from rcexp.decoder import (
    build_representatives,
    decode,
    exact_error_probability,
    permuted_failure_average,
    product_measure,
    simulate_error_probability,
)
from rcexp.errors import EnumerationTooLarge, PremiseViolation
from rcexp.exponent import AdditiveChannel
from rcexp.field import Word
from rcexp.typeclasses import Distribution

REP2 = LinearCode.from_rows([[1, 1]], 2)
BSC1 = AdditiveChannel.binary(Fraction(1, 10))


def words_of(c):
    return {tuple(int(v) for v in row) for row in c.codeword_array()}


def sample_codes():
    yield REP2
    yield LinearCode.full(3, 2)
    yield LinearCode.zero(3, 2)
    yield LinearCode.from_rows([[1, 0, 1, 1, 0], [0, 1, 1, 0, 1]], 2)
    yield LinearCode.from_rows([[1, 1, 1, 0, 0, 0], [0, 0, 1, 1, 1, 0], [1, 0, 0, 0, 1, 1]], 2)
    yield LinearCode.from_rows([[1, 2, 0, 1], [0, 1, 1, 2]], 3)
    yield LinearCode.from_rows([[1, 1, 1]], 3)
    yield LinearCode.from_rows([[1, 2, 3]], 5)


def test_table_examples():
    tbl = build_representatives(REP2)
    assert sorted(str(w) for w in tbl.representatives()) == ["00", "01"]
    assert tbl.reps[(0,)] == Word((0, 0), 2)
    full = build_representatives(LinearCode.full(3, 2))
    assert [str(w) for w in full.representatives()] == ["000"]
    zero = build_representatives(LinearCode.zero(2, 3))
    assert len(zero) == 9
    assert sorted(w.index() for w in zero.representatives()) == list(range(9))


@pytest.mark.parametrize("c", list(sample_codes()), ids=str)
def test_table_matches_oracle(c):
    tbl = build_representatives(c)
    assert len(tbl) == c.q ** (c.n - c.k)
    assert sorted(tuple(w.symbols) for w in tbl.representatives()) == sorted(
        min_entropy_leaders(words_of(c), c.q, c.n)
    )
    assert tbl.reps[(0,) * (c.n - c.k)] == Word.zero(c.n, c.q)


@pytest.mark.parametrize("c", list(sample_codes()), ids=str)
def test_decode_lands_in_code(c):
    tbl = build_representatives(c)
    rep_set = {tuple(w.symbols) for w in tbl.representatives()}
    code = words_of(c)
    for y in itertools.product(range(c.q), repeat=c.n):
        d = decode(tbl, y)
        assert contains(c, d.symbols)
        if y in code:
            assert tuple(d.symbols) == y
    # sending any codeword, decoding succeeds exactly when the noise is a representative
    x = max(code)
    for e in itertools.product(range(c.q), repeat=c.n):
        y = tuple((a + b) % c.q for a, b in zip(x, e))
        assert (tuple(decode(tbl, y).symbols) == x) == (e in rep_set)


def test_decode_example():
    assert decode(build_representatives(REP2), (0, 1)) == Word((0, 0), 2)


def test_exact_error_examples():
    tbl = build_representatives(REP2)
    assert exact_error_probability(tbl, BSC1, exact=True) == Fraction(1, 10)
    assert exact_error_probability(tbl, BSC1) == pytest.approx(0.1, abs=1e-15)
    assert exact_error_probability(tbl, AdditiveChannel.noiseless(2)) == 0
    zero = build_representatives(LinearCode.zero(3, 2))
    assert exact_error_probability(zero, BSC1, exact=True) == 0


@pytest.mark.parametrize("c", list(sample_codes()), ids=str)
def test_exact_error_matches_sweep(c):
    law = [Fraction(1, 2)] + [Fraction(1, 2 * (c.q - 1))] * (c.q - 1)
    w = AdditiveChannel(Distribution(law))
    tbl = build_representatives(c)
    oracle = decoding_error(words_of(c), c.q, c.n, law)
    assert exact_error_probability(tbl, w, exact=True) == oracle
    assert abs(exact_error_probability(tbl, w) - float(oracle)) <= 1e-15


def test_simulation_examples():
    tbl = build_representatives(REP2)
    rep = simulate_error_probability(tbl, AdditiveChannel.noiseless(2), 5000, seed=3)
    assert rep.estimate == 0 and rep.failures == 0
    a = simulate_error_probability(tbl, BSC1, 20000, seed=11)
    b = simulate_error_probability(tbl, BSC1, 20000, seed=11)
    assert a == b
    assert abs(a.estimate - 0.1) <= 4 * a.std_error
    assert a.to_dict()["trials"] == 20000
    with pytest.raises(ValueError):
        simulate_error_probability(tbl, BSC1, 0, seed=1)


def test_sweep_cap():
    with pytest.raises(EnumerationTooLarge):
        build_representatives(LinearCode.zero(12, 2), cap=1024)


def test_product_measure_sums_to_one():
    w = AdditiveChannel(Distribution((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))))
    for n in range(1, 5):
        assert sum(product_measure(w, n)) == 1


def test_permutation_average_examples():
    n1 = LinearCode.from_rows([[1]], 2)
    rep = permuted_failure_average(n1, BSC1, a_n=2)
    assert rep.lhs == exact_error_probability(build_representatives(n1), BSC1, exact=True) == Fraction(1, 10)
    rep2 = permuted_failure_average(REP2, BSC1)
    assert rep2.lhs == permutation_average(words_of(REP2), 2, 2, [Fraction(9, 10), Fraction(1, 10)])
    assert rep2.lhs == Fraction(1, 10)
    assert rep2.holds and rep2.permutation_counts_ok and rep2.balanced_perm_ok


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (3, 2)])
@pytest.mark.parametrize("p", [Fraction(1, 20), Fraction(1, 5)])
def test_permutation_average_lhs_matches_oracle(n, k, p):
    law = [1 - p, p]
    w = AdditiveChannel.binary(p)
    for c in enumerate_codes(n, k, 2):
        rep = permuted_failure_average(c, w)
        assert rep.lhs == permutation_average(words_of(c), 2, n, law)
        assert float(rep.lhs) <= rep.rhs + 1e-12
        assert rep.permutation_counts_ok and rep.balanced_perm_ok


def test_permutation_average_premise_violation():
    c = LinearCode.from_rows([[1, 1, 0, 0]], 2)
    with pytest.raises(PremiseViolation) as info:
        permuted_failure_average(c, BSC1, a_n=1)
    assert info.value.witness is not None


def test_permutation_average_ternary():
    c = LinearCode.from_rows([[1, 2, 1]], 3)
    law = [Fraction(7, 10), Fraction(1, 5), Fraction(1, 10)]
    rep = permuted_failure_average(c, AdditiveChannel(Distribution(law)))
    assert rep.lhs == permutation_average(words_of(c), 3, 3, law)
    assert rep.holds


def test_permutation_average_general_measure():
    rng = np.random.default_rng(5)
    raw = rng.integers(1, 20, size=16)
    measure = [Fraction(int(v), int(raw.sum())) for v in raw]
    for c in enumerate_codes(4, 2, 2):
        rep = permuted_failure_average(c, measure=measure)
        assert rep.holds


def test_permutation_average_limits():
    with pytest.raises(EnumerationTooLarge):
        permuted_failure_average(LinearCode.zero(7, 2), BSC1)
    with pytest.raises(ValueError):
        permuted_failure_average(REP2)
