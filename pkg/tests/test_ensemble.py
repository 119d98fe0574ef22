import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from rcexp.codes import LinearCode, contains, dual, is_compatible_pair
from rcexp.errors import BoundViolation, FieldError
from rcexp.ensemble import (
    MonicPolynomial,
    average_spectrum,
    build_ensemble,
    census_bad_codes,
    companion_matrix,
    count_failing_members,
    field_closure_witness,
    find_primitive_poly,
    is_primitive,
    multiplicative_order_is,
    verify_balanced,
)
from rcexp.field import FieldMatrix, mat_pow, rows_first
from rcexp.typeclasses import TypeVector, type_class_size


def ensemble(q, n, k1, k2, transpose=False):
    t = companion_matrix(find_primitive_poly(q, n))
    return build_ensemble(t.T if transpose else t, k1, k2)


def test_companion_examples():
    f = MonicPolynomial.parse("1,1,1", 2)
    assert companion_matrix(f) == FieldMatrix([[0, 1], [1, 1]], 2)
    g = MonicPolynomial.parse("2,1", 3)  # x - 1
    assert companion_matrix(g) == FieldMatrix([[1]], 3)


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_cayley_hamilton(q, n):
    for coeffs in itertools.islice(itertools.product(range(q), repeat=n), 40):
        f = MonicPolynomial.from_coefficients(coeffs, q)
        assert f.evaluate(companion_matrix(f)) == FieldMatrix.zeros(n, n, q)


def test_primitive_search_examples():
    assert str(find_primitive_poly(2, 2)) == "x^2 + x + 1"
    f4 = find_primitive_poly(2, 4)
    assert multiplicative_order_is(companion_matrix(f4), 15)
    bad = MonicPolynomial.parse("1,1,1,1,1", 2)
    t = companion_matrix(bad)
    assert mat_pow(t, 5) == FieldMatrix.identity(4, 2)
    assert not is_primitive(bad)


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_primitive_is_smallest(q, n):
    found = find_primitive_poly(q, n)
    order = q**n - 1
    for coeffs in itertools.product(range(q), repeat=n):
        f = MonicPolynomial.from_coefficients(coeffs[::-1], q)
        t = companion_matrix(f)
        # brute-force order
        p, k = t, 1
        while p != FieldMatrix.identity(n, q) and k <= order:
            p, k = p @ t, k + 1
        if k == order:
            assert f == found
            break


def test_build_small_example():
    pairs = ensemble(2, 2, 1, 1)
    assert len(pairs) == 3
    assert {p.c1 for p in pairs} == {
        LinearCode.from_rows([[1, 0]], 2),
        LinearCode.from_rows([[0, 1]], 2),
        LinearCode.from_rows([[1, 1]], 2),
    }
    assert pairs[-1].c1 == LinearCode(rows_first(FieldMatrix.identity(2, 2), 1))
    assert all(is_compatible_pair(p.c1, p.c2) for p in pairs)


def test_build_rejects_bad_dimensions():
    t = companion_matrix(find_primitive_poly(2, 3))
    with pytest.raises(FieldError):
        build_ensemble(t, 1, 1)
    with pytest.raises(FieldError):
        build_ensemble(FieldMatrix.identity(3, 2), 2, 2)


PARAMS = [(2, 2, 1, 1), (2, 3, 2, 1), (2, 3, 1, 2), (2, 4, 2, 2), (2, 4, 3, 2), (2, 4, 2, 3),
          (3, 2, 1, 1), (3, 3, 2, 2), (5, 2, 1, 1), (2, 5, 3, 3), (2, 4, 4, 0), (2, 4, 0, 4)]


@pytest.mark.parametrize("transpose", [False, True])
@pytest.mark.parametrize("q,n,k1,k2", PARAMS)
def test_balanced_and_compatible(q, n, k1, k2, transpose):
    pairs = ensemble(q, n, k1, k2, transpose)
    for codes, k in (([p.c1 for p in pairs], k1), ([p.c2 for p in pairs], k2)):
        res = verify_balanced(codes)
        assert res.balanced and res.value == q**k - 1 and res.footnote_holds
    assert all(is_compatible_pair(p.c1, p.c2) for p in pairs)


@pytest.mark.parametrize("q,n,k1,k2", PARAMS)
def test_dual_of_c2_is_first_rows_of_power(q, n, k1, k2):
    t = companion_matrix(find_primitive_poly(q, n))
    pairs = build_ensemble(t, k1, k2)
    for p in pairs:
        expected = LinearCode(rows_first(mat_pow(t, p.index), n - k2))
        d = dual(p.c2)
        assert all(contains(d, r) for r in expected.generator.array)
        assert all(contains(expected, r) for r in d.generator.array)


def test_balance_counts_match_word_sweep():
    pairs = ensemble(3, 2, 1, 1)
    codes = [p.c1 for p in pairs]
    for x in itertools.product(range(3), repeat=2):
        if any(x):
            assert sum(contains(c, x) for c in codes) == 2


def test_unbalanced_list_gives_witness():
    a = LinearCode.from_rows([[1, 0]], 2)
    b = LinearCode.from_rows([[0, 1]], 2)
    res = verify_balanced([a, a, b])
    assert not res.balanced and res.witness is not None
    count = sum(contains(c, res.witness.symbols) for c in [a, a, b])
    assert count != sum(contains(c, (0, 1)) for c in [a, a, b])


def test_heterogeneous_list_rejected():
    with pytest.raises(ValueError):
        verify_balanced([LinearCode.full(2, 2), LinearCode.zero(2, 2)])


def test_average_spectrum_examples():
    codes = [p.c1 for p in ensemble(2, 2, 1, 1)]
    avg = average_spectrum(codes)
    assert avg[TypeVector((1, 1))] == Fraction(2, 3)
    assert avg[TypeVector((2, 0))] == 1
    codes4 = [p.c1 for p in ensemble(2, 4, 2, 2)]
    avg4 = average_spectrum(codes4)
    for t, v in avg4.items():
        if not t.is_zero_type():
            assert v == Fraction(3, 15) * type_class_size(t)
            assert v <= Fraction(4, 16) * type_class_size(t)


def test_average_spectrum_detects_imbalance():
    a = LinearCode.from_rows([[1, 0]], 2)
    with pytest.raises(BoundViolation):
        average_spectrum([a, a, a])


def test_count_failing_constant_table():
    vals = np.full((6, 4), 3, dtype=np.int64)
    assert count_failing_members(vals, Fraction(1, 4)) == []
    assert count_failing_members(np.array([[1, 2, 3]]), 1) == []


def brute_failing(table, a):
    members = len(table)
    conds = len(table[0])
    means = [Fraction(sum(r[w] for r in table), members) for w in range(conds)]
    return [x for x in range(members) if any(table[x][w] > means[w] * conds * a for w in range(conds))]


def test_count_failing_random_tables():
    rng = random.Random(7)
    for _ in range(60):
        table = [[rng.randrange(0, 10) for _ in range(5)] for _ in range(20)]
        for a in (2, 4, 8):
            got = count_failing_members(np.array(table), a)
            assert got == brute_failing(table, a)
            assert len(got) <= math.ceil(20 / a)


def test_count_failing_rejects_bad_input():
    with pytest.raises(ValueError):
        count_failing_members(np.zeros((0, 3), dtype=np.int64), 2)
    with pytest.raises(ValueError):
        count_failing_members(np.array([[1, -1]]), 2)


def test_census_examples():
    codes = [p.c1 for p in ensemble(2, 4, 2, 2)]
    res = census_bad_codes(codes, 0.25)
    assert res.bound_z == 7 and res.bad_count <= 7
    assert census_bad_codes(codes, 0).bound_z == 15
    assert census_bad_codes(codes, 1.0).bad_count == 0
    assert census_bad_codes(codes, 2).bad_count == 0


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (2, 6, 3), (3, 3, 2), (2, 5, 2)])
def test_census_never_violated(q, n, k):
    codes = [p.c1 for p in ensemble(q, n, k, n - k if n - k >= 1 else k)]
    for i in range(11):
        res = census_bad_codes(codes, Fraction(i, 10))
        assert res.bad_count <= res.bound_z
        assert res.bad_count <= res.failing_count <= res.bound_z


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (2, 6)])
def test_field_closure(q, n):
    assert field_closure_witness(companion_matrix(find_primitive_poly(q, n))) is None


def test_field_closure_fails_for_non_primitive():
    t = companion_matrix(MonicPolynomial.parse("1,1,1,1,1", 2))
    assert field_closure_witness(t) is not None


def test_polynomial_text_round_trip():
    f = find_primitive_poly(3, 3)
    assert MonicPolynomial.parse(f.to_text(), 3) == f
    assert str(f) == "x^3 + 2x + 1"
