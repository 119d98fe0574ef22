"""The ten acceptance criteria, each printing one PASS/FAIL line."""
import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from oracles import binary_exponent_scan
from rcexp.codes import LinearCode, enumerate_codes, is_compatible_pair, spectrum
from rcexp.decoder import (
    build_representatives,
    exact_error_probability,
    permuted_failure_average,
    simulate_error_probability,
)
from rcexp.ensemble import (
    average_spectrum,
    build_ensemble,
    census_bad_codes,
    companion_matrix,
    count_failing_members,
    field_closure_witness,
    find_primitive_poly,
    q_power,
    verify_balanced,
)
from rcexp.exponent import AdditiveChannel, good_code_error_bound, inner_bound, random_coding_exponent
from rcexp.typeclasses import (
    Distribution,
    entropy,
    enumerate_types,
    num_types,
    relative_entropy,
    type_class_prob,
    type_class_size,
)

ENSEMBLES = [(2, 4, 2, 2), (2, 6, 3, 3), (3, 3, 2, 2), (2, 8, 4, 4)]
_cache = {}


def ensemble(q, n, k1, k2):
    key = (q, n, k1, k2)
    if key not in _cache:
        _cache[key] = build_ensemble(companion_matrix(find_primitive_poly(q, n)), k1, k2)
    return _cache[key]


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, limit):
        info = {"detail": ""}
        start = time.perf_counter()
        try:
            yield info
            elapsed = time.perf_counter() - start
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        except BaseException:
            with capsys.disabled():
                print(f"\nACCEPTANCE {number:2d} FAIL  {title} {info['detail']}")
            raise
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} PASS  {title} ({elapsed:.2f}s) {info['detail']}")

    return run


def test_criterion_01_balancedness(criterion):
    with criterion(1, "balancedness of companion-matrix ensembles and compatible pairs", 30) as info:
        for q, n, k1, k2 in ENSEMBLES:
            pairs = ensemble(q, n, k1, k2)
            r1 = verify_balanced([p.c1 for p in pairs])
            r2 = verify_balanced([p.c2 for p in pairs])
            assert r1.balanced and r1.value == q**k1 - 1, (q, n, r1)
            assert r2.balanced and r2.value == q**k2 - 1, (q, n, r2)
            assert r1.footnote_holds and r2.footnote_holds
            assert all(is_compatible_pair(p.c1, p.c2) for p in pairs)
        info["detail"] = f"{len(ENSEMBLES)} ensembles"


def test_criterion_02_average_spectrum(criterion):
    with criterion(2, "average-spectrum identity (exact rationals)", 60) as info:
        checked = 0
        for q, n, k1, k2 in ENSEMBLES:
            pairs = ensemble(q, n, k1, k2)
            for codes, k in (([p.c1 for p in pairs], k1), ([p.c2 for p in pairs], k2)):
                avg = average_spectrum(codes)
                for t, v in avg.items():
                    if t.is_zero_type():
                        assert v == 1
                        continue
                    assert v == Fraction(q**k - 1, q**n - 1) * type_class_size(t)
                    checked += 1
        info["detail"] = f"{checked} type averages"


def test_criterion_03_bad_code_census(criterion):
    with criterion(3, "bad-code census within floor(N q^(-eps n))", 120) as info:
        parts = []
        for n in (6, 8):
            codes = [p.c1 for p in ensemble(2, n, n // 2, n // 2)]
            spectra = [spectrum(c) for c in codes]
            for eps in (0.1, 0.25, 0.5):
                res = census_bad_codes(codes, eps, spectra)
                z = math.floor(len(codes) / 2 ** (eps * n) + 1e-12)
                assert res.bound_z == z
                assert res.bad_count <= z
                parts.append(f"n={n},eps={eps}:{res.bad_count}<={z}")
        info["detail"] = " ".join(parts)


def test_criterion_04_good_code_bound(criterion):
    with criterion(4, "error bound for q^(eps n)-good codes", 300) as info:
        eps = Fraction(1, 4)
        worst = math.inf
        count = 0
        for n in (6, 8):
            codes = [p.c1 for p in ensemble(2, n, n // 2, n // 2)]
            spectra = [spectrum(c) for c in codes]
            census = census_bad_codes(codes, eps, spectra)
            a_big = q_power(2, eps * n)
            a_n = a_big * (num_types(n, 2) - 1)
            for p in ("0.01", "0.05", "0.1"):
                w = AdditiveChannel.binary(Fraction(p))
                er = random_coding_exponent(w, 0.5, tol=1e-6).value
                raw = float(a_n) * num_types(n, 2) ** 2 * 2.0 ** (-n * er)
                inner = inner_bound(n, 2, er, float(eps))
                for c, s, good in zip(codes, spectra, census.goodness):
                    if not good:
                        continue
                    bound = good_code_error_bound(c, w, a_n, s)
                    assert bound.premise_holds
                    assert bound.exponent == er
                    err = exact_error_probability(build_representatives(c), w)
                    assert err <= bound.value and err <= raw
                    assert err <= inner
                    worst = min(worst, min(bound.value, inner) - err)
                    count += 1
        info["detail"] = f"{count} (code, channel) cases, min slack {worst:.3g}"


def test_criterion_05_permutation_average(criterion):
    with criterion(5, "permutation-averaged failure bound, exhaustive small codes", 60) as info:
        cases = 0
        worst = math.inf
        for n, k in ((3, 1), (4, 1), (4, 2)):
            for c in enumerate_codes(n, k, 2):
                for p in (Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)):
                    rep = permuted_failure_average(c, AdditiveChannel.binary(p))
                    assert isinstance(rep.lhs, Fraction)
                    assert rep.a_n >= 1
                    assert float(rep.lhs) <= rep.rhs + 1e-12
                    assert rep.permutation_counts_ok and rep.balanced_perm_ok
                    worst = min(worst, rep.rhs - float(rep.lhs))
                    cases += 1
        info["detail"] = f"{cases} cases, min slack {worst:.3g}"


def _grid(q, steps=10):
    for c in itertools.product(range(steps + 1), repeat=q - 1):
        if sum(c) <= steps:
            yield tuple(v / steps for v in c) + ((steps - sum(c)) / steps,)


def test_criterion_06_type_inequalities(criterion):
    with criterion(6, "type-class size and probability inequalities", 60) as info:
        checks = 0
        for q in (2, 3):
            grid = [Distribution(p) for p in _grid(q)]
            for n in range(1, 13):
                for t in enumerate_types(n, q):
                    qd = t.distribution()
                    assert type_class_size(t) <= q ** (n * entropy(qd)) * (1 + 1e-9)
                    for pd in grid:
                        d = relative_entropy(qd, pd)
                        prob = type_class_prob(pd, t)
                        limit = 0.0 if d == math.inf else q ** (-n * d)
                        assert prob <= limit * (1 + 1e-9)
                        checks += 1
        info["detail"] = f"{checks} probability checks"


def test_criterion_07_exponent_sanity(criterion):
    with criterion(7, "random coding exponent sanity and dense-scan agreement", 60) as info:
        for law in ((0.9, 0.1), (0.75, 0.25), (0.7, 0.2, 0.1)):
            w = AdditiveChannel(Distribution(law))
            vals = [random_coding_exponent(w, i / 20).value for i in range(21)]
            assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))
            top = random_coding_exponent(w, 1.0)
            assert abs(top.value) < 1e-9
            assert np.max(np.abs(top.minimizer.as_array() - np.array(law))) < 1e-9
        worst = 0.0
        for p in (0.05, 0.1, 0.25):
            w = AdditiveChannel.binary(p)
            for i in range(1, 10):
                r = i / 10
                gap = abs(random_coding_exponent(w, r).value - binary_exponent_scan(p, r))
                assert gap <= 1e-4, (p, r, gap)
                worst = max(worst, gap)
        info["detail"] = f"max scan gap {worst:.2e}"


def test_criterion_08_counting_and_markov(criterion):
    with criterion(8, "failing-member count and Markov inequality, 200 random cases", 10) as info:
        rng = random.Random(2024)
        for _ in range(200):
            members = rng.randint(1, 30)
            conds = rng.randint(1, 6)
            table = [[rng.randint(0, 12) for _ in range(conds)] for _ in range(members)]
            a = Fraction(rng.randint(1, 40), rng.randint(1, 8))
            got = count_failing_members(np.array(table, dtype=np.int64), a)
            means = [Fraction(sum(r[w] for r in table), members) for w in range(conds)]
            brute = [x for x in range(members)
                     if any(table[x][w] > means[w] * conds * a for w in range(conds))]
            assert got == brute
            assert len(brute) <= Fraction(members) / a
            # Markov on a discrete variable with rational weights
            support = [rng.randint(0, 20) for _ in range(rng.randint(1, 8))]
            weights = [rng.randint(1, 9) for _ in support]
            probs = [Fraction(wt, sum(weights)) for wt in weights]
            mean = sum(p * v for p, v in zip(probs, support))
            if mean == 0:
                continue
            for big_a in (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5)):
                tail = sum(p for p, v in zip(probs, support) if v >= big_a * mean)
                assert tail <= 1 / big_a
        info["detail"] = "200 tables"


def test_criterion_09_monte_carlo(criterion):
    with criterion(9, "Monte Carlo within 4 standard errors of the exact error", 60) as info:
        w = AdditiveChannel.binary(Fraction(1, 10))
        ref63 = ensemble(2, 6, 3, 3)[0].c1
        parts = []
        for c in (LinearCode.from_rows([[1, 1]], 2), ref63):
            tbl = build_representatives(c)
            exact = exact_error_probability(tbl, w)
            rep = simulate_error_probability(tbl, w, 10**6, seed=20240601)
            assert rep.exact == exact
            assert abs(rep.estimate - exact) <= 4 * rep.std_error
            parts.append(f"[{c.n},{c.k}]: exact {exact:.6f} est {rep.estimate:.6f} se {rep.std_error:.1e}")
        info["detail"] = "; ".join(parts)


def test_criterion_10_field_closure(criterion):
    with criterion(10, "powers of a primitive companion matrix form a field", 10):
        for n in (2, 3, 4):
            assert field_closure_witness(companion_matrix(find_primitive_poly(2, n))) is None
