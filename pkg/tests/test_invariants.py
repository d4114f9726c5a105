import itertools
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import TABLE_SETS, field, fx_set, paley
from skewhadamard.cyclotomic import divisible_by_prime, reduce_mod
from skewhadamard.diffsets import FXParams, build_fx_diffset, transformed
from skewhadamard.finite_field import subfield
from skewhadamard.invariants import (InvariantError, InvariantReport, char_sum_triple,
                                     corollary_bound, digit_sum_reduce, invariant_report,
                                     lifted_char_sum, lifted_triple_mod, lifted_triple_values,
                                     odd_triples, pairwise_flags, power_sum, triple_direct,
                                     triple_formula, triple_values_direct,
                                     triple_values_formula, waring_power_sum,
                                     weil_e2_bruteforce, weil_e2_closed_form, weil_pair,
                                     zeta_factor)


def tset(D, a=3):
    return sorted(set(triple_values_direct(D, a)))


def test_direct_examples(example_set):
    assert tset(example_set) == [147, 158, 164, 167, 173, 184]
    assert tset(paley(11)) == [157, 174]
    assert tset(fx_set(107, TABLE_SETS[3])) == [153028, 153103, 153156, 153231]


def test_direct_matches_naive_count(example_set):
    ctx = example_set.ctx
    members = set(example_set.elements.tolist())
    for ell in (0, 3, 8):
        c = ctx.power_of_omega(ell)
        ac = ctx.mul(3, c)
        naive = sum(1 for x in members if ctx.add(x, c) in members and ctx.add(x, ac) in members)
        assert triple_direct(example_set, ell, 3) == naive


def test_shift_periodicity(example_set):
    for ell in range(0, 14, 3):
        assert triple_direct(example_set, ell, 3) == triple_direct(example_set, ell + 14, 3)
        assert triple_direct(example_set, ell, 3) == triple_direct(example_set, ell + 5 * 14, 3)


@pytest.mark.parametrize("index_set", TABLE_SETS)
def test_formula_matches_direct_p11(index_set):
    D = fx_set(11, index_set)
    assert triple_values_formula(D, 3) == triple_values_direct(D, 3)


def test_formula_other_a(example_set):
    for a in (2, 5, 10):
        assert triple_values_formula(example_set, a) == triple_values_direct(example_set, a)
    assert triple_formula(example_set, 17, 3) == triple_direct(example_set, 3, 3)


def test_first_row_tset():
    assert sorted(set(triple_values_formula(fx_set(11, TABLE_SETS[0]), 3))) == \
        [159, 162, 164, 167, 169, 172]


def test_formula_rejects_paley():
    with pytest.raises(InvariantError):
        triple_values_formula(paley(11), 3)


@pytest.mark.parametrize("index_set", TABLE_SETS)
def test_zeta_factor_square(index_set):
    for ell in range(14):
        assert zeta_factor(index_set, 14, ell) ** 2 == 49


def test_bad_a(example_set):
    for a in (0, 1, 11, 12):
        with pytest.raises(InvariantError):
            triple_direct(example_set, 0, a)


def test_weil_bound_and_symmetry(f1331):
    bound = 2 * np.sqrt(1331) * (1 + 1e-6)
    for i in odd_triples(14):
        s = char_sum_triple(f1331, 14, *i, 3)
        assert np.abs(s.embeddings()).max() <= bound
    for i in [(1, 3, 5), (13, 1, 7), (2, 4, 9)]:
        neg = tuple((-k) % 14 for k in i)
        assert char_sum_triple(f1331, 14, *i, 3).conj() == char_sum_triple(f1331, 14, *neg, 3)
    assert char_sum_triple(f1331, 14, 0, 0, 0, 3) == 1331 - 3


def test_e2_closed_form_vs_bruteforce(f1331):
    rng = random.Random(20)
    odd = range(1, 14, 2)
    triples = {tuple(rng.choice(odd) for _ in range(3)) for _ in range(40)}
    triples = sorted(triples)[:20]
    assert len(triples) == 20
    for i in triples:
        assert weil_e2_closed_form(f1331, 14, *i, 3) == weil_e2_bruteforce(f1331, 14, *i, 3)


def test_e2_trivial_branch(f1331):
    from skewhadamard.characters import CharSpec, char_eval
    chi = CharSpec(f1331, 14)
    for i1, i2 in [(1, 3), (5, 9), (13, 13)]:
        i3 = (-i2) % 14
        expected = char_eval(chi.power(i1), 3) * char_eval(chi.power(-i2), 3) * 1331
        assert weil_e2_closed_form(f1331, 14, i1, i2, i3, 3) == expected
        assert weil_e2_bruteforce(f1331, 14, i1, i2, i3, 3) == expected


def test_e2_divisible_by_p(f1331):
    for i1, i2, i3 in odd_triples(14):
        if (i2 + i3) % 14:
            assert divisible_by_prime(weil_e2_closed_form(f1331, 14, i1, i2, i3, 3), 11)


def test_e2_errors(f1331):
    with pytest.raises(InvariantError):
        weil_e2_closed_form(f1331, 14, 0, 1, 1, 3)
    with pytest.raises(InvariantError):
        weil_e2_bruteforce(field(107, 3), 14, 1, 1, 1, 3)


ORACLES = [  # (p, base degree, lift degree, N, a)
    (11, 1, 2, 10, 3),
    (11, 1, 3, 10, 3),
    (3, 3, 2, 26, 2),
    (3, 3, 2, 13, 2),
]


@pytest.mark.parametrize("p,f,t,N,a", ORACLES)
def test_newton_lift_oracle(p, f, t, N, a):
    big = field(p, f * t)
    small = subfield(big, f)
    for i in itertools.product(range(1, N), repeat=3):
        pair = weil_pair(small, N, *i, a)
        assert lifted_char_sum(pair, t) == char_sum_triple(big, N, *i, a)
        if t == 2:
            assert pair.e1 * pair.e1 - pair.e2 * 2 == -char_sum_triple(big, N, *i, a)


def test_weil_pair_matches_bruteforce_small():
    small = field(11, 1)
    for i in itertools.product(range(1, 10), repeat=3):
        assert weil_pair(small, 10, *i, 3).e2 == weil_e2_bruteforce(small, 10, *i, 3)


def test_lifted_sum_seed(f1331):
    pair = weil_pair(f1331, 14, 1, 3, 5, 3)
    assert lifted_char_sum(pair, 1) == char_sum_triple(f1331, 14, 1, 3, 5, 3)
    with pytest.raises(InvariantError):
        lifted_char_sum(pair, 0)


def test_prop26_congruence(f1331):
    for i in [(1, 3, 5), (3, 3, 3), (7, 9, 11), (13, 1, 5)]:
        pair = weil_pair(f1331, 14, *i, 3)
        base = reduce_mod(-pair.e1, 11)
        for t in (3, 5, 7, 11, 21):
            assert lifted_char_sum(pair, t, 11) == base**t


def test_power_sum_paths_agree(f1331):
    pair = weil_pair(f1331, 14, 1, 5, 9, 3)
    for t in (0, 1, 2, 7, 64, 65, 100, 131):
        assert power_sum(pair.e1, pair.e2, t) == waring_power_sum(pair.e1, pair.e2, t) \
            if t else power_sum(pair.e1, pair.e2, 0) == 2
    m = 10**9 + 7
    e1, e2 = reduce_mod(pair.e1, m), reduce_mod(pair.e2, m)
    assert power_sum(e1, e2, 1001) == reduce_mod(power_sum(pair.e1, pair.e2, 1001), m)


def test_lift_t1_is_identity(example_set):
    assert lifted_triple_values(example_set, 3, 1, 10**9 + 7) == triple_values_direct(example_set, 3)
    assert lifted_triple_values(example_set, 3, 1) == triple_values_direct(example_set, 3)


def test_exact_lift_reduces_to_modular(example_set):
    exact = lifted_triple_values(example_set, 3, 3)
    for m in (3, 5, 11, 13):
        assert [v % m for v in exact] == lifted_triple_values(example_set, 3, 3, m)
    # lifted sets are again skew Hadamard, so T is near q^3/8
    assert all(abs(v - 1331**3 / 8) < 1331**2.5 for v in exact)


def test_lift_thm32_example(example_set):
    lifted = set(lifted_triple_values(example_set, 3, 3, 3))
    base = {v % 3 for v in triple_values_direct(transformed(example_set, 5), 3)}
    assert lifted == base
    assert lifted_triple_mod(example_set, 4, 3, 3, 3) in lifted


@pytest.mark.parametrize("t", [11, 21, 31])
def test_lift_thm35_example(example_set, t):
    assert digit_sum_reduce(t, 11) == 1
    lifted = set(lifted_triple_values(example_set, 3, t, 11))
    assert lifted == {v % 11 for v in triple_values_direct(example_set, 3)}


def test_lift_modulus_preconditions(example_set):
    for m in (7, 14, 4, 2):
        with pytest.raises(InvariantError):
            lifted_triple_values(example_set, 3, 3, m)
    with pytest.raises(InvariantError):
        lifted_triple_values(example_set, 3, 2, 11)


def test_digit_sum_reduce():
    assert digit_sum_reduce(21, 11) == 1
    assert digit_sum_reduce(11, 11) == 1
    assert digit_sum_reduce(7, 11) == 7
    assert digit_sum_reduce(9, 11) == 9
    with pytest.raises(InvariantError):
        digit_sum_reduce(4, 11)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6).map(lambda k: 2 * k + 1), st.sampled_from([3, 7, 11, 23, 107]))
def test_digit_sum_reduce_properties(t, p):
    r = digit_sum_reduce(t, p)
    assert 1 <= r <= p - 2 and r % 2 == 1
    assert (r - t) % (p - 1) == 0  # digit sums preserve t mod p-1


def test_corollary_bound():
    assert corollary_bound(14, 1331) == 400437
    assert corollary_bound(2, 9) == 96
    b = corollary_bound(14, 1331)
    assert (b - 1) ** 2 < 16 * 14**6 * 1331 <= b**2


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 50), st.integers(1, 10**6))
def test_corollary_bound_monotone(N, q):
    assert corollary_bound(N, q) <= corollary_bound(N + 1, q)
    assert corollary_bound(N, q) <= corollary_bound(N, q + 1)


def test_paley_two_values():
    for p in (11, 23):
        vals = triple_values_direct(paley(p), 3)
        assert len(set(vals)) <= 2
        D = paley(p)
        for ell in range(6):
            assert triple_direct(D, ell, 3) == triple_direct(D, ell % 2, 3)


def test_primitive_element_invariance(f1331):
    I = TABLE_SETS[1]
    base = tset(build_fx_diffset(f1331, FXParams(7), I))
    for u in (3, 17, 1329):
        other = f1331.with_primitive(u)
        assert tset(build_fx_diffset(other, FXParams(7), I)) == base


def test_report_example(example_set):
    r = invariant_report(example_set, 3, [3, 5])
    assert r.T_set == [147, 158, 164, 167, 173, 184]
    assert r.formula_checked is True and r.prop26 is True
    assert r.verdicts[0][0].startswith("D is inequivalent")
    for t in (3, 5, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47):
        assert t in r.coverage
    assert 7 not in r.coverage and 49 not in r.coverage
    for t in (11, 21, 31, 41):
        assert r.thm35_coverage[t] == 1
    assert r.thresholds == {"v": 9, "rough": 37}


def test_report_table_annotations():
    r = invariant_report(fx_set(11, TABLE_SETS[0]), 3, [5], thm35_bound=0)
    assert r.n_t[5] == 2
    assert all(n >= 3 for t, n in r.n_t.items() if t != 5)
    rp = invariant_report(paley(11), 3, [17])
    assert rp.n_t[17] == 1 and all(n == 2 for t, n in rp.n_t.items() if t != 17)
    assert rp.coverage == [] and rp.formula_checked is None


def test_report_json_round_trip(example_set):
    r = invariant_report(example_set, 3, [3], thm35_bound=5)
    text = json.dumps(r.to_dict(), sort_keys=True)
    again = InvariantReport.from_dict(json.loads(text))
    assert again == r
    assert json.dumps(again.to_dict(), sort_keys=True) == text


def test_pairwise_flags():
    reports = [invariant_report(fx_set(11, I), 3, [5], thm35_bound=0) for I in TABLE_SETS]
    flags = pairwise_flags(reports, 5)
    for i, j in itertools.combinations(range(4), 2):
        differ = reports[i].residues[5] != reports[j].residues[5]
        assert ((i, j) in flags) == differ
