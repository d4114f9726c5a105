import numpy as np
import pytest

from conftest import TABLE_SETS, field, fx_set, paley
from skewhadamard.diffsets import (DiffSetSpec, FXParams, HypothesisError, build_fx_diffset,
                                   cyclotomic_class, disjoint_union_holds,
                                   intersection_counts, pairwise_intersection, paley_diffset,
                                   parse_index_set, transform_index_set, verify_skew_hadamard)
import skewhadamard.diffsets as diffsets


def test_cyclotomic_classes_partition(f1331):
    classes = [cyclotomic_class(f1331, 14, i) for i in range(14)]
    assert all(len(c) == 95 for c in classes)
    union = np.sort(np.concatenate(classes))
    assert np.array_equal(union, np.arange(1, 1331))
    c0 = set(classes[0].tolist())
    assert all(f1331.mul(x, y) in c0 for x in list(c0)[:20] for y in list(c0)[:20])
    with pytest.raises(ValueError):
        cyclotomic_class(f1331, 4, 0)


def test_example_index_set_expression():
    assert parse_index_set("⟨p⟩ ∪ −2⟨p⟩ ∪ {0}", 11, 14) == (0, 1, 6, 9, 10, 11, 12)
    assert parse_index_set("<p> u -2<p> u {0}", 11, 14) == (0, 1, 6, 9, 10, 11, 12)
    assert parse_index_set("<11> | -2<11> | {0}", 11, 14) == (0, 1, 6, 9, 10, 11, 12)
    assert parse_index_set([0, 15, 2], 11, 14) == (0, 1, 2)
    with pytest.raises(ValueError):
        parse_index_set("<p> u banana", 11, 14)


def test_build_example(f1331, example_set):
    assert example_set.size == 665
    assert all(example_set.checks.values())
    union = np.sort(np.concatenate([cyclotomic_class(f1331, 14, i)
                                    for i in (0, 1, 6, 9, 10, 11, 12)]))
    assert np.array_equal(example_set.elements, union)
    again = build_fx_diffset(f1331, FXParams(7), (0, 1, 6, 9, 10, 11, 12))
    assert np.array_equal(again.membership, example_set.membership)


def test_first_table_row_is_valid(f1331):
    D = build_fx_diffset(f1331, FXParams(7), range(7))
    assert D.size == 665 and all(D.checks.values())


def test_covering_violation(f1331):
    with pytest.raises(HypothesisError) as err:
        build_fx_diffset(f1331, FXParams(7), [0, 1, 2, 3, 4, 5, 5])
    assert err.value.failures == ["I mod p1^m = Z/p1^m Z"]
    with pytest.raises(HypothesisError):
        build_fx_diffset(f1331, FXParams(7), [0, 7, 1, 2, 3, 4, 5, 6])


def test_named_hypothesis_failures():
    with pytest.raises(HypothesisError) as err:
        build_fx_diffset(field(3, 3), FXParams(7), range(7))
    assert err.value.failures == ["f = ord_N(p) * s", "ord_N(p) = phi(N)/2"]
    with pytest.raises(HypothesisError) as err:
        build_fx_diffset(field(29, 3), FXParams(7), range(7))
    assert err.value.failures == ["p = 3 (mod 4)", "f = ord_N(p) * s", "ord_N(p) = phi(N)/2"]
    with pytest.raises(HypothesisError) as err:
        build_fx_diffset(field(11, 3), FXParams(7, s=2), range(7))
    assert err.value.failures == ["s odd", "f = ord_N(p) * s"]


def test_classic_order_hypothesis():
    assert pow(11, 3, 14) == 1 and all(pow(11, k, 14) != 1 for k in (1, 2))
    D = fx_set(11, TABLE_SETS[0])
    assert D.checks["ord_N(p) = phi(N)/2"]


def test_generalized_variant_checks(f1331):
    D = build_fx_diffset(f1331, FXParams(7, variant="generalized"), TABLE_SETS[2])
    assert D.checks["2 in <p> (mod p1^m)"] and D.checks["gcd(p1, p-1) = 1"]
    assert D.checks["ord_N(p) odd"]
    assert verify_skew_hadamard(D).passed
    with pytest.raises(ValueError):
        build_fx_diffset(f1331, FXParams(7, variant="other"), TABLE_SETS[2])


def test_paley():
    assert paley(11).size == 665
    P7 = paley_diffset(field(7, 1))
    assert P7.elements.tolist() == [1, 2, 4]
    with pytest.raises(HypothesisError):
        paley_diffset(field(13, 1))
    assert verify_skew_hadamard(P7).passed
    assert pairwise_intersection(P7, 1) == 1


def test_verify_exact_example(example_set):
    report = verify_skew_hadamard(example_set)
    assert report.mode == "exact" and report.shifts_checked == 1330
    assert report.expected_lambda == 332 and report.passed


def test_verify_detects_mutation(example_set):
    member = example_set.membership.copy()
    x = int(example_set.elements[0])
    member[x] = False
    member[example_set.ctx.neg(x)] = True  # still skew, no longer a difference set
    broken = DiffSetSpec(example_set.ctx, 14, example_set.index_set, example_set.fx, member)
    report = verify_skew_hadamard(broken)
    assert report.disjoint_union and not report.passed
    shift, count = report.failures[0]
    assert count != 332 and pairwise_intersection(broken, shift) == count


def test_verify_sampled_mode(example_set):
    report = verify_skew_hadamard(example_set, mode="sampled", samples=200, seed=7)
    assert report.mode == "sampled" and report.shifts_checked == 200 and report.passed
    assert verify_skew_hadamard(example_set, threshold=100).mode == "sampled"


def test_count_paths_agree():
    D = fx_set(23, TABLE_SETS[1])
    shifts = np.arange(1, 60)
    direct = intersection_counts(D, shifts)
    old = diffsets._CHUNK
    try:
        diffsets._CHUNK = 1
        rolled = intersection_counts(D, shifts)
    finally:
        diffsets._CHUNK = old
    assert np.array_equal(direct, rolled)
    assert (direct == (D.ctx.q - 3) // 4).all()


def test_partition_consistency(example_set):
    ctx = example_set.ctx
    neg = DiffSetSpec(ctx, 14, (), None, example_set.membership[ctx.neg(np.arange(ctx.q))])
    for x in (1, 5, 100, 1000):
        # |D cap (D+x)| + |D cap (-D+x)| + [x in D] = |D|
        minus = int(np.count_nonzero(example_set.membership
                                     & neg.membership[ctx.sub(np.arange(ctx.q), x)]))
        assert pairwise_intersection(example_set, x) + minus + int(x in example_set) == 665
    with pytest.raises(ValueError):
        pairwise_intersection(example_set, 0)


def test_disjoint_union_all_table_fields():
    for p in (11, 23, 67, 79, 107):
        assert disjoint_union_holds(fx_set(p, TABLE_SETS[3]))
        assert disjoint_union_holds(paley(p))


def test_transforms():
    I = (0, 1, 6, 9, 10, 11, 12)
    assert transform_index_set(I, 1, 14) == I
    assert transform_index_set(I, 5, 14) == (0, 2, 3, 4, 5, 8, 13)
    for s in (3, 5, 9, 11, 13):
        assert transform_index_set(transform_index_set(I, s, 14), pow(s, -1, 14), 14) == I
    with pytest.raises(ValueError):
        transform_index_set(I, 7, 14)
