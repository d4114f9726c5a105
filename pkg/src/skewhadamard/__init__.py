"""Feng-Xiang skew Hadamard difference sets and their triple intersection numbers."""

from .cyclotomic import CycInt, RingSpec
from .diffsets import (DiffSetSpec, FXParams, HypothesisError, build_fx_diffset,
                       cyclotomic_class, paley_diffset, parse_index_set,
                       transform_index_set, verify_skew_hadamard)
from .finite_field import FieldCtx, FieldParams, build_field, subfield
from .invariants import (InvariantReport, WeilPair, corollary_bound, digit_sum_reduce,
                         invariant_report, lifted_char_sum, lifted_triple_mod,
                         triple_direct, triple_formula)

__all__ = [
    "CycInt", "RingSpec", "DiffSetSpec", "FXParams", "HypothesisError", "build_fx_diffset",
    "cyclotomic_class", "paley_diffset", "parse_index_set", "transform_index_set",
    "verify_skew_hadamard", "FieldCtx", "FieldParams", "build_field", "subfield",
    "InvariantReport", "WeilPair", "corollary_bound", "digit_sum_reduce", "invariant_report",
    "lifted_char_sum", "lifted_triple_mod", "triple_direct", "triple_formula",
]
