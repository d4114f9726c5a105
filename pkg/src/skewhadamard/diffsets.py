"""Cyclotomic classes, Feng-Xiang and Paley difference sets, and their checks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .finite_field import FieldCtx
from .ntheory import cyclic_subgroup, euler_phi, is_prime, multiplicative_order

DEFAULT_EXACT_VERIFY_THRESHOLD = 20000
_CHUNK = 1 << 22


class HypothesisError(ValueError):
    """A construction hypothesis failed; ``failures`` names each one."""

    def __init__(self, failures: Sequence[str]):
        self.failures = list(failures)
        super().__init__("violated hypotheses: " + "; ".join(self.failures))


@dataclass(frozen=True)
class FXParams:
    p1: int
    m: int = 1
    variant: str = "classic"
    s: int = 1

    @property
    def N(self) -> int:
        return 2 * self.p1**self.m

    @property
    def P(self) -> int:
        return self.p1**self.m


@dataclass(eq=False)
class DiffSetSpec:
    """A union of cyclotomic classes of order N, materialized as a bitmap.

    ``fx`` is None for the Paley set (N = 2, I = {0}).
    """

    ctx: FieldCtx
    N: int
    index_set: tuple[int, ...]
    fx: FXParams | None
    membership: np.ndarray
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def is_paley(self) -> bool:
        return self.fx is None

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.membership))

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.membership).astype(np.int64)

    @cached_property
    def element_digits(self) -> np.ndarray:
        return self.ctx.digits(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.membership[x])

    def summary(self) -> dict:
        return {
            "p": self.ctx.p,
            "f": self.ctx.f,
            "q": self.ctx.q,
            "N": self.N,
            "kind": "paley" if self.is_paley else f"feng-xiang/{self.fx.variant}",
            "index_set": list(self.index_set),
            "size": self.size,
            "checks": dict(self.checks),
        }


def cyclotomic_class(ctx: FieldCtx, N: int, i: int) -> np.ndarray:
    """C_i = omega^i <omega^N>, as a sorted array of element codes."""
    if N < 1 or (ctx.q - 1) % N:
        raise ValueError(f"N={N} does not divide q-1={ctx.q - 1}")
    if not 0 <= i < N:
        raise ValueError(f"class index {i} outside 0..{N - 1}")
    return np.sort(ctx.exp[i::N])


def _membership(ctx: FieldCtx, N: int, index_set: Iterable[int]) -> np.ndarray:
    wanted = np.zeros(N, dtype=bool)
    wanted[list(index_set)] = True
    member = np.zeros(ctx.q, dtype=bool)
    member[ctx.exp] = wanted[np.arange(ctx.q - 1) % N]
    return member


def normalize_index_set(index_set: Iterable[int], N: int) -> tuple[int, ...]:
    return tuple(sorted({int(i) % N for i in index_set}))


def fx_hypotheses(ctx: FieldCtx, fx: FXParams, index_set: Sequence[int]) -> dict[str, bool]:
    p, N, P = ctx.p, fx.N, fx.P
    checks: dict[str, bool] = {}
    checks["p1 prime"] = is_prime(fx.p1) and fx.p1 > 2
    checks["m >= 1"] = fx.m >= 1
    checks["s odd"] = fx.s % 2 == 1
    checks["p = 3 (mod 4)"] = p % 4 == 3
    if not (checks["p1 prime"] and checks["m >= 1"]) or gcd(p, N) != 1:
        checks["p unit mod N"] = False
        return checks
    order = multiplicative_order(p, N)
    checks["f = ord_N(p) * s"] = ctx.f == order * fx.s
    if fx.variant == "classic":
        checks["p1 = 7 (mod 8)"] = fx.p1 % 8 == 7
        checks["ord_N(p) = phi(N)/2"] = 2 * order == euler_phi(N)
    elif fx.variant == "generalized":
        checks["2 in <p> (mod p1^m)"] = 2 % P in cyclic_subgroup(p, P)
        checks["gcd(p1, p-1) = 1"] = gcd(fx.p1, p - 1) == 1
        checks["ord_N(p) odd"] = order % 2 == 1
    else:
        raise ValueError(f"unknown Feng-Xiang variant {fx.variant!r}")
    residues = sorted(i % P for i in index_set)
    checks["I mod p1^m = Z/p1^m Z"] = residues == list(range(P))
    return checks


def build_fx_diffset(ctx: FieldCtx, fx: FXParams, index_set: Iterable[int],
                     strict: bool = True) -> DiffSetSpec:
    """D = union of C_i^(N,q) over i in I, with every hypothesis recorded.

    The covering condition is read as "I is a complete residue system mod
    p1^m", since a repeated residue would put some x and -x both in D.
    """
    N = fx.N
    I = normalize_index_set(index_set, N)
    checks = fx_hypotheses(ctx, fx, I)
    failures = [name for name, ok in checks.items() if not ok]
    if strict and failures:
        raise HypothesisError(failures)
    if (ctx.q - 1) % N:
        raise HypothesisError([f"N={N} divides q-1"])
    return DiffSetSpec(ctx, N, I, fx, _membership(ctx, N, I), checks)


def paley_diffset(ctx: FieldCtx) -> DiffSetSpec:
    if ctx.q % 4 != 3:
        raise HypothesisError([f"q = 3 (mod 4) (q={ctx.q})"])
    return DiffSetSpec(ctx, 2, (0,), None, _membership(ctx, 2, (0,)), {"q = 3 (mod 4)": True})


def transform_index_set(index_set: Iterable[int], s: int, N: int) -> tuple[int, ...]:
    """s*I mod N, the index set of D^(s)."""
    if gcd(s, N) != 1:
        raise ValueError(f"gcd({s}, {N}) != 1")
    return normalize_index_set((s * i for i in index_set), N)


def transformed(D: DiffSetSpec, s: int) -> DiffSetSpec:
    """D^(s), built on the transformed index set over the same field."""
    I = transform_index_set(D.index_set, s, D.N)
    if D.is_paley:
        return D
    return build_fx_diffset(D.ctx, D.fx, I, strict=False)


# -- verification ---------------------------------------------------------------

@dataclass
class SkewReport:
    q: int
    mode: str
    disjoint_union: bool
    expected_lambda: int
    shifts_checked: int
    failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.disjoint_union and not self.failures

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "mode": self.mode,
            "disjoint_union": self.disjoint_union,
            "lambda": self.expected_lambda,
            "shifts_checked": self.shifts_checked,
            "failures": [list(f) for f in self.failures[:10]],
            "passed": self.passed,
        }


def disjoint_union_holds(D: DiffSetSpec) -> bool:
    """F_q = D + (-D) + {0} as a disjoint union."""
    ctx = D.ctx
    if D.membership[0]:
        return False
    nonzero = np.arange(1, ctx.q, dtype=np.int64)
    return bool(np.all(D.membership[nonzero] ^ D.membership[ctx.neg(nonzero)]))


def intersection_counts(D: DiffSetSpec, shifts: np.ndarray) -> np.ndarray:
    """|D cap (D + x)| for each x in ``shifts``, by bitmap scans.

    The bitmap is viewed as an f-dimensional p x ... x p array (last axis is
    the constant coefficient), so translating by x is a cyclic roll by its
    digits.  Small fields batch the shifts through direct index lookups.
    """
    ctx = D.ctx
    shifts = np.asarray(shifts, dtype=np.int64)
    out = np.empty(len(shifts), dtype=np.int64)
    digits = D.element_digits
    if len(digits) * len(shifts) <= _CHUNK or ctx.f == 1:
        step = max(1, _CHUNK // max(1, len(digits)))
        for start in range(0, len(shifts), step):
            block = ctx.digits(shifts[start:start + step])
            moved = ctx.undigits(digits[None, :, :] - block[:, None, :])
            out[start:start + step] = D.membership[moved].sum(axis=1)
        return out
    cube = D.membership.reshape((ctx.p,) * ctx.f)
    axes = tuple(range(ctx.f))
    for k, d in enumerate(ctx.digits(shifts)):
        moved = np.roll(cube, tuple(int(c) for c in d[::-1]), axis=axes)
        out[k] = np.count_nonzero(cube & moved)
    return out


def pairwise_intersection(D: DiffSetSpec, x: int) -> int:
    if x == 0:
        raise ValueError("shift must be nonzero")
    return int(intersection_counts(D, np.array([x]))[0])


def verify_skew_hadamard(D: DiffSetSpec, mode: str | None = None, samples: int = 1000,
                         seed: int = 0,
                         threshold: int = DEFAULT_EXACT_VERIFY_THRESHOLD) -> SkewReport:
    """Check skewness exactly and lambda = (q-3)/4 on all or on sampled shifts.

    ``mode`` is "exact" or "sampled"; by default exact when q <= threshold.
    """
    ctx = D.ctx
    q = ctx.q
    if mode is None:
        mode = "exact" if q <= threshold else "sampled"
    lam = (q - 3) // 4
    skew = disjoint_union_holds(D) and q % 4 == 3 and D.size == (q - 1) // 2
    if mode == "exact":
        shifts = np.arange(1, q, dtype=np.int64)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        shifts = rng.integers(1, q, size=min(samples, q - 1), dtype=np.int64)
    else:
        raise ValueError(f"unknown verification mode {mode!r}")
    counts = intersection_counts(D, shifts)
    bad = np.flatnonzero(counts != lam)
    failures = [(int(shifts[i]), int(counts[i])) for i in bad]
    return SkewReport(q, mode, skew, lam, len(shifts), failures)


# -- index set expressions ------------------------------------------------------

_TERM = re.compile(r"^([+-]?\d*)\s*\*?\s*[<⟨]\s*(p|\d+)\s*[>⟩]$")


def parse_index_set(spec: str | Sequence[int], p: int, N: int) -> tuple[int, ...]:
    """Explicit residues, or an expression such as "<p> u -2<p> u {0}".

    Unions may be written with "∪", "u", "U" or "|"; angle brackets may be
    ASCII or the mathematical ones; the generator is "p" or a number.
    """
    if not isinstance(spec, str):
        return normalize_index_set(spec, N)
    text = spec.replace("−", "-").strip()
    out: set[int] = set()
    for term in re.split(r"\s*(?:∪|\||\bu\b|\bU\b)\s*", text):
        term = term.strip()
        if not term:
            continue
        if term.startswith("{") and term.endswith("}"):
            body = term[1:-1].strip()
            out.update(int(x) % N for x in body.split(",") if x.strip())
            continue
        match = _TERM.match(term)
        if not match:
            raise ValueError(f"cannot parse index-set term {term!r}")
        coef_text, gen_text = match.groups()
        coef = int(coef_text) if coef_text not in ("", "+", "-") else (-1 if coef_text == "-" else 1)
        gen = p if gen_text == "p" else int(gen_text)
        out.update(coef * g % N for g in cyclic_subgroup(gen, N))
    return tuple(sorted(out))
