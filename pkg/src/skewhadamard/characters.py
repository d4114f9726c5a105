"""Multiplicative characters, Gauss sums and Jacobi sums over a FieldCtx.

Conventions:

* ``CharSpec(ctx, N, j)`` is chi_N^j with chi_N(omega) = zeta_N; every
  character takes the value 0 at 0, the trivial one included.
* Gauss sums live in conductor L = p*N with zeta_p = zeta_L^N and
  zeta_N = zeta_L^p, which is what ``CycInt.lift`` produces from the smaller
  conductors.
* Square roots in closed forms are the prime-field quadratic Gauss sums
  sqrt(p*) = G_p(eta_p), so every closed form is an exact ring identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .cyclotomic import CycInt, RingSpec, zeta_power
from .finite_field import FieldCtx, FieldError, is_compatible_subfield
from .ntheory import cyclic_subgroup, euler_phi, is_prime, legendre, multiplicative_order


class CharacterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CharSpec:
    ctx: FieldCtx
    order: int
    j: int = 1

    def __post_init__(self):
        if self.order < 1 or (self.ctx.q - 1) % self.order:
            raise CharacterError(f"N={self.order} does not divide q-1={self.ctx.q - 1}")

    @property
    def is_trivial(self) -> bool:
        return self.j % self.order == 0

    def power(self, k: int) -> "CharSpec":
        return CharSpec(self.ctx, self.order, (self.j * k) % self.order)

    def exponent(self, x) -> np.ndarray:
        """j*dlog(x) mod N (meaningless where x = 0)."""
        return (self.j * (self.ctx.dlog[np.asarray(x, dtype=np.int64)] % self.order)) % self.order


def ring(n: int) -> RingSpec:
    return RingSpec(n)


def char_eval(chi: CharSpec, x: int) -> CycInt:
    spec = RingSpec(chi.order)
    if x == 0:
        return spec.zero()
    return zeta_power(spec, int(chi.exponent(x)))


def gauss_sum(chi: CharSpec) -> CycInt:
    """G_q(chi) = sum over nonzero x of chi(x) zeta_p^Tr(x), in conductor pN."""
    ctx, N = chi.ctx, chi.order
    L = ctx.p * N
    xs = np.arange(1, ctx.q, dtype=np.int64)
    exps = (chi.exponent(xs) * ctx.p + N * ctx.trace_table[xs]) % L
    return RingSpec(L).from_exponent_counts(np.bincount(exps, minlength=L))


@lru_cache(maxsize=32)
def _jacobi_histogram(ctx: FieldCtx, N: int) -> np.ndarray:
    """H[r, s] = #{x != 0, 1 : dlog x = r, dlog(1-x) = s (mod N)}."""
    xs = np.arange(2, ctx.q, dtype=np.int64)
    one_minus = ctx.sub(1, xs)
    keep = one_minus != 0
    xs, one_minus = xs[keep], one_minus[keep]
    r = ctx.dlog[xs] % N
    s = ctx.dlog[one_minus] % N
    return np.bincount(r * N + s, minlength=N * N).reshape(N, N)


def jacobi_sum(chi1: CharSpec, chi2: CharSpec) -> CycInt:
    """J(chi1, chi2) = sum over x != 0, 1 of chi1(x) chi2(1-x), in conductor N."""
    if chi1.ctx is not chi2.ctx or chi1.order != chi2.order:
        raise CharacterError("Jacobi sum needs characters on one field with one conductor")
    N = chi1.order
    hist = _jacobi_histogram(chi1.ctx, N)
    r = np.arange(N)
    exps = (chi1.j * r[:, None] + chi2.j * r[None, :]) % N
    counts = np.bincount(exps.ravel(), weights=hist.ravel(), minlength=N)
    return RingSpec(N).from_exponent_counts(np.rint(counts).astype(np.int64))


def prime_quadratic_gauss_sum(p: int) -> CycInt:
    """G_p(eta_p) in conductor p; this is sqrt(p*) with p* = (-1)^((p-1)/2) p."""
    counts = [legendre(x, p) for x in range(p)]
    return RingSpec(p).from_exponent_counts(np.array(counts, dtype=np.int64))


def quadratic_gauss_closed_form(p: int, f: int) -> CycInt:
    """(-1)^(f-1) (sqrt(p*))^f in conductor p."""
    if p < 3 or not is_prime(p):
        raise CharacterError(f"p={p} is not an odd prime")
    sign = -1 if (f - 1) % 2 else 1
    return prime_quadratic_gauss_sum(p) ** f * sign


def class_number(p1: int) -> int:
    """Class number of Q(sqrt(-p1)) by counting reduced forms of discriminant -p1."""
    if p1 <= 3 or p1 % 4 != 3 or not is_prime(p1):
        raise CharacterError(f"expected a prime p1 > 3 with p1 = 3 mod 4, got {p1}")
    disc = -p1
    count = 0
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                count += 1
        a += 1
    return count


@dataclass(frozen=True)
class Index2Params:
    p: int
    f: int
    p1: int
    m: int
    h: int
    b: int
    c: int

    @property
    def N(self) -> int:
        return 2 * self.p1**self.m


def index2_params(p: int, p1: int, m: int, c_sign: int = 1) -> Index2Params:
    """Solve 4 p^h = b^2 + p1 c^2 with b p^((f-h)/2) = -2 (mod p1).

    The sign of c is not fixed by these conditions; ``c_sign`` picks it.
    """
    N = 2 * p1**m
    if gcd(p, N) != 1:
        raise CharacterError(f"p={p} is not a unit mod N={N}")
    f = multiplicative_order(p, N)
    if euler_phi(N) != 2 * f or (N - 1) in cyclic_subgroup(p, N):
        raise CharacterError(f"<{p}> is not an index-2 subgroup of (Z/{N}Z)^* missing -1")
    h = class_number(p1)
    target = 4 * p**h
    k = (f - h) // 2
    c = 1
    while p1 * c * c <= target:
        b2 = target - p1 * c * c
        b = isqrt(b2)
        if b * b == b2:
            for sb in (b, -b):
                if (sb * pow(p, k, p1) + 2) % p1 == 0:
                    return Index2Params(p, f, p1, m, h, sb, c if c_sign >= 0 else -c)
        c += 1
    raise CharacterError(f"no (b, c) with 4*{p}^{h} = b^2 + {p1} c^2 and the sign condition")


def index2_gauss_closed_form(params: Index2Params, t: int, which: str) -> CycInt:
    """Closed form of G_q(chi^k) for k = p1^t, 2 p1^t or p1^m (conductor pN).

    ``which`` is one of ``"p1^t"``, ``"2p1^t"``, ``"p1^m"``.
    """
    p, f, p1, m, h, b, c = (params.p, params.f, params.p1, params.m,
                            params.h, params.b, params.c)
    if not 0 <= t <= m - 1 and which != "p1^m":
        raise CharacterError(f"t={t} outside 0..{m - 1}")
    L = p * params.N
    sqrt_pstar = prime_quadratic_gauss_sum(p).lift(L)
    sqrt_mp1 = prime_quadratic_gauss_sum(p1).lift(L)
    spec = RingSpec(L)
    half = (p - 1) // 2
    pt = p1**t

    if which == "p1^m" or (which == "p1^t" and p1 % 8 == 7):
        sign = (-1) ** (half * ((f - 1) // 2))
        return sqrt_pstar * (sign * p ** ((f - 1) // 2))
    if which == "p1^t":
        if p1 % 8 != 3:
            raise CharacterError("closed form needs p1 = 3 or 7 mod 8")
        sign = (-1) ** (half * ((f - 1) // 2 - 1))
        num = sqrt_pstar * (spec.scalar(b) + sqrt_mp1 * c) ** (2 * pt) * sign
        return _scale_by_prime_power(num, p, (f - 1) // 2 - h * pt).exact_div(2 ** (2 * pt))
    if which == "2p1^t":
        num = (spec.scalar(b) + sqrt_mp1 * c) ** pt
        return _scale_by_prime_power(num, p, (f - pt * h) // 2).exact_div(2**pt)
    raise CharacterError(f"unknown exponent form {which!r}")


def _scale_by_prime_power(x: CycInt, p: int, e: int) -> CycInt:
    return x * p**e if e >= 0 else x.exact_div(p ** (-e))


def davenport_hasse_lift_check(small: FieldCtx, big: FieldCtx, chi: CharSpec, s: int) -> bool:
    """G_{q^s}(chi o Norm) == (-1)^(s-1) G_q(chi)^s, exactly.

    ``small`` must sit inside ``big`` compatibly (see finite_field.subfield).
    """
    if chi.ctx is not small:
        raise CharacterError("character must live on the small field")
    if big.p != small.p or big.f != small.f * s:
        raise FieldError("big field is not the degree-s extension")
    if s > 1 and not is_compatible_subfield(big, small):
        raise FieldError("small field is not embedded compatibly; build it with subfield()")
    lifted = CharSpec(big, chi.order, chi.j)
    lhs = gauss_sum(lifted)
    rhs = gauss_sum(chi) ** s * (-1 if (s - 1) % 2 else 1)
    return lhs == rhs


def product_formula_check(ctx: FieldCtx, p1: int, m: int) -> bool:
    """Davenport-Hasse product formula for N = 2 p1^m, cleared of denominators.

    Checks G(chi_N) chi_P(2) G(chi_P^(1/2)) == G(chi_P) G(chi_2) with P = p1^m,
    chi_P = chi_N^(2(1-P)), chi_P^(1/2) = chi_N^(1-P) and chi_2 = chi_N^P.  When
    2 is in <p> mod P and gcd(p1, p-1) = 1 it also checks G(chi_N) == G(chi_2).
    """
    if m < 1 or p1 < 3 or not is_prime(p1):
        raise CharacterError("need an odd prime p1 and m >= 1")
    P = p1**m
    N = 2 * P
    if (ctx.q - 1) % N:
        raise CharacterError(f"N={N} does not divide q-1")
    chi = CharSpec(ctx, N, 1)
    chi_2 = chi.power(P)
    half_P = chi.power(1 - P)
    chi_P = chi.power(2 * (1 - P))
    L = ctx.p * N
    chi_P_at_2 = char_eval(chi_P, 2 % ctx.p).lift(L)
    g_N = gauss_sum(chi)
    g_2 = gauss_sum(chi_2)
    ok = g_N * chi_P_at_2 * gauss_sum(half_P) == gauss_sum(chi_P) * g_2
    if 2 % P in cyclic_subgroup(ctx.p, P) and gcd(p1, ctx.p - 1) == 1:
        ok = ok and g_N == g_2
    return ok
