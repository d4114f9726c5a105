"""Triple intersection numbers, their residues in lifted fields, and verdicts.

T_{w^l,a}(D) = #{x in D : x + w^l in D, x + a w^l in D} is computed three
ways: by direct bitmap lookups, by the character-sum assembly over odd
exponent triples, and modulo m for the lift of D to F_{q^t} from the Weil
pair (e1, e2) of each character sum and the Newton recurrence.

The exponent set A of odd residues is taken mod N: character exponents only
matter mod N, so the N/2 odd classes stand in for all odd 1 <= i <= q-2.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import comb, gcd, isqrt

import numpy as np

from .characters import CharSpec, char_eval, jacobi_sum
from .cyclotomic import (CycInt, NotRationalError, RingSpec, as_rational_integer,
                         divisible_by_prime, reduce_mod, zeta_power)
from .diffsets import DiffSetSpec, transform_index_set
from .finite_field import FieldCtx
from .ntheory import is_prime, legendre, odd_primes_up_to

BRUTEFORCE_BUDGET = 20000


class InvariantError(ValueError):
    pass


def _check_a(ctx: FieldCtx, a: int) -> int:
    a = int(a) % ctx.p
    if a in (0, 1):
        raise InvariantError(f"a must lie in F_p minus {{0, 1}}, got {a}")
    return a


# -- direct count ---------------------------------------------------------------

def triple_direct(D: DiffSetSpec, ell: int, a: int) -> int:
    ctx = D.ctx
    a = _check_a(ctx, a)
    c = ctx.power_of_omega(ell)
    ac = ctx.mul(a, c)
    digits = D.element_digits
    first = D.membership[ctx.undigits(digits + ctx.digits(c))]
    second = D.membership[ctx.undigits(digits + ctx.digits(ac))]
    return int(np.count_nonzero(first & second))


def triple_values_direct(D: DiffSetSpec, a: int) -> list[int]:
    """T for l = 0..N-1 (T is N-periodic in l)."""
    return [triple_direct(D, ell, a) for ell in range(D.N)]


# -- character sums -------------------------------------------------------------

@lru_cache(maxsize=16)
def _triple_histogram(ctx: FieldCtx, N: int, a: int) -> np.ndarray:
    """H[r0, r1, r2] = #{x : dlog x, dlog(x+1), dlog(x+a) = r0, r1, r2 mod N}."""
    xs = np.arange(1, ctx.q, dtype=np.int64)
    x1 = ctx.add(xs, 1)
    xa = ctx.add(xs, a)
    keep = (x1 != 0) & (xa != 0)
    r0 = ctx.dlog[xs[keep]] % N
    r1 = ctx.dlog[x1[keep]] % N
    r2 = ctx.dlog[xa[keep]] % N
    return np.bincount((r0 * N + r1) * N + r2, minlength=N**3)


def _triple_sums(ctx: FieldCtx, N: int, a: int, triples) -> list[CycInt]:
    hist = _triple_histogram(ctx, N, a)
    r = np.arange(N**3)
    r0, r1, r2 = r // (N * N), (r // N) % N, r % N
    spec = RingSpec(N)
    out = []
    for i1, i2, i3 in triples:
        exps = (i1 * r0 + i2 * r1 + i3 * r2) % N
        out.append(spec.from_exponent_counts(np.bincount(exps, weights=hist, minlength=N)
                                             .round().astype(np.int64)))
    return out


def char_sum_triple(ctx: FieldCtx, N: int, i1: int, i2: int, i3: int, a: int) -> CycInt:
    """Sum over F_q of chi^i1(x) chi^i2(x+1) chi^i3(x+a), with chi(0) = 0."""
    if (ctx.q - 1) % N:
        raise InvariantError(f"N={N} does not divide q-1")
    return _triple_sums(ctx, N, _check_a(ctx, a), [(i1, i2, i3)])[0]


def odd_triples(N: int) -> list[tuple[int, int, int]]:
    odd = range(1, N, 2)
    return list(itertools.product(odd, odd, odd))


def _index_factor(index_set, i: int, N: int) -> CycInt:
    """g(i) = sum over h in I of zeta^(-i h)."""
    counts = np.zeros(N, dtype=np.int64)
    for h in index_set:
        counts[(-i * h) % N] += 1
    return RingSpec(N).from_exponent_counts(counts)


def zeta_factor(index_set, N: int, ell: int) -> CycInt:
    """sum over h in I, i odd mod N of zeta^(i(l-h)); its square is (N/2)^2."""
    counts = np.zeros(N, dtype=np.int64)
    for h in index_set:
        for i in range(1, N, 2):
            counts[(i * (ell - h)) % N] += 1
    return RingSpec(N).from_exponent_counts(counts)


def _grouped_by_shift(index_set, N: int, sums: dict, modulus: int | None) -> list[CycInt]:
    """Q[s] = sum of g(i1) g(i2) g(i3) * sums[i] over odd triples with i1+i2+i3 = s."""
    spec = RingSpec(N, modulus)
    g = {i: _index_factor(index_set, i, N) for i in range(1, N, 2)}
    if modulus is not None:
        g = {i: reduce_mod(v, modulus) for i, v in g.items()}
    grouped = [spec.zero() for _ in range(N)]
    for (i1, i2, i3), value in sums.items():
        s = (i1 + i2 + i3) % N
        grouped[s] = grouped[s] + g[i1] * g[i2] * g[i3] * value
    return grouped


def _fx_shape(D: DiffSetSpec) -> tuple[int, int, int]:
    if D.is_paley or D.N == 2:
        raise InvariantError("the character-sum assembly needs N = 2 p1^m; Paley sets are excluded")
    return D.N, D.N // 2, D.fx.P


def _eta_sum(ctx: FieldCtx, a: int) -> int:
    p = ctx.p
    return legendre(a, p) + legendre(1 - a, p) + legendre(a * a - a, p)


def _constant(q: int, N: int, eta: int, P: int, m: int | None = None) -> int:
    """Rational part of N^3 T: everything outside the odd-triple character sums.

    The three pairwise terms each run over the q - 2 points where the two
    shifted arguments are nonzero, so they contribute -3 M^3 (q - 2).  With
    -3 M^3 (q - 1) instead, N^3 T comes out short by exactly 3 M^3.
    """
    M = N // 2
    quarter = (q - 3) // 4 if m is None else (q - 3) * pow(4, -1, m)
    const = (q - 3) * M**3 + 3 * M * N * N * quarter - 3 * M**3 * (q - 2) - M * eta * P * P
    return const if m is None else const % m


def _assemble(grouped, ell: int, N: int) -> CycInt:
    acc = grouped[0].spec.zero()
    for s, value in enumerate(grouped):
        if not value.is_zero():
            acc = acc + value * zeta_power(value.spec, ell * s)
    return acc


def triple_values_formula(D: DiffSetSpec, a: int) -> list[int]:
    """T for l = 0..N-1 from the character-sum assembly, exactly."""
    ctx = D.ctx
    a = _check_a(ctx, a)
    N, M, P = _fx_shape(D)
    q = ctx.q
    triples = odd_triples(N)
    sums = dict(zip(triples, _triple_sums(ctx, N, a, triples)))
    grouped = _grouped_by_shift(D.index_set, N, sums, None)
    const = _constant(q, N, _eta_sum(ctx, a), P)
    out = []
    for ell in range(N):
        total = as_rational_integer(_assemble(grouped, ell, N)) + const
        if total % N**3:
            raise InvariantError(f"N^3 does not divide the assembled value {total}")
        out.append(total // N**3)
    return out


def triple_formula(D: DiffSetSpec, ell: int, a: int) -> int:
    return triple_values_formula(D, a)[ell % D.N]


# -- Weil pairs and lifting -----------------------------------------------------

@dataclass(frozen=True)
class WeilPair:
    e1: CycInt
    e2: CycInt
    triple: tuple[int, int, int]
    a: int


def _check_exponents(N: int, *exps: int) -> None:
    if any(i % N == 0 for i in exps):
        raise InvariantError(f"exponents {exps} must be nonzero mod {N}")


def weil_e2_closed_form(ctx: FieldCtx, N: int, i1: int, i2: int, i3: int, a: int) -> CycInt:
    """w1 w2 from two Jacobi sums, or from q alone when chi^(i2+i3) is trivial."""
    _check_exponents(N, i1, i2, i3)
    a = _check_a(ctx, a)
    chi = CharSpec(ctx, N, 1)
    s23 = (i2 + i3) % N
    head = char_eval(chi.power(i1), a) * char_eval(chi.power(-i2), a)
    if s23 == 0:
        return head * ctx.q
    a2a = ctx.sub(ctx.mul(a, a), a)
    return (char_eval(chi.power(-i2), ctx.neg(a)) * char_eval(chi.power(s23), a2a)
            * char_eval(chi.power(i1), a)
            * jacobi_sum(chi.power(i2), chi.power(i3))
            * jacobi_sum(chi.power(i1), chi.power(s23)))


def weil_e2_bruteforce(ctx: FieldCtx, N: int, i1: int, i2: int, i3: int, a: int) -> CycInt:
    """Sum of chi^i1(v) chi^i2(1-u+v) chi^i3(a^2-au+v) over all monic X^2+uX+v."""
    _check_exponents(N, i1, i2, i3)
    a = _check_a(ctx, a)
    if ctx.q > BRUTEFORCE_BUDGET:
        raise InvariantError(f"q={ctx.q} exceeds the brute-force budget {BRUTEFORCE_BUDGET}")
    v = np.arange(1, ctx.q, dtype=np.int64)
    r0 = (i1 * (ctx.dlog[v] % N)) % N
    aa = ctx.mul(a, a)
    counts = np.zeros(N, dtype=np.int64)
    for u in range(ctx.q):
        g1 = ctx.add(v, ctx.sub(1, u))
        g2 = ctx.add(v, ctx.sub(aa, ctx.mul(a, u)))
        keep = (g1 != 0) & (g2 != 0)
        exps = (r0[keep] + i2 * ctx.dlog[g1[keep]] + i3 * ctx.dlog[g2[keep]]) % N
        counts += np.bincount(exps, minlength=N)
    return RingSpec(N).from_exponent_counts(counts)


def weil_pair(ctx: FieldCtx, N: int, i1: int, i2: int, i3: int, a: int) -> WeilPair:
    e1 = -char_sum_triple(ctx, N, i1, i2, i3, a)
    return WeilPair(e1, weil_e2_closed_form(ctx, N, i1, i2, i3, a), (i1, i2, i3), int(a) % ctx.p)


@lru_cache(maxsize=8)
def _odd_weil_pairs(ctx: FieldCtx, N: int, a: int) -> dict:
    triples = odd_triples(N)
    sums = _triple_sums(ctx, N, a, triples)
    return {t: WeilPair(-s, weil_e2_closed_form(ctx, N, *t, a), t, a)
            for t, s in zip(triples, sums)}


def power_sum(e1: CycInt, e2: CycInt, t: int) -> CycInt:
    """s_t = w1^t + w2^t via s_k = e1 s_(k-1) - e2 s_(k-2), s_0 = 2, s_1 = e1.

    Large t uses the doubling rules s_2k = s_k^2 - 2 e2^k and
    s_(2k+1) = s_k s_(k+1) - e1 e2^k.
    """
    if t < 0:
        raise InvariantError("t must be nonnegative")
    if t <= 64:
        prev, cur = e1.spec.scalar(2), e1
        if t == 0:
            return prev
        for _ in range(t - 1):
            prev, cur = cur, e1 * cur - e2 * prev
        return cur
    sk, sk1, e2k = e1.spec.scalar(2), e1, e1.spec.one()
    for bit in bin(t)[2:]:
        if bit == "0":
            sk, sk1, e2k = sk * sk - e2k * 2, sk * sk1 - e1 * e2k, e2k * e2k
        else:
            e2k_next = e2k * e2k * e2
            sk, sk1 = sk * sk1 - e1 * e2k, sk1 * sk1 - e2k * e2 * 2
            e2k = e2k_next
    return sk


def waring_power_sum(e1: CycInt, e2: CycInt, t: int) -> CycInt:
    """s_t from the closed expansion sum_j (-1)^j t/(t-j) C(t-j, j) e1^(t-2j) e2^j."""
    acc = e1.spec.zero()
    for j in range(t // 2 + 1):
        coef = t * comb(t - j, j) // (t - j)
        acc = acc + (e1 ** (t - 2 * j)) * (e2**j) * ((-1) ** j * coef)
    return acc


def lifted_char_sum(pair: WeilPair, t: int, modulus: int | None = None) -> CycInt:
    """The character sum over F_{q^t}, -s_t, exactly or with coefficients mod m."""
    if t < 1:
        raise InvariantError("t must be >= 1")
    e1, e2 = pair.e1, pair.e2
    if modulus is not None:
        e1, e2 = reduce_mod(e1, modulus), reduce_mod(e2, modulus)
    return -power_sum(e1, e2, t)


def lifted_triple_values(D: DiffSetSpec, a: int, t: int, m: int | None = None) -> list[int]:
    """T_{g^l,a}(D') for l = 0..N-1 and the lift D' of D to F_{q^t}.

    With ``m`` the values are residues mod m (gcd(m, 2 p1) = 1); without it
    they are exact, which is only sensible for small t.
    """
    ctx = D.ctx
    a = _check_a(ctx, a)
    N, M, P = _fx_shape(D)
    if t < 1 or t % 2 == 0:
        raise InvariantError(f"lift degree must be odd and positive, got {t}")
    if m is not None and (m < 3 or gcd(m, 2 * D.fx.p1) != 1):
        raise InvariantError(f"modulus {m} must be >= 3 and coprime to 2 p1")
    pairs = _odd_weil_pairs(ctx, N, a)
    sums = {tr: lifted_char_sum(pair, t, m) for tr, pair in pairs.items()}
    grouped = _grouped_by_shift(D.index_set, N, sums, m)
    eta = _eta_sum(ctx, a)  # chi'_N restricted to F_p is still eta_p for odd t
    if m is None:
        const = _constant(ctx.q**t, N, eta, P)
    else:
        const = _constant(pow(ctx.q, t, m), N, eta, P, m)
    out = []
    for ell in range(N):
        total = _assemble(grouped, ell, N)
        if any(total.coeffs[1:]):
            raise NotRationalError(f"lifted assembly is not rational at l={ell}: {total}")
        value = total.coeffs[0] + const
        if m is None:
            if value % N**3:
                raise InvariantError("N^3 does not divide the lifted assembly")
            out.append(value // N**3)
        else:
            out.append(value * pow(N**3, -1, m) % m)
    return out


def lifted_triple_mod(D: DiffSetSpec, ell: int, a: int, t: int, m: int) -> int:
    return lifted_triple_values(D, a, t, m)[ell % D.N]


def prop26_precondition(ctx: FieldCtx, N: int, a: int) -> bool:
    """p divides J(chi^i2, chi^i3) J(chi^i1, chi^(i2+i3)) for every odd triple with i2+i3 != 0."""
    chi = CharSpec(ctx, N, 1)
    jac = {}
    for i1, i2, i3 in odd_triples(N):
        s23 = (i2 + i3) % N
        if s23 == 0:
            continue
        for key in ((i2, i3), (i1, s23)):
            if key not in jac:
                jac[key] = jacobi_sum(chi.power(key[0]), chi.power(key[1]))
        if not divisible_by_prime(jac[(i2, i3)] * jac[(i1, s23)], ctx.p):
            return False
    return True


# -- small helpers --------------------------------------------------------------

def digit_sum_reduce(t: int, p: int) -> int:
    """Iterate the base-p digit sum until the value is at most p - 2."""
    if t < 1 or t % 2 == 0:
        raise InvariantError(f"t must be odd and positive, got {t}")
    while t > p - 2:
        s = 0
        while t:
            t, r = divmod(t, p)
            s += r
        t = s
    if t % 2 == 0:  # pragma: no cover - digit sums preserve parity for odd p
        raise InvariantError("digit-sum reduction lost parity")
    return t


def corollary_bound(N: int, q: int) -> int:
    """ceil(4 N^3 sqrt(q)), in integer arithmetic."""
    x = 16 * N**6 * q
    r = isqrt(x)
    return r if r * r == x else r + 1


def residue_count(values, t: int) -> int:
    return len({v % t for v in values})


def remark_thresholds(T_set: list[int]) -> dict:
    """v = min(a_(j+2) - a_j) and the rough bound a_u - a_1 over the sorted T-set."""
    if len(T_set) < 3:
        return {"v": None, "rough": T_set[-1] - T_set[0] if T_set else None}
    v = min(T_set[j + 2] - T_set[j] for j in range(len(T_set) - 2))
    return {"v": v, "rough": T_set[-1] - T_set[0]}


# -- report ---------------------------------------------------------------------

@dataclass
class InvariantReport:
    p: int
    f: int
    N: int
    kind: str
    index_set: list[int]
    a: int
    T_values: list[int]
    T_set: list[int]
    formula_checked: bool | None
    n_t: dict[int, int]
    residues: dict[int, list[int]]
    verdicts: list[tuple[str, str]]
    coverage: list[int]
    thm35_coverage: dict[int, int] = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    prop26: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_t"] = {str(k): v for k, v in sorted(self.n_t.items())}
        d["residues"] = {str(k): v for k, v in sorted(self.residues.items())}
        d["thm35_coverage"] = {str(k): v for k, v in sorted(self.thm35_coverage.items())}
        d["verdicts"] = [list(v) for v in self.verdicts]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "InvariantReport":
        d = dict(d)
        for key in ("n_t", "residues", "thm35_coverage"):
            d[key] = {int(k): v for k, v in d.get(key, {}).items()}
        d["verdicts"] = [tuple(v) for v in d["verdicts"]]
        return cls(**d)


class _TSetCache:
    """T-values of D^(s), keyed by the transformed index set."""

    def __init__(self, D: DiffSetSpec, a: int):
        self.D, self.a = D, a
        self._cache: dict[tuple[int, ...], list[int]] = {}

    def values(self, s: int) -> list[int]:
        D = self.D
        if D.is_paley:
            return self.get(D)
        key = transform_index_set(D.index_set, s, D.N)
        if key not in self._cache:
            from .diffsets import build_fx_diffset
            self._cache[key] = triple_values_direct(
                build_fx_diffset(D.ctx, D.fx, key, strict=False), self.a)
        return self._cache[key]

    def get(self, D: DiffSetSpec) -> list[int]:
        if D.index_set not in self._cache:
            self._cache[D.index_set] = triple_values_direct(D, self.a)
        return self._cache[D.index_set]


def _transform_for(t: int, N: int) -> int:
    """t^-1 mod N when t is a unit mod N, else 1 (D itself)."""
    return pow(t, -1, N) if gcd(t, N) == 1 else 1


def invariant_report(D: DiffSetSpec, a: int = 3, t_list=(), coverage_bound: int = 50,
                     thm35_bound: int | None = None, cross_check: bool = True) -> InvariantReport:
    """T-set, residue counts n_t and the inequivalence verdicts for D and its lifts.

    n_t counts residues mod t of the T-values of D^(t^-1 mod N), the set whose
    residues the lift to F_{q^t} shares; when t is not a unit mod N the
    T-values of D itself are used.
    """
    ctx = D.ctx
    a = _check_a(ctx, a)
    cache = _TSetCache(D, a)
    values = cache.get(D)
    T_set = sorted(set(values))
    formula_ok = None
    if cross_check and not D.is_paley:
        formula_ok = triple_values_formula(D, a) == values
    p1 = None if D.is_paley else D.fx.p1

    candidates = sorted(set(int(t) for t in t_list) | set(odd_primes_up_to(coverage_bound)))
    n_t: dict[int, int] = {}
    residues: dict[int, list[int]] = {}
    for t in candidates:
        if t < 2:
            continue
        res = sorted({v % t for v in cache.values(_transform_for(t, D.N))})
        residues[t], n_t[t] = res, len(res)

    verdicts: list[tuple[str, str]] = []
    if len(T_set) >= 3:
        verdicts.append(("D is inequivalent to the Paley difference set",
                         f"{len(T_set)} distinct triple intersection numbers; Paley has at most 2"))

    def certified(t: int, h: int) -> bool:
        if D.is_paley or t % 2 == 0 or not is_prime(t) or t % p1 == 0:
            return False
        s = pow(t, -h, D.N)
        return residue_count(cache.values(s), t) >= 3

    for t in sorted(n_t):
        if certified(t, 1):
            verdicts.append((f"the lift of D to F_(q^{t}) is inequivalent to Paley",
                             f"n_{t} = {n_t[t]} >= 3 for D^({_transform_for(t, D.N)}), "
                             f"t odd prime coprime to p1"))
    coverage: set[int] = set()
    for t in odd_primes_up_to(coverage_bound):
        h, power = 1, t
        while power <= coverage_bound and certified(t, h):
            coverage.add(power)
            h, power = h + 1, power * t
    for power in sorted(coverage):
        if not is_prime(power):
            verdicts.append((f"the lift of D to F_(q^{power}) is inequivalent to Paley",
                             "iterated prime lift, each step with n_t >= 3"))

    thm35: dict[int, int] = {}
    prop26 = None
    if not D.is_paley:
        prop26 = prop26_precondition(ctx, D.N, a)
        bound = coverage_bound if thm35_bound is None else thm35_bound
        lifted_cache: dict[int, int] = {1: residue_count(values, ctx.p)}
        if prop26:
            for t in range(3, bound + 1, 2):
                tp = digit_sum_reduce(t, ctx.p)
                if tp not in lifted_cache:
                    lifted_cache[tp] = residue_count(lifted_triple_values(D, a, tp, ctx.p), ctx.p)
                if lifted_cache[tp] >= 3:
                    thm35[t] = tp
                    verdicts.append((f"the lift of D to F_(q^{t}) is inequivalent to Paley",
                                     f"digit-sum reduction {t} -> {tp}; the {tp}-lift has "
                                     f"{lifted_cache[tp]} residues mod {ctx.p}"))

    return InvariantReport(
        p=ctx.p, f=ctx.f, N=D.N,
        kind="paley" if D.is_paley else f"feng-xiang/{D.fx.variant}",
        index_set=list(D.index_set), a=a, T_values=values, T_set=T_set,
        formula_checked=formula_ok, n_t=n_t, residues=residues, verdicts=verdicts,
        coverage=sorted(coverage), thm35_coverage=thm35,
        thresholds=remark_thresholds(T_set), prop26=prop26,
    )


def pairwise_flags(reports: list[InvariantReport], t: int) -> list[tuple[int, int]]:
    """Pairs (i, j) of reports whose residue sets mod t differ, so the lifts differ."""
    out = []
    for i, j in itertools.combinations(range(len(reports)), 2):
        ri, rj = reports[i].residues.get(t), reports[j].residues.get(t)
        if ri is not None and rj is not None and ri != rj:
            out.append((i, j))
    return out
