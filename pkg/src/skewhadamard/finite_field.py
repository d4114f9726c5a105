"""GF(p^f) with dense discrete-log tables.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{f-1} p^{f-1}`` where
``c_i`` are the coefficients in the polynomial basis ``1, X, ..., X^{f-1}`` of
``F_p[X]/(g)``.  The prime subfield is therefore the codes ``0 .. p-1``.
Every element-level operation accepts either a Python int or a numpy integer
array of codes and answers in kind.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, isqrt
from typing import Sequence

import numpy as np

from .ntheory import factorize, is_prime, prime_divisors

MAX_FIELD_SIZE = 2**26


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class FieldParams:
    p: int
    f: int

    @property
    def q(self) -> int:
        return self.p**self.f

    def validate(self) -> None:
        if self.f < 1:
            raise FieldError(f"extension degree must be positive, got {self.f}")
        if self.p < 3 or not is_prime(self.p):
            raise FieldError(f"p={self.p} is not an odd prime")
        if self.q > MAX_FIELD_SIZE:
            raise FieldError(f"q={self.q} exceeds the table budget {MAX_FIELD_SIZE}")


# -- polynomials over F_p, coefficient lists low degree first -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    g = _trim([c % p for c in g])
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(a) - 1 >= dg and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dg
        for i, gi in enumerate(g):
            a[shift + i] = (a[shift + i] - c * gi) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _poly_mod(prod, g, p)


def _poly_powmod(a: Sequence[int], e: int, g: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, g, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, g, p)
        base = _poly_mulmod(base, base, g, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(g: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree >= 1."""
    f = len(g) - 1
    if f == 1:
        return True
    x = [0, 1]
    if _poly_powmod(x, p**f, g, p) != _poly_mod(x, g, p):
        return False
    for r in prime_divisors(f):
        h = _poly_powmod(x, p ** (f // r), g, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(g, h, p)) > 1:
            return False
    return True


def root_is_primitive(g: Sequence[int], p: int) -> bool:
    """Whether X has order p^f - 1 in F_p[X]/(g)."""
    q = p ** (len(g) - 1)
    x = [0, 1]
    if g[0] % p == 0:
        return False
    for r in prime_divisors(q - 1):
        if _poly_powmod(x, (q - 1) // r, g, p) == [1]:
            return False
    return True


def find_primitive_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically smallest primitive monic polynomial of degree f.

    Candidates ``(c_0, ..., c_{f-1})`` are scanned in lexicographic order with
    the constant term most significant.
    """
    # the root's norm (-1)^f g(0) must itself generate F_p^*
    roots = set(prime_divisors(p - 1))
    good_const = {
        c for c in range(1, p)
        if all(pow((-1) ** f * c % p, (p - 1) // r, p) != 1 for r in roots)
    }
    for low in itertools.product(range(p), repeat=f):
        if low[0] not in good_const:
            continue
        g = list(low) + [1]
        if is_irreducible(g, p) and root_is_primitive(g, p):
            return tuple(g)
    raise FieldError(f"no primitive polynomial of degree {f} over F_{p}")  # pragma: no cover


class FieldCtx:
    """A materialized finite field: modulus, primitive element and log tables.

    ``exp[k] = omega^k`` for ``0 <= k < q-1`` and ``dlog[x]`` inverts it, with
    ``dlog[0] = -1`` as a sentinel.
    """

    def __init__(self, params: FieldParams, modulus: Sequence[int], omega: int | None = None):
        params.validate()
        p, f = params.p, params.f
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree f")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible")
        self.params = params
        self.p = p
        self.f = f
        self.q = params.q
        self.modulus = modulus
        self._weights = np.array([p**i for i in range(f)], dtype=np.int64)
        if omega is None:
            omega = p if f > 1 else (-modulus[0]) % p
        self.omega = int(omega)
        self.exp, self.dlog = self._build_tables()
        if self.dlog[self.omega] != 1:  # pragma: no cover - guaranteed by construction
            raise FieldError("log table inconsistent")

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, f={self.f}, modulus={self.modulus}, omega={self.omega})"

    # -- construction --------------------------------------------------------

    def _mul_matrix(self, c: int) -> np.ndarray:
        """Matrix M with digits(c*y) = M @ digits(y) mod p."""
        p, g = self.p, self.modulus
        cc = self.to_coeffs(c)
        cols = []
        for j in range(self.f):
            xj = [0] * j + [1]
            v = _poly_mulmod(cc, xj, g, p)
            cols.append(v + [0] * (self.f - len(v)))
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        q, p = self.q, self.p
        n = q - 1
        block = isqrt(n) + 1
        step = self._mul_matrix(self.omega)
        first = np.zeros((block, self.f), dtype=np.int64)
        cur = np.zeros(self.f, dtype=np.int64)
        cur[0] = 1
        for k in range(block):
            first[k] = cur
            cur = step @ cur % p
        jump = self._mul_matrix(self.from_coeffs(cur.tolist())).T
        chunks = []
        rows = first
        for _ in range(0, n, block):
            chunks.append(rows @ self._weights)
            rows = rows @ jump % p
        exp = np.concatenate(chunks)[:n]
        dlog = np.full(q, -1, dtype=np.int64)
        dlog[exp] = np.arange(n, dtype=np.int64)
        if exp[0] != 1 or np.count_nonzero(dlog >= 0) != n or dlog[0] != -1:
            raise FieldError(f"omega={self.omega} is not a primitive element")
        return exp, dlog

    def with_primitive(self, u: int) -> "FieldCtx":
        """Same field with omega replaced by omega^u, gcd(u, q-1) = 1."""
        if gcd(u, self.q - 1) != 1:
            raise FieldError(f"omega^{u} is not primitive")
        return FieldCtx(self.params, self.modulus, int(self.exp[u % (self.q - 1)]))

    # -- encoding ------------------------------------------------------------

    def to_coeffs(self, x: int) -> list[int]:
        out = []
        x = int(x)
        for _ in range(self.f):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def digits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._weights) % self.p

    def undigits(self, d: np.ndarray) -> np.ndarray:
        return (d % self.p) @ self._weights

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # -- arithmetic ----------------------------------------------------------

    def add(self, x, y):
        if self.f == 1:
            return _like(x, y, (np.asarray(x, dtype=np.int64) + y) % self.p)
        return _like(x, y, self.undigits(self.digits(x) + self.digits(y)))

    def neg(self, x):
        if self.f == 1:
            return _like(x, x, (-np.asarray(x, dtype=np.int64)) % self.p)
        return _like(x, x, self.undigits(-self.digits(x)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        xa = np.asarray(x, dtype=np.int64)
        ya = np.asarray(y, dtype=np.int64)
        lx, ly = self.dlog[xa], self.dlog[ya]
        prod = self.exp[(lx + ly) % (self.q - 1)]
        return _like(x, y, np.where((lx < 0) | (ly < 0), 0, prod))

    def inv(self, x):
        xa = np.asarray(x, dtype=np.int64)
        if np.any(xa == 0):
            raise ZeroDivisionError("inverse of zero in finite field")
        return _like(x, x, self.exp[(-self.dlog[xa]) % (self.q - 1)])

    def pow(self, x, e: int):
        xa = np.asarray(x, dtype=np.int64)
        lx = self.dlog[xa]
        if e < 0 and np.any(lx < 0):
            raise ZeroDivisionError("negative power of zero")
        val = self.exp[(lx * (e % (self.q - 1))) % (self.q - 1)]
        zero_val = 1 if e == 0 else 0
        return _like(x, x, np.where(lx < 0, zero_val, val))

    def log(self, x):
        xa = np.asarray(x, dtype=np.int64)
        if np.any(xa == 0):
            raise FieldError("discrete log of zero")
        return _like(x, x, self.dlog[xa])

    def power_of_omega(self, k):
        return _like(k, k, self.exp[np.asarray(k, dtype=np.int64) % (self.q - 1)])

    # -- trace ---------------------------------------------------------------

    @cached_property
    def trace_basis(self) -> np.ndarray:
        """Tr(X^i) for i < f, as integers mod p."""
        out = []
        for i in range(self.f):
            xi = self.from_coeffs([0] * i + [1])
            acc = 0
            y = xi
            for _ in range(self.f):
                acc = self.add(acc, y)
                y = self.pow(y, self.p)
            if acc >= self.p:  # pragma: no cover - trace always lands in F_p
                raise FieldError("trace left the prime subfield")
            out.append(acc)
        return np.array(out, dtype=np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        return self.digits(self.elements()) @ self.trace_basis % self.p

    def trace(self, x):
        return _like(x, x, self.trace_table[np.asarray(x, dtype=np.int64)])


def _like(x, y, result):
    """Return a Python int when both operands were scalars."""
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return int(result)
    return result


def build_field(params: FieldParams) -> FieldCtx:
    params.validate()
    return FieldCtx(params, find_primitive_modulus(params.p, params.f))


def subfield(big: FieldCtx, f_small: int) -> FieldCtx:
    """The subfield of order p^f_small, represented compatibly with ``big``.

    Its primitive element is identified with big.omega^((Q-1)/(q-1)), and its
    modulus is that element's minimal polynomial, so the identification is a
    field embedding and norm_to_subfield agrees with the true norm.
    """
    if f_small < 1 or big.f % f_small:
        raise FieldError(f"no subfield of degree {f_small} inside degree {big.f}")
    p = big.p
    q_small = p**f_small
    beta = big.power_of_omega((big.q - 1) // (q_small - 1))
    poly = [1]
    conj = beta
    for _ in range(f_small):
        # multiply poly by (Y - conj) with coefficients in the big field
        shifted = [0] + poly
        scaled = [big.mul(big.neg(conj), c) for c in poly] + [0]
        poly = [big.add(a, b) for a, b in zip(shifted, scaled)]
        conj = big.pow(conj, p)
    if any(c >= p for c in poly):  # pragma: no cover
        raise FieldError("minimal polynomial not over F_p")
    small = FieldCtx(FieldParams(p, f_small), poly)
    return small


def norm_to_subfield(big: FieldCtx, small: FieldCtx, x):
    """x^((Q-1)/(q-1)) read in ``small`` via small.omega <-> big.omega^((Q-1)/(q-1))."""
    if big.p != small.p or big.f % small.f:
        raise FieldError("incompatible field degrees for the norm map")
    xa = np.asarray(x, dtype=np.int64)
    lx = big.dlog[xa]
    val = small.exp[lx % (small.q - 1)]
    return _like(x, x, np.where(lx < 0, 0, val))


def is_compatible_subfield(big: FieldCtx, small: FieldCtx) -> bool:
    """Whether omega_small -> big.omega^((Q-1)/(q-1)) is a field embedding."""
    if big.p != small.p or big.f % small.f:
        return False
    beta = big.power_of_omega((big.q - 1) // (small.q - 1))
    omega_coeffs = small.to_coeffs(small.omega)
    # evaluate the minimal polynomial of small.omega at beta inside big
    acc = 0
    for c in reversed(_minimal_polynomial(small, omega_coeffs)):
        acc = big.add(big.mul(acc, beta), c)
    return acc == 0


def _minimal_polynomial(ctx: FieldCtx, coeffs: Sequence[int]) -> list[int]:
    x = ctx.from_coeffs(coeffs)
    poly = [1]
    conj = x
    seen = []
    while conj not in seen:
        seen.append(conj)
        shifted = [0] + poly
        scaled = [ctx.mul(ctx.neg(conj), c) for c in poly] + [0]
        poly = [ctx.add(a, b) for a, b in zip(shifted, scaled)]
        conj = ctx.pow(conj, ctx.p)
    return poly


def omega_order(ctx: FieldCtx) -> int:
    """Order of omega by polynomial arithmetic, independent of the log tables."""
    n = ctx.q - 1
    w = ctx.to_coeffs(ctx.omega)
    order = n
    for r, e in factorize(n).items():
        for _ in range(e):
            if _poly_powmod(w, order // r, ctx.modulus, ctx.p) == [1]:
                order //= r
            else:
                break
    return order
