"""Exact arithmetic in Z[zeta_n] and (Z/mZ)[zeta_n] in the power basis.

A ``CycInt`` stores the phi(n) coordinates of an element with respect to
``1, zeta, ..., zeta^(phi(n)-1)`` after reduction by the cyclotomic polynomial.
The power basis is an integral basis of Z[zeta_n], so coordinate-wise
divisibility tests are sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .ntheory import euler_phi

_INT64_SAFE = 2**62


class RingError(ValueError):
    pass


class NotRationalError(RingError):
    """Raised when a value expected to be a rational integer is not."""


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first, by dividing x^n - 1 by Phi_d."""
    if n < 1:
        raise RingError(f"conductor must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_poly_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_poly_div(a: list[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]  # b is monic
        out[k - db] = c
        if c:
            for i, bi in enumerate(b):
                a[k - db + i] -= c * bi
    if any(a[:db]):  # pragma: no cover
        raise RingError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _reduction_matrix(n: int) -> np.ndarray:
    """Row k holds the power-basis coordinates of zeta_n^k (0 <= k < n)."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    rows = np.zeros((n, phi), dtype=np.int64)
    cur = [0] * phi
    cur[0] = 1
    for k in range(n):
        rows[k] = cur
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    rows.setflags(write=False)
    return rows


@dataclass(frozen=True)
class RingSpec:
    n: int
    modulus: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise RingError(f"conductor must be positive, got {self.n}")
        if self.modulus is not None and self.modulus < 2:
            raise RingError(f"coefficient modulus must be >= 2, got {self.modulus}")

    @property
    def phi(self) -> int:
        return euler_phi(self.n)

    @property
    def cyclo_poly(self) -> tuple[int, ...]:
        return cyclotomic_polynomial(self.n)

    @property
    def exact(self) -> bool:
        return self.modulus is None

    def zero(self) -> "CycInt":
        return CycInt(self, [0] * self.phi)

    def one(self) -> "CycInt":
        return self.scalar(1)

    def scalar(self, c: int) -> "CycInt":
        return CycInt(self, [c] + [0] * (self.phi - 1))

    def zeta(self, k: int = 1) -> "CycInt":
        return zeta_power(self, k)

    def from_exponent_counts(self, counts: Sequence[int] | np.ndarray) -> "CycInt":
        """sum_k counts[k] * zeta^k, exponents taken mod n."""
        return CycInt(self, _reduce_counts(self.n, counts))


def _fold(n: int, counts) -> list[int] | np.ndarray:
    counts = np.asarray(counts) if not isinstance(counts, np.ndarray) else counts
    if len(counts) <= n:
        if counts.dtype == object:
            return list(counts) + [0] * (n - len(counts))
        out = np.zeros(n, dtype=np.int64)
        out[: len(counts)] = counts
        return out
    if counts.dtype != object and np.abs(counts).max(initial=0) < _INT64_SAFE // len(counts):
        pad = (-len(counts)) % n
        return np.concatenate([counts.astype(np.int64), np.zeros(pad, np.int64)]).reshape(-1, n).sum(axis=0)
    out = [0] * n
    for k, c in enumerate(counts.tolist()):
        out[k % n] += c
    return out


def _reduce_counts(n: int, counts) -> list[int]:
    folded = _fold(n, counts)
    rows = _reduction_matrix(n)
    if isinstance(folded, np.ndarray):
        bound = int(np.abs(folded).max(initial=0))
        if bound * int(np.abs(rows).sum(axis=0).max(initial=1)) < _INT64_SAFE:
            return (folded @ rows).tolist()
        folded = folded.tolist()
    phi = rows.shape[1]
    out = [0] * phi
    for k, c in enumerate(folded):
        if c:
            for j, r in enumerate(rows[k].tolist()):
                if r:
                    out[j] += c * r
    return out


class CycInt:
    """Element of Z[zeta_n] (exact) or (Z/mZ)[zeta_n] (modular)."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: Iterable[int]):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != spec.phi:
            raise RingError(f"expected {spec.phi} coordinates, got {len(coeffs)}")
        if spec.modulus is not None:
            coeffs = [c % spec.modulus for c in coeffs]
        self.spec = spec
        self.coeffs = tuple(coeffs)

    # -- plumbing ------------------------------------------------------------

    def _check(self, other: "CycInt") -> None:
        if self.spec != other.spec:
            raise RingError(f"ring mismatch: {self.spec} vs {other.spec}")

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return self.spec.scalar(int(other))
        return NotImplemented

    def __repr__(self) -> str:
        mod = "" if self.spec.exact else f" mod {self.spec.modulus}"
        return f"CycInt(n={self.spec.n}{mod}, {list(self.coeffs)})"

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.spec, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.spec, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.spec, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycInt(self.spec, [a * int(other) for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.spec, _reduce_counts(self.spec.n, _convolve(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycInt":
        if e < 0:
            raise RingError("negative powers are not supported")
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, d: int) -> "CycInt":
        """Division by a rational integer that must divide every coordinate."""
        if not self.spec.exact:
            raise RingError("exact division needs exact coefficients")
        if any(c % d for c in self.coeffs):
            raise RingError(f"{self} is not divisible by {d}")
        return CycInt(self.spec, [c // d for c in self.coeffs])

    # -- maps ----------------------------------------------------------------

    def galois(self, a: int) -> "CycInt":
        return galois_apply(self, a)

    def conj(self) -> "CycInt":
        return galois_apply(self, -1)

    def lift(self, n2: int) -> "CycInt":
        """Image under Q(zeta_n) -> Q(zeta_n2), zeta_n -> zeta_n2^(n2/n)."""
        n = self.spec.n
        if n2 % n:
            raise RingError(f"{n} does not divide {n2}")
        step = n2 // n
        counts = [0] * n2
        for i, c in enumerate(self.coeffs):
            counts[i * step] = c
        return CycInt(RingSpec(n2, self.spec.modulus), _reduce_counts(n2, np.array(counts, dtype=object)))

    def embeddings(self) -> np.ndarray:
        """Values under the phi(n) complex embeddings zeta -> exp(2 pi i k / n)."""
        n = self.spec.n
        ks = [k for k in range(1, n + 1) if gcd(k, n) == 1]
        c = np.array([float(x) for x in self.coeffs])
        powers = np.exp(2j * np.pi * np.outer(ks, np.arange(len(c))) / n)
        return powers @ c


def _convolve(a: Sequence[int], b: Sequence[int]):
    amax = max((abs(x) for x in a), default=0)
    bmax = max((abs(x) for x in b), default=0)
    if amax * bmax * len(a) < _INT64_SAFE:
        return np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return np.array(out, dtype=object)


def zeta_power(spec: RingSpec, k: int) -> CycInt:
    return CycInt(spec, _reduction_matrix(spec.n)[k % spec.n].tolist())


def ring_add(x: CycInt, y: CycInt) -> CycInt:
    x._check(y)
    return x + y


def ring_mul(x: CycInt, y: CycInt) -> CycInt:
    x._check(y)
    return x * y


def ring_scale(x: CycInt, c: int) -> CycInt:
    return x * c


def galois_apply(x: CycInt, a: int) -> CycInt:
    """The automorphism zeta -> zeta^a."""
    n = x.spec.n
    if gcd(a, n) != 1:
        raise RingError(f"gcd({a}, {n}) != 1")
    counts = np.zeros(n, dtype=object)
    for i, c in enumerate(x.coeffs):
        counts[(a * i) % n] += c
    return CycInt(x.spec, _reduce_counts(n, counts))


def as_rational_integer(x: CycInt) -> int:
    if any(x.coeffs[1:]):
        raise NotRationalError(f"{x} is not a rational integer")
    return x.coeffs[0]


def divisible_by_prime(x: CycInt, p: int) -> bool:
    if not x.spec.exact:
        raise RingError("divisibility test needs exact coefficients")
    return all(c % p == 0 for c in x.coeffs)


def reduce_mod(x: CycInt, m: int) -> CycInt:
    if m < 2:
        raise RingError(f"modulus must be >= 2, got {m}")
    if not x.spec.exact:
        raise RingError("reduce_mod expects an exact element")
    return CycInt(RingSpec(x.spec.n, m), x.coeffs)


def evaluate_cyclotomic_at_zeta(spec: RingSpec) -> CycInt:
    """Phi_n(zeta_n) computed in the ring; zero for a correct implementation."""
    acc = spec.zero()
    for i, c in enumerate(spec.cyclo_poly):
        acc = acc + zeta_power(spec, i) * c
    return acc
