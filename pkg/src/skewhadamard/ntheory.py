"""Small integer number-theory helpers shared by the other modules."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for n below ~2**40."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for r in factorize(n):
        result -= result // r
    return result


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    order = euler_phi(n)
    for r, e in factorize(order).items():
        for _ in range(e):
            if pow(a, order // r, n) == 1:
                order //= r
            else:
                break
    return order


def cyclic_subgroup(a: int, n: int) -> set[int]:
    """The subgroup <a> of (Z/nZ)^*."""
    out = {1 % n}
    x = a % n
    while x not in out:
        out.add(x)
        x = x * a % n
    return out


def legendre(x: int, p: int) -> int:
    """Quadratic character of F_p with the value 0 at 0."""
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def odd_primes_up_to(bound: int) -> list[int]:
    if bound < 3:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i in range(3, bound + 1) if sieve[i]]
