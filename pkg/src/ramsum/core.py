"""Exact integer primitives: factorization, divisors, and the classical
multiplicative functions everything else is built from.

All functions take and return plain Python integers (arbitrary precision),
reject non-positive input, and are pure; the factorization cache fills
idempotently, so concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

__all__ = [
    "Factorization",
    "factorize",
    "mobius",
    "euler_phi",
    "divisors",
    "gcd_many",
    "lcm_many",
    "gamma_root",
    "is_gamma_power",
]

_FACTOR_CACHE: dict[int, tuple[tuple[int, int], ...]] = {}


@dataclass(frozen=True)
class Factorization:
    """Prime factorization ``value = prod(p**e)`` with primes strictly increasing.

    ``factors`` is empty exactly when ``value == 1``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]


def _check_positive(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")


def factorize(n: int) -> Factorization:
    """Trial-division factorization, cached.  Adequate for desk-scale inputs."""
    _check_positive(n)
    cached = _FACTOR_CACHE.get(n)
    if cached is None:
        m = n
        out: list[tuple[int, int]] = []
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
            p += 1 if p == 2 else 2
        if m > 1:
            out.append((m, 1))
        cached = tuple(out)
        _FACTOR_CACHE[n] = cached
    return Factorization(n, cached)


def mobius(n: int) -> int:
    """Moebius function: 0 on non-squarefree n, else (-1)**(number of primes)."""
    _check_positive(n)
    fac = factorize(n).factors
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    """Euler totient: count of 1 <= l <= n coprime to n."""
    _check_positive(n)
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    _check_positive(n)
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def gcd_many(ns) -> int:
    """gcd of a nonempty collection of positive integers."""
    ns = list(ns)
    if not ns:
        raise ValueError("gcd_many of an empty collection")
    for n in ns:
        _check_positive(n)
    return reduce(math.gcd, ns)


def lcm_many(ns) -> int:
    """lcm of a nonempty collection of positive integers."""
    ns = list(ns)
    if not ns:
        raise ValueError("lcm_many of an empty collection")
    for n in ns:
        _check_positive(n)
    return reduce(math.lcm, ns)


def gamma_root(n: int, gamma: int) -> int | None:
    """The integer d with d**gamma == n, or None when n is not a perfect power.

    Exact for all n: the float estimate only seeds an integer correction loop.
    """
    _check_positive(n)
    _check_positive(gamma, "gamma")
    if gamma == 1 or n == 1:
        return n if gamma == 1 else 1
    d = round(n ** (1.0 / gamma))
    d = max(d, 1)
    while d > 1 and d**gamma > n:
        d -= 1
    while (d + 1) ** gamma <= n:
        d += 1
    return d if d**gamma == n else None


def is_gamma_power(n: int, gamma: int) -> int:
    """Indicator (0 or 1) of n being a perfect gamma-th power."""
    return 1 if gamma_root(n, gamma) is not None else 0
