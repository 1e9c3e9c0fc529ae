"""Seeded random instances for the randomized verification commands.

Everything here is deterministic in the master ``random.Random``: derived
functions hash their seed with the argument, so a regenerated instance
gives identical values in any evaluation order.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arithfn import (
    ArithFn,
    a_gamma_fn,
    dirichlet,
    eps_fn,
    mu_fn,
    one_fn,
    phi_fn,
    pointwise_mul,
    pow_fn,
)
from .fourier import EvenCoeffTable, reconstruct_even
from .hyperdet import FactorClosedSet, Hypermatrix, factor_closure
from .multisum import MultiSumSpec, WeightFn

__all__ = [
    "random_int_fn",
    "random_multiplicative_fn",
    "random_weight",
    "random_spec",
    "random_hypermatrix",
    "random_even_table",
    "random_factor_closed",
]

_MIX = 0x9E3779B97F4A7C15


def random_int_fn(rng: random.Random, lo: int = -3, hi: int = 3, unit: bool = False) -> ArithFn:
    """Arbitrary integer-valued function; ``unit`` pins f(1) = 1."""
    seed = rng.getrandbits(64)

    def f(n: int) -> int:
        if unit and n == 1:
            return 1
        return random.Random(seed ^ (n * _MIX)).randint(lo, hi)

    return ArithFn(f, label=f"rand{seed & 0xFFFF:04x}")


_NAMED_MULT = (
    mu_fn,
    phi_fn,
    one_fn,
    eps_fn,
    lambda: pow_fn(1),
    lambda: pow_fn(2),
    lambda: pow_fn(-1),
    lambda: a_gamma_fn(2),
    lambda: a_gamma_fn(3),
)


def random_multiplicative_fn(rng: random.Random, depth: int = 1) -> ArithFn:
    """A multiplicative function: a named one, or a convolution/product of two."""
    if depth > 0 and rng.random() < 0.3:
        op = rng.choice((dirichlet, pointwise_mul))
        return op(
            random_multiplicative_fn(rng, depth - 1),
            random_multiplicative_fn(rng, depth - 1),
        )
    return rng.choice(_NAMED_MULT)()


def random_weight(rng: random.Random, m: int, multiplicative: bool = False) -> WeightFn:
    """An m-variable weight; the multiplicative flavor factors through the
    product of its arguments via a multiplicative single-variable function."""
    if multiplicative:
        h = random_multiplicative_fn(rng)
        prod_fn = lambda ds: h(_product(ds))
        return WeightFn(m, prod_fn, is_multiplicative=True, label=f"xi[{h.label}]")
    seed = rng.getrandbits(64)

    def w(ds: tuple[int, ...]) -> int:
        key = seed
        for d in ds:
            key = (key ^ (d * _MIX)) & (2**64 - 1)
        return random.Random(key).randint(-2, 3)

    return WeightFn(m, w, label=f"xi{seed & 0xFFFF:04x}")


def _product(ds) -> int:
    out = 1
    for d in ds:
        out *= d
    return out


def random_spec(
    rng: random.Random,
    m: int,
    gamma_max: int = 3,
    multiplicative: bool = False,
    weighted: bool = False,
) -> MultiSumSpec:
    gammas = tuple(rng.randint(1, gamma_max) for _ in range(m))
    if multiplicative:
        fns = tuple(random_multiplicative_fn(rng) for _ in range(m + 1))
    else:
        fns = tuple(random_int_fn(rng) for _ in range(m + 1))
    weight = None
    if weighted and m >= 1:
        weight = random_weight(rng, m, multiplicative=multiplicative)
    return MultiSumSpec(gammas, fns, weight)


def random_hypermatrix(
    rng: random.Random, dim: int, order: int, denom_max: int = 1
) -> Hypermatrix:
    """Random exact entries; denominators above 1 give mixed Fractions."""
    def draw(_idx):
        num = rng.randint(-5, 5)
        den = rng.randint(1, denom_max)
        return Fraction(num, den) if den > 1 else num

    return Hypermatrix.from_function(dim, order, draw)


def random_even_table(rng: random.Random, r: int, m: int) -> EvenCoeffTable:
    """A random exact coefficient table over the divisor tuples of r; the
    kernel expansion of such a table is even by construction."""
    from itertools import product

    from .core import divisors

    coeffs = {
        d: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        for d in product(divisors(r), repeat=m)
    }
    return EvenCoeffTable((r,), (m,), coeffs)


def even_fn_from_table(table: EvenCoeffTable):
    """The function whose even expansion is exactly ``table``."""
    return lambda *ns: reconstruct_even(table, ns)


def random_factor_closed(rng: random.Random, max_size: int, seed_max: int = 12) -> FactorClosedSet:
    """Closure of a few random seeds, redrawn until the size fits."""
    while True:
        seeds = rng.sample(range(1, seed_max + 1), rng.randint(1, 2))
        s = factor_closure(seeds)
        if len(s) <= max_size:
            return s
