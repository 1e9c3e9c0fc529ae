"""Arithmetic functions as first-class values.

An :class:`ArithFn` maps positive integers to exact numbers (``int`` or
``fractions.Fraction``) with per-instance memoization.  Multiplicativity
flags are declared by the constructors and propagated structurally, never
inferred by sampling: a wrongly inferred flag would silently corrupt the
Euler-product evaluation path downstream.

The convolution operations follow the convention that f(x) = 0 whenever x
is not a positive integer; callers use :meth:`ArithFn.at_ratio` so that an
ArithFn itself is only ever evaluated at positive integers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .core import divisors, euler_phi, gamma_root, mobius
from .errors import ArityError

__all__ = [
    "ArithFn",
    "mu_fn",
    "eps_fn",
    "one_fn",
    "phi_fn",
    "pow_fn",
    "a_gamma_fn",
    "builtin",
    "pointwise_mul",
    "dirichlet",
    "restrict_gamma",
    "dilate",
    "gamma_convolve",
    "chain_gamma_convolve",
]


class ArithFn:
    """A memoized single-variable arithmetic function with exact values."""

    __slots__ = ("_fn", "_memo", "label", "is_multiplicative", "is_completely_multiplicative")

    def __init__(
        self,
        fn: Callable[[int], int | Fraction],
        label: str = "f",
        multiplicative: bool = False,
        completely_multiplicative: bool = False,
    ):
        if completely_multiplicative:
            multiplicative = True
        self._fn = fn
        self._memo: dict[int, int | Fraction] = {}
        self.label = label
        self.is_multiplicative = multiplicative
        self.is_completely_multiplicative = completely_multiplicative
        if multiplicative and self(1) != 1:
            raise ValueError(f"multiplicative function {label!r} must satisfy f(1) = 1")

    def __call__(self, n: int):
        if not isinstance(n, int) or n <= 0:
            raise ValueError(f"{self.label} evaluated outside the positive integers: {n!r}")
        v = self._memo.get(n)
        if v is None:
            v = self._fn(n)
            self._memo[n] = v
        return v

    def at_ratio(self, num: int, den: int):
        """f(num/den), zero when den does not divide num."""
        if num % den != 0:
            return 0
        return self(num // den)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"ArithFn({self.label})"


def mu_fn() -> ArithFn:
    return ArithFn(mobius, "mu", multiplicative=True)


def eps_fn() -> ArithFn:
    """Convolution identity: 1 at n = 1, else 0.  Completely multiplicative."""
    return ArithFn(lambda n: 1 if n == 1 else 0, "eps", completely_multiplicative=True)


def pow_fn(a: int) -> ArithFn:
    """n -> n**a for integer a (negative a yields exact Fractions)."""
    if not isinstance(a, int) or isinstance(a, bool):
        raise ValueError(f"power exponent must be an integer, got {a!r}")
    if a >= 0:
        fn = lambda n, _a=a: n**_a
    else:
        fn = lambda n, _a=-a: Fraction(1, n**_a)
    return ArithFn(fn, f"pow:{a}", completely_multiplicative=True)


def one_fn() -> ArithFn:
    """The constant function 1 (the zeroth power)."""
    return ArithFn(lambda n: 1, "one", completely_multiplicative=True)


def phi_fn() -> ArithFn:
    return ArithFn(euler_phi, "phi", multiplicative=True)


def a_gamma_fn(gamma: int) -> ArithFn:
    """Indicator of perfect gamma-th powers.

    Multiplicative: n is a gamma-th power iff every prime exponent of n is
    divisible by gamma, and exponents of coprime factors are disjoint.  Not
    completely multiplicative (e.g. gamma=2: a(2)a(2)=0 but a(4)=1).
    """
    if not isinstance(gamma, int) or gamma <= 0:
        raise ValueError(f"gamma must be a positive integer, got {gamma!r}")
    return ArithFn(
        lambda n, _g=gamma: 1 if gamma_root(n, _g) is not None else 0,
        f"agamma:{gamma}",
        multiplicative=True,
    )


_BUILTIN_PLAIN = {"mu": mu_fn, "eps": eps_fn, "one": one_fn, "phi": phi_fn}


def builtin(name: str, param: int | None = None) -> ArithFn:
    """Constructor dispatch: mu, eps, one, phi, pow (with exponent), agamma (with gamma)."""
    if name in _BUILTIN_PLAIN:
        if param is not None:
            raise ValueError(f"builtin {name!r} takes no parameter")
        return _BUILTIN_PLAIN[name]()
    if name == "pow":
        if param is None:
            raise ValueError("builtin 'pow' needs an integer exponent")
        return pow_fn(param)
    if name == "agamma":
        if param is None:
            raise ValueError("builtin 'agamma' needs a positive integer parameter")
        return a_gamma_fn(param)
    raise ValueError(f"unknown builtin arithmetic function {name!r}")


def pointwise_mul(f: ArithFn, g: ArithFn) -> ArithFn:
    """(fg)(n) = f(n) g(n)."""
    return ArithFn(
        lambda n: f(n) * g(n),
        f"({f.label}.{g.label})",
        multiplicative=f.is_multiplicative and g.is_multiplicative,
        completely_multiplicative=f.is_completely_multiplicative and g.is_completely_multiplicative,
    )


def dirichlet(f: ArithFn, g: ArithFn) -> ArithFn:
    """Dirichlet convolution (f*g)(n) = sum over d|n of f(d) g(n/d)."""
    def conv(n: int):
        return sum(f(d) * g(n // d) for d in divisors(n))

    return ArithFn(
        conv,
        f"({f.label}*{g.label})",
        multiplicative=f.is_multiplicative and g.is_multiplicative,
    )


def restrict_gamma(f: ArithFn, gamma: int) -> ArithFn:
    """f restricted to perfect gamma-th powers: f(n) there, 0 elsewhere."""
    if gamma == 1:
        return f
    return pointwise_mul(a_gamma_fn(gamma), f)


def dilate(f: ArithFn, gamma: int) -> ArithFn:
    """Argument dilation: n -> f(n**gamma)."""
    if not isinstance(gamma, int) or gamma <= 0:
        raise ValueError(f"gamma must be a positive integer, got {gamma!r}")
    if gamma == 1:
        return f
    return ArithFn(
        lambda n: f(n**gamma),
        f"{f.label}<{gamma}>",
        multiplicative=f.is_multiplicative,
        completely_multiplicative=f.is_completely_multiplicative,
    )


def gamma_convolve(g: ArithFn, f: ArithFn, gamma: int) -> ArithFn:
    """Power-restricted convolution: sum over d**gamma | n of f(n/d**gamma) g(d**gamma).

    Coincides with the Dirichlet convolution at gamma = 1; non-commutative
    for gamma >= 2.
    """
    if not isinstance(gamma, int) or gamma <= 0:
        raise ValueError(f"gamma must be a positive integer, got {gamma!r}")

    def conv(n: int):
        total = 0
        d = 1
        while d**gamma <= n:
            dg = d**gamma
            if n % dg == 0:
                total += f(n // dg) * g(dg)
            d += 1
        return total

    return ArithFn(
        conv,
        f"({g.label}*_{gamma}{f.label})",
        multiplicative=f.is_multiplicative and g.is_multiplicative,
    )


def chain_gamma_convolve(fs, gammas) -> ArithFn:
    """Right-nested chain f_{m+1} *_{g_m} ... *_{g_1} f_1.

    Inductively ((f_{m+1} *_{g_m} ... *_{g_2} f_2) *_{g_1} f_1); a single
    function with no gammas is returned unchanged.
    """
    fs = list(fs)
    gammas = list(gammas)
    if len(fs) != len(gammas) + 1:
        raise ArityError(f"need len(fs) == len(gammas) + 1, got {len(fs)} and {len(gammas)}")
    acc = fs[-1]
    for fj, gj in zip(fs[-2::-1], gammas[::-1]):
        acc = gamma_convolve(acc, fj, gj)
    return acc
