"""The multiple Ramanujan sum and its weighted variant.

For a parameter vector gammas = (g_1..g_m), functions fns = (f_1..f_{m+1})
and an optional m-variable weight xi, the sum over all tuples (d_1..d_m)
with d_j**g_j dividing gcd(n_1..n_{j+1}) of

    xi(d_1**g_1, ..., d_m**g_m)
    * f_1(n_1 / d_1**g_1) * f_2(d_1**g_1 / d_2**g_2) * ...
    * f_m(d_{m-1}**g_{m-1} / d_m**g_m) * f_{m+1}(d_m**g_m),

where a summand vanishes unless the powers divide along the chain
d_m**g_m | ... | d_1**g_1 | n_1 (a function of a non-integer ratio is 0).

Three evaluation paths: :func:`eval_multisum` prunes the enumeration to the
divisor chain, :func:`eval_multisum_bruteforce` loops over all divisor
tuples and applies the vanishing convention post hoc (the truth path for
tests), and :func:`eval_multisum_euler` multiplies prime-power evaluations
for multiplicative data.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .arithfn import (
    ArithFn,
    chain_gamma_convolve,
    dirichlet,
    eps_fn,
    mu_fn,
    one_fn,
    pointwise_mul,
    pow_fn,
    restrict_gamma,
)
from .core import divisors, factorize, gamma_root, gcd_many
from .errors import ArityError

__all__ = [
    "WeightFn",
    "MultiSumSpec",
    "eval_multisum",
    "eval_multisum_bruteforce",
    "eval_multisum_euler",
    "sigma_multi",
    "gen_ramanujan",
    "f_of_gcd",
    "f_of_gcd_spec",
    "degeneracy_check",
    "transpose_data",
]


@dataclass(frozen=True)
class WeightFn:
    """An m-variable weight; ``fn`` receives the tuple of power values.

    A weight flagged multiplicative must factor over coprime argument
    tuples (in particular take the value 1 at (1,...,1)); the flag gates
    the Euler-product path and is trusted, not inferred.
    """

    arity: int
    fn: Callable[[tuple[int, ...]], object]
    is_multiplicative: bool = False
    label: str = "xi"

    def __post_init__(self):
        if self.arity <= 0:
            raise ArityError("weight arity must be positive")
        if self.is_multiplicative and self.fn((1,) * self.arity) != 1:
            raise ValueError("multiplicative weight must take value 1 at (1,...,1)")

    def __call__(self, args: tuple[int, ...]):
        if len(args) != self.arity:
            raise ArityError(f"weight expects {self.arity} arguments, got {len(args)}")
        return self.fn(args)


@dataclass(frozen=True)
class MultiSumSpec:
    """The data (gammas, fns, weight) defining one multiple sum."""

    gammas: tuple[int, ...]
    fns: tuple[ArithFn, ...]
    weight: Optional[WeightFn] = None

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(self.gammas))
        object.__setattr__(self, "fns", tuple(self.fns))
        if len(self.fns) != len(self.gammas) + 1:
            raise ArityError(
                f"need len(fns) == len(gammas) + 1, got {len(self.fns)} and {len(self.gammas)}"
            )
        if any(not isinstance(g, int) or g <= 0 for g in self.gammas):
            raise ValueError("all gammas must be positive integers")
        if self.weight is not None:
            if self.m == 0:
                raise ArityError("a weight requires at least one gamma (m >= 1)")
            if self.weight.arity != self.m:
                raise ArityError(
                    f"weight arity {self.weight.arity} != m = {self.m}"
                )

    @property
    def m(self) -> int:
        return len(self.gammas)

    def is_multiplicative(self) -> bool:
        """All function flags set, and the weight (if any) flagged too."""
        if not all(f.is_multiplicative for f in self.fns):
            return False
        return self.weight is None or self.weight.is_multiplicative


def _check_args(spec: MultiSumSpec, ns) -> tuple[int, ...]:
    ns = tuple(ns)
    if len(ns) != spec.m + 1:
        raise ArityError(f"expected {spec.m + 1} arguments, got {len(ns)}")
    if any(not isinstance(n, int) or n <= 0 for n in ns):
        raise ValueError(f"all arguments must be positive integers, got {ns!r}")
    return ns


def eval_multisum(spec: MultiSumSpec, ns):
    """Pruned evaluation: descend the chain, keeping only divisors of the
    previous power, so every requested function argument is an integer."""
    ns = _check_args(spec, ns)
    m = spec.m
    fns = spec.fns
    if m == 0:
        return fns[0](ns[0])
    gammas = spec.gammas
    weight = spec.weight
    total = 0
    powers: list[int] = []

    def descend(t: int, prev_pow: int, partial):
        nonlocal total
        if t == m:
            w = 1 if weight is None else weight(tuple(powers))
            total += partial * fns[m](prev_pow) * w
            return
        g = math.gcd(prev_pow, ns[t + 1])
        gamma = gammas[t]
        for e in divisors(g):
            if gamma_root(e, gamma) is None:
                continue
            factor = fns[t](prev_pow // e)
            if factor == 0:
                continue
            powers.append(e)
            descend(t + 1, e, partial * factor)
            powers.pop()

    descend(0, ns[0], 1)
    return total


def eval_multisum_bruteforce(spec: MultiSumSpec, ns):
    """Unpruned reference path.

    Enumerates every tuple (d_1..d_m) satisfying only the per-index gcd
    constraints and applies the vanishing-summand convention term by term.
    Independent of the pruned enumeration; kept as the oracle.
    """
    ns = _check_args(spec, ns)
    m = spec.m
    fns = spec.fns
    if m == 0:
        return fns[0](ns[0])

    candidate_powers: list[list[int]] = []
    for j in range(m):
        g = gcd_many(ns[: j + 2])
        cands = [d**spec.gammas[j] for d in range(1, g + 1) if g % d ** spec.gammas[j] == 0]
        candidate_powers.append(cands)

    total = 0
    for powers in itertools.product(*candidate_powers):
        term = fns[0].at_ratio(ns[0], powers[0])
        for t in range(1, m):
            if term == 0:
                break
            term = term * fns[t].at_ratio(powers[t - 1], powers[t])
        if term == 0:
            continue
        term = term * fns[m](powers[m - 1])
        if spec.weight is not None:
            term = term * spec.weight(powers)
        total += term
    return total


def eval_multisum_euler(spec: MultiSumSpec, ns):
    """Euler-product evaluation over primes dividing any argument.

    Requires every function (and the weight, if present) to be flagged
    multiplicative; the sum is then multiplicative as a function of the
    whole argument tuple and factors through prime-power tuples.
    """
    ns = _check_args(spec, ns)
    if not spec.is_multiplicative():
        raise ValueError("Euler path requires multiplicative flags on all functions and weight")
    primes = sorted({p for n in ns for p, _ in factorize(n).factors})
    result = 1
    for p in primes:
        exps = []
        for n in ns:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps.append(e)
        result = result * eval_multisum(spec, tuple(p**e for e in exps))
    return result


def sigma_multi(gammas, exps, ns):
    """Multiple divisor function: sum of d_1**(g_1 a_1) ... d_m**(g_m a_m)
    over the constrained chains; realized with f_j the power function of
    exponent a_1 + ... + a_{j-1}."""
    gammas = tuple(gammas)
    exps = tuple(exps)
    if len(exps) != len(gammas):
        raise ArityError(f"need len(exps) == len(gammas), got {len(exps)} and {len(gammas)}")
    fns = tuple(pow_fn(sum(exps[:j])) for j in range(len(gammas) + 1))
    return eval_multisum(MultiSumSpec(gammas, fns), ns)


def gen_ramanujan(m: int, k: int, exps, ns):
    """Generalized Ramanujan sum: k leading Moebius slots followed by power
    functions with the given exponents, all gammas 1."""
    exps = tuple(exps)
    if not 0 <= k <= m + 1:
        raise ArityError(f"need 0 <= k <= m+1, got k={k}, m={m}")
    if len(exps) != m + 1 - k:
        raise ArityError(f"need {m + 1 - k} exponents, got {len(exps)}")
    fns = tuple([mu_fn()] * k + [pow_fn(a) for a in exps])
    return eval_multisum(MultiSumSpec((1,) * m, fns), ns)


def f_of_gcd(f: ArithFn, ns):
    """Direct path: f(gcd of the arguments)."""
    return f(gcd_many(ns))


def f_of_gcd_spec(f: ArithFn, m: int) -> MultiSumSpec:
    """The multiple-sum representation of f(gcd): leading constant-1 slot,
    convolution identities in the middle, f*mu last, all gammas 1."""
    if m < 1:
        raise ArityError("gcd composition spec needs m >= 1 (at least two arguments)")
    fns = tuple([one_fn()] + [eps_fn()] * (m - 1) + [dirichlet(f, mu_fn())])
    return MultiSumSpec((1,) * m, fns)


def degeneracy_check(spec: MultiSumSpec, ns, j: int, identity: str):
    """Evaluate both sides of one of the structural identities.

    identity is one of:

    - "recursion": split at position j (1 <= j <= m+1): the inner sum over
      slots j..m+1 with the trailing arguments fixed becomes the last
      function of an outer sum over slots 1..j-1.
    - "unit": argument n_j replaced by 1 (1 <= j <= m+1): the tail factors
      out as f_j(1)...f_{m+1}(1) times the prefix sum.
    - "epsilon": f_j replaced by the convolution identity (2 <= j <= m):
      arguments n_j, n_{j+1} merge into their gcd and the two adjacent
      gammas merge into their lcm.  (With the j-th gamma dividing the
      (j-1)-st, the lcm is the (j-1)-st gamma.)
    - "epsilon_tail": trailing function replaced by the identity: the last
      argument drops.
    - "chain": requires n_1 | n_j for all j: the sum collapses to the
      gamma-convolution chain at n_1.

    Returns (lhs, rhs); weighted specs are not supported.
    """
    if spec.weight is not None:
        raise ValueError("degeneracy identities are stated for unweighted sums")
    ns = _check_args(spec, ns)
    m = spec.m

    if identity == "recursion":
        if not 1 <= j <= m + 1:
            raise ValueError(f"recursion needs 1 <= j <= m+1, got j={j}")
        lhs = eval_multisum(spec, ns)
        inner = MultiSumSpec(spec.gammas[j - 1 :], spec.fns[j - 1 :])
        tail = ns[j:]
        g = ArithFn(
            lambda x: eval_multisum(inner, (x,) + tail),
            label=f"S[{inner.gammas}]",
        )
        outer = MultiSumSpec(spec.gammas[: j - 1], spec.fns[: j - 1] + (g,))
        rhs = eval_multisum(outer, ns[:j])
        return lhs, rhs

    if identity == "unit":
        if not 1 <= j <= m + 1:
            raise ValueError(f"unit slot needs 1 <= j <= m+1, got j={j}")
        ns1 = ns[: j - 1] + (1,) + ns[j:]
        lhs = eval_multisum(spec, ns1)
        tail = 1
        for t in range(j - 1, m + 1):
            tail *= spec.fns[t](1)
        if j == 1:
            rhs = tail
        else:
            prefix = MultiSumSpec(spec.gammas[: j - 2], spec.fns[: j - 1])
            rhs = tail * eval_multisum(prefix, ns1[: j - 1])
        return lhs, rhs

    if identity == "epsilon":
        if not 2 <= j <= m:
            raise ValueError(f"epsilon slot needs 2 <= j <= m, got j={j}")
        fns1 = spec.fns[: j - 1] + (eps_fn(),) + spec.fns[j:]
        lhs = eval_multisum(MultiSumSpec(spec.gammas, fns1), ns)
        merged_gamma = math.lcm(spec.gammas[j - 2], spec.gammas[j - 1])
        gam2 = spec.gammas[: j - 2] + (merged_gamma,) + spec.gammas[j:]
        fns2 = spec.fns[: j - 1] + spec.fns[j:]
        args2 = ns[: j - 1] + (math.gcd(ns[j - 1], ns[j]),) + ns[j + 1 :]
        rhs = eval_multisum(MultiSumSpec(gam2, fns2), args2)
        return lhs, rhs

    if identity == "epsilon_tail":
        if m < 1:
            raise ValueError("epsilon_tail needs m >= 1")
        fns1 = spec.fns[:m] + (eps_fn(),)
        lhs = eval_multisum(MultiSumSpec(spec.gammas, fns1), ns)
        rhs = eval_multisum(MultiSumSpec(spec.gammas[:-1], spec.fns[:m]), ns[:-1])
        return lhs, rhs

    if identity == "chain":
        if any(n % ns[0] != 0 for n in ns):
            raise ValueError("chain identity requires n_1 | n_j for every j")
        lhs = eval_multisum(spec, ns)
        rhs = chain_gamma_convolve(spec.fns, spec.gammas)(ns[0])
        return lhs, rhs

    raise ValueError(f"unknown degeneracy identity {identity!r}")


def transpose_data(spec: MultiSumSpec, n1: int) -> MultiSumSpec:
    """The spec whose values give the finite Fourier coefficients of ``spec``.

    Functions reverse with increasing power twists; all gammas collapse to 1
    and the original gammas move into a weight of perfect-power indicators:

        weight(d_1..d_m) = prod_j [n1/d_{m+1-j} is a g_j-th power]
                           * xi(n1/d_m, ..., n1/d_1),

    zero whenever some d does not divide n1.
    """
    if not isinstance(n1, int) or n1 <= 0:
        raise ValueError(f"n1 must be a positive integer, got {n1!r}")
    m = spec.m
    if m == 0:
        raise ArityError("transpose needs m >= 1")
    new_fns = tuple(pointwise_mul(pow_fn(i), spec.fns[m - i]) for i in range(m + 1))
    base = spec.weight
    gammas = spec.gammas

    def tw(ds: tuple[int, ...]):
        for jj in range(1, m + 1):
            d = ds[m - jj]
            if n1 % d != 0:
                return 0
            if gamma_root(n1 // d, gammas[jj - 1]) is None:
                return 0
        if base is None:
            return 1
        return base(tuple(n1 // ds[i] for i in range(m - 1, -1, -1)))

    weight = WeightFn(m, tw, label=f"txi[{n1}]")
    return MultiSumSpec((1,) * m, new_fns, weight)


def transpose_data_restricted(spec: MultiSumSpec, n1: int) -> MultiSumSpec:
    """Variant of :func:`transpose_data` for gammas forming a dividing chain
    (each dividing the next): the power indicators move out of the weight
    and restrict the reversed functions instead.

    Equals :func:`transpose_data` at every argument tuple whose first entry
    is ``n1`` (the only tuples the coefficient formulas evaluate); at other
    first arguments the two differ, because the indicator telescoping needs
    the divisor chain to terminate at ``n1``.
    """
    if not isinstance(n1, int) or n1 <= 0:
        raise ValueError(f"n1 must be a positive integer, got {n1!r}")
    m = spec.m
    if m == 0:
        raise ArityError("transpose needs m >= 1")
    chain = (1,) + spec.gammas
    for a, b in zip(chain, chain[1:]):
        if b % a != 0:
            raise ValueError(f"gammas {list(spec.gammas)} do not form a dividing chain")
    from .arithfn import restrict_gamma

    new_fns = tuple(
        pointwise_mul(pow_fn(i), restrict_gamma(spec.fns[m - i], chain[m - i]))
        for i in range(m + 1)
    )
    base = spec.weight

    def tw(ds: tuple[int, ...]):
        if any(n1 % d != 0 for d in ds):
            return 0
        if base is None:
            return 1
        return base(tuple(n1 // ds[i] for i in range(m - 1, -1, -1)))

    weight = WeightFn(m, tw, label=f"txi1[{n1}]")
    return MultiSumSpec((1,) * m, new_fns, weight)
