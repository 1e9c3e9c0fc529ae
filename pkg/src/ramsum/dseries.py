"""Formal truncated multivariable Dirichlet series over exact values.

A series in v variables is represented by its coefficient tensor: a sparse
map from multi-indices (n_1..n_v), 1 <= n_i <= N, to exact numbers.  The
complex variables never exist numerically; a factor like zeta(s_2) or
L(s_1+...+s_j; f) is encoded by *where* its support lives: a nonempty mask
of variable positions places the coefficient f(n) at the multi-index with
n in every mask position and 1 elsewhere.  An exponent doubling such as
L(2s; f) places f(n) at index n**2 instead.

Multiplying tensors is coordinatewise Dirichlet convolution.  Since every
factor is supported on indices >= 1, coefficients at indices <= N of a
product are exactly the untruncated coefficients, so each identity below
is checked exactly at every truncation level.  Identities with
denominators are verified in cleared-denominator form.

Every ``verify_*`` function returns a :class:`VerificationReport`; the
optional ``mutate`` index perturbs one left-hand coefficient before the
comparison so that tests can demonstrate mismatch detection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .arithfn import (
    ArithFn,
    chain_gamma_convolve,
    dirichlet,
    mu_fn,
    one_fn,
    pointwise_mul,
    pow_fn,
    restrict_gamma,
)
from .core import divisors, gamma_root, gcd_many
from .errors import ArityError, ResourceLimitError
from .multisum import MultiSumSpec, eval_multisum, gen_ramanujan, sigma_multi
from .rational import fmt_exact

__all__ = [
    "TruncatedMDS",
    "embed",
    "finite_series",
    "mds_mul",
    "mds_mul_many",
    "tensor_first_mismatch",
    "diagonal",
    "from_multisum",
    "VerificationReport",
    "verify_prop_gamma_chain",
    "verify_multivariable_L",
    "verify_phi_series",
    "verify_double_series",
    "verify_gen_ramanujan_series",
    "verify_f_gcd_series",
    "verify_f_gcd_series_single",
]

DEFAULT_COEFF_CEILING = 10**6


@dataclass
class TruncatedMDS:
    """Sparse coefficient tensor of a formal Dirichlet series, truncated at
    ``bound`` per coordinate.  Missing indices mean coefficient zero."""

    arity: int
    bound: int
    coeffs: dict

    def __post_init__(self):
        if self.arity <= 0 or self.bound <= 0:
            raise ValueError("arity and bound must be positive")
        clean = {}
        for idx, v in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.arity:
                raise ArityError(f"index {idx} has wrong arity (expected {self.arity})")
            if any(i <= 0 for i in idx):
                raise ValueError(f"index {idx} outside the positive lattice")
            if any(i > self.bound for i in idx):
                continue
            if v != 0:
                clean[idx] = v
        self.coeffs = clean

    def get(self, idx) -> object:
        return self.coeffs.get(tuple(idx), 0)


def _check_mask(mask, arity: int) -> frozenset:
    mask = frozenset(mask)
    if not mask:
        raise ValueError("variable mask must be nonempty")
    if not mask <= set(range(1, arity + 1)):
        raise ValueError(f"mask {sorted(mask)} not within 1..{arity}")
    return mask


def embed(f: ArithFn, mask, arity: int, bound: int, index_power: int = 1) -> TruncatedMDS:
    """Tensor of the series with coefficient f(n) at index n**index_power in
    every mask position and 1 elsewhere.  ``index_power=2`` realizes a
    doubled exponent like L(2s; f)."""
    mask = _check_mask(mask, arity)
    coeffs = {}
    n = 1
    while n**index_power <= bound:
        v = f(n)
        if v != 0:
            idx = tuple(n**index_power if (i + 1) in mask else 1 for i in range(arity))
            coeffs[idx] = v
        n += 1
    return TruncatedMDS(arity, bound, coeffs)


def finite_series(values: dict, mask, arity: int, bound: int) -> TruncatedMDS:
    """Tensor of a finite Dirichlet polynomial: ``values`` maps the running
    index to its coefficient; indices beyond the bound are clipped."""
    mask = _check_mask(mask, arity)
    coeffs = {}
    for n, v in values.items():
        idx = tuple(n if (i + 1) in mask else 1 for i in range(arity))
        coeffs[idx] = v
    return TruncatedMDS(arity, bound, coeffs)


def mds_mul(a: TruncatedMDS, b: TruncatedMDS) -> TruncatedMDS:
    """Coordinatewise Dirichlet convolution, truncated at the shared bound."""
    if a.arity != b.arity or a.bound != b.bound:
        raise ArityError("tensor shapes differ")
    bound = a.bound
    out: dict = {}
    for ia, va in a.coeffs.items():
        for ib, vb in b.coeffs.items():
            idx = tuple(x * y for x, y in zip(ia, ib))
            if any(i > bound for i in idx):
                continue
            out[idx] = out.get(idx, 0) + va * vb
    return TruncatedMDS(a.arity, bound, out)


def mds_mul_many(tensors) -> TruncatedMDS:
    tensors = list(tensors)
    if not tensors:
        raise ValueError("empty product")
    acc = tensors[0]
    for t in tensors[1:]:
        acc = mds_mul(acc, t)
    return acc


def tensor_first_mismatch(a: TruncatedMDS, b: TruncatedMDS):
    """None when equal; else the lexicographically first differing
    (index, lhs, rhs)."""
    if a.arity != b.arity or a.bound != b.bound:
        raise ArityError("tensor shapes differ")
    for idx in sorted(set(a.coeffs) | set(b.coeffs)):
        va, vb = a.coeffs.get(idx, 0), b.coeffs.get(idx, 0)
        if va != vb:
            return idx, va, vb
    return None


def diagonal(t: TruncatedMDS) -> TruncatedMDS:
    """The single-variable series of coefficients on the full diagonal."""
    coeffs = {}
    for n in range(1, t.bound + 1):
        v = t.coeffs.get((n,) * t.arity, 0)
        if v != 0:
            coeffs[(n,)] = v
    return TruncatedMDS(1, t.bound, coeffs)


def from_multisum(
    spec: MultiSumSpec,
    bound: int,
    gamma0: Optional[int] = None,
    ceiling: int = DEFAULT_COEFF_CEILING,
) -> TruncatedMDS:
    """Coefficient tensor of the multiple sum, optionally gated by the
    perfect-power indicator of the first index."""
    arity = spec.m + 1
    if bound**arity > ceiling:
        raise ResourceLimitError(
            f"{bound}**{arity} coefficient slots exceed the ceiling {ceiling}"
        )
    coeffs = {}
    for idx in itertools.product(range(1, bound + 1), repeat=arity):
        if gamma0 is not None and gamma0 > 1 and gamma_root(idx[0], gamma0) is None:
            continue
        v = eval_multisum(spec, idx)
        if v != 0:
            coeffs[idx] = v
    return TruncatedMDS(arity, bound, coeffs)


@dataclass
class VerificationReport:
    identity: str
    bound: int
    status: str
    first_mismatch: Optional[dict]

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "bound": self.bound,
            "status": self.status,
            "first_mismatch": self.first_mismatch,
        }


def _apply_mutation(t: TruncatedMDS, mutate) -> TruncatedMDS:
    if mutate is None:
        return t
    idx = tuple(mutate)
    if len(idx) != t.arity or any(i <= 0 or i > t.bound for i in idx):
        raise ValueError(f"mutation index {idx} outside the tensor")
    coeffs = dict(t.coeffs)
    coeffs[idx] = coeffs.get(idx, 0) + 1
    return TruncatedMDS(t.arity, t.bound, coeffs)


def _report(identity: str, bound: int, lhs: TruncatedMDS, rhs: TruncatedMDS, mutate) -> VerificationReport:
    lhs = _apply_mutation(lhs, mutate)
    bad = tensor_first_mismatch(lhs, rhs)
    if bad is None:
        return VerificationReport(identity, bound, "ok", None)
    idx, va, vb = bad
    return VerificationReport(
        identity,
        bound,
        "mismatch",
        {"index": list(idx), "lhs": fmt_exact(va), "rhs": fmt_exact(vb)},
    )


def _require_gamma_chain(gammas, gamma0: int = 1) -> None:
    chain = (gamma0,) + tuple(gammas)
    for a, b in zip(chain, chain[1:]):
        if b % a != 0:
            raise ValueError(f"gammas {list(chain)} do not form a dividing chain")


def verify_prop_gamma_chain(fs, gammas, bound: int, mutate=None) -> VerificationReport:
    """Single-variable series of the convolution chain against the product
    of power-restricted factors; needs the gammas to divide in ascending
    order starting from 1."""
    fs = tuple(fs)
    gammas = tuple(gammas)
    if len(fs) != len(gammas) + 1:
        raise ArityError("need len(fs) == len(gammas) + 1")
    _require_gamma_chain(gammas)
    lhs = embed(chain_gamma_convolve(fs, gammas), {1}, 1, bound)
    chain = (1,) + gammas
    rhs = mds_mul_many(
        embed(restrict_gamma(f, g), {1}, 1, bound) for f, g in zip(fs, chain)
    )
    return _report("gamma-chain", bound, lhs, rhs, mutate)


def verify_multivariable_L(
    fs, gammas, bound: int, gamma0: int = 1, mutate=None
) -> VerificationReport:
    """Full-tensor factorization of the multiple sum: one zeta per trailing
    variable times one cumulative-mask factor per function."""
    fs = tuple(fs)
    gammas = tuple(gammas)
    spec = MultiSumSpec(gammas, fs)
    _require_gamma_chain(gammas, gamma0)
    arity = spec.m + 1
    lhs = from_multisum(spec, bound, gamma0=gamma0)
    chain = (gamma0,) + gammas
    factors = [embed(one_fn(), {j}, arity, bound) for j in range(2, arity + 1)]
    factors += [
        embed(restrict_gamma(fs[j], chain[j]), set(range(1, j + 2)), arity, bound)
        for j in range(arity)
    ]
    rhs = mds_mul_many(factors)
    return _report("multivariable-L", bound, lhs, rhs, mutate)


def _phi_finite_part(spec: MultiSumSpec, j: int, fixed: tuple) -> dict:
    """Coefficients of the finite factor of the single-slot series.

    For j = 1 the keys are the powers e = d**g_1 dividing the second
    argument, with the remaining sum evaluated at (e, tail).  For j >= 2
    the chains (d_1..d_{j-1}) over the fixed prefix are enumerated; each
    contributes at key e = d_{j-1}**g_{j-1}.
    """
    m = spec.m
    fns = spec.fns
    gammas = spec.gammas
    out: dict = {}

    if j == 1:
        if m == 0:
            return {1: 1}
        tail_spec = MultiSumSpec(gammas[1:], fns[1:])
        tail = fixed[1:]
        for d in range(1, fixed[0] + 1):
            e = d ** gammas[0]
            if e > fixed[0]:
                break
            if fixed[0] % e == 0:
                v = eval_multisum(tail_spec, (e,) + tail)
                if v != 0:
                    out[e] = out.get(e, 0) + v
        return out

    prefix = fixed[: j - 1]
    tail = fixed[j - 1 :]
    tail_spec = MultiSumSpec(gammas[j - 1 :], fns[j - 1 :])

    def descend(t: int, prev_pow: int, partial):
        if t == j - 1:
            v = partial * eval_multisum(tail_spec, (prev_pow,) + tail)
            if v != 0:
                out[prev_pow] = out.get(prev_pow, 0) + v
            return
        g = prev_pow if t == j - 2 else math.gcd(prev_pow, prefix[t + 1])
        for e in divisors(g):
            if gamma_root(e, gammas[t]) is None:
                continue
            factor = fns[t](prev_pow // e)
            if factor == 0:
                continue
            descend(t + 1, e, partial * factor)

    descend(0, prefix[0], 1)
    return out


def verify_phi_series(spec: MultiSumSpec, j: int, fixed, bound: int, mutate=None) -> VerificationReport:
    """Series in the j-th slot with the others fixed: equals a leading
    Dirichlet series (the first function for j = 1, zeta otherwise) times a
    finite sum that is again built from the multiple sum."""
    if spec.weight is not None:
        raise ValueError("slot series are stated for unweighted sums")
    m = spec.m
    if not 1 <= j <= m + 1:
        raise ValueError(f"need 1 <= j <= m+1, got j={j}")
    fixed = tuple(fixed)
    if len(fixed) != m:
        raise ArityError(f"expected {m} fixed arguments, got {len(fixed)}")
    if any(n <= 0 for n in fixed):
        raise ValueError("fixed arguments must be positive")

    lhs_coeffs = {}
    for k in range(1, bound + 1):
        args = fixed[: j - 1] + (k,) + fixed[j - 1 :]
        v = eval_multisum(spec, args)
        if v != 0:
            lhs_coeffs[(k,)] = v
    lhs = TruncatedMDS(1, bound, lhs_coeffs)

    lead = embed(spec.fns[0] if j == 1 else one_fn(), {1}, 1, bound)
    fin = finite_series(_phi_finite_part(spec, j, fixed), {1}, 1, bound)
    rhs = mds_mul(lead, fin)
    return _report(f"phi-series[j={j}]", bound, lhs, rhs, mutate)


def verify_double_series(
    f1: ArithFn, f2: ArithFn, g1: ArithFn, g2: ArithFn, gamma: int, bound: int, mutate=None
) -> VerificationReport:
    """Two-variable series of the product of two length-two sums, in
    cleared-denominator form: the denominator factor (supported on squares
    of the diagonal) multiplies the left side."""
    for h in (f1, f2, g1, g2):
        if not h.is_completely_multiplicative:
            raise ValueError(f"{h.label} must be flagged completely multiplicative")
    if not isinstance(gamma, int) or gamma <= 0:
        raise ValueError("gamma must be a positive integer")
    spec_f = MultiSumSpec((gamma,), (f1, f2))
    spec_g = MultiSumSpec((gamma,), (g1, g2))
    coeffs = {}
    for idx in itertools.product(range(1, bound + 1), repeat=2):
        v = eval_multisum(spec_f, idx) * eval_multisum(spec_g, idx)
        if v != 0:
            coeffs[idx] = v
    product_tensor = TruncatedMDS(2, bound, coeffs)

    all_four = pointwise_mul(pointwise_mul(f1, f2), pointwise_mul(g1, g2))
    lhs = mds_mul(product_tensor, embed(restrict_gamma(all_four, gamma), {1, 2}, 2, bound, index_power=2))
    rhs = mds_mul_many(
        [
            embed(one_fn(), {2}, 2, bound),
            embed(pointwise_mul(f1, g1), {1}, 2, bound),
            embed(restrict_gamma(pointwise_mul(f2, g1), gamma), {1, 2}, 2, bound),
            embed(restrict_gamma(pointwise_mul(f1, g2), gamma), {1, 2}, 2, bound),
            embed(restrict_gamma(pointwise_mul(f2, g2), gamma), {1, 2}, 2, bound),
        ]
    )
    return _report("double-series", bound, lhs, rhs, mutate)


def verify_gen_ramanujan_series(
    m: int, k: int, exps, fixed, bound: int, mutate=None
) -> VerificationReport:
    """k-variable series of the generalized Ramanujan sum in cleared form:
    the zeta factors with cumulative masks multiply the left side, leaving
    a finite diagonal sum over divisors of the first fixed argument."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    exps = tuple(exps)
    fixed = tuple(fixed)
    if len(exps) != m + 1 - k or len(fixed) != m + 1 - k:
        raise ArityError(f"need {m + 1 - k} exponents and fixed arguments")
    if any(n <= 0 for n in fixed):
        raise ValueError("fixed arguments must be positive")

    coeffs = {}
    for idx in itertools.product(range(1, bound + 1), repeat=k):
        v = gen_ramanujan(m, k, exps, idx + fixed)
        if v != 0:
            coeffs[idx] = v
    lhs = mds_mul_many(
        [TruncatedMDS(k, bound, coeffs)]
        + [embed(one_fn(), set(range(1, j + 1)), k, bound) for j in range(1, k + 1)]
    )

    a1 = pow_fn(exps[0])
    tilde = tuple(exps[i + 1] - exps[i] for i in range(m - k))
    dcoeffs = {}
    for d in divisors(fixed[0]):
        v = a1(d) * sigma_multi((1,) * (m - k), tilde, (d,) + fixed[1:])
        if v != 0:
            dcoeffs[(d,) * k] = v
    factors = [TruncatedMDS(k, bound, dcoeffs)]
    factors += [embed(one_fn(), {j}, k, bound) for j in range(2, k + 1)]
    rhs = mds_mul_many(factors)
    return _report("gen-ramanujan", bound, lhs, rhs, mutate)


def verify_f_gcd_series(
    f: ArithFn, arity: int, bound: int, ceiling: int = DEFAULT_COEFF_CEILING, mutate=None
) -> VerificationReport:
    """Full-tensor identity for f composed with the gcd: the all-variables
    zeta factor times the gcd tensor equals the product of the single-
    variable zetas times f on the full diagonal."""
    if arity < 2:
        raise ArityError("gcd series needs arity >= 2")
    if bound**arity > ceiling:
        raise ResourceLimitError(f"{bound}**{arity} coefficient slots exceed the ceiling {ceiling}")
    coeffs = {}
    for idx in itertools.product(range(1, bound + 1), repeat=arity):
        v = f(gcd_many(idx))
        if v != 0:
            coeffs[idx] = v
    full = set(range(1, arity + 1))
    lhs = mds_mul(TruncatedMDS(arity, bound, coeffs), embed(one_fn(), full, arity, bound))
    rhs = mds_mul_many(
        [embed(one_fn(), {j}, arity, bound) for j in range(1, arity + 1)]
        + [embed(f, full, arity, bound)]
    )
    return _report("f-gcd", bound, lhs, rhs, mutate)


def verify_f_gcd_series_single(f: ArithFn, fixed, bound: int, mutate=None) -> VerificationReport:
    """Series in one slot of f(gcd): zeta times the finite series of
    (f * mu) over divisors of the gcd of the fixed arguments."""
    fixed = tuple(fixed)
    if not fixed:
        raise ArityError("need at least one fixed argument")
    g0 = gcd_many(fixed)
    lhs_coeffs = {}
    for n in range(1, bound + 1):
        v = f(math.gcd(n, g0))
        if v != 0:
            lhs_coeffs[(n,)] = v
    lhs = TruncatedMDS(1, bound, lhs_coeffs)
    fmu = dirichlet(f, mu_fn())
    fin = finite_series({d: fmu(d) for d in divisors(g0)}, {1}, 1, bound)
    rhs = mds_mul(embed(one_fn(), {1}, 1, bound), fin)
    return _report("f-gcd-single", bound, lhs, rhs, mutate)
