"""Ramanujan sums and finite Fourier expansions of periodic and even
multivariable functions.

A function F of one modulus r and k residue variables is *even* (mod r)
when it only depends on the gcd of each variable with r; such F expands
over the Ramanujan-sum kernel c(d, n) with exactly rational coefficients
indexed by divisor tuples of r.  The generalized form allows several
moduli r_1..r_m with k_1..k_m variables each.  Periodic functions expand
over the exponential kernel instead; that machinery is floating complex
and only used for cross-checks at tolerance 1e-9.

Coefficient tables for the multiple Ramanujan sum itself come in closed
form via :func:`ffc_of_S`: the table entries are again values of a
multiple sum, built by :func:`ramsum.multisum.transpose_data`.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import divisors, mobius
from .errors import ArityError, ResourceLimitError
from .multisum import MultiSumSpec, eval_multisum, transpose_data
from .rational import fmt_exact

__all__ = [
    "ramanujan_c",
    "ramanujan_c_expsum",
    "c_interval_sum",
    "c_interval_sum_closed",
    "EvenCoeffTable",
    "PeriodicCoeffTable",
    "even_coeffs",
    "reconstruct_even",
    "general_even_coeffs",
    "periodic_coeffs",
    "reconstruct_periodic",
    "ffc_of_S",
    "table_to_json_dict",
]


@lru_cache(maxsize=None)
def ramanujan_c(k: int, n: int) -> int:
    """Ramanujan sum via the divisor form: sum of mu(k/d) d over d | gcd(k, n)."""
    if k <= 0 or n <= 0:
        raise ValueError(f"arguments must be positive, got ({k}, {n})")
    return sum(mobius(k // d) * d for d in divisors(math.gcd(k, n)))


def ramanujan_c_expsum(k: int, n: int) -> complex:
    """Ramanujan sum as the exponential sum over a reduced residue system mod k."""
    if k <= 0 or n <= 0:
        raise ValueError(f"arguments must be positive, got ({k}, {n})")
    tau = 2.0 * math.pi / k
    return sum(cmath.exp(1j * tau * n * l) for l in range(1, k + 1) if math.gcd(l, k) == 1)


def c_interval_sum(n: int, e: int, d: int) -> int:
    """Sum of c(n/delta, n/d) over multiples delta of e dividing n."""
    if n <= 0 or e <= 0 or d <= 0 or n % e != 0 or n % d != 0:
        raise ValueError(f"need e | n and d | n, got n={n}, e={e}, d={d}")
    return sum(ramanujan_c(n // delta, n // d) for delta in range(e, n + 1, e) if n % delta == 0)


def c_interval_sum_closed(n: int, e: int, d: int) -> int:
    """Closed form of :func:`c_interval_sum`: n/e when d | e, else 0."""
    if n <= 0 or e <= 0 or d <= 0 or n % e != 0 or n % d != 0:
        raise ValueError(f"need e | n and d | n, got n={n}, e={e}, d={d}")
    return n // e if e % d == 0 else 0


@dataclass(frozen=True)
class EvenCoeffTable:
    """Exact coefficients of an even function over the Ramanujan-sum kernel.

    ``moduli`` and ``arities`` describe variable groups: group j has
    modulus moduli[j] and arities[j] variables.  ``coeffs`` maps flattened
    divisor tuples (group by group, each entry dividing its modulus) to
    exact values; keys are complete and lexicographically ordered.  The
    single-group case is the classical one-modulus table.
    """

    moduli: tuple[int, ...]
    arities: tuple[int, ...]
    coeffs: dict

    @property
    def modulus(self) -> int:
        if len(self.moduli) != 1:
            raise ValueError("modulus is only defined for single-group tables")
        return self.moduli[0]

    @property
    def arity(self) -> int:
        return sum(self.arities)


@dataclass(frozen=True)
class PeriodicCoeffTable:
    """Complex coefficients of a periodic function over the exponential kernel."""

    modulus: int
    arity: int
    coeffs: dict


def _divisor_tuples(moduli, arities):
    """Flattened divisor tuples, lexicographic: group j contributes
    arities[j] coordinates, each running over divisors(moduli[j])."""
    pools = []
    for r, k in zip(moduli, arities):
        pools.extend([divisors(r)] * k)
    return itertools.product(*pools)


def general_even_coeffs(F, moduli, arities, residue_limit: int = 10**6) -> EvenCoeffTable:
    """Coefficient table of a function even modulo each group's modulus.

    ``F`` takes the flattened variables.  Evenness is verified exhaustively
    on the full residue grid first; the coefficient formula silently
    produces garbage on non-even input, so the precondition is not trusted.
    """
    moduli = tuple(moduli)
    arities = tuple(arities)
    if len(moduli) != len(arities) or not moduli:
        raise ArityError("need matching nonempty moduli and arities")
    if any(r <= 0 for r in moduli) or any(k <= 0 for k in arities):
        raise ValueError("moduli and arities must be positive")

    flat_moduli = []
    for r, k in zip(moduli, arities):
        flat_moduli.extend([r] * k)

    grid = 1
    for r, k in zip(moduli, arities):
        grid *= r**k
    if grid > residue_limit:
        raise ResourceLimitError(f"residue grid of size {grid} exceeds limit {residue_limit}")

    for ns in itertools.product(*[range(1, r + 1) for r in flat_moduli]):
        reduced = tuple(math.gcd(n, r) for n, r in zip(ns, flat_moduli))
        if F(*ns) != F(*reduced):
            raise ValueError(f"function is not even at arguments {ns}")

    fvals = {ds: F(*ds) for ds in _divisor_tuples(moduli, arities)}
    scale = Fraction(1)
    for r, k in zip(moduli, arities):
        scale /= Fraction(r) ** k

    coeffs = {}
    for dtuple in _divisor_tuples(moduli, arities):
        acc = 0
        for delta, fv in fvals.items():
            if fv == 0:
                continue
            kernel = 1
            for dd, dl, r in zip(delta, dtuple, flat_moduli):
                kernel *= ramanujan_c(r // dd, r // dl)
                if kernel == 0:
                    break
            if kernel != 0:
                acc += fv * kernel
        coeffs[dtuple] = scale * acc
    return EvenCoeffTable(moduli, arities, coeffs)


def even_coeffs(F, r: int, m: int) -> EvenCoeffTable:
    """Single-modulus even coefficient table for an m-variable function."""
    return general_even_coeffs(F, (r,), (m,))


def reconstruct_even(table: EvenCoeffTable, ns):
    """Evaluate the kernel expansion: sum of alpha(d) * prod c(d_i, n_i)."""
    ns = tuple(ns)
    if len(ns) != table.arity:
        raise ArityError(f"expected {table.arity} arguments, got {len(ns)}")
    total = 0
    for dtuple, alpha in table.coeffs.items():
        if alpha == 0:
            continue
        kernel = 1
        for d, n in zip(dtuple, ns):
            kernel *= ramanujan_c(d, n)
            if kernel == 0:
                break
        if kernel != 0:
            total += alpha * kernel
    return total


def periodic_coeffs(F, r: int, m: int, tol: float = 1e-9) -> PeriodicCoeffTable:
    """Discrete-Fourier coefficients of a function periodic mod r in each of
    m variables; reconstruction is checked against F within ``tol``."""
    if r <= 0 or m <= 0:
        raise ValueError("modulus and arity must be positive")
    tau = 2.0 * math.pi / r
    grid = list(itertools.product(range(1, r + 1), repeat=m))
    fvals = {ns: F(*ns) for ns in grid}
    coeffs = {}
    for ls in grid:
        acc = 0j
        for ns, fv in fvals.items():
            phase = sum(n * l for n, l in zip(ns, ls))
            acc += fv * cmath.exp(-1j * tau * phase)
        coeffs[ls] = acc / r**m
    table = PeriodicCoeffTable(r, m, coeffs)
    for ns, fv in fvals.items():
        if abs(reconstruct_periodic(table, ns) - fv) > tol:
            raise ValueError(f"function is not periodic mod {r}: mismatch at {ns}")
    return table


def reconstruct_periodic(table: PeriodicCoeffTable, ns) -> complex:
    ns = tuple(ns)
    if len(ns) != table.arity:
        raise ArityError(f"expected {table.arity} arguments, got {len(ns)}")
    tau = 2.0 * math.pi / table.modulus
    acc = 0j
    for ls, a in table.coeffs.items():
        phase = sum(n * l for n, l in zip(ns, ls))
        acc += a * cmath.exp(1j * tau * phase)
    return acc


def ffc_of_S(spec: MultiSumSpec, n1: int) -> EvenCoeffTable:
    """Closed-form even coefficient table of the multiple sum at modulus n1.

    The coefficient at (d_2..d_{m+1}) is n1**(-m) times the transposed
    weighted sum at (n1, n1/d_{m+1}, ..., n1/d_2); agrees exactly with
    :func:`even_coeffs` applied to the sum as a function of its trailing
    arguments.
    """
    m = spec.m
    if m == 0:
        raise ArityError("coefficient table needs m >= 1")
    tspec = transpose_data(spec, n1)
    scale = Fraction(1, n1**m)
    coeffs = {}
    for dtuple in itertools.product(divisors(n1), repeat=m):
        args = (n1,) + tuple(n1 // d for d in reversed(dtuple))
        coeffs[dtuple] = scale * eval_multisum(tspec, args)
    return EvenCoeffTable((n1,), (m,), coeffs)


def table_to_json_dict(table: EvenCoeffTable) -> dict:
    """JSON form: single-group tables use the scalar "modulus" key."""
    rows = [
        {"d": list(d), "value": fmt_exact(v)}
        for d, v in sorted(table.coeffs.items())
    ]
    if len(table.moduli) == 1:
        return {"modulus": table.moduli[0], "coeffs": rows}
    return {"moduli": list(table.moduli), "arities": list(table.arities), "coeffs": rows}
