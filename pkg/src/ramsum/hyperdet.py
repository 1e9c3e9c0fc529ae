"""Cayley hyperdeterminants of k-dimensional hypermatrices and the
Smith-type determinant evaluations for multiple-sum entries.

The signed hyperdeterminant with signature I sums, over k-tuples of
permutations, the product of entries A(s_1(v), ..., s_k(v)) weighted by
the signs of the permutations at positions in I.  Composing every
permutation with a common one permutes the product factors and scales the
sign by sgn**|I|, so for even |I| the first permutation can be fixed to
the identity and the 1/n! dropped; for odd |I| the value is identically
zero.  The full-definition path is kept as a slow oracle.  The ordinary
two-dimensional determinant (signature {1,2}) is dispatched to exact
Gaussian elimination so that large Smith-style matrices stay cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .arithfn import restrict_gamma
from .core import divisors, lcm_many
from .errors import ArityError, ResourceLimitError
from .fourier import EvenCoeffTable, general_even_coeffs
from .multisum import MultiSumSpec, eval_multisum
from .rational import fmt_exact

__all__ = [
    "Hypermatrix",
    "hyperdet",
    "hyperdet_permsum",
    "hyperdet_full",
    "det_gauss",
    "cayley_product",
    "iterate_ac",
    "iterate_ac_closed",
    "permute_order",
    "permute_axes",
    "signature_preimage",
    "FactorClosedSet",
    "is_factor_closed",
    "factor_closure",
    "build_S_hypermatrix",
    "smith_hyperdet_check",
    "even_hyperdet_check",
    "hypermatrix_to_json_dict",
]

DEFAULT_PERM_CEILING = 10**7


class Hypermatrix:
    """Dense k-dimensional array of order n with exact entries, indexed
    1-based as (i_1..i_k)."""

    __slots__ = ("dim", "order", "_data")

    def __init__(self, dim: int, order: int, entries):
        if dim <= 0 or order <= 0:
            raise ValueError("dim and order must be positive")
        entries = list(entries)
        if len(entries) != order**dim:
            raise ArityError(f"expected {order**dim} entries, got {len(entries)}")
        self.dim = dim
        self.order = order
        self._data = entries

    @classmethod
    def from_function(cls, dim: int, order: int, fn) -> "Hypermatrix":
        """Fill row-major from a function of the 1-based index tuple."""
        entries = [fn(idx) for idx in itertools.product(range(1, order + 1), repeat=dim)]
        return cls(dim, order, entries)

    def _offset(self, idx) -> int:
        off = 0
        for i in idx:
            if not 1 <= i <= self.order:
                raise IndexError(f"index {idx} out of range for order {self.order}")
            off = off * self.order + (i - 1)
        return off

    def get(self, idx):
        idx = tuple(idx)
        if len(idx) != self.dim:
            raise ArityError(f"index {idx} has wrong length (expected {self.dim})")
        return self._data[self._offset(idx)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hypermatrix)
            and self.dim == other.dim
            and self.order == other.order
            and self._data == other._data
        )


def _perms_with_signs(n: int):
    """All permutations of range(n) as 0-based image tuples with their signs."""
    out = []
    for p in itertools.permutations(range(n)):
        seen = [False] * n
        sign = 1
        for i in range(n):
            if seen[i]:
                continue
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        out.append((p, sign))
    return out


def _check_signature(I, dim: int) -> frozenset:
    I = frozenset(I)
    if not I <= set(range(1, dim + 1)):
        raise ValueError(f"signature {sorted(I)} not within 1..{dim}")
    return I


def hyperdet_permsum(a: Hypermatrix, I, ceiling: int = DEFAULT_PERM_CEILING):
    """Permutation-tuple enumeration with the first permutation fixed to the
    identity; requires even |I| (odd signatures vanish identically)."""
    I = _check_signature(I, a.dim)
    if len(I) % 2 != 0:
        raise ValueError("fixed-first-permutation path needs even |I|")
    n, k = a.order, a.dim
    if math.factorial(n) ** (k - 1) > ceiling:
        raise ResourceLimitError(
            f"{n}!**{k - 1} permutation tuples exceed the ceiling {ceiling}"
        )
    perms = _perms_with_signs(n)
    data = a._data
    strides = [n ** (k - 1 - t) for t in range(k)]
    total = 0
    signed = [j in I for j in range(2, k + 1)]
    for combo in itertools.product(perms, repeat=k - 1):
        sign = 1
        for (p, s), use in zip(combo, signed):
            if use and s < 0:
                sign = -sign
        term = 1
        for v in range(n):
            off = v * strides[0]
            for t, (p, _) in enumerate(combo):
                off += p[v] * strides[t + 1]
            term *= data[off]
            if term == 0:
                break
        if term != 0:
            total += sign * term
    return total


def hyperdet_full(a: Hypermatrix, I, ceiling: int = DEFAULT_PERM_CEILING):
    """Unoptimized definition: average over all k-tuples of permutations.
    Slow; retained as the oracle for the fixed-first-permutation path."""
    I = _check_signature(I, a.dim)
    n, k = a.order, a.dim
    if math.factorial(n) ** k > ceiling:
        raise ResourceLimitError(f"{n}!**{k} permutation tuples exceed the ceiling {ceiling}")
    perms = _perms_with_signs(n)
    total = 0
    signed = [j in I for j in range(1, k + 1)]
    for combo in itertools.product(perms, repeat=k):
        sign = 1
        for (p, s), use in zip(combo, signed):
            if use and s < 0:
                sign = -sign
        term = 1
        for v in range(n):
            term *= a._data[a._offset(tuple(p[v] + 1 for p, _ in combo))]
            if term == 0:
                break
        total += sign * term
    return Fraction(total, math.factorial(n))


def det_gauss(a: Hypermatrix):
    """Ordinary determinant of a 2-dimensional matrix by exact Gaussian
    elimination; no factorial blowup."""
    if a.dim != 2:
        raise ArityError("Gaussian determinant needs a 2-dimensional matrix")
    n = a.order
    rows = [[Fraction(a.get((i, j))) for j in range(1, n + 1)] for i in range(1, n + 1)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                factor = rows[r][col] * inv
                for c in range(col, n):
                    rows[r][c] -= factor * rows[col][c]
    return det


def hyperdet(a: Hypermatrix, I, ceiling: int = DEFAULT_PERM_CEILING):
    """Signed hyperdeterminant.  Odd signatures return 0 immediately; the
    ordinary determinant goes through Gaussian elimination; everything else
    runs the fixed-first-permutation enumeration under the ceiling."""
    I = _check_signature(I, a.dim)
    if len(I) % 2 != 0:
        return 0
    if a.dim == 2 and I == {1, 2}:
        return det_gauss(a)
    return hyperdet_permsum(a, I, ceiling)


def cayley_product(a: Hypermatrix, b: Hypermatrix) -> Hypermatrix:
    """Contraction over the last axis of ``a`` and the first axis of ``b``."""
    if a.order != b.order:
        raise ArityError(f"orders differ: {a.order} vs {b.order}")
    if a.dim + b.dim < 3:
        raise ArityError("product needs dim(a) + dim(b) >= 3")
    n = a.order
    ka, kb = a.dim, b.dim

    def entry(idx):
        left, right = idx[: ka - 1], idx[ka - 1 :]
        return sum(a.get(left + (j,)) * b.get((j,) + right) for j in range(1, n + 1))

    return Hypermatrix.from_function(ka + kb - 2, n, entry)


def iterate_ac(a: Hypermatrix, c: Hypermatrix, l: int) -> Hypermatrix:
    """l-fold contraction against a 2-dimensional matrix via the recursion:
    contract, then cycle the first axis to the back."""
    if c.dim != 2:
        raise ArityError("second factor must be 2-dimensional")
    if a.order != c.order:
        raise ArityError("orders differ")
    if not 0 <= l <= a.dim:
        raise ValueError(f"need 0 <= l <= {a.dim}, got {l}")
    out = a
    k = a.dim
    cycle = tuple(range(2, k + 1)) + (1,)
    for _ in range(l):
        out = permute_axes(cayley_product(out, c), cycle)
    return out


def iterate_ac_closed(a: Hypermatrix, c: Hypermatrix, l: int) -> Hypermatrix:
    """Closed form of :func:`iterate_ac`: entry (i_1..i_k) sums
    A(i_{l+1}..i_k, j_1..j_l) * prod C(j_h, i_h) over the j's."""
    if c.dim != 2:
        raise ArityError("second factor must be 2-dimensional")
    if a.order != c.order:
        raise ArityError("orders differ")
    if not 0 <= l <= a.dim:
        raise ValueError(f"need 0 <= l <= {a.dim}, got {l}")
    n = a.order

    def entry(idx):
        head, js_slots = idx[l:], idx[:l]
        total = 0
        for js in itertools.product(range(1, n + 1), repeat=l):
            term = a.get(head + js)
            for jh, ih in zip(js, js_slots):
                if term == 0:
                    break
                term *= c.get((jh, ih))
            total += term
        return total

    return Hypermatrix.from_function(a.dim, n, entry)


def _check_perm(pi, size: int) -> tuple[int, ...]:
    pi = tuple(pi)
    if sorted(pi) != list(range(1, size + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{size}")
    return pi


def permute_order(a: Hypermatrix, pi) -> Hypermatrix:
    """Relabel positions: entry at (i_1..i_k) becomes A(pi(i_1)..pi(i_k))."""
    pi = _check_perm(pi, a.order)
    return Hypermatrix.from_function(a.dim, a.order, lambda idx: a.get(tuple(pi[i - 1] for i in idx)))


def permute_axes(a: Hypermatrix, pi) -> Hypermatrix:
    """Permute axes: entry at (i_1..i_k) becomes A(i_{pi(1)}..i_{pi(k)})."""
    pi = _check_perm(pi, a.dim)
    return Hypermatrix.from_function(a.dim, a.order, lambda idx: a.get(tuple(idx[p - 1] for p in pi)))


def signature_preimage(I, pi) -> frozenset:
    """The signature that makes the axis-permutation lemma an equality."""
    pi = tuple(pi)
    inv = {image: pos + 1 for pos, image in enumerate(pi)}
    return frozenset(inv[i] for i in I)


@dataclass(frozen=True)
class FactorClosedSet:
    """Strictly increasing distinct positive integers closed under divisors."""

    xs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        if not self.xs:
            raise ValueError("set must be nonempty")
        if any(x <= 0 for x in self.xs):
            raise ValueError("elements must be positive")
        if any(a >= b for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("elements must be strictly increasing")
        present = set(self.xs)
        for x in self.xs:
            if any(d not in present for d in divisors(x)):
                raise ValueError(f"set is not factor-closed: missing a divisor of {x}")

    def __len__(self) -> int:
        return len(self.xs)


def is_factor_closed(xs) -> bool:
    xs = list(xs)
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate elements")
    present = set(xs)
    return all(x > 0 for x in xs) and all(
        d in present for x in xs for d in divisors(x)
    )


def factor_closure(xs) -> FactorClosedSet:
    """Minimal factor-closed superset, sorted."""
    xs = list(xs)
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate elements")
    out: set[int] = set()
    for x in xs:
        out.update(divisors(x))
    return FactorClosedSet(tuple(sorted(out)))


def build_S_hypermatrix(spec: MultiSumSpec, s: FactorClosedSet) -> Hypermatrix:
    """Entry (i_1..i_{m+1}) is the multiple sum at (x_{i_1}..x_{i_{m+1}})."""
    xs = s.xs
    return Hypermatrix.from_function(
        spec.m + 1, len(xs), lambda idx: eval_multisum(spec, tuple(xs[i - 1] for i in idx))
    )


def _default_signature(m: int) -> frozenset:
    """{2..m+1} for even m, {1..m+1} for odd m (always even cardinality)."""
    return frozenset(range(2, m + 2)) if m % 2 == 0 else frozenset(range(1, m + 2))


def smith_hyperdet_check(spec: MultiSumSpec, s: FactorClosedSet, I=None):
    """Both sides of the factor-closed determinant evaluation.

    Left: hyperdeterminant of the value hypermatrix with the parity-matched
    signature.  Right: (f_1(1)...f_m(1))**n times the product over set
    elements of weight(x,..,x) * f_{m+1} restricted to lcm(gammas)-th
    powers.
    """
    if not isinstance(s, FactorClosedSet):
        s = FactorClosedSet(tuple(sorted(s)))
    m = spec.m
    I = _default_signature(m) if I is None else _check_signature(I, m + 1)
    lhs = hyperdet(build_S_hypermatrix(spec, s), I)

    ell = lcm_many(spec.gammas) if spec.gammas else 1
    f_last = restrict_gamma(spec.fns[m], ell)
    head = 1
    for f in spec.fns[:m]:
        head *= f(1)
    rhs = head ** len(s)
    for x in s.xs:
        w = 1 if spec.weight is None else spec.weight((x,) * m)
        rhs *= w * f_last(x)
    return lhs, rhs


def even_hyperdet_check(F, ks, s: FactorClosedSet, I=None):
    """Both sides of the coefficient-determinant evaluation for a function
    even modulo each of its m moduli (with k_j variables per modulus).

    ``F(moduli, args)`` takes the modulus tuple and the flattened variable
    tuple.  The value hypermatrix has dimension m + sum(ks): the first m
    axes choose the moduli from the set, the rest the variables.  The
    signature must contain all variable axes and have even cardinality;
    the reduced signature keeps modulus axes where the axis flag plus k_j
    is odd.
    """
    if not isinstance(s, FactorClosedSet):
        s = FactorClosedSet(tuple(sorted(s)))
    ks = tuple(ks)
    m = len(ks)
    if m <= 0 or any(k <= 0 for k in ks):
        raise ArityError("need at least one positive variable count")
    xs = s.xs
    n = len(xs)
    total_k = sum(ks)
    dim = m + total_k

    if I is None:
        if m != 1:
            raise ValueError("a default signature is only defined for one modulus")
        I = (
            frozenset(range(m + 1, dim + 1))
            if total_k % 2 == 0
            else frozenset(range(1, dim + 1))
        )
    I = _check_signature(I, dim)
    if len(I) % 2 != 0:
        raise ValueError("signature must have even cardinality")
    if not set(range(m + 1, dim + 1)) <= I:
        raise ValueError("signature must contain every variable axis")

    def entry(idx):
        moduli = tuple(xs[i - 1] for i in idx[:m])
        args = tuple(xs[i - 1] for i in idx[m:])
        return F(moduli, args)

    lhs = hyperdet(Hypermatrix.from_function(dim, n, entry), I)

    tables: dict[tuple[int, ...], EvenCoeffTable] = {}

    def coeff_entry(idx):
        moduli = tuple(xs[i - 1] for i in idx)
        table = tables.get(moduli)
        if table is None:
            table = general_even_coeffs(lambda *args: F(moduli, args), moduli, ks)
            tables[moduli] = table
        key = tuple(r for r, k in zip(moduli, ks) for _ in range(k))
        return table.coeffs[key]

    reduced = frozenset(j for j in range(1, m + 1) if ((j in I) + ks[j - 1]) % 2 == 1)
    alpha = Hypermatrix.from_function(m, n, coeff_entry)
    scale = 1
    for x in xs:
        scale *= x**total_k
    rhs = scale * hyperdet(alpha, reduced)
    return lhs, rhs


def hypermatrix_to_json_dict(a: Hypermatrix) -> dict:
    return {
        "dim": a.dim,
        "order": a.order,
        "entries": [fmt_exact(v) for v in a._data],
    }
