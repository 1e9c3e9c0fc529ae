"""Command-line front end: evaluate multiple sums, verify the identity
suites, and tabulate values in machine-readable form.

Function expressions use a small language:

    mu | eps | one | phi | pow:A | agamma:G
    restrict:G(expr)            power-restriction of an expression
    dirichlet(e1,e2)            Dirichlet convolution
    gconv:G(e1,e2)              power-restricted convolution; e1 takes the
                                restricted slot: sum of e2(n/d**G) e1(d**G)

Lists of expressions split on top-level commas only.  Exit codes: 0 ok,
1 verification mismatch, 2 unparseable or invalid input, 3 arity mismatch,
4 resource ceiling exceeded.  Rationals print as "p/q", integers bare.
Randomized verify targets take --seed (default 0) and are deterministic
for a fixed seed.
"""

from __future__ import annotations

import json
import random
import sys

import click

from .arithfn import ArithFn, builtin, dirichlet, gamma_convolve, restrict_gamma
from .dseries import (
    verify_gen_ramanujan_series,
    verify_multivariable_L,
    verify_phi_series,
    verify_prop_gamma_chain,
    verify_double_series,
)
from .errors import ArityError, ResourceLimitError
from .fourier import even_coeffs, ffc_of_S, ramanujan_c, table_to_json_dict
from .hyperdet import (
    FactorClosedSet,
    build_S_hypermatrix,
    even_hyperdet_check,
    hyperdet,
    hyperdet_full,
    hyperdet_permsum,
    hypermatrix_to_json_dict,
    is_factor_closed,
    factor_closure,
    permute_axes,
    permute_order,
    signature_preimage,
    smith_hyperdet_check,
    cayley_product,
)
from .multisum import MultiSumSpec, eval_multisum
from .rational import fmt_exact
from .sampling import (
    even_fn_from_table,
    random_even_table,
    random_factor_closed,
    random_hypermatrix,
    random_spec,
)

DEFAULT_SEED = 0


class ExprParseError(ValueError):
    """Malformed function expression or argument list."""


def _parse_int(s: str, pos: int) -> tuple[int, int]:
    start = pos
    if pos < len(s) and s[pos] in "+-":
        pos += 1
    while pos < len(s) and s[pos].isdigit():
        pos += 1
    if pos == start or not s[start:pos].lstrip("+-"):
        raise ExprParseError(f"expected an integer at position {start} in {s!r}")
    return int(s[start:pos]), pos


def _parse_expr(s: str, pos: int) -> tuple[ArithFn, int]:
    for name in ("mu", "eps", "one", "phi"):
        if s.startswith(name, pos):
            nxt = pos + len(name)
            if nxt == len(s) or not (s[nxt].isalnum() or s[nxt] in ":_"):
                return builtin(name), nxt
    if s.startswith("pow:", pos):
        a, pos = _parse_int(s, pos + 4)
        return builtin("pow", a), pos
    if s.startswith("agamma:", pos):
        g, pos = _parse_int(s, pos + 7)
        if g <= 0:
            raise ExprParseError("agamma parameter must be positive")
        return builtin("agamma", g), pos
    if s.startswith("restrict:", pos):
        g, pos = _parse_int(s, pos + 9)
        if g <= 0:
            raise ExprParseError("restrict parameter must be positive")
        pos = _expect(s, pos, "(")
        inner, pos = _parse_expr(s, pos)
        pos = _expect(s, pos, ")")
        return restrict_gamma(inner, g), pos
    if s.startswith("dirichlet(", pos):
        e1, pos = _parse_expr(s, pos + len("dirichlet("))
        pos = _expect(s, pos, ",")
        e2, pos = _parse_expr(s, pos)
        pos = _expect(s, pos, ")")
        return dirichlet(e1, e2), pos
    if s.startswith("gconv:", pos):
        g, pos = _parse_int(s, pos + 6)
        if g <= 0:
            raise ExprParseError("gconv parameter must be positive")
        pos = _expect(s, pos, "(")
        e1, pos = _parse_expr(s, pos)
        pos = _expect(s, pos, ",")
        e2, pos = _parse_expr(s, pos)
        pos = _expect(s, pos, ")")
        return gamma_convolve(e1, e2, g), pos
    raise ExprParseError(f"cannot parse function expression at position {pos} in {s!r}")


def _expect(s: str, pos: int, ch: str) -> int:
    if pos >= len(s) or s[pos] != ch:
        raise ExprParseError(f"expected {ch!r} at position {pos} in {s!r}")
    return pos + 1


def parse_fn_expr(s: str) -> ArithFn:
    s = s.strip()
    fn, pos = _parse_expr(s, 0)
    if pos != len(s):
        raise ExprParseError(f"trailing input at position {pos} in {s!r}")
    return fn


def split_top_commas(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ExprParseError(f"unbalanced parentheses in {s!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ExprParseError(f"unbalanced parentheses in {s!r}")
    parts.append("".join(cur))
    return parts


def parse_fn_list(s: str) -> tuple[ArithFn, ...]:
    return tuple(parse_fn_expr(part) for part in split_top_commas(s))


def parse_int_list(s: str, positive: bool = True) -> tuple[int, ...]:
    s = s.strip()
    if not s:
        return ()
    try:
        vals = tuple(int(p.strip()) for p in s.split(","))
    except ValueError as exc:
        raise ExprParseError(f"expected comma-separated integers, got {s!r}") from exc
    if positive and any(v <= 0 for v in vals):
        raise ExprParseError(f"expected positive integers, got {s!r}")
    return vals


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _guard(body):
    try:
        return body()
    except ExprParseError as exc:
        _fail(2, f"error: {exc}")
    except ArityError as exc:
        _fail(3, f"error: {exc}")
    except ResourceLimitError as exc:
        _fail(4, f"error: {exc}")
    except ValueError as exc:
        _fail(2, f"error: {exc}")


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _parse_mutate(s):
    return tuple(parse_int_list(s)) if s else None


@click.group()
def main() -> None:
    """Exact multiple Ramanujan sums: evaluate, verify, tabulate."""


@main.command("eval")
@click.option("--gammas", default="", help="Comma-separated gammas; empty for a single function.")
@click.option("--fns", required=True, help="Comma-separated function expressions.")
@click.option("--ns", required=True, help="Comma-separated positive arguments.")
@click.option("--format", "fmt", type=click.Choice(["plain", "json"]), default="plain")
def cmd_eval(gammas: str, fns: str, ns: str, fmt: str) -> None:
    """Evaluate one multiple sum."""

    def body():
        spec = MultiSumSpec(parse_int_list(gammas), parse_fn_list(fns))
        value = eval_multisum(spec, parse_int_list(ns))
        if fmt == "json":
            _echo_json({"value": fmt_exact(value)})
        else:
            click.echo(fmt_exact(value))

    _guard(body)


VERIFY_TARGETS = (
    "gamma-chain",
    "multivariable-L",
    "phi-series",
    "double-series",
    "gen-ramanujan",
    "fourier-theorem",
    "smith",
    "prop41",
    "lemmas",
)


@main.command("verify")
@click.argument("target", type=click.Choice(VERIFY_TARGETS))
@click.option("--fns", default=None, help="Function expressions (target-dependent).")
@click.option("--gammas", default=None)
@click.option("--gamma0", type=int, default=1)
@click.option("--gamma", type=int, default=1, help="Single gamma for double-series.")
@click.option("--set", "set_", default=None, help="Integer set for smith/prop41.")
@click.option("--n", "--N", "bound", type=int, default=30, help="Truncation bound.")
@click.option("--j", "slot", type=int, default=1, help="Running slot for phi-series.")
@click.option("--fixed", default=None, help="Fixed arguments for phi-series/gen-ramanujan.")
@click.option("--m", "m_", type=int, default=2)
@click.option("--k", "k_", type=int, default=1)
@click.option("--exps", default=None, help="Exponent vector for gen-ramanujan.")
@click.option("--seed", type=int, default=DEFAULT_SEED, help="Seed for randomized targets.")
@click.option("--cases", type=int, default=20, help="Case count for randomized targets.")
@click.option("--mutate", default=None, help="Index to perturb (demonstrates mismatch).")
def cmd_verify(target, fns, gammas, gamma0, gamma, set_, bound, slot, fixed, m_, k_, exps, seed, cases, mutate):
    """Run one identity suite; exit 0 only if every check passes."""

    def body():
        if target == "smith":
            _verify_smith(fns, gammas, set_)
        elif target == "gamma-chain":
            fs = parse_fn_list(fns or "mu,pow:1")
            gs = parse_int_list(gammas if gammas is not None else "1")
            _finish_report(verify_prop_gamma_chain(fs, gs, bound, mutate=_parse_mutate(mutate)))
        elif target == "multivariable-L":
            fs = parse_fn_list(fns or "mu,pow:1")
            gs = parse_int_list(gammas if gammas is not None else "1")
            _finish_report(
                verify_multivariable_L(fs, gs, bound, gamma0=gamma0, mutate=_parse_mutate(mutate))
            )
        elif target == "phi-series":
            fs = parse_fn_list(fns or "mu,pow:1")
            gs = parse_int_list(gammas if gammas is not None else "1")
            fixed_ns = parse_int_list(fixed or "6")
            spec = MultiSumSpec(gs, fs)
            _finish_report(
                verify_phi_series(spec, slot, fixed_ns, bound, mutate=_parse_mutate(mutate))
            )
        elif target == "double-series":
            fs = parse_fn_list(fns or "pow:1,one,pow:0,one")
            if len(fs) != 4:
                raise ArityError("double-series needs exactly four functions")
            _finish_report(
                verify_double_series(*fs, gamma, bound, mutate=_parse_mutate(mutate))
            )
        elif target == "gen-ramanujan":
            exps_v = parse_int_list(exps if exps is not None else "1", positive=False)
            fixed_ns = parse_int_list(fixed or "6")
            _finish_report(
                verify_gen_ramanujan_series(
                    m_, k_, exps_v, fixed_ns, bound, mutate=_parse_mutate(mutate)
                )
            )
        elif target == "fourier-theorem":
            _verify_fourier_theorem(seed, cases)
        elif target == "prop41":
            _verify_prop41(seed, cases)
        elif target == "lemmas":
            _verify_lemmas(seed, cases)

    _guard(body)


def _finish_report(report) -> None:
    _echo_json(report.to_json_dict())
    if not report.ok:
        sys.exit(1)


def _verify_smith(fns, gammas, set_) -> None:
    if set_ is None:
        raise ExprParseError("smith needs --set")
    xs = sorted(parse_int_list(set_))
    if not is_factor_closed(xs):
        raise ValueError("set not factor-closed")
    fs = parse_fn_list(fns or "mu,pow:1")
    gs = parse_int_list(gammas) if gammas is not None else (1,) * (len(fs) - 1)
    spec = MultiSumSpec(gs, fs)
    lhs, rhs = smith_hyperdet_check(spec, FactorClosedSet(tuple(xs)))
    status = "ok" if lhs == rhs else "mismatch"
    _echo_json(
        {
            "identity": "smith",
            "status": status,
            "lhs": fmt_exact(lhs),
            "rhs": fmt_exact(rhs),
            "set": list(xs),
        }
    )
    if status != "ok":
        sys.exit(1)


def _verify_fourier_theorem(seed: int, cases: int) -> None:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        m = rng.choice((1, 2))
        n1 = rng.randint(1, 12)
        spec = random_spec(rng, m, gamma_max=3, weighted=rng.random() < 0.5)
        closed = ffc_of_S(spec, n1)
        direct = even_coeffs(
            lambda *ns, _s=spec, _n=n1: eval_multisum(_s, (_n,) + ns), n1, m
        )
        if closed.coeffs != direct.coeffs:
            failures += 1
    _finish_suite("fourier-theorem", cases, failures)


def _verify_prop41(seed: int, cases: int) -> None:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        k = rng.choice((1, 2))
        s = random_factor_closed(rng, max_size=4, seed_max=8)
        case_seed = rng.getrandbits(32)
        table_cache: dict[int, object] = {}

        def F(moduli, args, _cache=table_cache, _cs=case_seed, _k=k):
            r = moduli[0]
            if r not in _cache:
                _cache[r] = random_even_table(random.Random(_cs * 1000003 + r), r, _k)
            return even_fn_from_table(_cache[r])(*args)

        lhs, rhs = even_hyperdet_check(F, (k,), s)
        if lhs != rhs:
            failures += 1
    _finish_suite("prop41", cases, failures)


def _verify_lemmas(seed: int, cases: int) -> None:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        n = rng.randint(2, 3)
        k = rng.choice((2, 3))
        a = random_hypermatrix(rng, k, n, denom_max=3)
        evens = [frozenset(c) for size in (0, 2) for c in _combos(k, size)]
        sig = rng.choice(evens)
        pi_n = _rand_perm(rng, n)
        pi_k = _rand_perm(rng, k)
        if hyperdet_permsum(permute_order(a, pi_n), sig) != hyperdet_permsum(a, sig):
            failures += 1
        lhs = hyperdet_permsum(permute_axes(a, pi_k), sig)
        if lhs != hyperdet_full(a, signature_preimage(sig, pi_k)):
            failures += 1
        odd = frozenset({1}) if 1 <= k else frozenset()
        if hyperdet(a, odd) != 0:
            failures += 1
        if hyperdet_permsum(a, sig) != hyperdet_full(a, sig):
            failures += 1
        b = random_hypermatrix(rng, 2, n, denom_max=2)
        ks = list(range(1, k))
        K = frozenset(rng.sample(ks, 1)) if ks else frozenset()
        L = frozenset({2})
        I = K | {x + (k - 2) for x in L}
        left = hyperdet_full(cayley_product(a, b), I)
        right = hyperdet_full(a, K | {k}) * hyperdet_full(b, {1} | L)
        if left != right:
            failures += 1
    _finish_suite("lemmas", cases, failures)


def _combos(k: int, size: int):
    import itertools

    return itertools.combinations(range(1, k + 1), size)


def _rand_perm(rng: random.Random, n: int) -> tuple[int, ...]:
    xs = list(range(1, n + 1))
    rng.shuffle(xs)
    return tuple(xs)


def _finish_suite(identity: str, cases: int, failures: int) -> None:
    status = "ok" if failures == 0 else "mismatch"
    _echo_json({"identity": identity, "status": status, "cases": cases, "failures": failures})
    if failures:
        sys.exit(1)


@main.command("table")
@click.argument("what", type=click.Choice(["c", "grid", "fourier", "closure", "hypermatrix"]))
@click.option("--kmax", type=int, default=5)
@click.option("--nmax", type=int, default=5)
@click.option("--fns", default="mu,pow:1")
@click.option("--gammas", default=None)
@click.option("--n1", type=int, default=6)
@click.option("--set", "set_", default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "plain"]), default=None)
def cmd_table(what, kmax, nmax, fns, gammas, n1, set_, fmt):
    """Tabulate values with deterministic, lexicographic ordering."""

    def body():
        if what == "c":
            _table_c(kmax, nmax, fmt or "csv")
        elif what == "grid":
            _table_grid(fns, gammas, nmax, fmt or "csv")
        elif what == "fourier":
            spec = MultiSumSpec(
                parse_int_list(gammas) if gammas is not None else (1,) * (len(parse_fn_list(fns)) - 1),
                parse_fn_list(fns),
            )
            _echo_json(table_to_json_dict(ffc_of_S(spec, n1)))
        elif what == "closure":
            if set_ is None:
                raise ExprParseError("closure needs --set")
            closed = factor_closure(parse_int_list(set_))
            if (fmt or "plain") == "json":
                _echo_json({"set": list(closed.xs)})
            else:
                click.echo(",".join(str(x) for x in closed.xs))
        elif what == "hypermatrix":
            if set_ is None:
                raise ExprParseError("hypermatrix needs --set")
            xs = tuple(sorted(parse_int_list(set_)))
            spec = MultiSumSpec(
                parse_int_list(gammas) if gammas is not None else (1,) * (len(parse_fn_list(fns)) - 1),
                parse_fn_list(fns),
            )
            hm = build_S_hypermatrix(spec, FactorClosedSet(xs))
            _echo_json(hypermatrix_to_json_dict(hm))

    _guard(body)


def _table_c(kmax: int, nmax: int, fmt: str) -> None:
    if kmax <= 0 or nmax <= 0:
        raise ValueError("bounds must be positive")
    if kmax * nmax > 10**6:
        raise ResourceLimitError("table too large")
    rows = [(k, n, ramanujan_c(k, n)) for k in range(1, kmax + 1) for n in range(1, nmax + 1)]
    if fmt == "json":
        _echo_json({"rows": [{"k": k, "n": n, "value": fmt_exact(v)} for k, n, v in rows]})
    else:
        lines = ["k,n,c"] + [f"{k},{n},{fmt_exact(v)}" for k, n, v in rows]
        click.echo("\n".join(lines))


def _table_grid(fns: str, gammas, nmax: int, fmt: str) -> None:
    import itertools

    fs = parse_fn_list(fns)
    gs = parse_int_list(gammas) if gammas is not None else (1,) * (len(fs) - 1)
    spec = MultiSumSpec(gs, fs)
    arity = spec.m + 1
    if nmax <= 0:
        raise ValueError("nmax must be positive")
    if nmax**arity > 10**6:
        raise ResourceLimitError("grid too large")
    rows = [
        (idx, eval_multisum(spec, idx))
        for idx in itertools.product(range(1, nmax + 1), repeat=arity)
    ]
    if fmt == "json":
        _echo_json({"rows": [{"index": list(i), "value": fmt_exact(v)} for i, v in rows]})
    else:
        header = ",".join(f"n{i}" for i in range(1, arity + 1)) + ",value"
        lines = [header] + [",".join(map(str, i)) + f",{fmt_exact(v)}" for i, v in rows]
        click.echo("\n".join(lines))


if __name__ == "__main__":  # pragma: no cover
    main()
