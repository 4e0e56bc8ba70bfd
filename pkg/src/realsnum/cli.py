"""Command-line interface."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import engine, oracle, series, trees
from .cache import SNumberCache
from .dessins import canonical_code, dessin_sign, dessin_to_dot
from .partitions import (TypeList, expand, format_partition, parse_partition,
                         parse_partition_list, simple_type, valid_type_lists)

log = logging.getLogger("realsnum")


class EngineError(Exception):
    pass


# -- argument plumbing -------------------------------------------------------------------

def _common(nested: bool = False) -> argparse.ArgumentParser:
    # Copies attached to subcommands must not reset values given before the
    # subcommand name, so they carry no defaults at all.
    def default(value):
        return argparse.SUPPRESS if nested else value

    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--type", dest="full_type", default=default(None),
                   help='full types, e.g. "2,2;2,1,1"')
    g.add_argument("--reduced", default=default(None),
                   help='reduced types, e.g. "1,1;2" (needs --degree or --simple)')
    g.add_argument("--degree", type=int, default=default(None), help="degree n for --reduced")
    g.add_argument("--simple", type=int, default=default(None),
                   help="append this many simple branch points")
    g.add_argument("--mode", choices=("explicit", "multiplicative"),
                   default=default("multiplicative"))
    g.add_argument("--format", choices=("json", "csv", "dot", "text"), default=default("text"))
    g.add_argument("--out", default=default(None), help="write output to this file")
    g.add_argument("--cache", default=default(None),
                   help="s-number cache file (default: $REALSNUM_CACHE)")
    g.add_argument("--jobs", type=int, default=default(1))
    g.add_argument("--seed", type=int, default=default(0))
    g.add_argument("-v", "--verbose", action="store_true", default=default(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realsnum", parents=[_common()],
                                     description="Signed counts of real polynomials.")
    common = _common(nested=True)
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trees", parents=[common]).add_subparsers(dest="action", required=True)
    for name in ("enumerate", "sum"):
        a = t.add_parser(name, parents=[common])
        a.add_argument("--black", required=True, help="black degree partition")
        a.add_argument("--white", required=True, help="white degree partition")
        if name == "sum":
            a.add_argument("--weighted", action="store_true", help="sum weights instead of signs")

    d = sub.add_parser("dessins", parents=[common]).add_subparsers(dest="action", required=True)
    d.add_parser("enumerate", parents=[common])
    d.add_parser("sign", parents=[common])

    sub.add_parser("snumber", parents=[common])
    inv = sub.add_parser("invariance", parents=[common])
    inv.add_argument("--random", type=int, default=0,
                     help="instead of --type, check this many random type lists")
    inv.add_argument("--max-degree", type=int, default=8)
    inv.add_argument("--max-k", type=int, default=3)

    s = sub.add_parser("series", parents=[common]).add_subparsers(dest="action", required=True)
    for name in ("fit", "coeff", "leading", "vanishing", "asymptotics"):
        a = s.add_parser(name, parents=[common])
        a.add_argument("--parity", choices=series.PARITIES, required=True)
        if name in ("fit", "coeff", "vanishing", "asymptotics"):
            a.add_argument("--upto", type=int, help="largest m in the s-number table")
        if name in ("fit", "vanishing", "asymptotics"):
            a.add_argument("--basis", choices=("rectangle", "chain"), default="rectangle")
        if name == "asymptotics":
            a.add_argument("--series", choices=("f", "g"), help="use tanh or sech directly")
            a.add_argument("--m-max", type=int, default=200)

    o = sub.add_parser("oracle", parents=[common]).add_subparsers(dest="action", required=True)
    od = o.add_parser("dessins", parents=[common])
    od.add_argument("--cap", type=int, default=oracle.DESSIN_CAP)
    ot = o.add_parser("trees", parents=[common])
    ot.add_argument("--edges", type=int, required=True)
    ot.add_argument("--cap", type=int, default=oracle.TREE_CAP)
    oe = o.add_parser("euler", parents=[common])
    oe.add_argument("--upto", type=int, required=True)

    e = sub.add_parser("export", parents=[common]).add_subparsers(dest="action", required=True)
    dot = e.add_parser("dot", parents=[common])
    dot.add_argument("--index", type=int, default=0, help="which dessin or tree to draw")
    dot.add_argument("--black", help="draw a real tree instead of a dessin")
    dot.add_argument("--white")
    dot.add_argument("--disorders", action="store_true")
    return parser


def _types(args, required: bool = True) -> TypeList | None:
    try:
        if args.full_type is not None:
            return TypeList(parse_partition_list(args.full_type), args.degree)
        if args.reduced is not None:
            lams = parse_partition_list(args.reduced)
            if args.simple is not None:
                return series.type_list_for(lams, args.simple) or _no_fit(lams, args.simple)
            if args.degree is None:
                raise EngineError("--reduced needs --degree or --simple")
            return TypeList([expand(lam, args.degree) for lam in lams], args.degree)
        if args.simple is not None and args.degree is None:
            n = args.simple + 1
            return TypeList([simple_type(n)] * args.simple if args.simple else [], n)
    except ValueError as exc:
        raise EngineError(str(exc)) from exc
    if required:
        raise EngineError("a type list is required (--type, --reduced or --simple)")
    return None


def _no_fit(lams, m):
    raise EngineError(f"reduced types {lams} do not fit with {m} simple points")


def _lams(args) -> tuple:
    if args.reduced is None:
        raise EngineError("--reduced is required")
    return tuple(parse_partition_list(args.reduced))


def _cache(args) -> SNumberCache:
    return SNumberCache.from_env(args.cache)


def _s_number(args, types: TypeList) -> int:
    return _cache(args).s_number(types, lambda t: engine.s_number(t, args.mode))


def _table_worker(item):
    types, mode = item
    return engine.s_number(types, mode)


def _table(args, lams, parity, upto) -> series.SNumberTable:
    cache = _cache(args)
    ms = [m for m in range(upto + 1) if series.admissible(lams, parity, m)]
    jobs = {}
    values = {}
    for m in ms:
        types = series.type_list_for(lams, m)
        if types is None:
            values[m] = 0
            continue
        hit = cache.get(types)
        if hit is None:
            jobs[m] = types
        else:
            values[m] = hit
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = pool.map(_table_worker, [(t, args.mode) for t in jobs.values()])
            fresh = dict(zip(jobs, results))
    else:
        fresh = {m: engine.s_number(t, args.mode) for m, t in jobs.items()}
    for m, v in fresh.items():
        cache.put(jobs[m], v)
        values[m] = v
    return series.SNumberTable(lams, parity, dict(sorted(values.items())))


def _default_upto(lams, parity, basis_kind) -> int:
    need = len(series.fit_basis(lams, parity, basis_kind)) + 2
    m = 0
    found = 0
    while found < need:
        if series.admissible(lams, parity, m):
            found += 1
        m += 1
    return m - 1


# -- commands -----------------------------------------------------------------------------

def _tree_json(t: trees.RealBWTree) -> dict:
    return {"canonical": t.canonical_form(), "real_part": [list(x) for x in t.real_part()],
            "sign": trees.tree_sign(t), "side": trees.tree_side(t), "weight": trees.tree_weight(t)}


def cmd_trees(args) -> str:
    lb, lw = parse_partition(args.black), parse_partition(args.white)
    if args.action == "enumerate":
        ts = trees.enumerate_real_trees(lb, lw)
        if args.format == "json":
            return json.dumps([_tree_json(t) for t in ts], indent=2)
        if args.format == "dot":
            return "".join(trees.tree_to_dot(t, name=f"tree{i}") for i, t in enumerate(ts))
        lines = [f"{t.canonical_form()}  side={trees.tree_side(t)} sign={trees.tree_sign(t):+d}"
                 for t in ts]
        return "\n".join(lines + [f"total: {len(ts)}"])
    fn = trees.weighted_sum if args.weighted else trees.signed_sum
    res = {side: fn(lb, lw, side) for side in (trees.WHITE, trees.BLACK)}
    if args.format == "json":
        return json.dumps(res)
    return f"white side: {res[trees.WHITE]}\nblack side: {res[trees.BLACK]}"


def cmd_dessins(args) -> str:
    types = _types(args)
    ds = engine.enumerate_dessins(types)
    if args.action == "sign":
        signs = [dessin_sign(d) for d in ds]
        if args.format == "json":
            return json.dumps({"signs": signs, "s": sum(signs)})
        return "\n".join([f"{i}: {s:+d}" for i, s in enumerate(signs)] + [f"s = {sum(signs)}"])
    if args.format == "json":
        return json.dumps([d.to_json() | {"sign": dessin_sign(d), "code": canonical_code(d).hex()}
                           for d in ds], indent=1)
    if args.format == "dot":
        return "".join(dessin_to_dot(d, f"dessin{i}") for i, d in enumerate(ds))
    lines = [f"{i}: sign {dessin_sign(d):+d}  real profile {d.real_profile()}"
             for i, d in enumerate(ds)]
    return "\n".join(lines + [f"total: {len(ds)}"])


def cmd_snumber(args) -> str:
    types = _types(args)
    value = _s_number(args, types)
    if args.format == "json":
        return json.dumps({"type": str(types), "degree": types.degree, "s": value})
    return str(value)


def _random_type_list(rng: random.Random, max_degree: int, max_k: int) -> TypeList:
    while True:
        n = rng.randint(2, max_degree)
        k = rng.randint(1, min(max_k, n - 1))
        pool = list(valid_type_lists(n, k))
        if pool:
            return rng.choice(pool)


def cmd_invariance(args) -> str:
    if args.random:
        rng = random.Random(args.seed)
        lines = []
        ok = True
        for _ in range(args.random):
            t = _random_type_list(rng, args.max_degree, args.max_k)
            rep = engine.invariance_report(t, args.mode, with_counts=False)
            ok &= rep.invariant
            lines.append(f"{t.key()}: invariant: {str(rep.invariant).lower()}; values {rep.values}")
        lines.append(f"all invariant: {str(ok).lower()}")
        return "\n".join(lines)
    types = _types(args)
    rep = engine.invariance_report(types, args.mode)
    if args.format == "json":
        return json.dumps({"invariant": rep.invariant, "s": rep.s, "values": rep.values,
                           "raw_counts": rep.raw_counts, "orders": [str(o) for o in rep.orders]})
    s = rep.s if rep.invariant else rep.values
    return (f"invariant: {str(rep.invariant).lower()}; s = {s}; "
            f"per-order raw counts: {rep.raw_counts}")


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def cmd_series(args) -> str:
    parity = args.parity
    if args.action == "asymptotics" and args.series:
        F = series.QFPoly.f() if args.series == "f" else series.QFPoly.g()
        return _asymptotics(args, F, "odd" if args.series == "f" else "even")
    lams = _lams(args)
    if args.action == "leading":
        try:
            (a, b), value = series.leading_coefficient(lams, parity)
        except ValueError as exc:
            raise EngineError(str(exc)) from exc
        g = "g * " if parity == "odd" else ""
        if args.format == "json":
            return json.dumps({"monomial": [a, b], "g_factor": parity == "odd",
                               "value": [value.numerator, value.denominator]})
        return f"{g}q^{a} f^{b}: {value}"
    if args.action == "coeff":
        upto = args.upto if args.upto is not None else 6
        table = _table(args, lams, parity, upto)
        coeffs = [table.values.get(m, 0) for m in range(upto + 1)]
        if args.format == "csv":
            return table.to_csv().rstrip("\n")
        if args.format == "json":
            return json.dumps(coeffs)
        return ", ".join(str(c) for c in coeffs)
    basis = args.basis
    upto = args.upto if args.upto is not None else _default_upto(lams, parity, basis)
    table = _table(args, lams, parity, upto)
    try:
        fit = series.fit_F(lams, parity, table, basis_kind=basis)
    except series.FitError as exc:
        raise EngineError(str(exc)) from exc
    if args.action == "fit":
        if args.format == "json":
            return json.dumps(fit.poly.to_json() | {"solved_on": fit.solved_on,
                                                    "held_out": fit.held_out})
        if args.format == "csv":
            return table.to_csv().rstrip("\n")
        return (f"F = {fit.poly}\nsolved on m = {fit.solved_on}; "
                f"verified on m = {fit.held_out}")
    if args.action == "vanishing":
        predicate = series.nonvanishing(lams, parity)
        ok = fit.poly.is_zero() == (not predicate)
        return (f"nonvanishing predicate: {str(predicate).lower()}; fitted F = {fit.poly}; "
                f"consistent: {str(ok).lower()}")
    m_par = "even" if series.admissible(lams, parity, 0) else "odd"
    return _asymptotics(args, fit.poly, m_par)


def _asymptotics(args, F, m_par) -> str:
    rep = series.asymptotic_check(F, m_par, args.m_max)
    lines = [f"limit 4/pi^2 = {rep.limit:.6f}"]
    for m in sorted(rep.ratios):
        if m % 10 in (0, 1) or m == max(rep.ratios):
            lines.append(f"m={m}: r_m={rep.ratios[m]:.6f} rel.err={rep.ratio_error(m):.2e} "
                         f"ln|s|/(m ln m)={rep.log_growth[m]:.6f}")
    if args.format == "json":
        return json.dumps({"ratios": rep.ratios, "log_growth": rep.log_growth})
    return "\n".join(lines)


def cmd_oracle(args) -> str:
    if args.action == "euler":
        nums = oracle.euler_numbers(args.upto)
        return json.dumps(nums) if args.format == "json" else ", ".join(map(str, nums))
    if args.action == "trees":
        counts = oracle.brute_force_trees(args.edges, args.cap)
        rows = sorted(counts.items())
        if args.format == "json":
            return json.dumps([[format_partition(b), format_partition(w), c] for (b, w), c in rows])
        lines = [f"{format_partition(b)} / {format_partition(w)}: {c}" for (b, w), c in rows]
        return "\n".join(lines + [f"total: {sum(counts.values())}"])
    types = _types(args)
    try:
        ds = oracle.brute_force_dessins(types, args.cap)
    except ValueError as exc:
        raise EngineError(str(exc)) from exc
    if args.format == "json":
        return json.dumps([d.to_json() | {"code": canonical_code(d).hex()} for d in ds], indent=1)
    return "\n".join([canonical_code(d).hex()[:32] + "..." for d in ds] + [f"total: {len(ds)}"])


def cmd_export(args) -> str:
    if args.black is not None:
        ts = trees.enumerate_real_trees(parse_partition(args.black), parse_partition(args.white or ""))
        return trees.tree_to_dot(ts[args.index], disorders=args.disorders)
    ds = engine.enumerate_dessins(_types(args))
    if not ds:
        raise EngineError("no dessins of this type")
    return dessin_to_dot(ds[args.index])


COMMANDS = {
    "trees": cmd_trees, "dessins": cmd_dessins, "snumber": cmd_snumber,
    "invariance": cmd_invariance, "series": cmd_series, "oracle": cmd_oracle,
    "export": cmd_export,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = COMMANDS[args.command](args)
    except (EngineError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return 0


def main():
    sys.exit(run())
