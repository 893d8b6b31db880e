"""Command-line entry point: ``lshcube <subcommand> ...``.

Every subcommand builds a list of records and hands it to one formatter, so
json and csv work everywhere.  Exit status: 0 ok, 1 computation error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable

from . import analysis, codes, lsh_harness
from .distdist import DistDist, PointSet, collision_probability, distance_distribution, distance_sum
from .optsets import (
    BudgetExceeded,
    GeneratorSet,
    SizeGated,
    count_rsds,
    enumerate_rsds,
    expand_generators,
    minimal_generators,
    optimal_sets,
    optimal_table,
)

FORMATS = ("json", "csv", "table", "paper-poly")
TABLE_SIZES = list(range(2, 25)) + [32]
FULL_SIZES = [48, 64]
TABLE_II_K = (6, 7, 8, 9, 16, 17, 18, 19, 20, 21)
HAMMING_MS = (4, 5, 6, 7)


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

class Poly(str):
    """A ddf cell; printed expanded, or paper-style with --format paper-poly."""

    def __new__(cls, ddf: DistDist):
        obj = super().__new__(cls, " ".join(str(c) for c in ddf.trimmed()))
        obj.ddf = ddf
        return obj


class Gamma(float):
    """A crossover value; tables print these to 4 decimals."""


def _float(v: float, precision: int | None) -> str:
    text = format(v, f".{precision or 6}g")
    return text if any(c in text for c in ".einf") else text + ".0"


def _cell(v, fmt: str, precision: int | None, table_gamma: bool):
    if isinstance(v, Poly):
        return v.ddf.polynomial() if fmt in ("paper-poly", "table") else str(v)
    if isinstance(v, Gamma) and table_gamma and precision is None:
        return f"{float(v):.4f}"
    if isinstance(v, float):
        return _float(v, precision)
    if isinstance(v, (list, tuple)):
        return " ".join(str(_cell(x, fmt, precision, table_gamma)) for x in v)
    if v is None:
        return ""
    return str(v)


def _json_value(v, precision: int | None):
    if isinstance(v, Poly):
        return list(v.ddf.trimmed())
    if isinstance(v, float):
        return float(format(v, f".{precision}g")) if precision else v
    if isinstance(v, (list, tuple)):
        return [_json_value(x, precision) for x in v]
    return v


def render(records: list[dict], fmt: str, precision: int | None, table_gamma: bool = False) -> str:
    if fmt == "json":
        return json.dumps([{k: _json_value(v, precision) for k, v in r.items()} for r in records], indent=2) + "\n"
    if not records:
        return ""
    cols = list(records[0])
    if fmt == "table" and len(records) == 1 and len(cols) == 1:
        return _cell(records[0][cols[0]], fmt, precision, table_gamma) + "\n"
    rows = [[_cell(r.get(c), fmt, precision, table_gamma) for c in cols] for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------

def _parse_set(text: str) -> PointSet:
    try:
        return PointSet.from_literal(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_gens(text: str) -> GeneratorSet:
    try:
        return GeneratorSet.from_literal(text)
    except ValueError as e:
        raise UsageError(f"bad generator literal {text!r}: {e}") from None


def _parse_code(text: str):
    try:
        return codes.parse_code(text)
    except codes.CodeError as e:
        raise UsageError(str(e)) from None


def _object(args):
    """The set or code named by --set / --gens / --code."""
    given = [a for a in ("set", "gens", "code") if getattr(args, a, None)]
    if len(given) != 1:
        raise UsageError("give exactly one of --set, --gens, --code")
    if args.set:
        return _parse_set(args.set)
    if args.gens:
        return expand_generators(_parse_gens(args.gens))
    return _parse_code(args.code)


def _operand(text: str):
    """Crossover operand: a set literal ``n:hex,...`` or a code spec."""
    head = text.split(":", 1)[0]
    if head.isdigit():
        return _parse_set(text)
    return _parse_code(text)


def _ddf_of(obj) -> DistDist:
    if isinstance(obj, PointSet):
        return distance_distribution(obj)
    c = analysis.as_curve(obj)
    return DistDist(c.coeffs, c.n, c.size)


def _gamma_grid(n: int) -> list[float]:
    return [0.5 * j / n for j in range(n)]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_ddf(args) -> list[dict]:
    d = _ddf_of(_object(args))
    return [{"n": d.n, "size": d.size, "ddf": Poly(d), "distance_sum": distance_sum(d)}]


def cmd_prob(args) -> list[dict]:
    d = _ddf_of(_object(args))
    gammas = list(args.gamma or [])
    if args.grid:
        gammas += _gamma_grid(args.grid)
    if not gammas:
        raise UsageError("give --gamma or --grid")
    if len(gammas) == 1 and not args.grid:
        return [{"P": collision_probability(d, gammas[0])}]
    return [{"gamma": g, "P": collision_probability(d, g)} for g in gammas]


def cmd_crossover(args) -> list[dict]:
    reports = analysis.crossover(_operand(args.a), _operand(args.b), args.a, args.b)
    if not reports:
        return [{"lhs": args.a, "rhs": args.b, "gamma_cross": None, "lo": None, "hi": None, "lhs_wins_above": None}]
    return [{"lhs": r.lhs, "rhs": r.rhs, "gamma_cross": r.gamma_cross, "lo": r.bracket[0], "hi": r.bracket[1],
             "lhs_wins_above": r.lhs_wins_above} for r in reports]


def cmd_alpha(args) -> list[dict]:
    out = []
    for m in args.m:
        r = analysis.hamming_alpha(m)
        out.append({"m": m, "alpha": r.alpha, "gamma": r.gamma, "bound_lo": r.bound[0], "bound_hi": r.bound[1],
                    "within_bound": r.within_bound})
    return out


def cmd_asymptotic(args) -> list[dict]:
    if args.critical:
        return [{"delta": d, "H": analysis.binary_entropy(d), "critical_gamma": analysis.critical_gamma(d)}
                for d in args.delta or []]
    if args.grid:
        lo, hi, k = 0.02, 0.48, args.grid
        axis = [lo + (hi - lo) * i / (k - 1) for i in range(k)] if k > 1 else [lo]
        gammas, deltas = axis, axis
    else:
        gammas, deltas = args.gamma or [], args.delta or []
    if not gammas or not deltas:
        raise UsageError("give --gamma and --delta, or --grid N, or --critical --delta")
    return [{"gamma": g, "delta": d, "H": analysis.binary_entropy(d), "eps_max": e, "D": D}
            for g, d, e, D in analysis.asymptotic_grid(gammas, deltas)]


def cmd_enumerate(args) -> list[dict]:
    if args.count_only:
        return [{"count": count_rsds(args.dim, args.size, full=args.full)}]
    return [{"set": minimal_generators(S).to_literal()} for S in enumerate_rsds(args.dim, args.size, full=args.full)]


def cmd_optimal(args) -> list[dict]:
    if args.t == 6 and not args.full:
        raise SizeGated("t=6 enumerates size-64 sets; pass --full")
    out = []
    for p in optimal_sets(args.t, args.dim):
        for lo, hi in p.regimes:
            out.append({"gamma_lo": Gamma(lo), "gamma_hi": Gamma(hi), "ddf": Poly(p.ddf),
                        "generators": [str(g) for g in p.generators]})
    return out


def cmd_gens(args) -> list[dict]:
    if args.expand:
        S = expand_generators(_parse_gens(args.expand), budget=args.budget)
        return [{"set": S.to_literal(), "size": len(S.points)}]
    S = _parse_set(args.minimize)
    g = minimal_generators(S)
    return [{"generators": g.to_literal(), "paper": g.paper()}]


def cmd_bench(args) -> list[dict] | str:
    cfg = lsh_harness.ExperimentConfig(args.code, args.M, args.gamma, args.trials, args.seed, args.max_retries)
    _parse_code(args.code)
    if args.csv:
        return lsh_harness.trials_csv(lsh_harness.run_trials(cfg))
    report = lsh_harness.run_experiment(cfg)
    if (args.format or "json") == "json":
        return report.to_json() + "\n"
    row = {k: v for k, v in vars(report).items() if k not in ("config", "rounds_histogram")}
    return [row]


def _table_rows(t: int, dims=None) -> list[dict]:
    return [{"t": r.t, "n": r.n, "gamma_cross": Gamma(r.gamma_cross), "ddf": Poly(r.ddf),
             "generators": [str(g) for g in r.generators]} for r in optimal_table(t, dims)]


def cmd_tables(args) -> list[dict]:
    which = args.which
    if which == "I":
        out = []
        for m in HAMMING_MS:
            n = (1 << m) - 1
            r = analysis.crossover(codes.hamming_code(m), codes.projection_code(n, n - m))
            out.append({"m": m, "k": n - m, "gamma": Gamma(r[0].gamma_cross)})
        return out
    if which == "III":
        sizes = TABLE_SIZES + (FULL_SIZES if args.full else [])
        return [{"size": s, "number": count_rsds(s - 1, s, full=True)} for s in sizes]
    if which == "IV":
        return [row for t in range(1, 6) for row in _table_rows(t)]
    if not args.full:
        raise SizeGated(f"Table {which} enumerates size-64 sets; pass --full")
    if which == "V":
        return _table_rows(6)
    rows = {r["n"]: r for r in _table_rows(6)}
    out = []
    for k in TABLE_II_K:
        r = rows.get(k + 6)
        if r is not None:
            out.append({"k": k, "n": k + 6, "gamma_cross": r["gamma_cross"], "generators": r["generators"]})
    return out


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags; SUPPRESS keeps them from
        # overwriting values given before the subcommand name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--seed", type=int, default=d(0), help="RNG seed (bench)")
        f.add_argument("--format", choices=FORMATS, default=d(None), help="output format")
        f.add_argument("--precision", type=int, default=d(None), help="significant digits for floats (default 6)")
        f.add_argument("--full", action="store_true", default=d(False), help="allow the long size-48/64 runs")
        return f

    common = flags(False)
    sub_common = flags(True)

    p = argparse.ArgumentParser(prog="lshcube", description="Collision-probability analysis of code-based LSH.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, parents=[sub_common])
        sp.set_defaults(fn=fn)
        return sp

    def add_object(sp):
        sp.add_argument("--set", help="point set literal n:hex,hex,...")
        sp.add_argument("--gens", help="generator literal n:hex,... (expanded to its down-set)")
        sp.add_argument("--code", help="code spec: projection:n,k | hamming:m | golay | file:PATH | concat:A+B")

    sp = add("ddf", cmd_ddf, "distance distribution of a set or code zero-set")
    add_object(sp)

    sp = add("prob", cmd_prob, "collision probability")
    add_object(sp)
    sp.add_argument("--gamma", type=float, action="append")
    sp.add_argument("--grid", type=int, help="also evaluate on N evenly spaced gammas in [0, 1/2)")

    sp = add("crossover", cmd_crossover, "error rates where two hashes swap order")
    sp.add_argument("--a", required=True, help="set literal or code spec")
    sp.add_argument("--b", required=True, help="set literal or code spec")

    sp = add("alpha", cmd_alpha, "Hamming-code root alpha_m")
    sp.add_argument("--m", type=int, action="append", required=True)

    sp = add("asymptotic", cmd_asymptotic, "random-code exponent bounds")
    sp.add_argument("--gamma", type=float, action="append")
    sp.add_argument("--delta", type=float, action="append")
    sp.add_argument("--grid", type=int, help="N x N grid over (0.02, 0.48)^2")
    sp.add_argument("--critical", action="store_true", help="critical gamma for each --delta")

    sp = add("enumerate", cmd_enumerate, "right-shifted down-sets of a given size")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")

    sp = add("optimal", cmd_optimal, "optimal sets of size 2^t over gamma")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)

    sp = add("gens", cmd_gens, "expand or minimise generator sets")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--expand", help="generator literal n:hex,...")
    g.add_argument("--minimize", help="set literal n:hex,...")
    sp.add_argument("--budget", type=int, default=None)

    sp = add("bench", cmd_bench, "Monte Carlo hash-and-retry experiment")
    sp.add_argument("--code", required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--max-retries", type=int, default=None)
    sp.add_argument("--csv", action="store_true", help="one row per trial")

    sp = add("tables", cmd_tables, "regenerate the published tables")
    sp.add_argument("--which", choices=("I", "II", "III", "IV", "V"), required=True)
    return p


DEFAULT_FORMAT = {"tables": "csv", "bench": "json"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "table")
    try:
        result = args.fn(args)
    except (UsageError, SizeGated) as e:
        parser.print_usage(sys.stderr)
        print(f"lshcube: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, BudgetExceeded, codes.CodeError) as e:
        print(f"lshcube: {e}", file=sys.stderr)
        return 1
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        sys.stdout.write(render(result, fmt, args.precision, table_gamma=args.command in ("tables", "optimal")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
