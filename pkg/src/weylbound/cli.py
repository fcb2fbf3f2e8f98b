"""``weylbound`` command line.

Every subcommand writes one report (JSON by default) to stdout or ``-o``.
Exit status: 0 on success, 1 if any verification reports ``holds = false``,
2 on usage, config or input errors.

A config file holds flat ``key = value`` lines whose keys are long option
names (``seq = kronecker:alpha=golden``, ``n = 1000``); flags given on the
command line override it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as B
from .campaign import VERBS, all_hold, run_campaign
from .discrepancy import Interval, deviation, extreme_discrepancy
from .expsums import exp_sum_table
from .sequences import SequenceSpec, generate

SCHEMA = 1
BOUND_CHOICES = ("garaev", "leveque", "et", "erdos_turan", "montgomery", "remark")


class ConfigError(ValueError):
    pass


def read_config(path) -> list[str]:
    """Translate a flat ``key = value`` file into option tokens."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not eq or not key:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        if key == "config":
            raise ConfigError(f"{path}:{lineno}: nested config files are not supported")
        opt = "-H" if key == "H" else f"--{key}"
        tokens += [opt, value.strip()]
    return tokens


# -- output ---------------------------------------------------------------------------


def _clean(x):
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _cell(x):
    return repr(float(x)) if isinstance(x, (float, Fraction)) else str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([_cell(v) for v in row] for row in rows)
    return buf.getvalue()


def _emit(args, report: dict, csv_text: str | None):
    if args.format == "csv":
        if csv_text is None:
            raise ConfigError(f"{args.command} has no csv form")
        text = csv_text
    else:
        text = json.dumps(_clean({"schema": SCHEMA, **report}), indent=2) + "\n"
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------------


def _points(args):
    if not args.seq:
        raise ConfigError("--seq is required")
    if args.n is None:
        raise ConfigError("--n is required")
    spec = SequenceSpec.parse(args.seq)
    return spec, generate(spec, args.n)


def _interval(args):
    return Interval(args.alpha, args.beta)


def cmd_gen(args):
    spec, pts = _points(args)
    values = pts.values.tolist()
    _emit(args, {"command": "gen", "sequence": str(spec), "N": pts.N, "values": values},
          _csv(["n", "x"], [(i + 1, v) for i, v in enumerate(values)]))
    return 0


def cmd_sum(args):
    spec, pts = _points(args)
    table = exp_sum_table(pts, args.hmax)
    rows = [{"h": h, "re": z.real, "im": z.imag, "abs": a}
            for h, z, a in zip(range(1, table.h_max + 1), table.complex_values.tolist(),
                               table.magnitudes.tolist())]
    _emit(args, {"command": "sum", "sequence": str(spec), "N": pts.N, "h_max": table.h_max,
                 "table": rows}, table.to_csv())
    return 0


def cmd_disc(args):
    spec, pts = _points(args)
    rep = extreme_discrepancy(pts, args.method)
    w = rep.witness
    _emit(args, {"command": "disc", "sequence": str(spec), "N": pts.N, "method": rep.method,
                 "value": rep.value, "alpha": w.alpha, "beta": w.beta},
          _csv(["method", "value", "alpha", "beta"], [(rep.method, rep.value, w.alpha, w.beta)]))
    return 0


def _weighted_params(args):
    if args.variant:
        x = args.c if args.variant != "b1" else args.a
        if x is None:
            raise ConfigError(f"variant {args.variant} needs {'--a' if args.variant == 'b1' else '--c'}")
        return B.corollary_params(args.variant, x)
    if args.a is None or args.b is None:
        raise ConfigError("garaev needs --a and --b, or --variant")
    return B.GaraevParams(args.a, args.b).check()


def _bound(kind, args, pts, table_for):
    """One ``BoundReport``; ``table_for(h)`` returns a table with ``h_max >= h``."""
    if kind == "garaev":
        params = _weighted_params(args)
        L, _ = B.truncation_point(params, args.tol)
        return B.garaev_W(table_for(L), params, args.tol)
    if kind == "leveque":
        L, _ = B.truncation_point(B.GaraevParams(2.0, 1.0), args.tol)
        return B.leveque_bound(table_for(L), args.tol)
    H = args.H if args.H is not None else args.hmax
    if kind in ("et", "erdos_turan"):
        value = B.erdos_turan_rhs(table_for(H), H)
        return B.BoundReport("erdos_turan", value, {"H": H}, H, 0.0)
    if kind == "montgomery":
        iv = _interval(args)
        value = B.montgomery_rhs(table_for(H), iv, H)
        return B.BoundReport("montgomery", value, {"H": H, "alpha": iv.alpha, "beta": iv.beta}, H, 0.0)
    if kind == "remark":
        if args.delta is None or args.eps is None:
            raise ConfigError("remark needs --delta and --eps")
        iv = _interval(args)
        res = B.remark_ratio(pts, args.delta, args.eps, iv)
        return B.BoundReport("remark", res.ratio,
                             {"Delta": args.delta, "eps": args.eps, "alpha": iv.alpha, "beta": iv.beta,
                              "hypothesis_ok": res.hypothesis_ok, "count": res.count},
                             res.h_limit, 0.0)
    raise ConfigError(f"unknown bound kind {kind!r}")


def _table_cache(pts):
    cache = {}

    def table_for(h):
        if "t" not in cache or cache["t"].h_max < h:
            cache["t"] = exp_sum_table(pts, h)
        return cache["t"]

    return table_for


def cmd_bound(args):
    spec, pts = _points(args)
    rep = _bound(args.kind, args, pts, _table_cache(pts))
    d = rep.to_dict()
    _emit(args, {"command": "bound", "sequence": str(spec), "N": pts.N, **d},
          _csv(["name", "value", "truncation_L", "tail_bound"],
               [(rep.name, rep.value, rep.truncation_L, rep.tail_bound)]))
    return 0


def cmd_compare(args):
    spec, pts = _points(args)
    D = extreme_discrepancy(pts, args.method).value
    table_for = _table_cache(pts)
    # table long enough for every functional at once
    L, _ = B.truncation_point(B.GaraevParams(2.0, 1.0), args.tol)
    need = [L, args.H or args.hmax]
    if args.a is not None and args.b is not None or args.variant:
        need.append(B.truncation_point(_weighted_params(args), args.tol)[0])
    table_for(max(need))
    kinds = ["leveque", "et"]
    if args.variant or (args.a is not None and args.b is not None):
        kinds.insert(0, "garaev")
    rows = []
    for kind in kinds:
        rep = _bound(kind, args, pts, table_for)
        rows.append({"bound": rep.name, "value": rep.value, "D": D,
                     "ratio": D / rep.value if rep.value > 0 else math.inf,
                     "params": rep.params})
    iv = _interval(args)
    H = args.H if args.H is not None else args.hmax
    mont = B.montgomery_rhs(table_for(H), iv, H)
    dev = deviation(pts, iv)
    rows.append({"bound": "montgomery", "value": mont, "D": dev,
                 "ratio": dev / mont if mont > 0 else math.inf,
                 "params": {"H": H, "alpha": iv.alpha, "beta": iv.beta}})
    _emit(args, {"command": "compare", "sequence": str(spec), "N": pts.N, "D": D, "rows": rows},
          _csv(["bound", "value", "D", "ratio"], [(r["bound"], r["value"], r["D"], r["ratio"]) for r in rows]))
    return 0


def cmd_prooflab(args):
    verdicts = run_campaign(args.verb, args.seed, args.count)
    ok = all_hold(verdicts)
    _emit(args, {"command": "prooflab", "verb": args.verb, "seed": args.seed, "count": args.count,
                 "all_hold": ok, "instances": verdicts},
          _csv(["index", "holds", "lhs", "rhs"],
               [(v["index"], v["holds"], v.get("lhs", v.get("worst_dev")), v.get("rhs", ""))
                for v in verdicts]))
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seq", help="sequence spec, e.g. kronecker:alpha=golden")
    common.add_argument("--n", type=int, help="number of points N")
    common.add_argument("--hmax", type=int, default=100, help="largest frequency in tables")
    common.add_argument("--method", choices=("fast", "bruteforce"), default="fast")
    common.add_argument("--kind", choices=BOUND_CHOICES, default="leveque")
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--variant", choices=B.VARIANTS)
    common.add_argument("-H", "--H", dest="H", type=int, help="frequency cutoff (default: --hmax)")
    common.add_argument("--tol", type=float, default=1e-6, help="inner-series tail tolerance")
    common.add_argument("--alpha", type=float, default=0.0)
    common.add_argument("--beta", type=float, default=0.5)
    common.add_argument("--delta", type=float)
    common.add_argument("--eps", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=50)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", help="report path (default stdout)")
    common.add_argument("--config", help="flat key = value file")

    parser = argparse.ArgumentParser(prog="weylbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "gen": "generate points",
        "sum": "exponential sum table S(1..hmax)",
        "disc": "exact extreme discrepancy",
        "bound": "one bound functional",
        "compare": "discrepancy next to every bound, with ratios",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    p = sub.add_parser("prooflab", parents=[common], help="seeded verification campaigns")
    p.add_argument("verb", choices=VERBS)
    return parser


COMMANDS = {"gen": cmd_gen, "sum": cmd_sum, "disc": cmd_disc, "bound": cmd_bound,
            "compare": cmd_compare, "prooflab": cmd_prooflab}


def _expand_config(argv):
    """Splice config tokens in right after the subcommand (and verb), before user flags."""
    argv = list(argv)
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    tokens = read_config(known.config)
    head = 1 if argv and not argv[0].startswith("-") else 0
    if head and argv[0] == "prooflab" and len(argv) > 1 and argv[1] in VERBS:
        head = 2
    return argv[:head] + tokens + argv[head:]


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_expand_config(argv))
    except ConfigError as exc:
        print(f"weylbound: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OverflowError) as exc:
        print(f"weylbound {args.command}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
