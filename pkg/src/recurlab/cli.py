"""recurlab command line.

Exit codes: 0 verified, 2 refuted or failed at the horizon, 3 input error,
4 horizon exhausted or inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .ambient import N0
from .construct import build_group, build_n0, check_group_trace, check_n0_trace
from .dsl import AMBIENTS, parse_chain, parse_set
from .errors import (
    HorizonError, ParseError, PreconditionError, RecurlabError, StageFailure, UnsupportedOperation, WordCapError,
)
from .semigroup import (
    associative_tables, ideal_structure, load_table, order_four_catalog, validate, verify_kernel,
)
from .setcalc import INCONCLUSIVE, NO, YES, FolnerSeq, banach_density, classify, upper_density
from .subshift import (
    Cylinder, all_ones, from_rle, indicator, joint_return, pattern_cylinder, return_set, to_rle,
)

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_HORIZON = 0, 2, 3, 4
PRODUCT_LABEL = "finite-horizon demonstration"
SAMPLE = 20


class InputError(RecurlabError):
    pass


def write_json(path, data):
    """Write ``data`` atomically: temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, data, path=None):
    data = dict(data)
    data["seed"] = args.seed
    text = json.dumps(data, sort_keys=True, indent=2)
    print(text)
    target = path or getattr(args, "out", None)
    if target:
        write_json(target, data)
    return data


def status_code(status):
    return {YES: EXIT_OK, NO: EXIT_REFUTED, INCONCLUSIVE: EXIT_HORIZON}[status]


def _ambient(args):
    return AMBIENTS[args.ambient]


# subcommands


def cmd_classify(args):
    s = parse_set(args.set, _ambient(args))
    v = classify(s, args.prop, args.horizon)
    emit(args, v.to_json())
    return status_code(v.status)


def cmd_density(args):
    a = _ambient(args)
    s = parse_set(args.set, a)
    if args.folner == "banach":
        report = banach_density(s, args.n)
    else:
        report = upper_density(s, FolnerSeq(a, "boxes"), args.n)
    out = report.to_json()
    out.update({"schema": "rl-cert-1", "property": f"density:{args.folner}", "set": s.describe(),
                "ambient": a.kind})
    emit(args, out)
    return EXIT_OK


def _write_artifacts(args, trace_json, point, level, report):
    trace_json = dict(trace_json, seed=args.seed, check=report.to_json())
    if args.trace:
        write_json(args.trace, trace_json)
    if args.point:
        write_json(args.point, dict(to_rle(point, level), seed=args.seed))


def cmd_construct_n0(args):
    chain = parse_chain(args.chain, N0)
    point, trace = build_n0(chain, args.depth, args.horizon)
    data = trace.to_json()
    report = check_n0_trace(data, chain.at(1))
    ones = sorted(point.ones)
    bad = [n for n in ones if n != 0 and not chain.at(1).contains(n)]
    _write_artifacts(args, data, point, args.horizon, report)
    emit(args, {"schema": data["schema"], "kind": "n0", "chain": chain.name, "depth": args.depth,
                "horizon": args.horizon, "ok": report.ok and not bad, "failures": report.failures,
                "ones": len(ones), "ones_sample": ones[:SAMPLE], "outside_target": bad[:SAMPLE]}, path=args.out)
    return EXIT_OK if report.ok and not bad else EXIT_REFUTED


def cmd_construct_g(args):
    a = _ambient(args)
    chain = parse_chain(args.chain, a)
    point, trace = build_group(chain, args.depth, args.ball)
    data = trace.to_json()
    report = check_group_trace(data, chain)
    ones = a.sorted(point.ones)
    bad = [g for g in ones if g != a.identity and not chain.at(1).contains(g)]
    level = max([a.norm(g) for g in ones] + [0])
    _write_artifacts(args, data, point, level, report)
    emit(args, {"schema": data["schema"], "kind": "group", "chain": chain.name, "ambient": a.kind,
                "depth": args.depth, "ball": args.ball, "ok": report.ok and not bad, "failures": report.failures,
                "ones": len(ones), "ones_sample": [a.format(g) for g in ones[:SAMPLE]],
                "outside_target": [a.format(g) for g in bad[:SAMPLE]]}, path=args.out)
    return EXIT_OK if report.ok and not bad else EXIT_REFUTED


def cmd_check_trace(args):
    with open(args.trace) as fh:
        data = json.load(fh)
    if data.get("kind") == "n0":
        chain = parse_chain(args.chain or data["stream"], N0)
        report = check_n0_trace(data, chain.at(1))
    elif data.get("kind") == "group":
        chain = parse_chain(args.chain or data["chain"], AMBIENTS[data["ambient"]])
        report = check_group_trace(data, chain)
    else:
        raise InputError(f"not a trace file: {args.trace}")
    emit(args, dict(report.to_json(), kind=data["kind"], chain=chain.name))
    return EXIT_OK if report.ok else EXIT_REFUTED


def cmd_semigroup(args):
    if args.enumerate is not None:
        tables = associative_tables(args.enumerate)
        reports = [verify_kernel(validate(t)) for t in tables]
        bad = [i for i, r in enumerate(reports) if not r.ok]
        emit(args, {"schema": "rl-sgp-1", "order": args.enumerate, "associative_tables": len(tables),
                    "failures": bad})
        return EXIT_OK if not bad else EXIT_REFUTED
    if args.catalog:
        catalog = order_four_catalog()
        out, bad = {}, []
        for name, s in sorted(catalog.items()):
            rep = verify_kernel(s)
            out[name] = dict(ideal_structure(s).to_json(s), checks=rep.checks)
            if not rep.ok:
                bad.append(name)
        emit(args, {"schema": "rl-sgp-1", "catalog": out, "failures": bad})
        return EXIT_OK if not bad else EXIT_REFUTED
    if not args.table:
        raise InputError("give --table, --catalog or --enumerate")
    s = validate(load_table(args.table))
    rep = verify_kernel(s)
    emit(args, dict(ideal_structure(s).to_json(s), order=s.order, checks=rep.checks, ok=rep.ok))
    return EXIT_OK if rep.ok else EXIT_REFUTED


def parse_point(text, ambient, horizon):
    """ones | ind:<set> | rle:<path> | n0:<depth>:<chain>"""
    if text == "ones":
        return all_ones(ambient)
    kind, _, rest = text.partition(":")
    if kind == "ind":
        return indicator(parse_set(rest, ambient))
    if kind == "rle":
        with open(rest) as fh:
            return from_rle(json.load(fh), ambient)
    if kind == "n0":
        if ambient is not N0:
            raise InputError("n0: points live over N0")
        depth, _, chain_text = rest.partition(":")
        if not depth.isdigit():
            raise InputError(f"expected n0:<depth>:<chain>, got {text!r}")
        point, _ = build_n0(parse_chain(chain_text, N0), int(depth), horizon)
        return point
    raise InputError(f"unknown point descriptor {text!r}")


def product_experiment(x, y, horizon, levels):
    """Joint returns of (x, y) to the cylinders of their own patterns on ball(r)."""
    a = x.ambient
    e = a.identity
    grid = []
    for r in range(levels + 1):
        cx = pattern_cylinder(x, a.ball(r))
        cy = pattern_cylinder(y, a.ball(r))
        joint = joint_return(x, y, cx, cy, horizon)
        grid.append({"level": r, "size": len(joint),
                     "sample": [a.format(g) for g in a.sorted(joint)[:SAMPLE]]})
    one = Cylinder(a, ((e, 1),))
    y_returns = return_set(y, one, horizon)
    base = joint_return(x, y, one, one, horizon)
    if base == {e}:
        outcome = "refuted-at-horizon"
    elif all(row["size"] > 1 for row in grid):
        outcome = "witnessed"
    else:
        outcome = "inconclusive"
    return {
        "label": PRODUCT_LABEL,
        "outcome": outcome,
        "horizon": horizon,
        "joint_size": len(base),
        "joint_sample": [a.format(g) for g in a.sorted(base)[:SAMPLE]],
        "joint_is_identity": base == {e},
        "joint_equals_y_returns": base == y_returns,
        "y_returns_size": len(y_returns),
        "grid": grid,
    }


def cmd_experiment_product(args):
    a = _ambient(args)
    x = parse_point(args.x, a, args.horizon)
    y = parse_point(args.y, a, args.horizon)
    report = product_experiment(x, y, args.horizon, args.levels)
    report.update({"x": x.describe(), "y": y.describe(), "ambient": a.kind})
    emit(args, report)
    return {"witnessed": EXIT_OK, "refuted-at-horizon": EXIT_REFUTED}.get(report["outcome"], EXIT_HORIZON)


# argument parsing


def _positive(text):
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="recurlab", description="Return-time sets, recurrence builders and finite semigroups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, ambient="Z", horizon=1000):
        sp.add_argument("--ambient", choices=sorted(AMBIENTS), default=ambient)
        sp.add_argument("--horizon", type=_positive, default=horizon)
        sp.add_argument("--seed", type=int, default=0, help="recorded in every artifact")
        sp.add_argument("--out", help="also write the JSON result here")

    sp = sub.add_parser("classify", help="thick / syndetic / pws / infinite verdict for a set")
    common(sp)
    sp.add_argument("--set", required=True)
    sp.add_argument("--prop", required=True, choices=["thick", "syndetic", "pws", "infinite"])
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("density", help="upper density along boxes or a Banach window")
    common(sp)
    sp.add_argument("--set", required=True)
    sp.add_argument("--folner", choices=["boxes", "banach"], default="boxes")
    sp.add_argument("--n", type=_positive, default=1000, help="largest box or window length")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("construct-n0", help="build a point over N0 from a chain")
    common(sp, ambient="N0", horizon=10000)
    sp.add_argument("--chain", required=True)
    sp.add_argument("--depth", type=_nonnegative, default=3)
    sp.add_argument("--trace", help="trace JSON output")
    sp.add_argument("--point", help="run-length point JSON output")
    sp.set_defaults(func=cmd_construct_n0)

    sp = sub.add_parser("construct-g", help="build a point over a group from a chain")
    common(sp)
    sp.add_argument("--chain", required=True)
    sp.add_argument("--depth", type=_nonnegative, default=2)
    sp.add_argument("--ball", type=_positive, default=100, help="translator search radius")
    sp.add_argument("--trace")
    sp.add_argument("--point")
    sp.set_defaults(func=cmd_construct_g)

    sp = sub.add_parser("check-trace", help="re-validate a trace file")
    sp.add_argument("trace")
    sp.add_argument("--chain", help="override the chain recorded in the trace")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_check_trace)

    sp = sub.add_parser("semigroup", help="ideal structure of a finite semigroup")
    sp.add_argument("--table", help="CSV multiplication table")
    sp.add_argument("--catalog", action="store_true", help="run the built-in order-4 catalog")
    sp.add_argument("--enumerate", type=_positive, help="check every associative table of this order")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_semigroup)

    sp = sub.add_parser("experiment-product", help="joint returns of two points")
    common(sp, ambient="N0", horizon=10000)
    sp.add_argument("--x", required=True, help="ones | ind:<set> | rle:<path> | n0:<depth>:<chain>")
    sp.add_argument("--y", required=True)
    sp.add_argument("--levels", type=_nonnegative, default=2, help="cylinder grid depth")
    sp.set_defaults(func=cmd_experiment_product)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InputError, PreconditionError, UnsupportedOperation, WordCapError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HorizonError, StageFailure) as exc:
        print(f"horizon exhausted: {exc}", file=sys.stderr)
        details = getattr(exc, "details", None)
        if details:
            print(json.dumps(details, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_HORIZON


if __name__ == "__main__":
    sys.exit(main())
