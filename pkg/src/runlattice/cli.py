"""Command-line front end.

Subcommands: enumerate, hasse, check, decompose, eval, reconstruct, table.
Exit codes: 0 success, 1 property failure, 2 usage error, 3 scale or
structure error (universe over the cap, or a pair without meet/join).
Warnings go to stderr so piped DOT/CSV/JSON stays clean.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .domain import (
    DEFAULT_UNIVERSE_CAP,
    Mode,
    enumerate_universe,
    make_run,
    make_scale,
    parse_run_literal,
)
from .errors import (
    BottomHasNoDecomposition,
    NotALattice,
    NotAValuation,
    NotDistributive,
    RunLatticeError,
    UniverseTooLarge,
)
from .lattice import (
    build_lattice,
    check_distributive,
    decompose,
    export_hasse,
    lattice_json,
)
from .metrics import MetricKind, MetricSpec, check_valuation, eval_metric, \
    extend_custom, lattice_values, metric_table, reconstruct
from .orderings import OrderingKind, is_total, verify_poset_axioms

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_USAGE = 2
EXIT_STRUCTURE = 3

HARD_CAP = 1_000_000


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _add_shared(parser, *, mode=False, ordering=False, metric=False, run=False):
    parser.add_argument("--c", type=int, required=True, help="highest degree index")
    parser.add_argument("--n", type=int, required=True, help="run length")
    parser.add_argument("--cap", type=int, default=DEFAULT_UNIVERSE_CAP,
                        help="universe element cap (hard limit 1000000)")
    if mode:
        parser.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    if ordering:
        parser.add_argument("--ordering", choices=[k.value for k in OrderingKind],
                            required=True)
    if metric:
        parser.add_argument("--metric", choices=[k.value for k in MetricKind],
                            required=True)
        parser.add_argument("--rb", type=float, default=None, help="recall base (gr)")
        parser.add_argument("--p", type=float, default=None, help="persistence (grbp)")
        parser.add_argument("--b", type=float, default=None, help="log base (dcg)")
        parser.add_argument("--custom", default=None, metavar="FILE",
                            help="JSON file of {run literal: value, '_bottom': value}")
    if run:
        parser.add_argument("run", help="run literal, e.g. 2,1,0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="runlattice",
        description="Lattices of judged retrieval runs: enumeration, structure "
                    "checks, Hasse export, and metric evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list every run of a universe")
    _add_shared(p, mode=True)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("hasse", help="export the Hasse diagram")
    _add_shared(p, ordering=True)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--highlight-irreducibles", action="store_true")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("check", help="verify a structural property")
    p.add_argument("what", choices=["poset", "total", "distributive", "valuation"])
    _add_shared(p, ordering=True, metric=False)
    p.add_argument("--metric", choices=[k.value for k in MetricKind], default=None)
    p.add_argument("--rb", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--custom", default=None, metavar="FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="irredundant join decomposition of a run")
    _add_shared(p, ordering=True, run=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("eval", help="evaluate a metric on one run")
    _add_shared(p, metric=True, run=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    p.add_argument("--ordering", choices=[k.value for k in OrderingKind], default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reconstruct",
                       help="recompute a metric value from join-irreducibles only")
    _add_shared(p, ordering=True, metric=True, run=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("table", help="metric values for every run")
    _add_shared(p, metric=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    p.add_argument("--ordering", choices=[k.value for k in OrderingKind], default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_table)

    return parser


class _Usage(Exception):
    pass


def _cap(args) -> int:
    if args.cap > HARD_CAP:
        raise _Usage(f"--cap {args.cap} exceeds the hard limit {HARD_CAP}")
    return args.cap


def _universe(args, mode: Mode):
    scale = make_scale(args.c)
    return scale, enumerate_universe(scale, args.n, mode, cap=_cap(args))


def _lattice(args):
    kind = OrderingKind(args.ordering)
    scale, universe = _universe(args, kind.mode)
    return kind, scale, build_lattice(universe, kind)


def _metric_spec(args, lattice=None) -> MetricSpec:
    kind = MetricKind(args.metric)
    if kind is MetricKind.GP:
        return MetricSpec.gp()
    if kind is MetricKind.GR:
        return MetricSpec.gr(args.rb)
    if kind is MetricKind.GRBP:
        if args.p is None:
            raise _Usage("grbp needs --p")
        return MetricSpec.grbp(args.p)
    if kind is MetricKind.DCG:
        if args.b is None:
            raise _Usage("dcg needs --b")
        return MetricSpec.dcg(args.b)
    if args.custom is None:
        raise _Usage("custom metrics need --custom FILE")
    if lattice is None:
        raise _Usage("custom metrics need --ordering (they live on a lattice)")
    with open(args.custom, encoding="utf-8") as handle:
        raw = json.load(handle)
    if "_bottom" not in raw:
        raise _Usage('custom metric file needs a "_bottom" entry')
    values = {}
    for literal, value in raw.items():
        if literal == "_bottom":
            continue
        run = make_run(lattice.kind.mode, parse_run_literal(literal),
                       lattice.universe.scale)
        values[lattice.index_of(run)] = float(value)
    return MetricSpec.custom(values, float(raw["_bottom"]))


def _parse_run(args, mode: Mode, scale):
    degrees = parse_run_literal(args.run)
    if len(degrees) != args.n:
        raise _Usage(f"run literal has {len(degrees)} degrees but --n is {args.n}")
    return make_run(mode, degrees, scale)


def cmd_enumerate(args) -> int:
    mode = Mode(args.mode)
    _, universe = _universe(args, mode)
    literals = [run.literal() for run in universe.elements]
    if args.format == "json":
        print(json.dumps({"mode": mode.value, "c": args.c, "n": args.n,
                          "count": universe.size, "runs": literals}, indent=2))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["run"])
        writer.writerows([lit] for lit in literals)
    else:
        print(f"# mode={mode.value} c={args.c} n={args.n} count={universe.size}")
        for lit in literals:
            print(lit)
    return EXIT_OK


def cmd_hasse(args) -> int:
    _, _, lattice = _lattice(args)
    report = check_distributive(lattice)
    if not report.distributive:
        x, y, z = (lattice.run(i).literal() for i in report.witness)
        print(f"warning: lattice is not distributive "
              f"(law fails at x={x}, y={y}, z={z})", file=sys.stderr)
    if args.format == "json":
        print(json.dumps(lattice_json(lattice), indent=2))
    else:
        sys.stdout.write(export_hasse(lattice, args.highlight_irreducibles))
    return EXIT_OK


def cmd_check(args) -> int:
    kind = OrderingKind(args.ordering)
    header = f"check {args.what} ordering={kind.value} c={args.c} n={args.n}"

    if args.what == "poset":
        _, universe = _universe(args, kind.mode)
        report = verify_poset_axioms(kind, universe)
        if report.passed:
            print(f"{header}: PASS")
            return EXIT_OK
        failed = ("reflexivity" if not report.reflexive
                  else "antisymmetry" if not report.antisymmetric else "transitivity")
        names = ", ".join(run.literal() for run in report.witness)
        print(f"{header}: FAIL ({failed} violated by {names})")
        return EXIT_PROPERTY

    if args.what == "total":
        _, universe = _universe(args, kind.mode)
        total, witness = is_total(kind, universe)
        if total:
            print(f"{header}: PASS")
            return EXIT_OK
        r, s = witness
        print(f"{header}: FAIL (incomparable pair {r.literal()} / {s.literal()})")
        return EXIT_PROPERTY

    _, _, lattice = _lattice(args)
    if args.what == "distributive":
        report = check_distributive(lattice)
        if report.distributive:
            print(f"{header}: PASS")
            return EXIT_OK
        x, y, z = (lattice.run(i).literal() for i in report.witness)
        five = ", ".join(lattice.run(i).literal() for i in report.sublattice_witness)
        print(f"{header}: FAIL")
        print(f"law fails at x={x}, y={y}, z={z}")
        print(f"sublattice witness ({report.sublattice_shape}): {five}")
        return EXIT_PROPERTY

    if args.metric is None:
        raise _Usage("check valuation needs --metric")
    spec = _metric_spec(args, lattice)
    report = check_valuation(spec, lattice)
    if report.is_valuation:
        print(f"{header} metric={spec.label()}: PASS (max error {report.max_error:.3g})")
        return EXIT_OK
    x, y = report.counterexample
    vx, vy, vj, vm = report.values
    print(f"{header} metric={spec.label()}: FAIL")
    print(f"counterexample x={lattice.run(x).literal()} y={lattice.run(y).literal()}: "
          f"v(x)={_fmt(vx)} v(y)={_fmt(vy)} v(join)={_fmt(vj)} v(meet)={_fmt(vm)}")
    return EXIT_PROPERTY


def cmd_decompose(args) -> int:
    kind, scale, lattice = _lattice(args)
    run = _parse_run(args, kind.mode, scale)
    result = decompose(lattice, run)
    print(" ∨ ".join(lattice.run(i).literal() for i in result.parts))
    return EXIT_OK


def _eval_context(args):
    """Scale, run, and optional lattice for eval/table commands."""
    if args.ordering is not None:
        kind, scale, lattice = _lattice(args)
        return scale, kind.mode, lattice
    if args.mode is None:
        raise _Usage("need --mode (or --ordering for lattice-backed metrics)")
    mode = Mode(args.mode)
    if MetricKind(args.metric) is MetricKind.CUSTOM:
        raise _Usage("custom metrics need --ordering (they live on a lattice)")
    return make_scale(args.c), mode, None


def cmd_eval(args) -> int:
    scale, mode, lattice = _eval_context(args)
    run = _parse_run(args, mode, scale)
    spec = _metric_spec(args, lattice)
    if spec.kind is MetricKind.CUSTOM:
        values = lattice_values(spec, lattice)
        print(_fmt(float(values[lattice.index_of(run)])))
    else:
        print(_fmt(eval_metric(spec, run, scale)))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    kind, scale, lattice = _lattice(args)
    run = _parse_run(args, kind.mode, scale)
    spec = _metric_spec(args, lattice)
    value = reconstruct(spec, lattice, run)
    if spec.kind is MetricKind.CUSTOM:
        direct = float(lattice_values(spec, lattice)[lattice.index_of(run)])
    else:
        direct = eval_metric(spec, run, scale)
    print(_fmt(value))
    print(f"difference vs direct: {abs(value - direct):.3g}")
    return EXIT_OK


def cmd_table(args) -> int:
    scale, mode, lattice = _eval_context(args)
    spec = _metric_spec(args, lattice)
    if lattice is not None:
        rows = metric_table(spec, lattice)
    else:
        universe = enumerate_universe(scale, args.n, mode, cap=_cap(args))
        rows = tuple((run, eval_metric(spec, run, scale))
                     for run in universe.elements)
    if args.format == "json":
        print(json.dumps({"metric": spec.label(), "c": args.c, "n": args.n,
                          "rows": [[run.literal(), value] for run, value in rows]},
                         indent=2))
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(["run", "value"])
        writer.writerows([run.literal(), _fmt(value)] for run, value in rows)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UniverseTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except NotALattice as exc:
        print(f"error: not a lattice: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except (NotDistributive, BottomHasNoDecomposition, NotAValuation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (_Usage, RunLatticeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
