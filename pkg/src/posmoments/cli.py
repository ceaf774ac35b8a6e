"""Command-line front end: ``posmoments evaluate|scan|generate``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bipartite
from .criteria import DEFAULT_TOL, CriterionReport, parse_criteria, evaluate_all
from .errors import ConvergenceError, DomainError, PosMomentsError, ValidationError
from .maps import PositiveMapSpec, builtin, superop_from_file
from .scan import rows_to_csv, scan_family

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

BUILTIN_MAPS = ("transpose", "gamma", "reduction")
GENERATE_KINDS = ("paper-ppt", "werner", "bell", "max-mixed", "random-separable")


def _resolve_map(token: str, dimB: int) -> PositiveMapSpec:
    if token.lower() in BUILTIN_MAPS:
        return builtin(token, dimB)
    path = Path(token)
    if not path.exists():
        raise ValidationError(f"map '{token}' is neither a builtin ({', '.join(BUILTIN_MAPS)}) nor an existing file")
    m = superop_from_file(path)
    if m.dimB != dimB:
        raise ValidationError(f"{path}: map acts on dimB = {m.dimB} but the state has dimB = {dimB}")
    return m


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValidationError(f"--range must look like lo:hi, got '{text}'") from None
    return lo, hi


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"--dims must look like dA,dB, got '{text}'") from None
    return a, b


def format_table(report: CriterionReport) -> str:
    width = max([len(v.criterion) for v in report.verdicts] + [9])
    lines = [f"state: {report.state}", f"maps:  {', '.join(report.maps)}", ""]
    lines.append(f"{'criterion':<{width}}  {'decision':<12}  {'witness':>23}  {'margin':>10}")
    for v in report.verdicts:
        lines.append(f"{v.criterion:<{width}}  {v.decision.value:<12}  {v.witness:>23.15e}  {v.margin:>10.3e}")
        if v.detail.startswith(("error", "numerical-domain")):
            lines.append(f"{'':<{width}}  -> {v.detail}")
    flagged = sorted(report.entangled_by())
    lines.append("")
    lines.append("entangled by: " + (", ".join(flagged) if flagged else "none (inconclusive)"))
    return "\n".join(lines)


def report_csv(report: CriterionReport) -> str:
    out = ["criterion,decision,witness,margin,tol"]
    for v in report.verdicts:
        out.append(f"{v.criterion},{v.decision.value},{v.witness:.17g},{v.margin:.17g},{v.tol:.17g}")
    return "\n".join(out) + "\n"


def cmd_evaluate(args) -> int:
    state = bipartite.load_state(args.state)
    maps = [_resolve_map(tok, state.dimB) for tok in (args.map or ["transpose"])]
    which = parse_criteria(args.criteria)
    report = evaluate_all(state, maps, which, args.tol, label=str(args.state))
    rendered = {"table": format_table, "json": CriterionReport.to_json, "csv": report_csv}[args.format](report)
    if args.out:
        Path(args.out).write_text(rendered if rendered.endswith("\n") else rendered + "\n")
        print(format_table(report))
    else:
        print(rendered)
    for m in maps:
        if not m.is_builtin:
            print(f"note: map '{m.label}' is user supplied; its positivity was not verified, "
                  "so its verdicts are only as sound as that assumption")
    return EXIT_OK


def cmd_scan(args) -> int:
    lo, hi = _parse_range(args.range)
    maps = [_resolve_map(tok, 3) for tok in (args.map or ["gamma"])]
    which = parse_criteria(args.criteria)
    rows, results = scan_family(args.family, lo, hi, args.step, which, maps, args.tol)
    csv_text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv_text)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in results], indent=2))
    elif args.format == "csv" and not args.out:
        sys.stdout.write(csv_text)
    else:
        width = max(len(r.criterion) for r in results)
        print(f"family {args.family}, a in [{lo}, {hi}] step {args.step}")
        print(f"{'criterion':<{width}}  threshold (fires for a below)")
        for r in results:
            print(f"{r.criterion:<{width}}  {r.summary()}")
    return EXIT_OK


def _generate_state(args) -> bipartite.BipartiteState:
    kind = args.kind
    if kind == "paper-ppt":
        return bipartite.paper_ppt_family(args.a)
    if kind == "werner":
        return bipartite.werner_state(args.p)
    if kind == "bell":
        return bipartite.bell_state()
    dA, dB = _parse_dims(args.dims)
    if kind == "max-mixed":
        return bipartite.maximally_mixed(dA, dB)
    return bipartite.random_separable(dA, dB, args.terms, args.seed)


def cmd_generate(args) -> int:
    text = bipartite.dumps_state(_generate_state(args))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posmoments",
        description="Entanglement certification from moments of positive maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="run the criterion battery on a state file")
    ev.add_argument("--state", required=True, help="state file (JSON)")
    ev.add_argument("--map", action="append", help="builtin map (transpose|gamma|reduction) or map file; repeatable")
    ev.add_argument("--criteria", default="all", help="comma list of L1..L6,CCNR,T1,PPT or 'all'")
    ev.add_argument("--out", help="write the report here")
    ev.add_argument("--format", choices=("table", "json", "csv"), default="table")
    ev.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ev.set_defaults(func=cmd_evaluate)

    sc = sub.add_parser("scan", help="bisect detection thresholds along a state family")
    sc.add_argument("--family", default="paper-ppt")
    sc.add_argument("--range", default="0.5:1.5", help="lo:hi")
    sc.add_argument("--step", type=float, default=0.01)
    sc.add_argument("--criteria", default="all")
    sc.add_argument("--map", action="append", help="map for map-dependent criteria (default gamma); repeatable")
    sc.add_argument("--out", help="CSV file for the grid values")
    sc.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sc.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sc.set_defaults(func=cmd_scan)

    gen = sub.add_parser("generate", help="write an example state file")
    gen.add_argument("kind", choices=GENERATE_KINDS)
    gen.add_argument("--a", type=float, default=1.0, help="paper-ppt parameter (>= 1/2)")
    gen.add_argument("--p", type=float, default=0.5, help="Werner weight")
    gen.add_argument("--dims", default="2,2", help="dA,dB for max-mixed and random-separable")
    gen.add_argument("--terms", type=int, default=4)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PosMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
