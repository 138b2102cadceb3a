"""Command-line front end.

Subcommands::

    pslet solve        --potential "-1/(r+10)" --state 4s [--oracle]
    pslet reproduce    1|2
    pslet diverge-demo
    pslet oracle       --potential "-1/r" --state 3s

Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal

from .errors import NumericError, PotentialSyntaxError
from .leading import QuantumState
from .oracle import GridConfig, oracle_eigenvalue
from .potential import parse_potential, truncated_coulomb_text
from .report import RunRecord, format_fixed, run_state
from .resummation import round_sig

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

TABLE1_ALPHA = 10
TABLE1_STATES = ("4s", "6s", "7s", "9s", "11s")
TABLE2_ALPHA = 10
TABLE2_NR = 10
# column -> decimals printed for -E_M
TABLE2_COLUMNS = {1: 5, 3: 6, 5: 7, 15: 8}
TABLE2_ROWS = tuple(range(9)) + (20,)
DIVERGE_ALPHA = "0.1"


class UsageError(Exception):
    pass


def _potential_text(args) -> str:
    if args.potential is not None and args.alpha is not None:
        raise UsageError("give either --potential or --alpha, not both")
    if args.alpha is not None:
        return truncated_coulomb_text(args.alpha)
    if args.potential is None:
        raise UsageError("one of --potential or --alpha is required")
    return args.potential


def _state(args) -> QuantumState:
    if args.state is not None:
        if args.ell is not None or args.nr is not None:
            raise UsageError("give either --state or --ell/--nr")
        try:
            return QuantumState.from_label(args.state)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if args.ell is None or args.nr is None:
        raise UsageError("a state is required: --state LABEL or --ell N --nr N")
    return QuantumState(args.ell, args.nr)


def _grid(args) -> GridConfig | None:
    if args.r_max is None and args.points is None:
        return None
    if args.r_max is None or args.points is None:
        raise UsageError("--r-max and --points go together")
    return GridConfig(args.r_max, args.points)


def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def _write_record(record: RunRecord, fmt: str, out) -> None:
    if fmt == "json":
        _emit(record.to_json(), out)
    elif fmt == "csv":
        _emit(record.to_csv(), out)
    else:
        _emit(record.to_markdown(), out)


# --------------------------------------------------------------------------- commands

def cmd_solve(args, out) -> RunRecord:
    potential = _potential_text(args)
    parse_potential(potential)
    record = run_state(potential, _state(args), args.order, args.prec_bits, args.digits,
                       oracle=args.oracle, grid=_grid(args))
    _write_record(record, args.format, out)
    return record


def cmd_oracle(args, out):
    potential = _potential_text(args)
    pot = parse_potential(potential)
    state = _state(args)
    res = oracle_eigenvalue(pot, state, _grid(args))
    payload = {"potential": potential, "ell": state.ell, "nr": state.nr, "energy": repr(res.energy),
               "nodes": res.nodes, "richardson_error": repr(res.richardson_error),
               "r_max": repr(res.grid.r_max), "points": res.grid.points}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2), out)
    elif args.format == "csv":
        _emit(",".join(payload) + "\n" + ",".join(str(v) for v in payload.values()), out)
    else:
        _emit(f"E = {res.energy!r}  (nodes {res.nodes}, Richardson error {res.richardson_error:.2e}, "
              f"r_max {res.grid.r_max:.6g}, {res.grid.points} intervals)", out)
    return res


def _table_job(job):
    potential, state, order, prec_bits, digits = job
    return run_state(potential, state, order, prec_bits, digits)


def _run_jobs(jobs, n_workers):
    if n_workers <= 1 or len(jobs) <= 1:
        return [_table_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_table_job, jobs))


def table1_records(order=20, prec_bits=192, digits=5, workers=1) -> dict[str, RunRecord]:
    pot = truncated_coulomb_text(TABLE1_ALPHA)
    jobs = [(pot, QuantumState.from_label(s), order, prec_bits, digits) for s in TABLE1_STATES]
    return dict(zip(TABLE1_STATES, _run_jobs(jobs, workers)))


def table2_records(order=20, prec_bits=192, digits=5, workers=1) -> dict[int, RunRecord]:
    pot = truncated_coulomb_text(TABLE2_ALPHA)
    jobs = [(pot, QuantumState(ell, TABLE2_NR), order, prec_bits, digits) for ell in TABLE2_COLUMNS]
    return dict(zip(TABLE2_COLUMNS, _run_jobs(jobs, workers)))


def table1_rows(records: dict[str, RunRecord], digits: int = 5) -> list[dict]:
    rows = []
    for label, rec in records.items():
        stab = rec.series_stab["index"]
        ps = rec.pade["stab"]
        best = rec.pade["best"]
        rows.append({
            "state": label,
            "E20": format_fixed(rec.partials[-1], 6),
            "series_stab": f"E{stab}" if stab is not None else "-",
            "pade": str(round_sig(Decimal(best), digits)) if best is not None else "-",
            "pade_stab": f"E[{ps['n']},{ps['m']}]" if ps else "-",
        })
    return rows


def table2_rows(records: dict[int, RunRecord]) -> list[dict]:
    rows = []
    for k in TABLE2_ROWS:
        row = {"M": k}
        for ell, places in TABLE2_COLUMNS.items():
            partials = records[ell].partials
            row[ell] = format_fixed(str(-Decimal(partials[k])), places) if k < len(partials) else "-"
        rows.append(row)
    return rows


def _markdown(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def cmd_reproduce(args, out):
    workers = args.jobs if args.jobs else min(5, os.cpu_count() or 1)
    if args.table == 1:
        records = table1_records(args.order, args.prec_bits, args.digits, workers)
        rows = table1_rows(records, args.digits)
        header = ["State", f"E{args.order}", "stability starts from", "Padé", "stability starts from"]
        cells = [[r["state"], r["E20"], r["series_stab"], r["pade"], r["pade_stab"]] for r in rows]
    else:
        records = table2_records(args.order, args.prec_bits, args.digits, workers)
        rows = table2_rows(records)
        header = ["-E_M"] + [f"l = {ell}" for ell in TABLE2_COLUMNS]
        cells = [[f"-E{r['M']}"] + [r[ell] for ell in TABLE2_COLUMNS] for r in rows]
    if args.format == "json":
        payload = {"table": args.table, "rows": rows,
                   "records": {str(k): v.to_dict() for k, v in records.items()}}
        _emit(json.dumps(payload, indent=2), out)
    elif args.format == "csv":
        _emit("\n".join(",".join(str(c) for c in row) for row in [header] + cells), out)
    else:
        _emit(_markdown(header, cells), out)
    return rows


def cmd_diverge_demo(args, out) -> RunRecord:
    potential = truncated_coulomb_text(DIVERGE_ALPHA)
    record = run_state(potential, QuantumState(0, 0), args.order, args.prec_bits, args.digits, oracle=True)
    if args.format == "md":
        d = record.diagnostics
        summary = [
            f"V(r) = {potential}, l = nr = 0, {args.order} orders",
            f"diverging: {d['diverging']}",
            f"optimal truncation: k = {d['opt_trunc']} (|c_k| = {d['min_step']}), "
            f"E_k = {record.partials[d['opt_trunc']]}",
            f"oracle: {record.oracle['energy']} (Richardson error {record.oracle['richardson_error']})",
            f"best Padé: {record.pade['best']} (deviation {d.get('pade_deviation')})",
            "",
        ]
        _emit("\n".join(summary) + record.to_markdown(), out)
    else:
        _write_record(record, args.format, out)
    return record


# --------------------------------------------------------------------------- parser

def _add_common(p, order_default=20):
    p.add_argument("--order", type=int, default=order_default, help="number of series terms M (default 20)")
    p.add_argument("--prec-bits", type=int, default=192, help="mantissa bits (default 192)")
    p.add_argument("--digits", type=int, default=5, help="significant digits for stabilisation (default 5)")
    p.add_argument("--format", choices=("json", "csv", "md"), default="md")


def _add_state(p):
    g = p.add_argument_group("potential and state")
    g.add_argument("--potential", help='potential in r, e.g. "-1/(r+10)"')
    g.add_argument("--alpha", help="shorthand for -1/(r+alpha)")
    g.add_argument("--state", help='spectroscopic label such as "4s"')
    g.add_argument("--ell", type=int)
    g.add_argument("--nr", type=int)


def _add_grid(p):
    p.add_argument("--r-max", type=float, help="oracle grid extent (default: automatic)")
    p.add_argument("--points", type=int, help="oracle grid intervals (default: automatic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pslet", description="Shifted-l expansion energies with Padé resummation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="series, Padé staircase and diagnostics for one state")
    _add_state(p)
    _add_common(p)
    _add_grid(p)
    p.add_argument("--oracle", action="store_true", help="attach the finite-difference cross-check")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reproduce", help="rebuild one of the two truncated-Coulomb tables")
    p.add_argument("table", type=int, choices=(1, 2))
    _add_common(p)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: one per state, capped by CPUs)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("diverge-demo", help="alpha = 0.1, l = nr = 0: divergent series vs. oracle")
    _add_common(p)
    p.set_defaults(func=cmd_diverge_demo)

    p = sub.add_parser("oracle", help="direct eigensolver only")
    _add_state(p)
    _add_grid(p)
    p.add_argument("--format", choices=("json", "csv", "md"), default="md")
    p.set_defaults(func=cmd_oracle)
    return parser


_VALUE_FLAGS = ("--potential", "--alpha")


def _glue_values(argv: list[str]) -> list[str]:
    """Turn ``--potential -1/r`` into ``--potential=-1/r`` so argparse keeps leading minus signs."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(argv[i])
    return out


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if hasattr(args, "prec_bits") and args.prec_bits < 53:
            raise UsageError("--prec-bits must be >= 53")
        if hasattr(args, "order") and args.order < 3:
            raise UsageError("--order must be >= 3")
        args.func(args, out)
    except (UsageError, PotentialSyntaxError) as exc:
        print(f"pslet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"pslet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"pslet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
