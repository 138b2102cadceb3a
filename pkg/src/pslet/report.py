"""Run records: one solved state with its resummation, diagnostics and optional oracle.

Reals are carried as decimal strings so a record survives a JSON round trip
unchanged and never depends on the working precision it was produced at.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .leading import QuantumState
from .numeric import Precision
from .oracle import GridConfig, oracle_eigenvalue
from .potential import parse_potential
from .resummation import pade_staircase, stabilization
from .series import energy_series, optimal_truncation

__all__ = ["RunRecord", "run_state", "decimal_text", "format_fixed"]

SIG_DIGITS = 30


def decimal_text(x, digits: int = SIG_DIGITS) -> str:
    """Scientific-notation decimal string with ``digits`` significant digits."""
    if hasattr(x, "context"):
        return x.context.nstr(x, digits, min_fixed=1, max_fixed=0, strip_zeros=False)
    return repr(float(x))


def format_fixed(text: str, places: int) -> str:
    """Round a decimal string half-up to ``places`` decimals."""
    q = Decimal(1).scaleb(-places)
    return str(Decimal(text).quantize(q, rounding=ROUND_HALF_UP))


@dataclass
class RunRecord:
    input: dict
    leading: dict
    partials: list
    pade: dict
    series_stab: dict
    diagnostics: dict
    oracle: dict | None = None
    timings_ms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["oracle"] is None:
            del d["oracle"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(
            input=d["input"],
            leading=d["leading"],
            partials=list(d["partials"]),
            pade=d["pade"],
            series_stab=d["series_stab"],
            diagnostics=d["diagnostics"],
            oracle=d.get("oracle"),
            timings_ms=d.get("timings_ms", {}),
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "index", "n", "m", "value"])
        for k, v in enumerate(self.partials):
            w.writerow(["partial", k, "", "", v])
        for e in self.pade["entries"]:
            w.writerow(["pade", "", e["n"], e["m"], e["value"]])
        if self.pade["best"] is not None:
            w.writerow(["pade_best", "", "", "", self.pade["best"]])
        if self.oracle is not None:
            w.writerow(["oracle", "", "", "", self.oracle["energy"]])
        return buf.getvalue()

    def to_markdown(self) -> str:
        inp = self.input
        lead = self.leading
        lines = [
            f"### V(r) = {inp['potential']}, l = {inp['ell']}, nr = {inp['nr']}",
            "",
            f"q0 = {lead['q0']}  ",
            f"w = {lead['w']}, beta = {lead['beta']}, lbar = {lead['ellbar']}  ",
            f"c0 = {lead['c0']}",
            "",
            "| M | E_M |",
            "|---|-----|",
        ]
        lines += [f"| {k} | {v} |" for k, v in enumerate(self.partials)]
        lines += ["", "| Padé | value |", "|------|-------|"]
        lines += [f"| E[{e['n']},{e['m']}] | {e['value']} |" for e in self.pade["entries"]]
        stab = self.series_stab
        lines.append("")
        lines.append(f"series stable from E_{stab['index']} ({stab['digits']} digits)"
                     if stab["index"] is not None else "series not stabilised")
        ps = self.pade["stab"]
        lines.append(f"Padé stable from E[{ps['n']},{ps['m']}]" if ps else "Padé not stabilised")
        diag = self.diagnostics
        lines.append(f"optimal truncation at k = {diag['opt_trunc']}, diverging = {diag['diverging']}")
        if self.oracle is not None:
            o = self.oracle
            lines.append(f"oracle E = {o['energy']} (nodes {o['nodes']}, Richardson error {o['richardson_error']})")
        return "\n".join(lines) + "\n"


def run_state(potential: str, state: QuantumState, order: int = 20, prec_bits: int = 192,
              digits: int = 5, oracle: bool = False, grid: GridConfig | None = None) -> RunRecord:
    """Series, Padé staircase, stabilisation, diagnostics and (optionally) the oracle for one state."""
    prec = Precision(prec_bits)
    pot = parse_potential(potential)
    timings = {}

    t0 = time.perf_counter()
    series = energy_series(pot, state, order, prec)
    timings["series"] = round(1e3 * (time.perf_counter() - t0), 3)

    t0 = time.perf_counter()
    stair = pade_staircase(series, digits)
    timings["pade"] = round(1e3 * (time.perf_counter() - t0), 3)

    sstab = stabilization(series.partials, digits)
    trunc = optimal_truncation(series)
    lead = series.leading
    pstab = stair.stab
    record = RunRecord(
        input={"potential": potential, "ell": state.ell, "nr": state.nr, "order": order, "prec_bits": prec_bits},
        leading={k: decimal_text(getattr(lead, k)) for k in ("q0", "w", "beta", "ellbar", "c0")},
        partials=[decimal_text(x) for x in series.partials],
        pade={
            "entries": [{"n": e.n, "m": e.m, "value": decimal_text(e.value)} for e in stair.entries],
            "best": decimal_text(stair.best) if stair.entries else None,
            "stab": ({"n": pstab.index[0], "m": pstab.index[1], "digits": digits, "value": pstab.converged_value}
                     if pstab is not None and pstab.index is not None else None),
        },
        series_stab={"index": sstab.index, "digits": digits, "value": sstab.converged_value},
        diagnostics={"diverging": trunc.diverging, "opt_trunc": trunc.index,
                     "min_step": decimal_text(trunc.min_step),
                     "parity_residual": decimal_text(series.parity_residual, 5)},
        timings_ms=timings,
    )
    if oracle:
        t0 = time.perf_counter()
        res = oracle_eigenvalue(pot, state, grid)
        timings["oracle"] = round(1e3 * (time.perf_counter() - t0), 3)
        record.oracle = {"energy": repr(res.energy), "nodes": res.nodes,
                         "richardson_error": repr(res.richardson_error),
                         "r_max": repr(res.grid.r_max), "points": res.grid.points}
        if stair.entries:
            record.diagnostics["pade_deviation"] = repr(float(stair.best) - res.energy)
    return record
