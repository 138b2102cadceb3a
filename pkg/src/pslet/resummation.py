"""Padé approximants of the energy tail and stabilisation detection."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Context, Decimal

from .errors import DegeneratePade, SingularMatrix
from .numeric import Precision, _as_precision, solve_linear
from .series import EnergySeries

__all__ = [
    "pade",
    "pade_eval",
    "PadeEntry",
    "PadeStaircase",
    "StabilizationReport",
    "pade_staircase",
    "staircase_orders",
    "stabilization",
    "taylor_of_ratio",
]


def taylor_of_ratio(p: list, q: list, order: int) -> list:
    """Taylor coefficients of ``P/Q`` through ``u**order`` (``q[0]`` must be nonzero)."""
    zero = q[0] * 0
    out = []
    for k in range(order + 1):
        s = p[k] if k < len(p) else zero
        for i in range(1, min(k, len(q) - 1) + 1):
            s -= q[i] * out[k - i]
        out.append(s / q[0])
    return out


def pade(t: list, N: int, M: int, prec: Precision | int | None = None) -> tuple[list, list]:
    """[N/M] Padé approximant of the power series with coefficients ``t``.

    Returns numerator ``p`` (length ``N+1``) and denominator ``q`` (length
    ``M+1``, ``q[0] == 1``) whose ratio reproduces ``t`` through ``u**(N+M)``.

    Raises
    ------
    DegeneratePade
        The Hankel system for the denominator is singular, or the result
        fails the re-expansion check.
    """
    prec = _as_precision(prec)
    ctx = prec.ctx
    if N < 0 or M < 0:
        raise ValueError("N and M must be non-negative")
    if len(t) < N + M + 1:
        raise ValueError(f"[{N}/{M}] needs {N + M + 1} coefficients, got {len(t)}")
    t = [ctx.mpf(x) for x in t[: N + M + 1]]

    def coef(i):
        return t[i] if i >= 0 else ctx.zero

    q = [ctx.one]
    if M:
        A = [[coef(N + i - j) for j in range(1, M + 1)] for i in range(1, M + 1)]
        b = [-coef(N + i) for i in range(1, M + 1)]
        try:
            q += solve_linear(A, b, prec)
        except SingularMatrix as exc:
            if any(b):
                raise DegeneratePade(f"[{N}/{M}]: {exc}") from exc
            # homogeneous conditions: the polynomial itself is the approximant
            q += [ctx.zero] * M
    p = [sum((q[j] * coef(i - j) for j in range(min(i, M) + 1)), ctx.zero) for i in range(N + 1)]

    # backward check: Q*t - P must vanish through u^(N+M) relative to |Q|*|t|
    tol = ctx.ldexp(ctx.one, -(prec.mantissa_bits // 2))
    for k in range(N + M + 1):
        terms = [q[j] * coef(k - j) for j in range(min(k, M) + 1)]
        resid = sum(terms, ctx.zero) - (p[k] if k <= N else 0)
        scale = sum((abs(x) for x in terms), ctx.zero)
        if abs(resid) > tol * scale:
            raise DegeneratePade(f"[{N}/{M}] fails re-expansion at order {k}")
    return p, q


def pade_eval(p: list, q: list, u):
    num = sum(c * u ** i for i, c in enumerate(p))
    den = sum(c * u ** i for i, c in enumerate(q))
    if den == 0:
        raise DegeneratePade("pole at the evaluation point")
    return num / den


def staircase_orders(n_coeffs: int) -> list[tuple[int, int]]:
    """Near-diagonal orders ``[1,1], [1,2], [2,2], [2,3], ...`` that fit in ``n_coeffs``."""
    out = []
    N, M = 1, 1
    while N + M + 1 <= n_coeffs:
        out.append((N, M))
        if M == N:
            M += 1
        else:
            N += 1
    return out


@dataclass(frozen=True)
class PadeEntry:
    n: int
    m: int
    value: object

    @property
    def label(self) -> str:
        return f"E[{self.n},{self.m}]"


@dataclass
class PadeStaircase:
    """Staircase of ``c0 + P_N(u)/Q_M(u)`` at ``u = 1/lbar``."""

    tail: list
    entries: list
    skipped: list = field(default_factory=list)
    stab: "StabilizationReport | None" = None

    @property
    def stab_index(self) -> tuple[int, int] | None:
        return self.stab.index if self.stab is not None else None

    @property
    def best(self):
        return self.entries[-1].value if self.entries else None

    @property
    def best_order(self) -> tuple[int, int] | None:
        return (self.entries[-1].n, self.entries[-1].m) if self.entries else None

    def values(self) -> list:
        return [e.value for e in self.entries]


def pade_staircase(series: EnergySeries, digits: int = 5) -> PadeStaircase:
    """Resum the tail of ``series`` along the near-diagonal Padé staircase.

    Tail coefficients smaller than ``2**(-bits/2) * |c0|`` are treated as
    zero so that exactly solvable cases (Coulomb, oscillator) do not feed
    round-off into the Hankel solve. Degenerate entries are recorded in
    ``skipped`` rather than patched.
    """
    if series.order < 3:
        raise ValueError("need a series with M >= 3")
    prec = series.precision
    ctx = prec.ctx
    lead = series.leading
    cutoff = abs(lead.c0) * ctx.ldexp(ctx.one, -(prec.mantissa_bits // 2))
    tail = [x if abs(x) > cutoff else ctx.zero for x in series.tail()]
    u = 1 / lead.ellbar
    # [N/M] commutes with u -> s*u; working in s = u keeps coefficients O(|c_k|)
    scaled = [x * u ** n for n, x in enumerate(tail)]

    entries, skipped = [], []
    for N, M in staircase_orders(len(tail)):
        try:
            p, q = pade(scaled, N, M, prec)
            entries.append(PadeEntry(N, M, lead.c0 + pade_eval(p, q, ctx.one)))
        except DegeneratePade:
            skipped.append((N, M))
    stair = PadeStaircase(tail=tail, entries=entries, skipped=skipped)
    if entries:
        report = stabilization(stair.values(), digits, kind="pade")
        if report.index is not None:
            e = entries[report.index]
            report.index = (e.n, e.m)
        stair.stab = report
    return stair


@dataclass
class StabilizationReport:
    kind: str
    index: int | tuple[int, int] | None
    digits: int
    converged_value: str | None


def round_sig(x, digits: int) -> Decimal:
    """``x`` rounded half-up to ``digits`` significant decimal digits."""
    if hasattr(x, "context"):
        text = x.context.nstr(x, max(digits + 15, 30), strip_zeros=False)
    else:
        text = repr(float(x))
    return Context(prec=digits, rounding=ROUND_HALF_UP).plus(Decimal(text))


def stabilization(seq: list, digits: int = 5, kind: str = "partial_sums") -> StabilizationReport:
    """First position from which every value rounds like the final one.

    Values are compared after rounding to ``digits`` significant digits.
    ``index`` is ``None`` when even the last two values disagree.
    """
    if not seq:
        raise ValueError("empty sequence")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    rounded = [round_sig(x, digits) for x in seq]
    final = rounded[-1]
    index = len(seq) - 1
    while index > 0 and rounded[index - 1] == final:
        index -= 1
    if index == len(seq) - 1 and len(seq) > 1:
        return StabilizationReport(kind, None, digits, None)
    return StabilizationReport(kind, index, digits, str(final))
