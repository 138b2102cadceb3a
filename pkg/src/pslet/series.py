"""Energy series in inverse powers of the shifted angular momentum.

With ``q = q0 (1 + lam x)`` and ``lam = lbar**-1/2`` the radial problem becomes,
after factoring out ``lbar / q0**2``, a perturbed oscillator

    h(lam) = -1/2 d^2/dx^2 + 1/2 w^2 x^2 + sum_j lam^j v_j(x)

whose ``v_j`` are three monomials (powers ``j+2``, ``j`` and ``j-2`` of ``x``).
Its eigenvalue series ``eps(lam)`` is generated with hypervirial moment
identities plus Hellmann-Feynman, which need only ``eps_0 = (nr + 1/2) w``
and ``<x^0> = 1`` to select the state.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InsufficientJet, OrderOverflow
from .leading import LeadingOrder, QuantumState, solve_leading
from .numeric import Precision, _as_precision
from .potential import Jet, PotentialExpr, jet

__all__ = [
    "PerturbationTable",
    "EnergySeries",
    "TruncationDiagnostics",
    "assemble_perturbation",
    "hvhf_expand",
    "energy_series",
    "optimal_truncation",
]


@dataclass
class PerturbationTable:
    """Coefficients ``coeffs[k, j]`` of ``lam^j x^k`` in the perturbation.

    ``w2`` is the harmonic coefficient ``w^2 / 2``; ``delta[k]`` holds the
    dimensionless derivatives ``q0^(k+2) V^(k)(q0) / (k! lbar^2)``.
    """

    w2: object
    coeffs: dict
    j_max: int
    delta: list = field(default_factory=list)


def assemble_perturbation(jets: Jet, lead: LeadingOrder, j_max: int) -> PerturbationTable:
    """Expand centrifugal term and potential about ``q0`` through ``lam**j_max``.

    For ``j >= 1`` the table holds::

        A_j = (-1)^j (j+3)/2 + delta_{j+2}          at x^(j+2)
        B_j = (2 beta + 1)/2 (-1)^j (j+1)           at x^j
        C_j = beta (beta+1)/2 (-1)^j (j-1)          at x^(j-2), j >= 2

    Raises
    ------
    InsufficientJet
        ``jets`` stops before derivative order ``j_max + 2``.
    """
    if len(jets.derivs) < j_max + 3:
        raise InsufficientJet(f"need {j_max + 3} derivatives, got {len(jets.derivs)}")
    ctx = lead.q0.context
    q0, beta, lb2 = lead.q0, lead.beta, lead.ellbar ** 2
    delta = []
    q_pow = q0 ** 2
    fact = ctx.one
    for k, d in enumerate(jets.derivs[: j_max + 3]):
        if k:
            fact *= k
        delta.append(q_pow * d / (fact * lb2))
        q_pow *= q0

    b_factor = (2 * beta + 1) / 2
    c_factor = beta * (beta + 1) / 2
    coeffs = {}
    for j in range(1, j_max + 1):
        sign = -1 if j % 2 else 1
        coeffs[j + 2, j] = ctx.mpf(sign * (j + 3)) / 2 + delta[j + 2]
        coeffs[j, j] = b_factor * (sign * (j + 1))
        if j >= 2:
            coeffs[j - 2, j] = c_factor * (sign * (j - 1))
    return PerturbationTable(w2=lead.w ** 2 / 2, coeffs=coeffs, j_max=j_max, delta=delta)


def _moment_envelope(by_order: dict, m_max: int) -> tuple[int, int]:
    """Per-order moment bounds ``N_lim(p) = top - slope * p``.

    The recursion at order ``m`` for ``<x^n>`` reads ``<x^(n+k-2)>`` at order
    ``m-j`` for each entry ``(k, j)``; Hellmann-Feynman reads ``<x^k>`` at
    order ``m-j``. Both are satisfied by the linear envelope below.
    """
    slope, top = 1, 2
    for j, entries in by_order.items():
        for k, _ in entries:
            slope = max(slope, -(-(k - 2) // j))
    for j, entries in by_order.items():
        if j > m_max:
            continue
        for k, _ in entries:
            top = max(top, slope * (m_max - j) + k)
    return slope, top


def hvhf_expand(tab: PerturbationTable, w, nr: int, m_max: int, max_moment: int | None = None) -> list:
    """Series coefficients ``eps_0 .. eps_m_max`` of the perturbed oscillator level.

    Hellmann-Feynman gives ``m eps_m = sum_j j <v_j>^(m-j)``; the moments
    ``X_N = <x^N>`` at each order then follow from the hypervirial identity

        2N E X_{N-1} + N(N-1)(N-2)/4 X_{N-3} = sum_k (2N + k) W_k X_{N+k-1},

    solved upward for ``X_{N+1}`` starting at ``N = 0``.

    Parameters
    ----------
    tab : PerturbationTable
        Missing entries are zero.
    w : mpf
        Oscillator frequency; sets the working precision.
    nr : int
        Oscillator level (radial node count).
    m_max : int
        Highest order in ``lam``.
    max_moment : int, optional
        Largest moment index permitted, default ``3 * m_max + 4``.

    Raises
    ------
    OrderOverflow
        The dependency envelope needs moments beyond ``max_moment``.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if not w > 0:
        raise ValueError("w must be positive")
    ctx = w.context
    if max_moment is None:
        max_moment = 3 * m_max + 4

    by_order = defaultdict(list)
    for (k, j), c in tab.coeffs.items():
        if j < 1 or k < 0:
            raise ValueError(f"invalid table entry (k={k}, j={j})")
        if c != 0:
            by_order[j].append((k, c))
    slope, top = _moment_envelope(by_order, m_max)
    if top > max_moment:
        raise OrderOverflow(f"moment recursion needs <x^{top}>, bound is {max_moment}")

    w_sq = w * w
    eps = [(nr + ctx.mpf(1) / 2) * w]
    moments: list[list] = []

    def fill(m: int):
        limit = max(top - slope * m, 0)
        row = [ctx.zero] * (limit + 1)
        row[0] = ctx.one if m == 0 else ctx.zero
        moments.append(row)
        for n in range(1, limit + 1):
            N = n - 1
            s = ctx.zero
            if N >= 1:
                for i in range(m + 1):
                    s += eps[i] * moments[m - i][N - 1]
                s *= 2 * N
            if N >= 3:
                s += ctx.mpf(N * (N - 1) * (N - 2)) / 4 * row[N - 3]
            for j in range(1, m + 1):
                lower = moments[m - j]
                for k, c in by_order.get(j, ()):
                    f = 2 * N + k
                    if f == 0:
                        continue
                    idx = N + k - 1
                    if idx >= len(lower):
                        raise OrderOverflow(f"<x^{idx}> at order {m - j} outside envelope")
                    s -= f * c * lower[idx]
            row[n] = s / (n * w_sq)

    fill(0)
    for m in range(1, m_max + 1):
        e = ctx.zero
        for j in range(1, m + 1):
            lower = moments[m - j]
            for k, c in by_order.get(j, ()):
                if k >= len(lower):
                    raise OrderOverflow(f"<x^{k}> at order {m - j} outside envelope")
                e += j * c * lower[k]
        eps.append(e / m)
        fill(m)
    return eps


@dataclass
class EnergySeries:
    """Terms ``c_k`` and partial sums ``E_k`` of the energy expansion of one state.

    ``c_k = eps_{2(k-1)} lbar^(2-k) / q0^2`` for ``k >= 2``; ``c_0`` and
    ``c_1`` come from the leading-order solve.
    """

    leading: LeadingOrder
    eps: list
    terms: list
    partials: list
    table: PerturbationTable | None = None
    precision: Precision = field(default_factory=Precision)

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def parity_residual(self):
        """Largest odd-order ``|eps|`` relative to the largest ``|eps|``."""
        ctx = self.leading.q0.context
        scale = max(abs(e) for e in self.eps)
        odd = max((abs(e) for e in self.eps[1::2]), default=ctx.zero)
        return odd / scale if scale else ctx.zero

    def tail(self) -> list:
        """Coefficients of ``u^n`` (``u = 1/lbar``) in ``E - c0``: ``eps_{2(n+1)} / q0^2``."""
        q02 = self.leading.q0 ** 2
        return [self.eps[2 * (n + 1)] / q02 for n in range(self.order - 1)]


def energy_series(pot: PotentialExpr, state: QuantumState, M: int = 20,
                  prec: Precision | int | None = None) -> EnergySeries:
    """Partial sums ``E_0 .. E_M`` of the shifted-l expansion for ``state``."""
    if M < 2:
        raise ValueError("M must be >= 2")
    prec = _as_precision(prec)
    lead = solve_leading(pot, state, prec)
    m_max = 2 * (M - 1)
    jets = jet(pot, lead.q0, 2 * M + 2, prec)
    tab = assemble_perturbation(jets, lead, m_max)
    eps = hvhf_expand(tab, lead.w, state.nr, m_max)

    ctx = prec.ctx
    q02 = lead.q0 ** 2
    terms = [lead.c0, lead.c1]
    lb_pow = ctx.one  # lbar^(2-k) for k = 2
    for k in range(2, M + 1):
        terms.append(eps[2 * (k - 1)] * lb_pow / q02)
        lb_pow /= lead.ellbar
    partials = []
    s = ctx.zero
    for c in terms:
        s += c
        partials.append(s)
    return EnergySeries(leading=lead, eps=eps, terms=terms, partials=partials, table=tab, precision=prec)


class TruncationDiagnostics(NamedTuple):
    index: int
    min_step: object
    diverging: bool


def optimal_truncation(series: EnergySeries | list) -> TruncationDiagnostics:
    """Locate the smallest correction and flag asymptotic divergence.

    ``index`` is the first ``k >= 2`` minimising ``|c_k|``. The series is
    called diverging when at least three terms ``c_index .. c_M`` exist and
    ``log|c_k|`` has a positive least-squares slope over them, i.e. the
    envelope of the terms grows after the optimal truncation point.

    Accepts an :class:`EnergySeries` or a plain list of terms ``c_0 .. c_M``.
    """
    terms = series.terms if isinstance(series, EnergySeries) else list(series)
    if len(terms) < 3:
        raise ValueError("need at least three terms")
    mags = [abs(c) for c in terms]
    M = len(terms) - 1
    index = min(range(2, M + 1), key=lambda k: (mags[k], k))
    min_step = terms[index]
    diverging = False
    if M - index >= 2 and mags[index] > 0:
        ks = list(range(index, M + 1))
        ys = [float(mags[k].context.log(mags[k])) if hasattr(mags[k], 'context') else math.log(mags[k])
              for k in ks]
        kbar = sum(ks) / len(ks)
        ybar = sum(ys) / len(ys)
        slope = sum((k - kbar) * (y - ybar) for k, y in zip(ks, ys))
        diverging = slope > 0
    return TruncationDiagnostics(index=index, min_step=abs(min_step), diverging=diverging)
