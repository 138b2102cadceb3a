"""Configurable-precision arithmetic, dense solves and bracketed root finding.

Reals are :mod:`mpmath` multiprecision floats bound to a private context,
so a computation at one precision never touches the global ``mpmath.mp``
state and two computations at different precisions can run side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import mpmath

from .errors import NoBracket, SingularMatrix

__all__ = ["Precision", "DEFAULT_PRECISION", "context", "solve_linear", "find_root"]


@lru_cache(maxsize=None)
def context(mantissa_bits: int) -> mpmath.ctx_mp.MPContext:
    """Return the shared mpmath context for ``mantissa_bits``.

    Contexts are cached and never mutated after creation.
    """
    ctx = mpmath.MPContext()
    ctx.prec = mantissa_bits
    return ctx


@dataclass(frozen=True)
class Precision:
    """Working precision in mantissa bits (round-to-nearest)."""

    mantissa_bits: int = 192

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < 53:
            raise ValueError(f"mantissa_bits must be an integer >= 53, got {self.mantissa_bits!r}")

    @property
    def ctx(self) -> mpmath.ctx_mp.MPContext:
        return context(self.mantissa_bits)

    def mpf(self, x):
        return self.ctx.mpf(x)

    @property
    def eps(self):
        """Unit roundoff ``2**(1 - bits)``."""
        return self.ctx.ldexp(self.ctx.one, 1 - self.mantissa_bits)

    def tol(self, fraction: float):
        """``10**(-fraction * bits)``, the tolerance convention used for invariants."""
        return self.ctx.power(10, -fraction * self.mantissa_bits)


DEFAULT_PRECISION = Precision()


def _as_precision(prec) -> Precision:
    if prec is None:
        return DEFAULT_PRECISION
    if isinstance(prec, Precision):
        return prec
    return Precision(int(prec))


def solve_linear(A: Sequence[Sequence], b: Sequence, prec: Precision | int | None = None) -> list:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Parameters
    ----------
    A : sequence of sequences
        Square ``n x n`` matrix; entries are anything ``ctx.mpf`` accepts.
    b : sequence
        Right-hand side of length ``n``.
    prec : Precision or int, optional
        Working precision (default 192 bits).

    Returns
    -------
    list of mpf

    Raises
    ------
    SingularMatrix
        If a pivot falls below ``2**(-bits/2)`` times the largest entry of ``A``.
    """
    prec = _as_precision(prec)
    ctx = prec.ctx
    n = len(b)
    if len(A) != n or any(len(row) != n for row in A):
        raise ValueError("A must be square with the same size as b")
    if n == 0:
        return []
    a = [[ctx.mpf(v) for v in row] + [ctx.mpf(bi)] for row, bi in zip(A, b)]
    scale = max(abs(v) for row in a for v in row[:n])
    if scale == 0:
        raise SingularMatrix("zero matrix")
    threshold = scale * ctx.ldexp(ctx.one, -(prec.mantissa_bits // 2))

    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        if abs(a[piv][col]) < threshold:
            raise SingularMatrix(f"pivot {col} below threshold")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        prow = a[col]
        inv = 1 / prow[col]
        for i in range(col + 1, n):
            f = a[i][col] * inv
            if f:
                row = a[i]
                for j in range(col, n + 1):
                    row[j] -= f * prow[j]

    x = [ctx.zero] * n
    for i in range(n - 1, -1, -1):
        s = a[i][n]
        for j in range(i + 1, n):
            s -= a[i][j] * x[j]
        x[i] = s / a[i][i]
    return x


def find_root(f: Callable, lo, hi, tol, prec: Precision | int | None = None, max_iter: int | None = None):
    """Bracketed root of ``f`` on ``[lo, hi]``.

    Regula falsi with the Illinois correction, falling back to bisection
    whenever an interpolation step fails to halve the bracket.

    Returns ``x`` with ``|f(x)| <= tol`` or bracket width ``<= tol * max(1, |x|)``.

    Raises
    ------
    NoBracket
        If ``f(lo)`` and ``f(hi)`` do not have strictly opposite signs.
    """
    prec = _as_precision(prec)
    ctx = prec.ctx
    a, b = ctx.mpf(lo), ctx.mpf(hi)
    tol = ctx.mpf(tol)
    fa, fb = f(a), f(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if not fa * fb < 0:
        raise NoBracket(f"f({lo})={fa} and f({hi})={fb} do not bracket a root")
    if max_iter is None:
        max_iter = 4 * prec.mantissa_bits + 100

    side = 0
    x = (a + b) / 2
    for _ in range(max_iter):
        width = abs(b - a)
        x = (a * fb - b * fa) / (fb - fa)
        if not (min(a, b) < x < max(a, b)):
            x = (a + b) / 2
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if (fx < 0) == (fa < 0):
            a, fa = x, fx
            if side == -1:
                fb /= 2
            side = -1
        else:
            b, fb = x, fx
            if side == 1:
                fa /= 2
            side = 1
        if abs(b - a) > width / 2:
            # interpolation stalled, force a bisection step
            m = (a + b) / 2
            fm = f(m)
            if abs(fm) <= tol:
                return m
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b, fb = m, fm
            side = 0
        x = (a + b) / 2
        if abs(b - a) <= tol * max(1, abs(x)):
            return x
    return x
