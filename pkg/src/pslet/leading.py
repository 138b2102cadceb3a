"""Leading-order geometry of the shifted-l expansion.

For a state ``(l, nr)`` the effective radius ``q0`` minimises the leading
effective potential ``lbar^2/(2 q^2) + V(q)`` with ``lbar = l - beta``:

* ``lbar^2 = q0^3 V'(q0)``
* ``w^2 = 3 + q0 V''(q0) / V'(q0)``
* ``beta = -(1 + (2 nr + 1) w) / 2``, which removes the order-``lbar`` energy term.

Because ``w`` and ``beta`` depend on ``q0``, the radius solves the scalar
equation ``q^3 V'(q) = (l + 1/2 + (nr + 1/2) w(q))^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ComplexFrequency, NoBinding, NoBracket
from .numeric import Precision, _as_precision, find_root
from .potential import PotentialExpr, jet

__all__ = ["QuantumState", "LeadingOrder", "solve_leading", "SPECTROSCOPIC_LETTERS"]

SPECTROSCOPIC_LETTERS = "spdfghik"

_LABEL = re.compile(r"^\s*(\d+)\s*([a-zA-Z])\s*$")


@dataclass(frozen=True)
class QuantumState:
    """Bound state with angular momentum ``ell`` and ``nr`` radial nodes.

    ``n = nr + ell + 1`` is the principal quantum number.
    """

    ell: int
    nr: int
    label: str | None = None

    def __post_init__(self):
        if self.ell < 0 or self.nr < 0:
            raise ValueError("ell and nr must be non-negative")
        if self.label is not None:
            n, ell = _parse_label(self.label)
            if ell != self.ell or n != self.nr + self.ell + 1:
                raise ValueError(f"label {self.label!r} inconsistent with ell={self.ell}, nr={self.nr}")

    @property
    def n(self) -> int:
        return self.nr + self.ell + 1

    @classmethod
    def from_label(cls, label: str) -> "QuantumState":
        """``"4s"`` -> ``QuantumState(ell=0, nr=3)``."""
        n, ell = _parse_label(label)
        return cls(ell=ell, nr=n - ell - 1, label=label.strip())

    def __str__(self):
        return self.label or f"l={self.ell},nr={self.nr}"


def _parse_label(label: str) -> tuple[int, int]:
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"cannot parse state label {label!r}; use explicit ell/nr")
    n, letter = int(m.group(1)), m.group(2).lower()
    if letter not in SPECTROSCOPIC_LETTERS:
        raise ValueError(f"unsupported orbital letter {letter!r}; use explicit ell/nr")
    ell = SPECTROSCOPIC_LETTERS.index(letter)
    if n < ell + 1:
        raise ValueError(f"principal number {n} too small for {letter!r}")
    return n, ell


@dataclass(frozen=True)
class LeadingOrder:
    q0: object
    w: object
    beta: object
    ellbar: object
    c0: object
    c1: object
    state: QuantumState
    residual: object = 0

    @property
    def shift_identity(self):
        """``(2 beta + 1)/2 + (nr + 1/2) w``; zero by construction of ``beta``."""
        return (2 * self.beta + 1) / 2 + (self.state.nr + self.w.context.mpf(1) / 2) * self.w


def _frequency_squared(d1, d2, q):
    return 3 + q * d2 / d1


def solve_leading(pot: PotentialExpr, state: QuantumState, prec: Precision | int | None = None,
                  bracket=(1e-6, 1e9)) -> LeadingOrder:
    """Solve for ``q0, w, beta, lbar`` and the leading energy ``c0``.

    The interval ``bracket`` is scanned geometrically for the first sign
    change of ``q^3 V'(q) - (l + 1/2 + (nr + 1/2) w(q))^2``; the root is then
    refined to working precision.

    Raises
    ------
    NoBinding
        No sign change in the scan interval.
    ComplexFrequency
        ``w^2 <= 0`` at the root.
    """
    prec = _as_precision(prec)
    ctx = prec.ctx
    half = ctx.mpf(1) / 2
    ell = ctx.mpf(state.ell)
    nr_half = state.nr + half

    def g(q):
        _, d1, d2 = jet(pot, q, 2, prec).derivs
        if d1 <= 0:
            return None
        w2 = _frequency_squared(d1, d2, q)
        if w2 <= 0:
            return None
        return q ** 3 * d1 - (ell + half + nr_half * ctx.sqrt(w2)) ** 2

    def safe_g(q):
        try:
            return g(q)
        except ArithmeticError:
            return None

    lo, hi = ctx.mpf(bracket[0]), ctx.mpf(bracket[1])
    factor = ctx.mpf(2) ** ctx.mpf(0.5)
    q_prev, g_prev = None, None
    q = lo
    found = None
    while q <= hi * (1 + prec.eps):
        gq = safe_g(q)
        if gq is not None and g_prev is not None and gq * g_prev <= 0:
            found = (q_prev, q)
            break
        q_prev, g_prev = (q, gq) if gq is not None else (None, None)
        q *= factor
    if found is None:
        raise NoBinding(f"no effective radius for state {state} in ({bracket[0]}, {bracket[1]})")

    scale = (ell + half + nr_half) ** 2
    tol = scale * ctx.ldexp(ctx.one, -(prec.mantissa_bits - 8))

    def strict_g(q):
        v = g(q)
        if v is None:
            raise NoBinding(f"binding conditions fail inside the bracket near q={q}")
        return v

    try:
        q0 = find_root(strict_g, found[0], found[1], tol, prec)
    except NoBracket as exc:  # pragma: no cover - scan guarantees a sign change
        raise NoBinding(str(exc)) from exc

    v0, d1, d2 = jet(pot, q0, 2, prec).derivs
    w2 = _frequency_squared(d1, d2, q0)
    if w2 <= 0:
        raise ComplexFrequency(f"w^2 = {w2} at q0 = {q0}")
    w = ctx.sqrt(w2)
    beta = -(1 + (2 * state.nr + 1) * w) / 2
    ellbar = ell - beta
    c0 = ellbar ** 2 / (2 * q0 ** 2) + v0
    c1 = ellbar / q0 ** 2 * ((2 * beta + 1) / 2 + nr_half * w)
    residual = q0 ** 3 * d1 - ellbar ** 2
    return LeadingOrder(q0=q0, w=w, beta=beta, ellbar=ellbar, c0=c0, c1=c1, state=state, residual=residual)
