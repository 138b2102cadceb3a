"""Direct finite-difference eigensolver used as an independent reference.

The radial equation ``-u''/2 + [l(l+1)/(2 r^2) + V(r)] u = E u`` with
``u(0) = u(r_max) = 0`` is discretised with the three-point Laplacian on a
uniform grid. The eigenvalue with index ``nr`` is isolated by Sturm-sequence
bisection (LAPACK ``stebz``) and its eigenvector by inverse iteration
(``stein``); two grids with step ratio 2 give a Richardson-extrapolated energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NodeMismatch, NoBoundState
from .leading import QuantumState, solve_leading
from .numeric import Precision
from .potential import PotentialExpr, Node, Num, Var, Neg, Add, Sub, Mul, Div, Pow, jet

__all__ = ["GridConfig", "OracleResult", "oracle_eigenvalue", "auto_grid", "count_nodes", "evaluate_array"]


@dataclass(frozen=True)
class GridConfig:
    """Uniform grid on ``[r_min, r_max]`` with ``points`` intervals."""

    r_max: float
    points: int
    r_min: float = 0.0

    def __post_init__(self):
        if self.points < 1000:
            raise ValueError("points must be >= 1000")
        if not self.r_max > self.r_min >= 0:
            raise ValueError("need r_max > r_min >= 0")


@dataclass(frozen=True)
class OracleResult:
    energy: float
    nodes: int
    grid: GridConfig
    richardson_error: float
    coarse_energy: float
    fine_energy: float


def evaluate_array(node: Node | PotentialExpr, r: np.ndarray) -> np.ndarray:
    """Vectorised double-precision evaluation of a potential tree."""
    if isinstance(node, PotentialExpr):
        node = node.tree
    if isinstance(node, Num):
        return np.full_like(r, float(node.text))
    if isinstance(node, Var):
        return r
    if isinstance(node, Neg):
        return -evaluate_array(node.arg, r)
    if isinstance(node, Pow):
        return evaluate_array(node.base, r) ** float(node.exponent)
    a, b = evaluate_array(node.left, r), evaluate_array(node.right, r)
    if isinstance(node, Add):
        return a + b
    if isinstance(node, Sub):
        return a - b
    if isinstance(node, Mul):
        return a * b
    return a / b


def count_nodes(u: np.ndarray, rel_floor: float = 1e-8) -> int:
    """Interior sign changes of ``u``, ignoring entries below ``rel_floor * max|u|``."""
    big = u[np.abs(u) > rel_floor * np.max(np.abs(u))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def _effective(pot, ell, r):
    return ell * (ell + 1) / (2.0 * r * r) + evaluate_array(pot, r)


def _level(pot, state: QuantumState, grid: GridConfig, intervals: int, vectors: bool):
    h = (grid.r_max - grid.r_min) / intervals
    r = grid.r_min + h * np.arange(1, intervals)
    with np.errstate(divide="ignore", invalid="ignore"):
        veff = _effective(pot, state.ell, r)
    if not np.all(np.isfinite(veff)):
        raise NoBoundState("potential is not finite on the grid")
    diag = 1.0 / h**2 + veff
    off = np.full(intervals - 2, -0.5 / h**2)
    k = state.nr
    # bisect to full machine precision instead of the default eps*|T|
    opts = dict(select="i", select_range=(k, k), lapack_driver="stebz", tol=np.finfo(float).tiny)
    if vectors:
        w, v = eigh_tridiagonal(diag, off, **opts)
        return w[0], v[:, 0], veff[-1]
    w = eigh_tridiagonal(diag, off, eigvals_only=True, **opts)
    return w[0], None, veff[-1]


def oracle_eigenvalue(pot: PotentialExpr, state: QuantumState, grid: GridConfig | None = None) -> OracleResult:
    """Energy of ``state`` from two finite-difference grids plus Richardson extrapolation.

    The coarse grid has ``grid.points`` intervals, the fine one twice as many;
    the three-point stencil is second order so ``E = (4 E_fine - E_coarse) / 3``.

    Raises
    ------
    NoBoundState
        The requested level lies at or above the effective potential at ``r_max``.
    NodeMismatch
        The fine-grid eigenvector does not have ``nr`` nodes.
    """
    if grid is None:
        grid = auto_grid(pot, state)
    e_coarse, _, _ = _level(pot, state, grid, grid.points, vectors=False)
    e_fine, vec, edge = _level(pot, state, grid, 2 * grid.points, vectors=True)
    if e_fine >= edge:
        raise NoBoundState(f"level {state.nr} at {e_fine} is not below V_eff(r_max) = {edge}")
    nodes = count_nodes(vec)
    if nodes != state.nr:
        raise NodeMismatch(f"eigenvector has {nodes} nodes, expected {state.nr}; enlarge the grid")
    energy = (4.0 * e_fine - e_coarse) / 3.0
    return OracleResult(
        energy=float(energy),
        nodes=nodes,
        grid=grid,
        richardson_error=float(abs(energy - e_fine)),
        coarse_energy=float(e_coarse),
        fine_energy=float(e_fine),
    )


def outer_turning_point(pot: PotentialExpr, ell: int, energy: float, start: float) -> float:
    """Largest ``r > start`` with ``V_eff(r) = energy``, found by doubling then bisection."""
    f = lambda r: float(_effective(pot, ell, np.array([r]))[0]) - energy
    lo = start
    hi = max(2 * start, 1.0)
    while f(hi) < 0:
        lo, hi = hi, 2 * hi
        if hi > 1e12:
            raise NoBoundState("no outer turning point")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return hi


def auto_grid(pot: PotentialExpr, state: QuantumState) -> GridConfig:
    """Grid covering six outer turning radii with step ``h`` such that ``h^2 |V''(q0)| <= 1e-8``.

    Floors: ``r_max >= 50`` and ``points >= 20000``.
    """
    lead = solve_leading(pot, state, Precision(64))
    q0 = float(lead.q0)
    turn = outer_turning_point(pot, state.ell, float(lead.c0), q0)
    r_max = max(6.0 * turn, 50.0)
    curv = abs(float(jet(pot, lead.q0, 2, Precision(64)).derivs[2]))
    points = 20000
    if curv > 0:
        points = max(points, math.ceil(r_max * math.sqrt(curv) / 1e-4))
    return GridConfig(r_max=r_max, points=points)
