"""Pseudo-perturbative shifted-l expansion (PSLET) for radial bound states.

Typical use::

    from pslet import parse_potential, QuantumState, energy_series, pade_staircase

    series = energy_series(parse_potential("-1/(r+10)"), QuantumState.from_label("4s"))
    series.partials[-1], pade_staircase(series).best
"""

from .errors import (
    ComplexFrequency,
    DegeneratePade,
    InsufficientJet,
    NoBinding,
    NoBoundState,
    NoBracket,
    NodeMismatch,
    NumericError,
    OrderOverflow,
    PotentialSyntaxError,
    PSLETError,
    SingularMatrix,
    SingularPoint,
    UnknownSymbol,
)
from .leading import LeadingOrder, QuantumState, solve_leading
from .numeric import Precision, find_root, solve_linear
from .oracle import GridConfig, OracleResult, auto_grid, oracle_eigenvalue
from .potential import Jet, PotentialExpr, jet, parse_potential, to_text, truncated_coulomb_jet
from .report import RunRecord, run_state
from .resummation import PadeStaircase, StabilizationReport, pade, pade_staircase, stabilization
from .series import (
    EnergySeries,
    PerturbationTable,
    assemble_perturbation,
    energy_series,
    hvhf_expand,
    optimal_truncation,
)

__version__ = "0.1.0"
