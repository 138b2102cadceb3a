import numpy as np
import pytest

from pslet import (
    GridConfig,
    NoBoundState,
    QuantumState,
    auto_grid,
    energy_series,
    oracle_eigenvalue,
    pade_staircase,
    parse_potential,
)
from pslet.oracle import count_nodes, evaluate_array

ALPHA_01_GROUND = -0.3875436551  # independent shooting reference


@pytest.mark.parametrize("label", ["1s", "2s", "3s", "2p", "3d"])
def test_coulomb(coulomb, label):
    state = QuantumState.from_label(label)
    res = oracle_eigenvalue(coulomb, state)
    assert abs(res.energy + 1 / (2 * state.n ** 2)) < 1e-7
    assert res.nodes == state.nr
    assert res.richardson_error < 1e-7


def test_harmonic(harmonic):
    res = oracle_eigenvalue(harmonic, QuantumState(2, 1))
    assert abs(res.energy - 5.5) < 1e-7


def test_truncated_4s(truncated10):
    res = oracle_eigenvalue(truncated10, QuantumState.from_label("4s"))
    assert abs(res.energy + 0.0116383071) < 2e-6
    assert res.richardson_error < 1e-7


def test_alpha_01_ground():
    res = oracle_eigenvalue(parse_potential("-1/(r+0.1)"), QuantumState(0, 0))
    assert abs(res.energy - ALPHA_01_GROUND) < 1e-7
    assert res.richardson_error < 1e-7


def test_auto_grid(coulomb, harmonic, truncated10):
    assert auto_grid(coulomb, QuantumState.from_label("4s")).r_max >= 192
    lead_q0 = 153.32562969965229366  # 11s, alpha = 10
    g = auto_grid(truncated10, QuantumState.from_label("11s"))
    assert lead_q0 < g.r_max / 3 and g.points >= 20000
    assert auto_grid(harmonic, QuantumState(0, 0)).r_max >= 6 * 3 ** 0.5


def test_grid_validation():
    with pytest.raises(ValueError):
        GridConfig(10.0, 999)
    with pytest.raises(ValueError):
        GridConfig(0.0, 5000)


def test_count_nodes():
    x = np.linspace(0, 1, 1001)[1:-1]
    assert count_nodes(np.sin(3 * np.pi * x)) == 2
    u = np.sin(np.pi * x)
    u[-5:] = -1e-12  # round-off tail below the floor
    assert count_nodes(u) == 0


def test_evaluate_array(truncated10):
    r = np.array([1.0, 2.0])
    assert np.allclose(evaluate_array(truncated10, r), -1 / (r + 10))
    assert np.allclose(evaluate_array(parse_potential("r^-2 - 3*r"), r), r ** -2 - 3 * r)


def test_variational_ordering(truncated10):
    energies = [oracle_eigenvalue(truncated10, QuantumState(0, nr)).energy for nr in range(4)]
    assert all(a < b for a, b in zip(energies, energies[1:]))


def test_ordering_in_alpha():
    energies = [oracle_eigenvalue(parse_potential(f"-1/(r+{a})"), QuantumState(0, 0)).energy
                for a in ("0", "0.1", "1", "10")]
    assert all(a < b for a, b in zip(energies, energies[1:]))


def test_grid_convergence(coulomb):
    state = QuantumState(0, 1)
    coarse = oracle_eigenvalue(coulomb, state, GridConfig(60.0, 2000))
    fine = oracle_eigenvalue(coulomb, state, GridConfig(60.0, 8000))
    assert abs(fine.energy + 0.125) < abs(coarse.energy + 0.125)
    assert abs(fine.fine_energy + 0.125) < abs(coarse.fine_energy + 0.125) / 10


def test_no_bound_state(coulomb):
    with pytest.raises(NoBoundState):
        oracle_eigenvalue(coulomb, QuantumState(0, 10), GridConfig(50.0, 2000))


def test_not_finite_on_grid():
    with pytest.raises(NoBoundState):
        oracle_eigenvalue(parse_potential("-1/(r-1)"), QuantumState(0, 0), GridConfig(10.0, 1000))


@pytest.mark.parametrize("label", ["4s", "6s", "7s", "9s", "11s"])
def test_pade_beats_truncated_sum(truncated10, prec, label):
    state = QuantumState.from_label(label)
    series = energy_series(truncated10, state, 20, prec)
    best = float(pade_staircase(series).best)
    ref = oracle_eigenvalue(truncated10, state).energy
    assert abs(best - ref) <= abs(float(series.partials[-1]) - ref)
    assert abs(best - ref) <= 5e-6
