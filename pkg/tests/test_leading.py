import mpmath
import pytest

from pslet import ComplexFrequency, NoBinding, Precision, QuantumState, parse_potential, solve_leading

Q0_GOLDEN_1_10 = "175.9259040456875693026868960222530757933"
Q0_GOLDEN_4S = "35.9695768272626587880244051827"


def test_state_labels():
    s = QuantumState.from_label("4s")
    assert (s.ell, s.nr, s.n) == (0, 3, 4)
    assert QuantumState.from_label("3d") == QuantumState(2, 0, "3d")
    with pytest.raises(ValueError):
        QuantumState.from_label("1p")
    with pytest.raises(ValueError):
        QuantumState.from_label("4z")
    with pytest.raises(ValueError):
        QuantumState(0, 1, label="3s")
    with pytest.raises(ValueError):
        QuantumState(-1, 0)


def test_coulomb_ground(coulomb, prec):
    lead = solve_leading(coulomb, QuantumState(0, 0), prec)
    assert abs(lead.q0 - 1) < 1e-50
    assert abs(lead.w - 1) < 1e-50
    assert abs(lead.c0 + 0.5) < 1e-50


def test_harmonic_ground(harmonic, prec):
    lead = solve_leading(harmonic, QuantumState(0, 0), prec)
    assert abs(lead.w - 2) < 1e-50
    assert abs(lead.c0 - 1.5) < 1e-50


@pytest.mark.parametrize("ell", range(0, 11, 2))
@pytest.mark.parametrize("nr", range(0, 11, 2))
def test_coulomb_closure(coulomb, prec, ell, nr):
    n = ell + nr + 1
    lead = solve_leading(coulomb, QuantumState(ell, nr), prec)
    assert abs(lead.q0 - n * n) < 1e-30 * n * n
    assert abs(lead.ellbar - n) < 1e-30
    assert abs(lead.c0 + prec.mpf(1) / (2 * n * n)) < 1e-30


@pytest.mark.parametrize("ell,nr", [(0, 0), (2, 1), (5, 3)])
def test_harmonic_closure(harmonic, prec, ell, nr):
    lead = solve_leading(harmonic, QuantumState(ell, nr), prec)
    assert abs(lead.c0 - (2 * nr + ell + prec.mpf(3) / 2)) < 1e-30


def test_golden_q0(truncated10, prec):
    lead = solve_leading(truncated10, QuantumState(1, 10), prec)
    assert abs(lead.q0 - prec.mpf(Q0_GOLDEN_1_10)) < 1e-30
    assert abs(lead.c0 - prec.mpf("-0.0028338839396697596")) < 1e-18


def test_golden_q0_4s(truncated10, prec):
    lead = solve_leading(truncated10, QuantumState.from_label("4s"), prec)
    assert abs(lead.q0 - prec.mpf(Q0_GOLDEN_4S)) < 1e-25


def test_independent_root(truncated10, prec):
    # direct bisection on the closed-form condition, no shared code
    with mpmath.workprec(192):
        ell, nr, a = 0, 10, mpmath.mpf(10)

        def g(q):
            w = mpmath.sqrt(3 - 2 * q / (q + a))
            return q ** 3 / (q + a) ** 2 - (ell + 0.5 + (nr + 0.5) * w) ** 2

        ref = mpmath.findroot(g, (1, 1000), solver="anderson")
    lead = solve_leading(truncated10, QuantumState(0, 10), prec)
    assert abs(lead.q0 - ref) < 1e-30 * ref


@pytest.mark.parametrize("label", ["4s", "6s", "11s"])
def test_first_order_vanishes(truncated10, prec, label):
    lead = solve_leading(truncated10, QuantumState.from_label(label), prec)
    assert abs(lead.c1) < 1e-40
    assert abs(lead.shift_identity) < 1e-40
    assert abs(lead.residual) < 1e-30 * lead.ellbar ** 2


def test_q0_monotone_in_alpha(prec):
    expected = {"0": 16, "0.1": "16.3681430902", "1": "19.2339163823", "10": "35.9695768273"}
    prev = 0
    for alpha, ref in expected.items():
        lead = solve_leading(parse_potential(f"-1/(r+{alpha})"), QuantumState.from_label("4s"), prec)
        assert abs(lead.q0 - prec.mpf(ref)) < 1e-9
        assert lead.q0 > prev
        prev = lead.q0


def test_no_binding():
    with pytest.raises(NoBinding):
        solve_leading(parse_potential("1/r"), QuantumState(0, 0))


def test_complex_frequency_or_no_binding():
    # V = -r^-3 gives w^2 = 3 - 4 < 0 everywhere
    with pytest.raises((ComplexFrequency, NoBinding)):
        solve_leading(parse_potential("-r^-3"), QuantumState(0, 0))


def test_precision_independence(truncated10):
    a = solve_leading(truncated10, QuantumState(3, 10), Precision(128))
    b = solve_leading(truncated10, QuantumState(3, 10), Precision(256))
    assert abs(a.c0 - b.c0) < 1e-30
