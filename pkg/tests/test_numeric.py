import mpmath
import pytest

from pslet import NoBracket, Precision, SingularMatrix, find_root, solve_linear


def test_precision_validation():
    assert Precision().mantissa_bits == 192
    with pytest.raises(ValueError):
        Precision(52)
    with pytest.raises(ValueError):
        Precision(100.5)


def test_contexts_are_independent():
    lo, hi = Precision(64), Precision(256)
    a = lo.mpf(1) / 3
    b = hi.mpf(1) / 3
    assert a.context.prec == 64 and b.context.prec == 256
    assert a != b
    assert mpmath.mp.prec == 53


def test_solve_identity():
    assert solve_linear([[1, 0], [0, 1]], [3, 5]) == [3, 5]


def test_solve_diagonal():
    assert solve_linear([[2, 0], [0, 4]], [2, 8]) == [1, 2]


def test_solve_needs_pivoting():
    x = solve_linear([[0, 1], [1, 0]], [2, 7])
    assert x == [7, 2]


def test_hilbert_round_trip(prec):
    n = 8
    ctx = prec.ctx
    A = [[ctx.one / (i + j + 1) for j in range(n)] for i in range(n)]
    b = [sum(row) for row in A]
    x = solve_linear(A, b, prec)
    assert max(abs(xi - 1) for xi in x) < 1e-20


def test_residual_bound(prec):
    ctx = prec.ctx
    A = [[4, 1, 0], [1, 3, 1], [0, 1, 2]]
    b = [1, 2, 3]
    x = solve_linear(A, b, prec)
    resid = max(abs(sum(ctx.mpf(a) * xi for a, xi in zip(row, x)) - bi) for row, bi in zip(A, b))
    assert resid <= prec.tol(0.25) * max(abs(ctx.mpf(v)) for v in b)


def test_singular_matrix():
    with pytest.raises(SingularMatrix):
        solve_linear([[1, 2], [2, 4]], [1, 2])
    with pytest.raises(SingularMatrix):
        solve_linear([[0, 0], [0, 0]], [1, 2])


def test_solve_shape_check():
    with pytest.raises(ValueError):
        solve_linear([[1, 2]], [1, 2])


def test_root_sqrt2(prec):
    x = find_root(lambda x: x * x - 2, 1, 2, prec.tol(0.25), prec)
    assert abs(x - prec.ctx.sqrt(2)) < 1e-40


def test_root_linear():
    assert abs(find_root(lambda x: x - 5, 0, 10, 1e-30) - 5) < 1e-30


def test_root_residual(prec):
    f = lambda x: x ** 3 * (x + 10) ** -2 - 16
    x = find_root(f, 1, 1000, prec.tol(0.25), prec)
    assert abs(f(x)) < 1e-40


def test_root_no_bracket():
    with pytest.raises(NoBracket):
        find_root(lambda x: x * x + 1, -1, 1, 1e-10)


def test_root_at_endpoint():
    assert find_root(lambda x: x - 1, 1, 3, 1e-12) == 1


def test_determinism(prec):
    f = lambda x: x ** 5 - 3 * x - 1
    a = find_root(f, 1, 2, prec.tol(0.25), prec)
    b = find_root(f, 1, 2, prec.tol(0.25), prec)
    assert a == b and mpmath.mpf(a) == mpmath.mpf(b)
