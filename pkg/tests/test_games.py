import numpy as np
import pytest

from dnes import (GameError, QuadraticGame, cost, cost_gradient, is_hurwitz,
                  monotonicity_margins, nash_equilibrium, pseudogradient)

RNG = np.random.default_rng(42)


def _random_quadratic(n: int) -> QuadraticGame:
    Q = []
    for _ in range(n):
        M = RNG.normal(size=(n, n))
        Q.append(M + M.T)
    b = [RNG.normal(size=n) for _ in range(n)]
    p = RNG.normal(size=n)
    return QuadraticGame(tuple(Q), tuple(b), tuple(p))


def test_duopoly_nash_equilibrium(duopoly):
    xstar = nash_equilibrium(duopoly)
    assert np.allclose(xstar, [130.0 / 3.0, 110.0 / 3.0], atol=1e-12)
    assert np.allclose(pseudogradient(duopoly, xstar), 0.0, atol=1e-10)


def test_duopoly_costs_at_equilibrium(duopoly):
    xstar = nash_equilibrium(duopoly)
    assert cost(duopoly, 0, xstar) == pytest.approx(-8000.0 / 9.0)
    assert cost(duopoly, 1, xstar) == pytest.approx(-2000.0 / 9.0)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cost_gradient_matches_finite_differences(n):
    game = _random_quadratic(n)
    x = RNG.normal(size=n)
    h = 1e-5
    for i in range(n):
        grad = cost_gradient(game, i, x)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            fd = (cost(game, i, x + e) - cost(game, i, x - e)) / (2 * h)
            assert grad[j] == pytest.approx(fd, rel=1e-5, abs=1e-5)


def test_aggregative_gradient_matches_finite_differences(agg2):
    x = np.array([0.7, -0.3])
    h = 1e-6
    for i in range(2):
        grad = cost_gradient(agg2, i, x)
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            fd = (cost(agg2, i, x + e) - cost(agg2, i, x - e)) / (2 * h)
            assert grad[j] == pytest.approx(fd, rel=1e-6, abs=1e-6)
    assert np.allclose(pseudogradient(agg2, x),
                       [cost_gradient(agg2, i, x)[i] for i in range(2)])


def test_pseudogradient_is_affine():
    game = _random_quadratic(4)
    pm = game.pseudogradient_matrices()
    for _ in range(20):
        x = RNG.normal(size=4)
        assert np.allclose(pseudogradient(game, x), pm.Qcal @ x + pm.Bcal)


def test_margin_certifies_strong_monotonicity(agg2):
    K = monotonicity_margins(agg2)
    assert np.allclose(K, [0.45, 0.45])
    kmin = K.min()
    for _ in range(1000):
        x = RNG.uniform(-3, 3, size=2)
        y = RNG.uniform(-3, 3, size=2)
        lhs = (pseudogradient(agg2, x) - pseudogradient(agg2, y)) @ (x - y)
        assert lhs >= kmin * np.sum((x - y) ** 2) - 1e-9


def test_asymmetric_q_rejected():
    with pytest.raises(GameError):
        QuadraticGame((np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2)),
                      (np.zeros(2), np.zeros(2)), (0.0, 0.0))


def test_dimension_mismatch_rejected():
    with pytest.raises(GameError):
        QuadraticGame((np.eye(2),), (np.zeros(3),), (0.0,))


def test_singular_pseudogradient_rejected():
    game = QuadraticGame((np.eye(2), np.eye(2)),
                         (np.zeros(2), np.zeros(2)), (0.0, 0.0))
    ones = QuadraticGame(
        (np.ones((2, 2)), np.ones((2, 2))),
        (np.zeros(2), np.zeros(2)), (0.0, 0.0))
    assert np.allclose(nash_equilibrium(game), 0.0)
    with pytest.raises(GameError):
        nash_equilibrium(ones)


def test_hurwitz_checks():
    assert is_hurwitz(-np.eye(3))
    assert not is_hurwitz(np.diag([-1.0, 0.5]))
    assert not is_hurwitz(np.zeros((2, 2)))
    with pytest.raises(GameError):
        is_hurwitz(np.zeros((2, 3)))
