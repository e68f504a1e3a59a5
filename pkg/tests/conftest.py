"""Shared game fixtures used across the test suite."""

import math

import numpy as np
import pytest

from dnes import AggregativeGame, QuadraticGame


@pytest.fixture
def duopoly() -> QuadraticGame:
    """Two-firm price game; costs are negated profits."""
    return QuadraticGame(
        Q=(np.array([[10.0, -5.0], [-5.0, 0.0]]),
           np.array([[0.0, -5.0], [-5.0, 10.0]])),
        b=(np.array([-250.0, 150.0]), np.array([150.0, -150.0])),
        p=(3000.0, 0.0))


@pytest.fixture
def quad2() -> QuadraticGame:
    return QuadraticGame(
        Q=(np.array([[3.0, 1.0], [1.0, 5.0]]),
           np.array([[7.0, 2.0], [2.0, 4.0]])),
        b=(np.array([4.0, 2.0]), np.array([1.0, 6.0])),
        p=(0.0, 0.0))


@pytest.fixture
def quad2_translation() -> QuadraticGame:
    """Game whose deceived reaction curve translates instead of rotating."""
    return QuadraticGame(
        Q=(np.array([[3.0, 1.0], [1.0, 1.0 / 3.0]]),
           np.array([[1.0, 2.0], [2.0, 4.0]])),
        b=(np.array([7.0, 4.0 / 3.0]), np.array([3.0, 6.0])),
        p=(0.0, 0.0))


@pytest.fixture
def quad2_immune(quad2_translation) -> QuadraticGame:
    """Same pseudogradient, but (b1)_2 raised to make player 1 immune."""
    return QuadraticGame(
        Q=quad2_translation.Q,
        b=(np.array([7.0, 7.0 / 3.0]), quad2_translation.b[1]),
        p=(0.0, 0.0))


@pytest.fixture
def quad3() -> QuadraticGame:
    return QuadraticGame(
        Q=(np.array([[0.7, 0.25, -0.1], [0.25, 0.6, 0.05],
                     [-0.1, 0.05, 0.9]]),
           np.array([[0.7, -0.15, 0.05], [-0.15, 0.8, -0.1],
                     [0.05, -0.1, 0.2]]),
           np.array([[-0.15, 0.0, 0.125], [0.0, 0.1, 0.05],
                     [0.125, 0.05, 0.35]])),
        b=(np.array([2.0, 2.0, -3.0]), np.array([-1.0, -3.0, 3.0]),
           np.array([2.0, 7.0, -3.0])),
        p=(0.0, 0.0, 0.0))


@pytest.fixture
def agg2() -> AggregativeGame:
    c1 = (lambda x: x ** 4 + x ** 2,
          lambda x: 4 * x ** 3 + 2 * x,
          lambda x: 12 * x ** 2 + 2.0)
    c2 = (lambda x: math.exp(x) + x ** 2,
          lambda x: math.exp(x) + 2 * x,
          lambda x: math.exp(x) + 2.0)
    return AggregativeGame(c=(c1, c2), kappa=(2.0, 2.0),
                           alpha=np.array([[0.0, 2.0], [1.1, 0.0]]))
