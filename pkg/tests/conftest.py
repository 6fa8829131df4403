import numpy as np
import pytest

import driftflow as dft


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def diag14():
    """``E = 1/2 theta^T diag(1, 4) theta``"""
    return dft.problems.quadratic_new(np.diag([1.0, 4.0]))


@pytest.fixture
def banana():
    return dft.problems.banana_new()


@pytest.fixture
def bilinear():
    """Zero-sum game of ``E = phi * theta``: ``f = theta``, ``g = -phi``."""
    E = dft.problems.quadratic_new(np.array([[0.0, 1.0], [1.0, 0.0]]))
    return dft.problems.zero_sum_game_from_loss(E, 1)


@pytest.fixture
def random_game(rng):
    """Zero-sum game of a random quadratic over ``(phi, theta)`` in R^2 x R^2."""
    M = rng.normal(size=(4, 4))
    E = dft.problems.quadratic_new(0.5 * (M + M.T), rng.normal(size=4))
    return dft.problems.zero_sum_game_from_loss(E, 2)


def small_relu_spec(rng, widths=(2, 4, 2), activation='relu'):
    weights = [rng.normal(size=(o, i)) for i, o in zip(widths, widths[1:])]
    biases = [rng.normal(size=o) for o in widths[1:]]
    return dft.problems.MlpSpec(list(widths), activation, weights, biases)
