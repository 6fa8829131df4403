from typing import Union

import numpy as np

from ..common.errors import ConfigError
from .config import DEFAULT_MLP_WIDTHS, DEFAULT_POINTS, PROBLEM_IDS
from .core import GameProblem, Problem
from .mlp import MlpSpec, make_blobs, mlp_init, mlp_new
from .two_player import dirac_gan_new, linear_game_new
from .zoo import (
    banana_new,
    cos1d_new,
    dirac_gan_loss_new,
    polynomial1d_new,
    quadratic_new,
)


def _quadratic(A=None, b=None, eigenvalues=None, dim=None, seed=0, **_):
    if A is None:
        if eigenvalues is None:
            return quadratic_new(np.eye(dim or 1), b)
        # random rotation of the requested spectrum
        rng = np.random.default_rng(seed)
        lam = np.asarray(eigenvalues, dtype=float)
        Q, _ = np.linalg.qr(rng.normal(size=(len(lam), len(lam))))
        A = (Q * lam) @ Q.T
        A = 0.5 * (A + A.T)
    return quadratic_new(np.asarray(A, dtype=float), b)


def mlp_spec_from_params(
    widths=None,
    activation='elu',
    loss='mse',
    init='standard_truncated',
    n_per_class=30,
    seed=0,
    **_,
) -> MlpSpec:
    """Seeded network on Gaussian blobs, one class per output."""
    widths = list(widths or DEFAULT_MLP_WIDTHS)
    rng = np.random.default_rng(seed)
    X, Y = make_blobs(n_per_class, widths[-1], widths[0], rng)
    weights, biases = mlp_init(widths, init, rng)
    return MlpSpec(widths, activation, weights, biases, X, Y, loss)


def _mlp(**params):
    return mlp_new(mlp_spec_from_params(**params))


_BUILDERS = {
    'quadratic_new': _quadratic,
    'banana_new': lambda **_: banana_new(),
    'cos1d_new': lambda **_: cos1d_new(),
    'polynomial1d_new': lambda coeffs=(0.0, 0.0, 0.5), **_: polynomial1d_new(coeffs),
    'dirac_gan_new': lambda l='saturating_log_sigmoid', **_: dirac_gan_new(l),
    'dirac_gan_loss_new': lambda **_: dirac_gan_loss_new(),
    'linear_game_new': lambda eps1=0.0, eps2=0.0, **_: linear_game_new(eps1, eps2),
    'mlp_new': _mlp,
}


def get_problem(problem_id: str, **params) -> Union[Problem, GameProblem]:
    """
    Build a problem of the zoo from its string id

    Parameters
    ----------
    problem_id : str
        one of ``quadratic``, ``banana``, ``cos1d``, ``polynomial``,
        ``diracgan``, ``diracloss``, ``lineargame``, ``mlp``
    **params
        builder parameters, e.g. ``eigenvalues`` for ``quadratic`` or
        ``eps1`` / ``eps2`` for ``lineargame``

    Returns
    -------
    Union[Problem, GameProblem]

    Raises
    ------
    ConfigError
        unknown id
    """
    if problem_id not in PROBLEM_IDS:
        raise ConfigError(
            f'unknown problem id {problem_id!r}, expected one of {sorted(PROBLEM_IDS)}'
        )
    return _BUILDERS[PROBLEM_IDS[problem_id]](**params)


def initial_point(problem_id: str, **params) -> np.ndarray:
    """
    Default starting point of a problem of the zoo

    Games return the concatenation ``(phi, theta)``; ``mlp`` returns the
    seeded initial weights.

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.problems.initial_point('banana')
    array([-1.,  1.])
    """
    if problem_id not in PROBLEM_IDS:
        raise ConfigError(
            f'unknown problem id {problem_id!r}, expected one of {sorted(PROBLEM_IDS)}'
        )
    if problem_id == 'mlp':
        return mlp_spec_from_params(**params).flatten()
    if problem_id == 'quadratic':
        return np.ones(get_problem(problem_id, **params).dim)
    if problem_id == 'polynomial':
        return np.ones(1)
    return np.array(DEFAULT_POINTS[problem_id], dtype=float)
