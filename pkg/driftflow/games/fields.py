from typing import Tuple

import numpy as np

from ..common.errors import ConfigError
from ..optimizers import GameStepConfig
from ..problems import GameProblem
from ..utils import as_vector

Pair = Tuple[np.ndarray, np.ndarray]


def _blocks(game: GameProblem, phi: np.ndarray, theta: np.ndarray):
    f, g = game.fields(phi, theta)
    return (
        f,
        g,
        np.atleast_2d(game.jac_phi_f(phi, theta)),
        np.atleast_2d(game.jac_theta_f(phi, theta)),
        np.atleast_2d(game.jac_phi_g(phi, theta)),
        np.atleast_2d(game.jac_theta_g(phi, theta)),
    )


def modified_game_field(
    game: GameProblem, phi: np.ndarray, theta: np.ndarray, cfg: GameStepConfig
) -> Pair:
    """
    Fields followed to second order by simultaneous or alternating Euler updates

    One update moves ``phi`` along its field for time ``rate_phi h`` and
    ``theta`` for time ``rate_theta h``.

    Parameters
    ----------
    game : GameProblem
        dynamics
    phi, theta : ndarray
        point
    cfg : GameStepConfig
        learning rate, player rates, mode, ``m`` and ``k``

    Returns
    -------
    Tuple[ndarray, ndarray]
        simultaneous: ``f - (rate_phi h / 2)(J_phi_f f + J_theta_f g)``,
        ``g - (rate_theta h / 2)(J_phi_g f + J_theta_g g)``; alternating
        scales the self terms by ``1/m``, ``1/k`` and the ``J_phi_g f``
        term by ``1 - 2 rate_phi / rate_theta``

    Examples
    --------
    >>> import driftflow as dft
    >>> game = dft.problems.linear_game_new()
    >>> cfg = dft.optimizers.GameStepConfig(h=0.1, mode='alternating')
    >>> dft.games.modified_game_field(game, [1.0], [1.0], cfg)
    (array([1.05]), array([-1.05]))
    """
    phi, theta = as_vector(phi), as_vector(theta)
    f, g, A, B, C, D = _blocks(game, phi, theta)
    a, b = cfg.lr_phi / 2, cfg.lr_theta / 2
    if cfg.mode == 'simultaneous':
        return f - a * (A @ f + B @ g), g - b * (C @ f + D @ g)
    c = 1 - 2 * cfg.rate_phi / cfg.rate_theta
    return f - a * (A @ f / cfg.m + B @ g), g - b * (c * (C @ f) + D @ g / cfg.k)


def modified_game_field_same_time(
    game: GameProblem,
    phi: np.ndarray,
    theta: np.ndarray,
    h: float,
    rate_phi: float = 1.0,
    rate_theta: float = 1.0,
    mode: str = 'simultaneous',
    m: int = 1,
    k: int = 1,
) -> Pair:
    """
    Modified fields when both players share one physical clock and move with
    ``rate_phi f`` and ``rate_theta g``

    Simultaneous: ``rate_phi f - (h/2)(rate_phi^2 J_phi_f f + rate_phi rate_theta J_theta_f g)``
    and ``rate_theta g - (h/2)(rate_phi rate_theta J_phi_g f + rate_theta^2 J_theta_g g)``.
    Alternating divides the self terms by ``m``, ``k`` and flips the sign of
    the ``J_phi_g f`` term.

    Examples
    --------
    >>> import driftflow as dft
    >>> game = dft.problems.linear_game_new()
    >>> dft.games.modified_game_field_same_time(game, [1.0], [1.0], 0.1, 2.0, 1.0)
    (array([2.1]), array([-0.9]))
    """
    if mode not in ('simultaneous', 'alternating'):
        raise ConfigError(f'unknown mode {mode!r}')
    phi, theta = as_vector(phi), as_vector(theta)
    f, g, A, B, C, D = _blocks(game, phi, theta)
    u, v = rate_phi, rate_theta
    if mode == 'simultaneous':
        field_phi = u * f - h / 2 * (u * u * (A @ f) + u * v * (B @ g))
        field_theta = v * g - h / 2 * (u * v * (C @ f) + v * v * (D @ g))
    else:
        field_phi = u * f - h / 2 * (u * u / m * (A @ f) + u * v * (B @ g))
        field_theta = v * g - h / 2 * (-u * v * (C @ f) + v * v / k * (D @ g))
    return field_phi, field_theta


def rk4_modified_game_field(
    game: GameProblem, phi: np.ndarray, theta: np.ndarray, cfg: GameStepConfig
) -> Pair:
    """
    Second-order fields of two-player RK4 with player rates ``rate_phi``, ``rate_theta``

    ``f + (h/2)(rate_theta - rate_phi) J_theta_f g`` and
    ``g + (h/2)(rate_phi - rate_theta) J_phi_g f``; with equal rates the
    drift vanishes at this order. Times follow ``modified_game_field``.
    """
    phi, theta = as_vector(phi), as_vector(theta)
    f, g, _, B, C, _ = _blocks(game, phi, theta)
    delta = cfg.rate_theta - cfg.rate_phi
    return f + cfg.h / 2 * delta * (B @ g), g - cfg.h / 2 * delta * (C @ f)
