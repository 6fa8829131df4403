import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..common.errors import ConfigError, ZeroCoordinate, ZeroGradient
from ..problems import GameProblem, Problem
from ..utils import as_vector, check_finite
from .config import (
    DAL_FD_FALLBACK_EPS,
    DAL_FD_GRAD_LIMIT,
    DAL_FD_PROBE,
    DAL_LR_CAP,
    DAL_PROXIES,
    GAME_MODES,
    GAME_SCHEMES,
    ZERO_COORD_TOL,
    ZERO_GRAD_TOL,
)


@check_finite
def gd_step(problem: Problem, theta: np.ndarray, h: float) -> np.ndarray:
    """
    One gradient-descent step ``theta - h grad E(theta)``

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(1))
    >>> dft.optimizers.gd_step(E, np.array([1.0]), 0.5)
    array([0.5])
    """
    theta = as_vector(theta)
    return theta - h * problem.grad(theta)


@check_finite
def momentum_step(
    problem: Problem, theta: np.ndarray, v: np.ndarray, h: float, beta: float
) -> Tuple[np.ndarray, np.ndarray]:
    """``v' = beta v - h grad E(theta)``, ``theta' = theta + v'``."""
    if not 0 <= beta < 1:
        raise ConfigError(f'momentum must satisfy 0 <= beta < 1, got {beta}')
    theta = as_vector(theta)
    v = beta * as_vector(v) - h * problem.grad(theta)
    return theta + v, v


@dataclass(frozen=True)
class DalConfig:
    """
    Drift-adjusted learning rate ``min(lr_cap, 2 / |H g_hat|^p)``.

    ``fd_eps`` overrides the probe step of the ``fd_approx`` proxy.
    ``momentum_scale`` multiplies the rate used as the momentum coefficient;
    ``0.25`` gives ``1 / (2 |H g_hat|)``.
    """

    p: float = 1.0
    lr_cap: float = DAL_LR_CAP
    proxy: str = 'exact_hvp'
    fd_eps: Optional[float] = None
    momentum_scale: float = 1.0

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ConfigError(f'DAL power must lie in (0, 1], got {self.p}')
        if not self.lr_cap > 0:
            raise ConfigError(f'lr_cap must be positive, got {self.lr_cap}')
        if self.proxy not in DAL_PROXIES:
            raise ConfigError(f'unknown proxy {self.proxy!r}, expected one of {DAL_PROXIES}')


def hessian_normalized_gradient(
    problem: Problem, theta: np.ndarray, cfg: DalConfig = DalConfig()
) -> np.ndarray:
    """
    ``H g / |g|``, exactly or from ``(grad(theta + eps g) - grad(theta)) / eps``.

    Raises ``ZeroGradient`` when ``|g| < 1e-12``.
    """
    theta = as_vector(theta)
    g = problem.grad(theta)
    norm = float(np.linalg.norm(g))
    if norm < ZERO_GRAD_TOL:
        raise ZeroGradient('the gradient vanishes, the drift direction is undefined')
    if cfg.proxy == 'exact_hvp':
        return np.real(problem.hvp(theta, g / norm))
    if cfg.fd_eps is not None:
        eps = cfg.fd_eps
    elif norm > DAL_FD_GRAD_LIMIT:
        eps = DAL_FD_FALLBACK_EPS
    else:
        eps = DAL_FD_PROBE / norm
    return (problem.grad(theta + eps * g) - g) / (eps * norm)


def dal_lr(problem: Problem, theta: np.ndarray, cfg: DalConfig = DalConfig()) -> float:
    """
    Drift-adjusted learning rate at ``theta``

    Parameters
    ----------
    problem : Problem
        objective
    theta : ndarray
        real point with a non-zero gradient
    cfg : DalConfig, optional
        power, cap and proxy

    Returns
    -------
    float
        ``min(lr_cap, 2 / |H g_hat|^p)``

    Raises
    ------
    ZeroGradient
        ``|g| < 1e-12``

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.diag([1.0, 4.0]))
    >>> dft.optimizers.dal_lr(E, np.array([0.0, 1.0]))
    0.5
    """
    drift = float(np.linalg.norm(hessian_normalized_gradient(problem, theta, cfg)))
    if drift == 0.0:
        return float(cfg.lr_cap)
    return float(min(cfg.lr_cap, 2.0 / drift**cfg.p))


@check_finite
def dal_step(problem: Problem, theta: np.ndarray, cfg: DalConfig = DalConfig()) -> np.ndarray:
    theta = as_vector(theta)
    return theta - dal_lr(problem, theta, cfg) * problem.grad(theta)


@check_finite
def dal_momentum_step(
    problem: Problem,
    theta: np.ndarray,
    v: np.ndarray,
    beta: float,
    cfg: DalConfig = DalConfig(),
) -> Tuple[np.ndarray, np.ndarray]:
    """Momentum whose gradient coefficient is the capped DAL rate."""
    if not 0 <= beta < 1:
        raise ConfigError(f'momentum must satisfy 0 <= beta < 1, got {beta}')
    theta = as_vector(theta)
    drift = float(np.linalg.norm(hessian_normalized_gradient(problem, theta, cfg)))
    rate = np.inf if drift == 0.0 else cfg.momentum_scale * 2.0 / drift**cfg.p
    coefficient = min(cfg.lr_cap, rate)
    v = beta * as_vector(v) - coefficient * problem.grad(theta)
    return theta + v, v


def dal_per_parameter_lr(
    problem: Problem, theta: np.ndarray, cfg: DalConfig = DalConfig()
) -> np.ndarray:
    """
    Coordinate-wise rates ``min(lr_cap, 2 / |(H g_hat / sqrt(D))_i|^p)``.

    Coordinates below ``1e-12`` get ``lr_cap`` and emit a ``ZeroCoordinate``
    warning.
    """
    theta = as_vector(theta)
    drift = np.abs(hessian_normalized_gradient(problem, theta, cfg)) / np.sqrt(len(theta))
    tiny = drift < ZERO_COORD_TOL
    if np.any(tiny):
        warnings.warn(
            f'{int(tiny.sum())} drift coordinate(s) vanished, using lr_cap', ZeroCoordinate
        )
    safe = np.where(tiny, 1.0, drift)
    return np.where(tiny, cfg.lr_cap, np.minimum(cfg.lr_cap, 2.0 / safe**cfg.p))


@check_finite
def dal_per_parameter_step(
    problem: Problem, theta: np.ndarray, cfg: DalConfig = DalConfig()
) -> np.ndarray:
    theta = as_vector(theta)
    return theta - dal_per_parameter_lr(problem, theta, cfg) * problem.grad(theta)


@dataclass(frozen=True)
class GameStepConfig:
    """
    Two-player Euler settings.

    Player rates are ``rate_phi * h`` and ``rate_theta * h``; in alternating
    mode ``phi`` takes ``m`` sub-steps of ``rate_phi * h / m`` before
    ``theta`` takes ``k`` sub-steps of ``rate_theta * h / k``.
    """

    h: float
    rate_phi: float = 1.0
    rate_theta: float = 1.0
    mode: str = 'simultaneous'
    m: int = 1
    k: int = 1

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigError(f'h must be positive, got {self.h}')
        if not (self.rate_phi > 0 and self.rate_theta > 0):
            raise ConfigError('player rates must be positive')
        if self.mode not in GAME_MODES:
            raise ConfigError(f'unknown mode {self.mode!r}, expected one of {GAME_MODES}')
        if self.m < 1 or self.k < 1:
            raise ConfigError('m and k must be positive integers')

    @property
    def lr_phi(self) -> float:
        return self.rate_phi * self.h

    @property
    def lr_theta(self) -> float:
        return self.rate_theta * self.h


@check_finite
def game_sim_step(
    game: GameProblem, phi: np.ndarray, theta: np.ndarray, cfg: GameStepConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simultaneous Euler: both players move from the old point

    Examples
    --------
    >>> import driftflow as dft
    >>> game = dft.problems.linear_game_new(0.09, 0.09)
    >>> cfg = dft.optimizers.GameStepConfig(h=0.2)
    >>> dft.optimizers.game_sim_step(game, [1.0], [0.0], cfg)
    (array([0.982]), array([-0.2]))
    """
    if cfg.mode != 'simultaneous':
        raise ConfigError('game_sim_step needs mode="simultaneous"')
    phi, theta = as_vector(phi), as_vector(theta)
    f, g = game.fields(phi, theta)
    return phi + cfg.lr_phi * f, theta + cfg.lr_theta * g


@check_finite
def game_alt_step(
    game: GameProblem, phi: np.ndarray, theta: np.ndarray, cfg: GameStepConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """``m`` sub-steps of ``phi`` against the old ``theta``, then ``k`` of ``theta``."""
    if cfg.mode != 'alternating':
        raise ConfigError('game_alt_step needs mode="alternating"')
    phi, theta = as_vector(phi), as_vector(theta)
    for _ in range(cfg.m):
        phi = phi + cfg.lr_phi / cfg.m * as_vector(game.f(phi, theta))
    for _ in range(cfg.k):
        theta = theta + cfg.lr_theta / cfg.k * as_vector(game.g(phi, theta))
    return phi, theta


@check_finite
def game_rk4_step(
    game: GameProblem, phi: np.ndarray, theta: np.ndarray, cfg: GameStepConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two-player Runge-Kutta 4, each stage scaled by the player's own rate.

    With equal rates this is classical RK4 on the joint field.
    """
    phi, theta = as_vector(phi), as_vector(theta)
    a, b = cfg.lr_phi, cfg.lr_theta
    k1 = game.fields(phi, theta)
    k2 = game.fields(phi + a / 2 * k1[0], theta + b / 2 * k1[1])
    k3 = game.fields(phi + a / 2 * k2[0], theta + b / 2 * k2[1])
    k4 = game.fields(phi + a * k3[0], theta + b * k3[1])
    d_phi = (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6
    d_theta = (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6
    return phi + a * d_phi, theta + b * d_theta


@check_finite
def sgd_two_step(problem_batches: List[Problem], theta: np.ndarray, h: float) -> np.ndarray:
    """
    Sequential gradient steps, one per batch loss

    Parameters
    ----------
    problem_batches : List[Problem]
        batch losses in visiting order (two for the classic two-step case)
    theta : ndarray
        starting point
    h : float
        learning rate

    Returns
    -------
    ndarray
        parameters after ``len(problem_batches)`` steps
    """
    if not problem_batches:
        raise ValueError('at least one batch is needed')
    theta = as_vector(theta)
    for batch in problem_batches:
        theta = theta - h * batch.grad(theta)
    return theta


def game_stepper(scheme: str) -> Callable:
    """The two-player step function of ``sim``, ``alt`` or ``rk4``."""
    if scheme not in GAME_SCHEMES:
        raise ConfigError(f'unknown scheme {scheme!r}, expected one of {GAME_SCHEMES}')
    return {'sim': game_sim_step, 'alt': game_alt_step, 'rk4': game_rk4_step}[scheme]
