from typing import Tuple

import numpy as np

from ..common.errors import ConfigError
from ..optimizers import GameStepConfig
from ..problems import Problem
from ..problems.two_player import _check_split
from ..problems.zoo import log_sigmoid_derivatives
from ..utils import as_vector
from .config import PAYOFFS, SAME_TIME, TIMINGS, ZERO_SUM

# (loss weight, |grad_phi E|^2 weight, |grad_theta E|^2 weight) for one player
Weights = Tuple[float, float, float]


def modified_loss_weights(
    cfg: GameStepConfig, payoff: str = ZERO_SUM, timing: str = 'standard'
) -> Tuple[Weights, Weights]:
    """
    Weights of ``E``, ``|grad_phi E|^2`` and ``|grad_theta E|^2`` in the two
    modified losses

    Examples
    --------
    >>> import driftflow as dft
    >>> cfg = dft.optimizers.GameStepConfig(h=0.4)
    >>> dft.games.modified_loss_weights(cfg)
    ((-1.0, 0.1, -0.1), (1.0, -0.1, 0.1))
    """
    if payoff not in PAYOFFS:
        raise ConfigError(f'unknown payoff {payoff!r}, expected one of {PAYOFFS}')
    if timing not in TIMINGS:
        raise ConfigError(f'unknown timing {timing!r}, expected one of {TIMINGS}')
    h, u, v = cfg.h, cfg.rate_phi, cfg.rate_theta
    alternating = cfg.mode == 'alternating'
    m, k = (cfg.m, cfg.k) if alternating else (1, 1)
    zero_sum = payoff == ZERO_SUM
    sign = -1.0 if zero_sum else 1.0

    if timing == SAME_TIME:
        cross = u * v * h / 4
        # alternation flips the sign of the second player's interaction term
        flip = -1.0 if alternating else 1.0
        phi = (sign * u, u * u * h / (4 * m), sign * cross)
        theta = (v, sign * flip * cross, v * v * h / (4 * k))
        return phi, theta

    a, b = u * h / 4, v * h / 4
    c = 1 - 2 * u / v if alternating else 1.0
    phi = (sign, a / m, sign * a)
    theta = (1.0, sign * b * c, b / k)
    return phi, theta


def _split_gradients(E: Problem, split: int, x: np.ndarray):
    g = E.grad(x)
    return g[:split], g[split:]


def zero_sum_modified_losses(
    E: Problem,
    split: int,
    point: np.ndarray,
    cfg: GameStepConfig,
    payoff: str = ZERO_SUM,
    timing: str = 'standard',
) -> Tuple[float, float]:
    """
    Modified losses of the two players at ``point``

    Parameters
    ----------
    E : Problem
        loss over the concatenation ``(phi, theta)``
    split : int
        number of coordinates owned by ``phi``
    point : ndarray
        concatenated ``(phi, theta)``
    cfg : GameStepConfig
        learning rate, player rates, mode, ``m`` and ``k``
    payoff : str, optional
        ``zero_sum`` (losses ``-E``, ``E``) or ``common_payoff`` (``E``, ``E``)
    timing : str, optional
        ``standard`` or ``same_time`` (players on a shared clock, losses
        scaled by their rates)

    Returns
    -------
    Tuple[float, float]
        ``(E_phi, E_theta)``

    Raises
    ------
    BadSplit
        ``split`` leaves one of the players empty

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.array([[0.0, 1.0], [1.0, 0.0]]))
    >>> cfg = dft.optimizers.GameStepConfig(h=0.4)
    >>> e_phi, e_theta = dft.games.zero_sum_modified_losses(E, 1, [1.0, 2.0], cfg)
    >>> round(e_theta, 12)
    1.7
    """
    split = _check_split(E, split)
    x = E.check_point(point)
    (sp, pp, qp), (st, pt, qt) = modified_loss_weights(cfg, payoff, timing)
    value = np.real(E.eval(x))
    g_phi, g_theta = _split_gradients(E, split, x)
    n_phi, n_theta = float(np.real(g_phi @ g_phi)), float(np.real(g_theta @ g_theta))
    return (
        float(sp * value + pp * n_phi + qp * n_theta),
        float(st * value + pt * n_phi + qt * n_theta),
    )


def zero_sum_modified_loss_fields(
    E: Problem,
    split: int,
    point: np.ndarray,
    cfg: GameStepConfig,
    payoff: str = ZERO_SUM,
    timing: str = 'standard',
) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``(-grad_phi E_phi, -grad_theta E_theta)`` of the modified losses, with
    ``grad |grad_phi E|^2 = 2 H (grad_phi E, 0)`` from Hessian-vector products
    """
    split = _check_split(E, split)
    x = E.check_point(point)
    (sp, pp, qp), (st, pt, qt) = modified_loss_weights(cfg, payoff, timing)
    g = E.grad(x)
    g_phi, g_theta = g[:split], g[split:]
    zeros_phi, zeros_theta = np.zeros_like(g_phi), np.zeros_like(g_theta)
    # H (g_phi, 0) and H (0, g_theta)
    h_phi = E.hvp(x, np.concatenate([g_phi, zeros_theta]))
    h_theta = E.hvp(x, np.concatenate([zeros_phi, g_theta]))
    field_phi = -(sp * g_phi + 2 * pp * h_phi[:split] + 2 * qp * h_theta[:split])
    field_theta = -(st * g_theta + 2 * pt * h_phi[split:] + 2 * qt * h_theta[split:])
    return field_phi, field_theta


def dirac_radius_derivative(phi: float, theta: float, h: float) -> float:
    """
    Growth rate ``h (theta^2 + phi^2) l'(theta phi)^2`` of ``theta^2 + phi^2``
    under the modified simultaneous DiracGAN flow

    Examples
    --------
    >>> import driftflow as dft
    >>> round(dft.games.dirac_radius_derivative(1.0, 1.0, 0.01), 7)
    0.0014466
    """
    phi, theta = float(as_vector(phi)[0]), float(as_vector(theta)[0])
    d1 = log_sigmoid_derivatives(theta * phi)[1]
    return float(h * (theta**2 + phi**2) * d1**2)
