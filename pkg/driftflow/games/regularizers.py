from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..common.errors import ConfigError, SchemeRequiresZeroSum
from ..optimizers import GameStepConfig
from ..problems import GameProblem
from .config import (
    CO,
    DD_CANCEL_ALT,
    DD_CANCEL_ALT_DISC_ONLY,
    DD_CANCEL_SIM,
    LOCALLY_STABLE,
    ODEGAN,
    REG_SCHEMES,
    SGA,
    STRENGTHEN_SELF,
    ZERO_SUM,
    ZETA_SCHEMES,
)


@dataclass(frozen=True)
class RegScheme:
    """
    Explicit regularization of a zero-sum game

    The regularized losses are ``E_phi = -E + c1 |grad_theta E|^2 + s1 |grad_phi E|^2``
    and ``E_theta = E + c2 |grad_phi E|^2 + s2 |grad_theta E|^2``.
    ``zeta`` is the strength of ``sga``, ``co``, ``locally_stable`` and
    ``odegan``; the drift-cancelling schemes derive theirs from the
    learning rates, multiplied by ``scale``.
    """

    kind: str
    zeta: Optional[float] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in REG_SCHEMES:
            raise ConfigError(f'unknown scheme {self.kind!r}, expected one of {REG_SCHEMES}')
        if self.kind in ZETA_SCHEMES and self.zeta is None:
            raise ConfigError(f'scheme {self.kind!r} needs zeta')

    def coefficients(
        self, h: float, rate_phi: float = 1.0, rate_theta: float = 1.0
    ) -> Tuple[float, float, float, float]:
        """``(c1, c2, s1, s2)`` for learning rate ``h`` and the player rates."""
        a, b = self.scale * rate_phi * h / 4, self.scale * rate_theta * h / 4
        z = self.zeta
        table = {
            DD_CANCEL_SIM: lambda: (a, b, 0.0, 0.0),
            DD_CANCEL_ALT: lambda: (a, b * (1 - 2 * rate_phi / rate_theta), 0.0, 0.0),
            DD_CANCEL_ALT_DISC_ONLY: lambda: (a, 0.0, 0.0, 0.0),
            SGA: lambda: (-z, -z, 0.0, 0.0),
            CO: lambda: (z, z, z, z),
            STRENGTHEN_SELF: lambda: (a, b, a, b),
            LOCALLY_STABLE: lambda: (0.0, z, 0.0, 0.0),
            ODEGAN: lambda: (z, 0.0, 0.0, 0.0),
        }
        return tuple(float(c) for c in table[self.kind]())


def scheme_coefficients(
    scheme: RegScheme, h: float, rate_phi: float = 1.0, rate_theta: float = 1.0
) -> Dict[str, float]:
    """
    Resolved coefficients of a scheme

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.games.scheme_coefficients(dft.games.RegScheme('sga', -0.5), 0.1)
    {'c1': 0.5, 'c2': 0.5, 's1': 0.0, 's2': 0.0}
    """
    return dict(zip(('c1', 'c2', 's1', 's2'), scheme.coefficients(h, rate_phi, rate_theta)))


def _third_matrix(E, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    # column j is D3E[v, e_j]
    eye = np.eye(len(x))
    return np.column_stack([E.third_contraction(x, v, eye[:, j]) for j in range(len(x))])


def regularized_game(game: GameProblem, scheme: RegScheme, cfg: GameStepConfig) -> GameProblem:
    """
    Zero-sum game whose fields are the negative gradients of the regularized losses

    Parameters
    ----------
    game : GameProblem
        zero-sum game built from a loss ``E`` (``game.base``)
    scheme : RegScheme
        regularizer
    cfg : GameStepConfig
        learning rate and player rates used by the drift-cancelling schemes

    Returns
    -------
    GameProblem
        ``f = grad_phi E - 2 c1 H_phi_theta grad_theta E - 2 s1 H_phi_phi grad_phi E``,
        ``g = -grad_theta E - 2 c2 H_theta_phi grad_phi E - 2 s2 H_theta_theta grad_theta E``

    Raises
    ------
    SchemeRequiresZeroSum
        ``game`` does not come from a zero-sum loss

    Examples
    --------
    >>> import driftflow as dft
    >>> game = dft.problems.dirac_gan_new()
    >>> cfg = dft.optimizers.GameStepConfig(h=0.1)
    >>> reg = dft.games.regularized_game(game, dft.games.RegScheme('dd_cancel_sim'), cfg)
    >>> reg.extras['coefficients']
    {'c1': 0.025, 'c2': 0.025, 's1': 0.0, 's2': 0.0}
    """
    if game.structure != ZERO_SUM or game.base is None:
        raise SchemeRequiresZeroSum(f'{scheme.kind} needs a zero-sum game built from a loss')
    E, s = game.base, game.split
    c1, c2, s1, s2 = scheme.coefficients(cfg.h, cfg.rate_phi, cfg.rate_theta)
    dim = E.dim
    P_phi = np.diag(np.r_[np.ones(s), np.zeros(dim - s)])
    P_theta = np.eye(dim) - P_phi
    sign = np.r_[np.ones(s), -np.ones(dim - s)]

    def joined(phi, theta):
        return np.concatenate([phi, theta])

    def joint_field(x):
        g = E.grad(x)
        # H (0, g_theta) and H (g_phi, 0)
        h_theta = E.hvp(x, P_theta @ g)
        h_phi = E.hvp(x, P_phi @ g)
        return (
            sign * g
            - 2 * P_phi @ (c1 * h_theta + s1 * h_phi)
            - 2 * P_theta @ (c2 * h_phi + s2 * h_theta)
        )

    def joint_jacobian(x):
        g, H = E.grad(x), E.hess(x)
        a, b = P_theta @ g, P_phi @ g
        # D(H a) = D3E[a, .] + H P_theta H
        d_a = _third_matrix(E, x, a) + H @ P_theta @ H
        d_b = _third_matrix(E, x, b) + H @ P_phi @ H
        return (
            sign[:, None] * H
            - 2 * P_phi @ (c1 * d_a + s1 * d_b)
            - 2 * P_theta @ (c2 * d_b + s2 * d_a)
        )

    def block(rows, cols):
        def run(phi, theta):
            return joint_jacobian(joined(phi, theta))[rows, cols]

        return run

    first, second = slice(0, s), slice(s, dim)
    c = {'c1': c1, 'c2': c2, 's1': s1, 's2': s2}
    return GameProblem(
        dim_phi=s,
        dim_theta=dim - s,
        f=lambda phi, theta: joint_field(joined(phi, theta))[first],
        g=lambda phi, theta: joint_field(joined(phi, theta))[second],
        jac_phi_f=block(first, first),
        jac_theta_f=block(first, second),
        jac_phi_g=block(second, first),
        jac_theta_g=block(second, second),
        losses=(
            lambda phi, theta: _regularized_loss(E, s, joined(phi, theta), -1.0, c1, s1),
            lambda phi, theta: _regularized_loss(E, s, joined(phi, theta), 1.0, s2, c2),
        ),
        structure='regularized',
        base=E,
        split=s,
        supports_complex=game.supports_complex,
        name=f'{game.name}+{scheme.kind}',
        extras={'scheme': scheme.kind, 'coefficients': c},
    )


def _regularized_loss(E, s, x, sign, weight_theta, weight_phi):
    g = E.grad(x)
    g_phi, g_theta = g[:s], g[s:]
    return float(
        np.real(sign * E.eval(x) + weight_theta * g_theta @ g_theta + weight_phi * g_phi @ g_phi)
    )
