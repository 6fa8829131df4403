from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..calculus import eig_general
from ..common.errors import NotEquilibrium
from ..flows import pf_coefficient
from ..optimizers import GameStepConfig
from ..problems import GameProblem
from ..utils import as_vector, to_jsonable
from .config import EQUILIBRIUM_TOL, Verdict
from .regimes import verdict_from_eigenvalues


@dataclass(frozen=True, eq=False)
class GameJacobianReport:
    """
    Linearization ``J_mod = J - (h / 2) K`` of a modified two-player flow.

    ``J`` is the Jacobian of the unmodified system and ``K`` the drift matrix.
    """

    J: np.ndarray
    K: np.ndarray
    J_mod: np.ndarray
    eigenvalues: np.ndarray
    trace: float
    det: float
    verdict: Verdict
    h: float
    mode: Optional[str] = None

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                'J': self.J,
                'K': self.K,
                'J_mod': self.J_mod,
                'eigenvalues': self.eigenvalues,
                'trace': self.trace,
                'det': self.det,
                'verdict': self.verdict,
                'h': self.h,
                'mode': self.mode,
            }
        )


def _report(J: np.ndarray, K: np.ndarray, h: float, mode: Optional[str]) -> GameJacobianReport:
    J_mod = J - h / 2 * K
    if J_mod.shape == (2, 2):
        a, b, c, d = J_mod.ravel()
        trace, det = float(a + d), float(a * d - b * c)
    else:
        trace, det = float(np.trace(J_mod)), float(np.linalg.det(J_mod))
    eigenvalues = eig_general(J_mod).eigenvalues
    return GameJacobianReport(
        J=J,
        K=K,
        J_mod=J_mod,
        eigenvalues=eigenvalues,
        trace=trace,
        det=det,
        verdict=verdict_from_eigenvalues(eigenvalues),
        h=float(h),
        mode=mode,
    )


def drift_matrix(J: np.ndarray, dim_phi: int, cfg: GameStepConfig) -> np.ndarray:
    """
    Drift matrix ``K`` of the Euler updates at an equilibrium

    Simultaneous updates give ``diag(rate_phi, rate_theta) J^2``; alternating
    updates scale the self blocks by ``1/m``, ``1/k`` and the ``J_phi g``
    interaction by ``1 - 2 rate_phi / rate_theta``.
    """
    s = dim_phi
    A, B = J[:s, :s], J[:s, s:]
    C, D = J[s:, :s], J[s:, s:]
    if cfg.mode == 'simultaneous':
        top = np.hstack([A @ A + B @ C, A @ B + B @ D])
        bottom = np.hstack([C @ A + D @ C, C @ B + D @ D])
    else:
        c = 1 - 2 * cfg.rate_phi / cfg.rate_theta
        top = np.hstack([A @ A / cfg.m + B @ C, A @ B / cfg.m + B @ D])
        bottom = np.hstack([c * C @ A + D @ C / cfg.k, c * C @ B + D @ D / cfg.k])
    return np.vstack([cfg.rate_phi * top, cfg.rate_theta * bottom])


def game_modified_jacobian(
    game: GameProblem, point: Tuple[np.ndarray, np.ndarray], cfg: GameStepConfig
) -> GameJacobianReport:
    """
    Stability of the modified flow of simultaneous or alternating updates at
    an equilibrium

    Parameters
    ----------
    game : GameProblem
        dynamics
    point : Tuple[ndarray, ndarray]
        ``(phi, theta)`` with ``|f|, |g| < 1e-8``
    cfg : GameStepConfig
        learning rate, player rates, mode, ``m`` and ``k``

    Returns
    -------
    GameJacobianReport

    Raises
    ------
    NotEquilibrium
        the fields do not vanish at ``point``

    Examples
    --------
    >>> import driftflow as dft
    >>> game = dft.problems.linear_game_new(0.09, 0.09)
    >>> cfg = dft.optimizers.GameStepConfig(h=0.2)
    >>> report = dft.stability.game_modified_jacobian(game, ([0.0], [0.0]), cfg)
    >>> round(report.trace, 5), report.verdict.value
    (0.19838, 'unstable')
    """
    phi, theta = as_vector(point[0]), as_vector(point[1])
    f, g = game.fields(phi, theta)
    residual = max(float(np.linalg.norm(f)), float(np.linalg.norm(g)))
    if residual >= EQUILIBRIUM_TOL:
        raise NotEquilibrium(f'the point is not an equilibrium, |(f, g)| = {residual:.3g}')
    J = np.real(game.jacobian(phi, theta))
    K = drift_matrix(J, game.dim_phi, cfg)
    return _report(J, K, cfg.h, cfg.mode)


def dirac_regularized_jacobian(
    h: float,
    rate_phi: float = 1.0,
    rate_theta: float = 1.0,
    gamma: float = 0.0,
    zeta: float = 0.0,
    l_prime_0: float = 0.5,
) -> GameJacobianReport:
    """
    Modified Jacobian of simultaneous DiracGAN updates with explicit
    regularization ``gamma |grad_theta E|^2`` and ``zeta |grad_phi E|^2``

    ``J_mod = [[(h rate_phi / 2 - 2 gamma) l'^2, l'], [-l', (h rate_theta / 2 - 2 zeta) l'^2]]``,
    asymptotically stable when ``gamma > h rate_phi / 4`` and ``zeta > h rate_theta / 4``.
    """
    l2 = l_prime_0**2
    J = np.array([[-2 * gamma * l2, l_prime_0], [-l_prime_0, -2 * zeta * l2]])
    K = np.diag([-rate_phi * l2, -rate_theta * l2])
    return _report(J, K, h, 'simultaneous')


def linear_game_converges(lam: complex, h: float) -> bool:
    """
    ``True`` when ``(1 - h x)^2 + (h y)^2 < 1`` for ``lam = x + iy``, an
    eigenvalue of ``H = -J``

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.stability.linear_game_converges(0.1 + 2j, 0.5)
    False
    """
    lam = complex(lam)
    return bool((1 - h * lam.real) ** 2 + (h * lam.imag) ** 2 < 1)


def linear_game_lr_bound(lam: complex) -> float:
    """
    Largest learning rate for which ``lam`` passes the convergence test,
    ``(1/x) 2 / (1 + (y/x)^2)``; ``0`` when ``x <= 0``.
    """
    lam = complex(lam)
    x, y = lam.real, lam.imag
    if x <= 0:
        return 0.0
    return float(2 / x / (1 + (y / x) ** 2))


def game_pf_eigs(J: np.ndarray, h: float) -> np.ndarray:
    """
    Eigenvalues ``log(1 - h lambda) / h`` of the principal flow of the linear
    system ``x' = J x`` discretized with step ``h``, for ``H = -J``.

    Raises ``Defective`` when ``H`` is not diagonalizable and
    ``SingularArgument`` when some ``h lambda = 1``.
    """
    H = -np.atleast_2d(np.asarray(J))
    lam = eig_general(H, vectors=True).eigenvalues
    return pf_coefficient(h * lam) * lam
