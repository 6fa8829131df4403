from typing import Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..calculus import eig_sym, leading_eig_hvp
from ..calculus.config import LANCZOS_MIN_DIM
from ..common.config import MagicConfig
from ..common.errors import ConfigError, Nonfinite
from ..flows import alpha
from ..problems import GameProblem, Problem
from ..utils import as_vector, rename_dataframe_and_series, split_complex_columns
from .config import GAME_FIELDS, RULES, TRAIN_FIELDS
from .steppers import (
    DalConfig,
    GameStepConfig,
    dal_lr,
    dal_momentum_step,
    dal_per_parameter_lr,
    dal_per_parameter_step,
    dal_step,
    game_stepper,
    gd_step,
    momentum_step,
)


def _leading(problem: Problem, theta: np.ndarray, g: np.ndarray):
    if problem.dim >= LANCZOS_MIN_DIM:
        spectrum = leading_eig_hvp(lambda v: problem.hvp(theta, v), problem.dim, np.real(g))
    else:
        spectrum = eig_sym(np.real(problem.hess(theta)), ref_grad=np.real(g), top_k=1)
    return float(np.real(spectrum.eigenvalues[0])), np.real(spectrum.eigenvectors[:, 0])


@rename_dataframe_and_series(TRAIN_FIELDS)
@split_complex_columns
def train(
    problem: Problem,
    theta0: np.ndarray,
    n_iters: int,
    rule: str = 'gd',
    h: Optional[float] = None,
    beta: float = 0.0,
    dal: Optional[DalConfig] = None,
    **kwargs,
) -> pd.DataFrame:
    """
    Full-batch training loop

    Parameters
    ----------
    problem : Problem
        objective
    theta0 : ndarray
        initial parameters
    n_iters : int
        number of updates
    rule : str, optional
        one of ``gd``, ``momentum``, ``dal``, ``dal_momentum``,
        ``dal_per_parameter``
    h : float, optional
        learning rate, required by ``gd`` and ``momentum``
    beta : float, optional
        momentum coefficient
    dal : DalConfig, optional
        settings of the DAL rules
    **kwargs
        ``record_eigs=True`` adds the leading Hessian eigenvalue ``lambda0``
        (and ``sc0`` for fixed learning rates), ``progress=True`` shows a bar

    Returns
    -------
    DataFrame
        ``n_iters + 1`` rows: ``iter``, ``loss``, ``|g|``, ``lr`` (rate used
        to leave the iterate, empty on the last row) and the optional
        spectral columns; ``attrs['theta']`` lists the final parameters

    Raises
    ------
    Nonfinite
        the iterate became NaN or infinite, ``where`` is the iteration

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(1))
    >>> df = dft.optimizers.train(E, [1.0], 2, h=0.5)
    >>> df['loss'].tolist()
    [0.5, 0.125, 0.03125]
    """
    if rule not in RULES:
        raise ConfigError(f'unknown rule {rule!r}, expected one of {RULES}')
    if rule in ('gd', 'momentum') and (h is None or not h > 0):
        raise ConfigError(f'rule {rule!r} needs a positive learning rate h')
    dal = dal or DalConfig()
    record_eigs = kwargs.get(MagicConfig.RECORD_EIGS, False)

    theta = as_vector(theta0).astype(float)
    v = np.zeros_like(theta)
    rows = []

    def record(i: int, theta: np.ndarray) -> dict:
        g = problem.grad(theta)
        loss = float(np.real(problem.eval(theta)))
        if not np.isfinite(loss) or not np.all(np.isfinite(g)):
            raise Nonfinite(f'loss or gradient became non-finite at iteration {i}', where=i)
        row = {'iter': i, 'loss': loss, 'grad_norm': float(np.linalg.norm(g))}
        if record_eigs:
            lam0, u0 = _leading(problem, theta, g)
            row['lambda0'] = lam0
            if rule == 'gd':
                row['sc0'] = complex(alpha('pf', h * lam0) * float(g @ u0))
        return row

    for i in tqdm(range(n_iters), disable=not kwargs.get(MagicConfig.PROGRESS, False)):
        row = record(i, theta)
        try:
            if rule == 'gd':
                row['lr'] = h
                theta = gd_step(problem, theta, h)
            elif rule == 'momentum':
                row['lr'] = h
                theta, v = momentum_step(problem, theta, v, h, beta)
            elif rule == 'dal':
                row['lr'] = dal_lr(problem, theta, dal)
                theta = dal_step(problem, theta, dal)
            elif rule == 'dal_momentum':
                row['lr'] = dal_lr(problem, theta, dal)
                theta, v = dal_momentum_step(problem, theta, v, beta, dal)
            else:
                row['lr'] = float(np.mean(dal_per_parameter_lr(problem, theta, dal)))
                theta = dal_per_parameter_step(problem, theta, dal)
        except Nonfinite as e:
            raise Nonfinite(f'{e} at iteration {i + 1}', where=i + 1) from e
        rows.append(row)
    last = record(n_iters, theta)
    last['lr'] = np.nan
    rows.append(last)

    df = pd.DataFrame(rows)
    df.attrs['theta'] = theta.tolist()
    return df


@rename_dataframe_and_series(GAME_FIELDS)
def run_game(
    game: GameProblem,
    phi0: np.ndarray,
    theta0: np.ndarray,
    n_steps: int,
    cfg: GameStepConfig,
    scheme: Optional[str] = None,
) -> pd.DataFrame:
    """
    Iterate a two-player stepper

    Parameters
    ----------
    game : GameProblem
        dynamics
    phi0, theta0 : ndarray
        initial players
    n_steps : int
        number of steps
    cfg : GameStepConfig
        rates and mode
    scheme : str, optional
        ``sim``, ``alt`` or ``rk4``; defaults to the scheme matching
        ``cfg.mode``

    Returns
    -------
    DataFrame
        ``n_steps + 1`` rows with the players, the joint radius and the field
        norms
    """
    if scheme is None:
        scheme = 'sim' if cfg.mode == 'simultaneous' else 'alt'
    step = game_stepper(scheme)
    phi, theta = as_vector(phi0).astype(float), as_vector(theta0).astype(float)
    rows = []

    def record(i):
        f, g = game.fields(phi, theta)
        row = {'iter': i}
        row.update({f'phi{j}': x for j, x in enumerate(phi)})
        row.update({f'theta{j}': x for j, x in enumerate(theta)})
        row['radius'] = float(np.sqrt(phi @ phi + theta @ theta))
        row['f_norm'] = float(np.linalg.norm(f))
        row['g_norm'] = float(np.linalg.norm(g))
        rows.append(row)

    record(0)
    for i in range(1, n_steps + 1):
        try:
            phi, theta = step(game, phi, theta, cfg)
        except Nonfinite as e:
            raise Nonfinite(f'{e} at step {i}', where=i) from e
        record(i)
    return pd.DataFrame(rows)
