from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats
from tqdm import tqdm

from ..common.config import MagicConfig
from ..common.errors import DegenerateFit, ZeroGradient
from ..flows import FlowKind, IntegratorConfig, march, solve_flow
from ..games import SgdModifiedLossInput, sgd_modified_flow_field
from ..optimizers import GameStepConfig, game_stepper, gd_step, sgd_two_step
from ..problems import GameProblem, Problem
from ..utils import as_vector, rename_dataframe_and_series, to_jsonable
from .config import DRIFT_FIELDS, MIN_FIT_PAIRS, ZERO_GRAD_TOL


def per_iteration_drift(
    problem: Problem,
    theta: np.ndarray,
    h: float,
    flow: FlowKind,
    config: IntegratorConfig = IntegratorConfig(),
) -> float:
    """
    Distance between one gradient-descent step and the flow run for time ``h``

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(1))
    >>> dft.measures.per_iteration_drift(E, [0.0], 0.1, dft.flows.FlowKind('ngf'))
    0.0
    """
    theta = np.real(as_vector(theta)).astype(float)
    flowed = solve_flow(flow, problem, theta, h, config)
    return float(np.linalg.norm(gd_step(problem, theta, h) - flowed))


def drift_proxy(problem: Problem, theta: np.ndarray) -> Tuple[float, float]:
    """
    ``(|H g|, |H g / |g||)`` at ``theta``

    Raises ``ZeroGradient`` when ``|g| < 1e-12``.

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.diag([1.0, 4.0]))
    >>> dft.measures.drift_proxy(E, np.array([0.0, 1.0]))
    (16.0, 4.0)
    """
    theta = problem.check_point(theta)
    g = problem.grad(theta)
    norm = float(np.linalg.norm(g))
    if norm < ZERO_GRAD_TOL:
        raise ZeroGradient('the gradient vanishes, |H g_hat| is undefined')
    hg = float(np.linalg.norm(problem.hvp(theta, g)))
    return hg, hg / norm


@dataclass(frozen=True)
class OrderEstimate:
    h: np.ndarray
    errors: np.ndarray
    slope: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                'h': self.h,
                'errors': self.errors,
                'slope': self.slope,
                'intercept': self.intercept,
                'r2': self.r2,
            }
        )


def order_estimate(pairs: Sequence[Tuple[float, float]]) -> OrderEstimate:
    """
    Least-squares slope of ``log(error)`` against ``log(h)``

    Parameters
    ----------
    pairs : Sequence[Tuple[float, float]]
        at least four ``(h, error)`` pairs, all positive

    Returns
    -------
    OrderEstimate

    Raises
    ------
    DegenerateFit
        too few pairs or all ``h`` equal

    Examples
    --------
    >>> import driftflow as dft
    >>> fit = dft.measures.order_estimate([(h, 7 * h**3) for h in (0.1, 0.05, 0.025, 0.0125)])
    >>> round(fit.slope, 6)
    3.0
    """
    data = np.asarray(pairs, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < MIN_FIT_PAIRS:
        raise DegenerateFit(f'need at least {MIN_FIT_PAIRS} (h, error) pairs')
    if np.any(data <= 0) or not np.all(np.isfinite(data)):
        raise ValueError('h values and errors must be positive and finite')
    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    if np.ptp(x) == 0:
        raise DegenerateFit('all h values are equal')
    fit = stats.linregress(x, y)
    r2 = float(fit.rvalue**2) if np.isfinite(fit.rvalue) else 1.0
    return OrderEstimate(
        h=data[:, 0],
        errors=data[:, 1],
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=min(max(r2, 0.0), 1.0),
    )


def flow_local_errors(
    problem: Problem,
    theta: np.ndarray,
    flow: str,
    h_values: Sequence[float],
    substeps: int = 100,
) -> List[Tuple[float, float]]:
    """
    ``(h, |gd_step - flow(h)|)`` for each ``h``; the flow ``flow`` is
    instantiated with the same ``h`` it is compared at and integrated with
    ``substeps`` RK4 steps.
    """
    pairs = []
    for h in h_values:
        kind = FlowKind.parse(flow, h)
        config = IntegratorConfig(substep=h / substeps, scheme='rk4')
        pairs.append((float(h), per_iteration_drift(problem, theta, h, kind, config)))
    return pairs


GameField = Callable[[GameProblem, np.ndarray, np.ndarray, GameStepConfig], tuple]


def game_local_errors(
    game: GameProblem,
    phi: np.ndarray,
    theta: np.ndarray,
    h_values: Sequence[float],
    scheme: str = 'sim',
    field: Optional[GameField] = None,
    rate_phi: float = 1.0,
    rate_theta: float = 1.0,
    substeps: int = 100,
) -> List[Tuple[float, float]]:
    """
    Local errors of one two-player step against a continuous model

    The model ``field(game, phi, theta, cfg)`` (the unmodified game by
    default) is integrated with RK4 for time ``rate_phi h`` to read ``phi``
    and for time ``rate_theta h`` to read ``theta``.

    Parameters
    ----------
    game : GameProblem
        dynamics
    phi, theta : ndarray
        starting point
    h_values : Sequence[float]
        learning rates
    scheme : str, optional
        ``sim``, ``alt`` or ``rk4``
    field : Callable, optional
        e.g. ``modified_game_field`` or ``rk4_modified_game_field``
    rate_phi, rate_theta : float, optional
        player rates
    substeps : int, optional
        RK4 substeps of the reference integration

    Returns
    -------
    List[Tuple[float, float]]
        ``(h, error)`` pairs
    """
    phi, theta = as_vector(phi).astype(float), as_vector(theta).astype(float)
    s = len(phi)
    mode = 'alternating' if scheme == 'alt' else 'simultaneous'
    step = game_stepper(scheme)
    pairs = []
    for h in h_values:
        cfg = GameStepConfig(h=h, rate_phi=rate_phi, rate_theta=rate_theta, mode=mode)

        def joint(x, cfg=cfg):
            if field is None:
                f, g = game.fields(x[:s], x[s:])
            else:
                f, g = field(game, x[:s], x[s:], cfg)
            return np.concatenate([as_vector(f), as_vector(g)])

        x0 = np.concatenate([phi, theta])
        reference = []
        for horizon in (cfg.lr_phi, cfg.lr_theta):
            config = IntegratorConfig(substep=horizon / substeps, scheme='rk4')
            reference.append(march(joint, x0, horizon, config))
        phi_ref, theta_ref = reference[0][:s], reference[1][s:]
        phi_new, theta_new = step(game, phi, theta, cfg)
        error = np.sqrt(
            np.sum(np.abs(phi_new - phi_ref) ** 2) + np.sum(np.abs(theta_new - theta_ref) ** 2)
        )
        pairs.append((float(h), float(error)))
    return pairs


def sgd_local_errors(
    batches: List[Problem],
    theta: np.ndarray,
    h_values: Sequence[float],
    substeps: int = 100,
) -> List[Tuple[float, float]]:
    """
    ``(h, |n sgd steps - modified flow(n h)|)`` with the reference point
    fixed at ``theta``
    """
    theta = as_vector(theta).astype(float)
    n = len(batches)
    pairs = []
    for h in h_values:
        data = SgdModifiedLossInput(batches, theta, h)

        def field(x, data=data):
            return sgd_modified_flow_field(data.with_theta(x))

        horizon = n * h
        config = IntegratorConfig(substep=horizon / substeps, scheme='rk4')
        flowed = march(field, theta, horizon, config)
        stepped = sgd_two_step(batches, theta, h)
        pairs.append((float(h), float(np.linalg.norm(stepped - flowed))))
    return pairs


@dataclass(frozen=True, eq=False)
class DriftReport:
    """
    Per-iteration drift of a gradient-descent run against a flow.

    ``hg_hat`` is NaN where ``|g| < 1e-12``; ``spearman`` ranks ``drift``
    against ``hg_hat`` over the finite entries.
    """

    drift: np.ndarray
    hg: np.ndarray
    hg_hat: np.ndarray
    grad_norm: np.ndarray
    loss: np.ndarray
    spearman: float
    h: float
    flow: str

    def __len__(self) -> int:
        return len(self.drift)

    @rename_dataframe_and_series(DRIFT_FIELDS)
    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                'iter': np.arange(1, len(self) + 1),
                'loss': self.loss,
                'drift': self.drift,
                'hg': self.hg,
                'hg_hat': self.hg_hat,
                'grad_norm': self.grad_norm,
            }
        )

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                'h': self.h,
                'flow': self.flow,
                'n_iters': len(self),
                'spearman': self.spearman,
                'max_drift': float(np.max(self.drift)) if len(self) else None,
                'mean_drift': float(np.mean(self.drift)) if len(self) else None,
            }
        )


def rank_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Spearman correlation over the entries finite in both, NaN if undefined."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    keep = np.isfinite(a) & np.isfinite(b)
    if keep.sum() < 3 or np.ptp(a[keep]) == 0 or np.ptp(b[keep]) == 0:
        return float('nan')
    return float(stats.spearmanr(a[keep], b[keep]).correlation)


def drift_report(
    problem: Problem,
    theta0: np.ndarray,
    h: float,
    n_iters: int,
    flow: Optional[FlowKind] = None,
    config: IntegratorConfig = IntegratorConfig(),
    **kwargs,
) -> DriftReport:
    """
    Run gradient descent and measure the drift of every iteration

    Parameters
    ----------
    problem : Problem
        objective
    theta0 : ndarray
        initial parameters
    h : float
        learning rate
    n_iters : int
        number of iterations
    flow : FlowKind, optional
        continuous model, NGF by default
    config : IntegratorConfig, optional
        integrator of the flow
    **kwargs
        ``progress=True`` shows a progress bar

    Returns
    -------
    DriftReport
        drift of iteration ``n`` compares ``theta_n`` with the flow started
        at ``theta_{n-1}``; proxies are taken at ``theta_{n-1}``
    """
    flow = flow or FlowKind('ngf')
    theta = np.real(as_vector(theta0)).astype(float)
    rows = []
    for _ in tqdm(range(n_iters), disable=not kwargs.get(MagicConfig.PROGRESS, False)):
        g = problem.grad(theta)
        norm = float(np.linalg.norm(g))
        hg = float(np.linalg.norm(problem.hvp(theta, g)))
        rows.append(
            (
                per_iteration_drift(problem, theta, h, flow, config),
                hg,
                hg / norm if norm >= ZERO_GRAD_TOL else np.nan,
                norm,
                float(np.real(problem.eval(theta))),
            )
        )
        theta = gd_step(problem, theta, h)
    drift, hg, hg_hat, grad_norm, loss = np.array(rows, dtype=float).reshape(-1, 5).T
    return DriftReport(
        drift=drift,
        hg=hg,
        hg_hat=hg_hat,
        grad_norm=grad_norm,
        loss=loss,
        spearman=rank_correlation(drift, hg_hat),
        h=float(h),
        flow=str(flow),
    )
