from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..common.config import MagicConfig
from ..common.errors import ConfigError, Nonfinite
from ..config import CSV_FLOAT_FORMAT
from ..problems import Problem
from ..utils import as_vector, rename_dataframe_and_series, split_complex_columns
from .config import DEFAULT_MAX_STEPS, DEFAULT_SUBSTEP, SCHEMES, TRAJECTORY_FIELDS
from .fields import FlowKind, _spectrum, flow_field, pf_coefficient


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Fixed-step integration settings.

    ``record_every`` keeps every n-th substep (the final state is always
    kept); ``0`` keeps only the initial and final states.
    """

    substep: float = DEFAULT_SUBSTEP
    scheme: str = 'euler'
    max_steps: int = DEFAULT_MAX_STEPS
    record_every: int = 1

    def __post_init__(self):
        if not self.substep > 0:
            raise ConfigError(f'substep must be positive, got {self.substep}')
        if self.scheme not in SCHEMES:
            raise ConfigError(f'unknown scheme {self.scheme!r}, expected one of {SCHEMES}')
        if self.max_steps < 1 or self.record_every < 0:
            raise ConfigError('max_steps must be >= 1 and record_every >= 0')


@dataclass(eq=False)
class Trajectory:
    times: np.ndarray
    states: List[np.ndarray]
    diagnostics: List[dict] = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @rename_dataframe_and_series(TRAJECTORY_FIELDS)
    @split_complex_columns
    def to_frame(self) -> pd.DataFrame:
        """One row per recorded time; complex coordinates split into re/im."""
        columns = {'t': np.asarray(self.times, dtype=float)}
        states = np.asarray(self.states)
        for i in range(states.shape[1]):
            columns[f'theta{i}'] = states[:, i].astype(complex)
        if self.diagnostics:
            for key in self.diagnostics[0]:
                columns[key] = [d[key] for d in self.diagnostics]
        return pd.DataFrame(columns)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        return path


def _step(field_fn: Callable, x: np.ndarray, dt: float, scheme: str) -> np.ndarray:
    if scheme == 'euler':
        return x + dt * field_fn(x)
    k1 = field_fn(x)
    k2 = field_fn(x + dt / 2 * k1)
    k3 = field_fn(x + dt / 2 * k2)
    k4 = field_fn(x + dt * k3)
    return x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def march(
    field_fn: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    horizon: float,
    config: IntegratorConfig = IntegratorConfig(),
    on_record: Optional[Callable[[float, np.ndarray], None]] = None,
    progress: bool = False,
) -> np.ndarray:
    """
    Fixed-step integration of ``x' = field_fn(x)`` up to ``horizon``

    The substep is shrunk to ``horizon / n`` with ``n = ceil(horizon / substep)``
    so that the final time equals ``horizon``.

    Parameters
    ----------
    field_fn : Callable
        vector field
    x0 : ndarray
        initial state
    horizon : float
        final time, positive
    config : IntegratorConfig, optional
        scheme and substep
    on_record : Callable, optional
        called with ``(t, x)`` at every recorded substep
    progress : bool, optional
        show a tqdm bar

    Returns
    -------
    ndarray
        state at ``horizon``

    Raises
    ------
    Nonfinite
        the state became NaN or infinite, ``where`` holds the time
    """
    if not horizon > 0:
        raise ConfigError(f'horizon must be positive, got {horizon}')
    n = max(1, int(np.ceil(horizon / config.substep - 1e-9)))
    if n > config.max_steps:
        raise ConfigError(
            f'{n} substeps needed, more than max_steps={config.max_steps}'
        )
    dt = horizon / n
    x = as_vector(x0)
    every = config.record_every
    for i in tqdm(range(1, n + 1), disable=not progress, leave=False):
        x = _step(field_fn, x, dt, config.scheme)
        t = i * dt
        if not np.all(np.isfinite(x)):
            raise Nonfinite(f'state became non-finite at t={t:.6g}', where=t)
        if on_record is not None and (i == n or (every and i % every == 0)):
            on_record(t, x)
    return x


def integrate(
    kind: FlowKind,
    problem: Problem,
    theta0: np.ndarray,
    horizon: float,
    config: IntegratorConfig = IntegratorConfig(),
    **kwargs,
) -> Trajectory:
    """
    Integrate a flow from ``theta0`` for time ``horizon``

    Parameters
    ----------
    kind : FlowKind
        flow model
    problem : Problem
        objective
    theta0 : ndarray
        initial condition (kept as ``states[0]``)
    horizon : float
        final time
    config : IntegratorConfig, optional
        Euler with substep ``5e-5`` by default
    **kwargs
        ``record_eigs=True`` adds the leading eigenvalue ``lambda0`` and its
        stability coefficient ``sc0`` to the diagnostics, ``progress=True``
        shows a progress bar

    Returns
    -------
    Trajectory
        recorded times, states and diagnostics (``Re(E)``, ``|g|``)

    Raises
    ------
    Nonfinite
        the state, field or loss became NaN or infinite

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(1))
    >>> traj = dft.flows.integrate(dft.flows.FlowKind('ngf'), E, [1.0], 1.0)
    >>> round(float(traj.final[0].real), 3)
    0.368
    """
    record_eigs = kwargs.get(MagicConfig.RECORD_EIGS, False)
    theta0 = as_vector(theta0)
    if not np.isrealobj(theta0) or kind.kind in ('pf', 'pf_non_principal'):
        theta0 = theta0.astype(complex)

    times: List[float] = []
    states: List[np.ndarray] = []
    diagnostics: List[dict] = []

    def record(t: float, theta: np.ndarray):
        g = problem.grad(theta)
        loss = np.real(problem.eval(theta))
        if not np.isfinite(loss) or not np.all(np.isfinite(g)):
            raise Nonfinite(f'loss or gradient became non-finite at t={t:.6g}', where=t)
        row = {'loss': float(loss), 'grad_norm': float(np.linalg.norm(g))}
        if record_eigs:
            spectrum = _spectrum(problem, theta, g)
            lam0 = spectrum.eigenvalues[0]
            u0 = spectrum.eigenvectors[:, 0]
            row['lambda0'] = lam0
            if kind.h is None:
                row['sc0'] = complex('nan')
            else:
                row['sc0'] = complex(pf_coefficient(kind.h * lam0) * (g @ u0))
        times.append(t)
        states.append(np.array(theta, copy=True))
        diagnostics.append(row)

    record(0.0, theta0)
    march(
        lambda theta: flow_field(kind, problem, theta),
        theta0,
        horizon,
        config,
        on_record=record,
        progress=kwargs.get(MagicConfig.PROGRESS, False),
    )
    return Trajectory(np.asarray(times), states, diagnostics)


def solve_flow(
    kind: FlowKind,
    problem: Problem,
    theta0: np.ndarray,
    horizon: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> np.ndarray:
    """Final state of ``integrate`` without recording the path."""
    theta0 = as_vector(theta0)
    if kind.kind in ('pf', 'pf_non_principal'):
        theta0 = theta0.astype(complex)
    return march(lambda theta: flow_field(kind, problem, theta), theta0, horizon, config)
