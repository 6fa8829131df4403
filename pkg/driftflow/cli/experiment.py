import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..common.config import MagicConfig
from ..common.errors import ConfigError
from ..config import CSV_FLOAT_FORMAT, JSON_INDENT, OUTPUT_DIR
from ..flows import FlowKind, IntegratorConfig
from ..measures import drift_report
from ..optimizers import DalConfig, GameStepConfig, run_game, train
from ..problems import GameProblem, get_problem, initial_point
from ..utils import parse_scalar, to_jsonable, to_type
from .config import (
    CONFIG_KEYS,
    GAME_RULES,
    OUTPUT_FORMATS,
    PROBLEM_PARAM_PREFIX,
    SINGLE_RULES,
    SUMMARY_JSON,
    TRACE_CSV,
    TRACE_JSON,
)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One run: a problem of the zoo, an update rule and the flows whose drift
    is measured along the way.
    """

    problem: str = 'quadratic'
    problem_params: Dict[str, Any] = field(default_factory=dict)
    optimizer: str = 'gd'
    h: float = 0.1
    beta: float = 0.0
    dal_p: float = 1.0
    dal_lr_cap: float = 5.0
    dal_proxy: str = 'exact_hvp'
    rate_phi: float = 1.0
    rate_theta: float = 1.0
    m: int = 1
    k: int = 1
    flows: Tuple[str, ...] = ()
    substep: float = 5e-5
    scheme: str = 'rk4'
    n_iters: int = 100
    seed: int = 0
    out: str = str(OUTPUT_DIR)
    theta0: Optional[Tuple[float, ...]] = None
    record_eigs: bool = False
    output_format: str = 'csv'

    def __post_init__(self):
        if self.optimizer not in SINGLE_RULES + GAME_RULES:
            rules = SINGLE_RULES + GAME_RULES
            raise ConfigError(f'unknown optimizer {self.optimizer!r}, expected one of {rules}')
        if not self.h > 0:
            raise ConfigError(f'optimizer.h must be positive, got {self.h}')
        if self.n_iters < 0:
            raise ConfigError(f'run.n_iters must be non-negative, got {self.n_iters}')
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f'unknown format {self.output_format!r}')
        object.__setattr__(self, 'flows', tuple(self.flows))
        if self.theta0 is not None:
            object.__setattr__(self, 'theta0', tuple(float(x) for x in self.theta0))

    @classmethod
    def from_flat(cls, values: Dict[str, Any]) -> 'ExperimentConfig':
        """Build from ``key.path -> value`` pairs."""
        kwargs, params = {}, {}
        for key, value in values.items():
            if key in CONFIG_KEYS:
                kwargs[CONFIG_KEYS[key]] = value
            elif key.startswith(PROBLEM_PARAM_PREFIX):
                params[key[len(PROBLEM_PARAM_PREFIX) :]] = value
            else:
                raise ConfigError(f'unknown config key {key!r}')
        if isinstance(kwargs.get('flows'), str):
            kwargs['flows'] = [f.strip() for f in kwargs['flows'].split(',') if f.strip()]
        for name in ('h', 'beta', 'dal_p', 'dal_lr_cap', 'rate_phi', 'rate_theta', 'substep'):
            if name in kwargs:
                kwargs[name] = _coerce(float, kwargs[name], name)
        for name in ('m', 'k', 'n_iters', 'seed'):
            if name in kwargs:
                kwargs[name] = _coerce(int, kwargs[name], name)
        if 'out' in kwargs:
            kwargs['out'] = str(kwargs['out'])
        return cls(problem_params=params, **kwargs)

    def to_flat(self) -> Dict[str, Any]:
        inverse = {v: k for k, v in CONFIG_KEYS.items()}
        flat = {inverse[k]: v for k, v in asdict(self).items() if k in inverse}
        flat.update({PROBLEM_PARAM_PREFIX + k: v for k, v in self.problem_params.items()})
        return to_jsonable(flat)

    def with_overrides(self, **kwargs) -> 'ExperimentConfig':
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def _coerce(f, value, name):
    converted = to_type(f, value, default=_BAD)
    if converted is _BAD:
        raise ConfigError(f'{name} expects {f.__name__}, got {value!r}')
    return converted


_BAD = object()


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    Parse ``key.path = value`` lines; ``#`` starts a comment

    Examples
    --------
    >>> from driftflow.cli import parse_config_text
    >>> parse_config_text('optimizer.h = 0.5  # lr\\nrun.n_iters = 10')
    {'optimizer.h': 0.5, 'run.n_iters': 10}
    """
    values = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep or not key.strip():
            raise ConfigError(f'line {number}: expected "key = value", got {raw!r}')
        values[key.strip()] = parse_scalar(value)
    return values


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f'config file {str(path)!r} does not exist')
    return ExperimentConfig.from_flat(parse_config_text(path.read_text(encoding='utf-8')))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ''


@dataclass
class RunReport:
    """
    Outcome of a run or preset: the echoed config, the files written and the
    summary; ``checks`` holds the pass/fail predicates of a preset.
    """

    config: Dict[str, Any]
    out_dir: Path
    summary: Dict[str, Any]
    trace_path: Optional[Path] = None
    summary_path: Optional[Path] = None
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def write_trace(
    df: pd.DataFrame, out_dir: Path, output_format: str = 'csv', name: str = 'trace'
) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    if output_format == 'json':
        path = out_dir / (TRACE_JSON if name == 'trace' else f'{name}.json')
        records = to_jsonable(df.to_dict(orient='records'))
        path.write_text(json.dumps(records, indent=JSON_INDENT, sort_keys=True), encoding='utf-8')
    else:
        path = out_dir / (TRACE_CSV if name == 'trace' else f'{name}.csv')
        df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def write_summary(summary: Dict[str, Any], out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / SUMMARY_JSON
    path.write_text(
        json.dumps(to_jsonable(summary), indent=JSON_INDENT, sort_keys=True), encoding='utf-8'
    )
    return path


def _single_summary(config: ExperimentConfig, problem, theta0, df: pd.DataFrame) -> dict:
    summary = {
        'initial_loss': float(df['loss'].iloc[0]),
        'final_loss': float(df['loss'].iloc[-1]),
        'n_rows': len(df),
    }
    if 'lambda0' in df:
        lam = df['lambda0'].to_numpy()
        above = np.nonzero(lam > 2 / config.h)[0]
        summary['lambda0'] = {
            'first': float(lam[0]),
            'max': float(np.max(lam)),
            'last': float(lam[-1]),
            'first_crossing_of_2_over_h': int(above[0]) if len(above) else None,
        }
    if config.flows and config.optimizer == 'gd':
        drift = {}
        integrator = IntegratorConfig(substep=min(config.substep, config.h), scheme=config.scheme)
        for text in config.flows:
            kind = FlowKind.parse(text, config.h)
            report = drift_report(problem, theta0, config.h, config.n_iters, kind, integrator)
            df[f'drift[{kind}]'] = np.r_[np.nan, report.drift]
            drift[str(kind)] = report.to_dict()
        summary['drift'] = drift
    return summary


def _game_summary(df: pd.DataFrame, scheme: str) -> dict:
    radius = df['|(phi, theta)|'].to_numpy()
    increased = int(np.sum(np.diff(radius) > 0))
    steps = len(radius) - 1
    return {
        'initial_radius': float(radius[0]),
        'final_radius': float(radius[-1]),
        'radius_increased_steps': increased,
        'verdict': f'{scheme}: radius increased {increased}/{steps} steps',
    }


def run(config: ExperimentConfig, **kwargs) -> RunReport:
    """
    Execute a run and write its trace and summary

    Parameters
    ----------
    config : ExperimentConfig
        run description
    **kwargs
        ``progress=True`` shows progress bars

    Returns
    -------
    RunReport

    Raises
    ------
    ConfigError
        unknown problem id, rule or key
    Nonfinite
        the run diverged numerically, ``where`` is the iteration

    Examples
    --------
    >>> import driftflow as dft
    >>> cfg = dft.cli.ExperimentConfig(optimizer='gd', h=0.5, n_iters=10, out='runs/doc')
    >>> report = dft.cli.run(cfg)
    >>> report.summary['n_rows']
    11
    """
    params = dict(config.problem_params)
    params.setdefault('seed', config.seed)
    problem = get_problem(config.problem, **params)
    if config.theta0 is None:
        x0 = initial_point(config.problem, **params)
    else:
        x0 = np.asarray(config.theta0, dtype=float)
    out_dir = Path(config.out)

    if isinstance(problem, GameProblem):
        if config.optimizer not in GAME_RULES:
            raise ConfigError(f'game {config.problem!r} needs one of {GAME_RULES}')
        if len(x0) != problem.dim_phi + problem.dim_theta:
            raise ConfigError('run.theta0 must hold (phi, theta)')
        mode = 'alternating' if config.optimizer == 'alt' else 'simultaneous'
        cfg = GameStepConfig(
            config.h, config.rate_phi, config.rate_theta, mode, config.m, config.k
        )
        s = problem.dim_phi
        df = run_game(problem, x0[:s], x0[s:], config.n_iters, cfg, config.optimizer)
        summary = _game_summary(df, config.optimizer)
    else:
        if config.optimizer not in SINGLE_RULES:
            raise ConfigError(f'problem {config.problem!r} needs one of {SINGLE_RULES}')
        if len(x0) != problem.dim:
            raise ConfigError(f'run.theta0 must hold {problem.dim} values')
        dal = DalConfig(config.dal_p, config.dal_lr_cap, config.dal_proxy)
        df = train(
            problem,
            x0,
            config.n_iters,
            config.optimizer,
            h=config.h,
            beta=config.beta,
            dal=dal,
            **{
                MagicConfig.RECORD_EIGS: config.record_eigs,
                MagicConfig.PROGRESS: kwargs.get(MagicConfig.PROGRESS, False),
            },
        )
        summary = _single_summary(config, problem, x0, df)
    summary['problem'] = config.problem
    summary['optimizer'] = config.optimizer

    trace_path = write_trace(df, out_dir, config.output_format)
    summary_path = write_summary({'config': config.to_flat(), 'summary': summary}, out_dir)
    return RunReport(config.to_flat(), out_dir, summary, trace_path, summary_path)
