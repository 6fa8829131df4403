import signal
import threading
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Sequence, Union

import multitasking
import pandas as pd
from tqdm import tqdm

from ..common.config import MagicConfig
from ..common.errors import ConfigError
from ..config import MAX_WORKERS
from .experiment import ExperimentConfig, RunReport, run

if threading.current_thread() is threading.main_thread():
    signal.signal(signal.SIGINT, multitasking.killall)


def sweep(
    config: ExperimentConfig, key: str, values: Sequence[Any], **kwargs
) -> Union[Dict[str, RunReport], pd.DataFrame]:
    """
    Repeat a run for every value of one config key

    Parameters
    ----------
    config : ExperimentConfig
        base run
    key : str
        flat key such as ``optimizer.h`` or ``problem.dim``
    values : list
        values taken by ``key``
    **kwargs
        ``progress=False`` hides the progress bar; ``return_df=True`` returns
        one row per value instead, holding the scalar summary entries

    Returns
    -------
    dict
        ``'<key>=<value>'`` -> RunReport, written under ``<out>/<key>=<value>/``;
        a run that raised has a summary holding only ``error``

    Raises
    ------
    ConfigError
        ``key`` or one of the values is invalid
    """
    base = config.to_flat()
    configs: Dict[str, ExperimentConfig] = {}
    for value in values:
        label = f'{key}={value}'
        flat = {**base, key: value, 'run.out': str(Path(config.out) / label)}
        configs[label] = replace(
            ExperimentConfig.from_flat(flat), output_format=config.output_format
        )

    reports: Dict[str, RunReport] = {}
    errors: Dict[str, Exception] = {}
    pbar = tqdm(total=len(configs), disable=not kwargs.get(MagicConfig.PROGRESS, True))

    @multitasking.task
    def start(label: str, cfg: ExperimentConfig):
        while len(multitasking.get_active_tasks()) > MAX_WORKERS:
            time.sleep(0.05)
        try:
            reports[label] = run(cfg)
        except Exception as e:
            errors[label] = e
        pbar.update(1)
        pbar.set_description_str(f'Processing => {label}')

    for label, cfg in configs.items():
        start(label, cfg)
    multitasking.wait_for_tasks()
    pbar.close()
    for label, error in errors.items():
        if isinstance(error, ConfigError):
            raise error
        cfg = configs[label]
        summary = {'error': f'{type(error).__name__}: {error}'}
        reports[label] = RunReport(cfg.to_flat(), Path(cfg.out), summary)
    reports = {label: reports[label] for label in configs}
    if kwargs.get(MagicConfig.RETURN_DF):
        rows = []
        for value in values:
            label = f'{key}={value}'
            rows.append({'run': label, key: value, **_scalars(reports[label].summary)})
        return pd.DataFrame(rows)
    return reports


def _scalars(summary: Dict[str, Any]) -> Dict[str, Any]:
    scalar = (bool, int, float, str)
    return {k: v for k, v in summary.items() if v is None or isinstance(v, scalar)}
