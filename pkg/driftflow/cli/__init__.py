from .experiment import (
    Check,
    ExperimentConfig,
    RunReport,
    load_config,
    parse_config_text,
    run,
)
from .main import main
from .presets import list_presets, reproduce
from .sweep import sweep

__all__ = [
    'Check',
    'ExperimentConfig',
    'RunReport',
    'load_config',
    'parse_config_text',
    'run',
    'sweep',
    'reproduce',
    'list_presets',
    'main',
]
