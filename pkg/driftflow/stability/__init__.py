from .config import Regime, Verdict
from .jacobians import (
    GameJacobianReport,
    dirac_regularized_jacobian,
    drift_matrix,
    game_modified_jacobian,
    game_pf_eigs,
    linear_game_converges,
    linear_game_lr_bound,
)
from .regimes import (
    StabilityReport,
    classify,
    critical_jacobian_eigs,
    exp_stable,
    stability_report,
)

__all__ = [
    'Regime',
    'Verdict',
    'classify',
    'StabilityReport',
    'stability_report',
    'critical_jacobian_eigs',
    'exp_stable',
    'GameJacobianReport',
    'drift_matrix',
    'game_modified_jacobian',
    'dirac_regularized_jacobian',
    'linear_game_converges',
    'linear_game_lr_bound',
    'game_pf_eigs',
]
