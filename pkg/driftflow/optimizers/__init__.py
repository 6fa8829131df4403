from .loops import run_game, train
from .steppers import (
    DalConfig,
    GameStepConfig,
    dal_lr,
    dal_momentum_step,
    dal_per_parameter_lr,
    dal_per_parameter_step,
    dal_step,
    game_alt_step,
    game_rk4_step,
    game_sim_step,
    game_stepper,
    gd_step,
    hessian_normalized_gradient,
    momentum_step,
    sgd_two_step,
)

__all__ = [
    'DalConfig',
    'GameStepConfig',
    'gd_step',
    'momentum_step',
    'hessian_normalized_gradient',
    'dal_lr',
    'dal_step',
    'dal_momentum_step',
    'dal_per_parameter_lr',
    'dal_per_parameter_step',
    'game_sim_step',
    'game_alt_step',
    'game_rk4_step',
    'game_stepper',
    'sgd_two_step',
    'train',
    'run_game',
]
