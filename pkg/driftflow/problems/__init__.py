from .core import GameProblem, Problem
from .mlp import (
    MlpSpec,
    input_jacobians,
    layer_activations,
    make_blobs,
    mlp_forward,
    mlp_init,
    mlp_new,
)
from .registry import get_problem, initial_point, mlp_spec_from_params
from .two_player import (
    common_payoff_game_from_loss,
    dirac_gan_new,
    linear_game_new,
    zero_sum_game_from_loss,
)
from .zoo import (
    banana_new,
    cos1d_new,
    dirac_gan_loss_new,
    polynomial1d_new,
    quadratic_batches,
    quadratic_new,
)

__all__ = [
    'Problem',
    'GameProblem',
    'MlpSpec',
    'quadratic_new',
    'quadratic_batches',
    'banana_new',
    'cos1d_new',
    'polynomial1d_new',
    'mlp_new',
    'mlp_init',
    'mlp_forward',
    'layer_activations',
    'input_jacobians',
    'make_blobs',
    'dirac_gan_new',
    'dirac_gan_loss_new',
    'linear_game_new',
    'zero_sum_game_from_loss',
    'common_payoff_game_from_loss',
    'get_problem',
    'initial_point',
    'mlp_spec_from_params',
]
