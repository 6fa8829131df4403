from .fields import (
    modified_game_field,
    modified_game_field_same_time,
    rk4_modified_game_field,
)
from .losses import (
    dirac_radius_derivative,
    modified_loss_weights,
    zero_sum_modified_loss_fields,
    zero_sum_modified_losses,
)
from .regularizers import RegScheme, regularized_game, scheme_coefficients
from .sgd import SgdModifiedLossInput, sgd_modified_flow_field, sgd_modified_loss

__all__ = [
    'modified_game_field',
    'modified_game_field_same_time',
    'rk4_modified_game_field',
    'modified_loss_weights',
    'zero_sum_modified_losses',
    'zero_sum_modified_loss_fields',
    'dirac_radius_derivative',
    'RegScheme',
    'scheme_coefficients',
    'regularized_game',
    'SgdModifiedLossInput',
    'sgd_modified_loss',
    'sgd_modified_flow_field',
]
