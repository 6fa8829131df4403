from .fields import (
    FlowKind,
    alpha,
    flow_field,
    grad_dot_u_prediction,
    pf_coefficient,
    pf_frozen_step,
    pf_quadratic_closed_form,
)
from .integrator import IntegratorConfig, Trajectory, integrate, march, solve_flow

__all__ = [
    'FlowKind',
    'IntegratorConfig',
    'Trajectory',
    'alpha',
    'pf_coefficient',
    'flow_field',
    'integrate',
    'solve_flow',
    'march',
    'pf_quadratic_closed_form',
    'pf_frozen_step',
    'grad_dot_u_prediction',
]
