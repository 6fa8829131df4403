from .complexity import (
    gc_depth_trend,
    gc_init_depth_study,
    gc_relu_piecewise,
    geometric_complexity,
)
from .drift import (
    DriftReport,
    OrderEstimate,
    drift_proxy,
    drift_report,
    flow_local_errors,
    game_local_errors,
    order_estimate,
    per_iteration_drift,
    rank_correlation,
    sgd_local_errors,
)

__all__ = [
    'per_iteration_drift',
    'drift_proxy',
    'OrderEstimate',
    'order_estimate',
    'DriftReport',
    'drift_report',
    'rank_correlation',
    'flow_local_errors',
    'game_local_errors',
    'sgd_local_errors',
    'geometric_complexity',
    'gc_relu_piecewise',
    'gc_init_depth_study',
    'gc_depth_trend',
]
