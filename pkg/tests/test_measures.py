import json

import numpy as np
import pandas as pd
import pytest

import driftflow as dft
from driftflow.common.errors import (
    DegenerateFit,
    NotPiecewiseLinear,
    ShapeMismatch,
    ZeroGradient,
)
from driftflow.flows import FlowKind, IntegratorConfig

from .conftest import small_relu_spec

ms = dft.measures
FAST = IntegratorConfig(substep=1e-3, scheme='rk4', record_every=0)


def _spd(rng, dim):
    M = rng.normal(size=(dim, dim))
    return M @ M.T + np.eye(dim)


def test_per_iteration_drift_at_minimum():
    E = dft.problems.quadratic_new(np.eye(1))
    assert ms.per_iteration_drift(E, [0.0], 0.1, FlowKind('ngf')) == 0.0


def test_per_iteration_drift_ngf():
    E = dft.problems.quadratic_new(np.eye(1))
    drift = ms.per_iteration_drift(E, [1.0], 0.1, FlowKind('ngf'), FAST)
    assert drift == pytest.approx(np.exp(-0.1) - 0.9, abs=1e-10)


def test_per_iteration_drift_vanishes_for_principal_flow(diag14):
    drift = ms.per_iteration_drift(diag14, [1.0, 1.0], 0.1, FlowKind('pf', 0.1), FAST)
    assert drift < 1e-9


def test_drift_proxy(diag14):
    assert ms.drift_proxy(diag14, np.array([0.0, 1.0])) == pytest.approx((16.0, 4.0))
    with pytest.raises(ZeroGradient):
        ms.drift_proxy(diag14, np.zeros(2))


def test_order_estimate():
    fit = ms.order_estimate([(h, 7 * h**3) for h in (0.1, 0.05, 0.025, 0.0125)])
    assert fit.slope == pytest.approx(3.0)
    assert fit.intercept == pytest.approx(np.log(7.0))
    assert fit.r2 == pytest.approx(1.0)
    json.dumps(fit.to_dict())


def test_order_estimate_rejects_bad_input():
    with pytest.raises(DegenerateFit):
        ms.order_estimate([(0.1, 1.0), (0.05, 0.5), (0.025, 0.25)])
    with pytest.raises(DegenerateFit):
        ms.order_estimate([(0.1, e) for e in (1.0, 2.0, 3.0, 4.0)])
    with pytest.raises(ValueError):
        ms.order_estimate([(0.1, 1.0), (0.05, 0.0), (0.025, 0.25), (0.01, 0.1)])


@pytest.mark.parametrize('flow, order', [('ngf', 2.0), ('igr', 3.0)])
def test_flow_local_errors_order(banana, flow, order):
    h_values = [5e-3 * 2.0**-k for k in range(4, 8)]
    pairs = ms.flow_local_errors(banana, np.array([-0.5, 0.5]), flow, h_values)
    assert ms.order_estimate(pairs).slope == pytest.approx(order, abs=0.25)


def test_game_local_errors_order(random_game, rng):
    phi, theta = rng.normal(size=2), rng.normal(size=2)
    h_values = [0.1 * 2.0**-k for k in range(4, 8)]
    plain = ms.game_local_errors(random_game, phi, theta, h_values)
    modified = ms.game_local_errors(
        random_game, phi, theta, h_values, field=dft.games.modified_game_field
    )
    assert ms.order_estimate(plain).slope == pytest.approx(2.0, abs=0.25)
    assert ms.order_estimate(modified).slope == pytest.approx(3.0, abs=0.25)


def test_game_local_errors_alternating(random_game, rng):
    phi, theta = rng.normal(size=2), rng.normal(size=2)
    h_values = [0.1 * 2.0**-k for k in range(4, 8)]
    pairs = ms.game_local_errors(
        random_game,
        phi,
        theta,
        h_values,
        scheme='alt',
        field=dft.games.modified_game_field,
        rate_theta=2.0,
    )
    assert ms.order_estimate(pairs).slope == pytest.approx(3.0, abs=0.25)


def test_sgd_local_errors_order(rng):
    batches = [dft.problems.quadratic_new(_spd(rng, 2), rng.normal(size=2)) for _ in range(2)]
    h_values = [0.1 * 2.0**-k for k in range(2, 7)]
    pairs = ms.sgd_local_errors(batches, rng.normal(size=2), h_values)
    assert ms.order_estimate(pairs).slope == pytest.approx(3.0, abs=0.3)


def test_rank_correlation():
    assert ms.rank_correlation([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert ms.rank_correlation([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert np.isnan(ms.rank_correlation([1, 2], [3, 4]))
    assert np.isnan(ms.rank_correlation([1, 1, 1], [1, 2, 3]))


def test_drift_report(diag14):
    report = ms.drift_report(diag14, [1.0, 1.0], 0.1, 20, config=FAST)
    assert len(report) == 20
    assert report.flow == 'ngf'
    # drift and |H g_hat| both shrink as the iterate settles along lambda = 1
    assert report.spearman > 0.99
    assert report.hg_hat[0] == pytest.approx(np.sqrt(257.0 / 17.0))
    df = report.to_frame()
    assert list(df.columns) == ['iter', 'loss', 'drift', '|Hg|', '|H g_hat|', '|g|']
    assert df['iter'].tolist() == list(range(1, 21))
    summary = report.to_dict()
    assert summary['n_iters'] == 20
    json.dumps(summary)


def test_drift_report_at_minimum_has_no_proxy(diag14):
    report = ms.drift_report(diag14, [0.0, 0.0], 0.1, 3, config=FAST)
    assert np.all(np.isnan(report.hg_hat))
    assert np.allclose(report.drift, 0.0)
    assert np.isnan(report.spearman)


def test_geometric_complexity_identity():
    spec = dft.problems.MlpSpec([2, 2], 'identity', [np.eye(2)], [np.zeros(2)])
    assert ms.geometric_complexity(spec, np.ones((3, 2))) == pytest.approx(2.0)


def test_geometric_complexity_linear_network(rng):
    widths = [3, 4, 5, 2]
    spec = small_relu_spec(rng, widths, 'identity')
    product = spec.weights[2] @ spec.weights[1] @ spec.weights[0]
    X = rng.normal(size=(7, 3))
    assert ms.geometric_complexity(spec, X) == pytest.approx(np.sum(product**2))
    assert ms.gc_relu_piecewise(spec, X) == pytest.approx(np.sum(product**2))


def test_gc_relu_piecewise_matches_jacobians(rng):
    spec = small_relu_spec(rng, (2, 4, 3, 2))
    X = rng.normal(size=(50, 2))
    assert ms.gc_relu_piecewise(spec, X) == pytest.approx(ms.geometric_complexity(spec, X))


def test_gc_relu_piecewise_rejects_smooth_activation(rng):
    spec = small_relu_spec(rng, (2, 3, 1), 'tanh')
    with pytest.raises(NotPiecewiseLinear):
        ms.gc_relu_piecewise(spec, rng.normal(size=(4, 2)))


def test_geometric_complexity_needs_inputs(rng):
    spec = small_relu_spec(rng)
    with pytest.raises(ShapeMismatch):
        ms.geometric_complexity(spec)
    with pytest.raises(ShapeMismatch):
        ms.geometric_complexity(spec, np.zeros((0, 2)))


def test_gc_init_depth_study_frame():
    study = ms.gc_init_depth_study(8, [2, 3, 4], seeds=(0, 1), n_samples=10)
    assert list(study.columns) == ['depth', 'mean GC', 'std GC', 'seeds']
    assert study['depth'].tolist() == [2, 3, 4]
    assert study['seeds'].eq(2).all()
    assert (study['mean GC'] > 0).all()


def test_gc_init_depth_study_is_seeded():
    first = ms.gc_init_depth_study(8, [2, 3], seeds=(3,), n_samples=10)
    second = ms.gc_init_depth_study(8, [2, 3], seeds=(3,), n_samples=10)
    pd.testing.assert_frame_equal(first, second)


def test_gc_depth_trend():
    falling = pd.DataFrame({'depth': [3, 2, 4], 'mean GC': [0.5, 1.0, 0.2]})
    rising = pd.DataFrame({'depth': [2, 3, 4], 'mean GC': [0.5, 1.0, 0.2]})
    assert ms.gc_depth_trend(falling)
    assert not ms.gc_depth_trend(rising)


def test_geometric_complexity_ignores_an_inserted_identity_layer(rng):
    spec = small_relu_spec(rng, (3, 5, 2))
    W0, W1 = spec.weights
    b0, b1 = spec.biases
    deeper = dft.problems.MlpSpec(
        [3, 5, 5, 2], 'relu', [W0, np.eye(5), W1], [b0, np.zeros(5), b1]
    )
    X = rng.normal(size=(40, 3))
    gc = ms.geometric_complexity(spec, X)
    assert ms.geometric_complexity(deeper, X) == pytest.approx(gc, rel=1e-12)
    assert ms.gc_relu_piecewise(deeper, X) == pytest.approx(gc, rel=1e-12)


def _banana_h(banana, theta, h_lambda):
    lam0 = np.linalg.eigvalsh(banana.hess(theta))[-1]
    return h_lambda / lam0


@pytest.mark.parametrize('h_lambda', [1.2, 1.6, 1.9])
def test_drift_ranks_with_hg_hat_on_oscillating_banana(banana, h_lambda):
    theta0 = np.array([-0.5, 0.5])
    h = _banana_h(banana, theta0, h_lambda)
    config = IntegratorConfig(substep=h / 20, scheme='rk4', record_every=0)
    report = ms.drift_report(banana, theta0, h, 500, FlowKind('ngf'), config)
    assert report.spearman >= 0.8


def test_principal_flow_drifts_less_than_igr_on_banana(banana):
    theta0 = np.array([-0.5, 0.5])
    h = _banana_h(banana, theta0, 0.1)
    config = IntegratorConfig(substep=h / 50, scheme='rk4', record_every=0)
    pf = ms.drift_report(banana, theta0, h, 20, FlowKind('pf', h), config)
    igr = ms.drift_report(banana, theta0, h, 20, FlowKind('igr', h), config)
    assert 5 * np.sum(pf.drift) <= np.sum(igr.drift)
