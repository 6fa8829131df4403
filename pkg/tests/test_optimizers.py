import numpy as np
import pytest
from scipy.linalg import expm

import driftflow as dft
from driftflow.common.errors import (
    ConfigError,
    Nonfinite,
    ZeroCoordinate,
    ZeroGradient,
)

opt = dft.optimizers
NO_CAP = opt.DalConfig(lr_cap=np.inf)


def test_gd_step():
    E = dft.problems.quadratic_new(np.eye(1))
    assert np.allclose(opt.gd_step(E, [1.0], 0.5), [0.5])


def test_gd_step_nonfinite():
    E = dft.problems.quadratic_new(np.eye(1))
    with pytest.raises(Nonfinite):
        opt.gd_step(E, [1.0], np.inf)


def test_momentum_without_memory_is_gd(diag14):
    theta = np.array([1.0, -2.0])
    new, v = opt.momentum_step(diag14, theta, np.zeros(2), 0.1, 0.0)
    assert np.allclose(new, opt.gd_step(diag14, theta, 0.1))
    assert np.allclose(v, new - theta)


def test_momentum_accumulates(diag14):
    theta = np.array([1.0, 0.0])
    new, v = opt.momentum_step(diag14, theta, np.array([0.5, 0.0]), 0.1, 0.9)
    assert np.allclose(v, [0.45 - 0.1, 0.0])
    assert np.allclose(new, [1.35, 0.0])


@pytest.mark.parametrize('beta', [-0.1, 1.0])
def test_momentum_rejects_beta(diag14, beta):
    with pytest.raises(ConfigError):
        opt.momentum_step(diag14, [1.0, 0.0], [0.0, 0.0], 0.1, beta)


@pytest.mark.parametrize(
    'theta, p, expected',
    [([1.0, 0.0], 1.0, 2.0), ([0.0, 1.0], 1.0, 0.5), ([0.0, 1.0], 0.5, 1.0)],
)
def test_dal_lr(diag14, theta, p, expected):
    assert opt.dal_lr(diag14, np.array(theta), opt.DalConfig(p=p)) == pytest.approx(expected)


def test_dal_lr_cap():
    E = dft.problems.quadratic_new(np.diag([0.1, 0.1]))
    assert opt.dal_lr(E, np.array([1.0, 1.0])) == 5.0
    assert opt.dal_lr(E, np.array([1.0, 1.0]), NO_CAP) == pytest.approx(20.0)


def test_dal_lr_zero_gradient(diag14):
    with pytest.raises(ZeroGradient):
        opt.dal_lr(diag14, np.zeros(2))


def test_dal_lr_fd_proxy(banana):
    theta = np.array([-0.5, 0.5])
    exact = opt.dal_lr(banana, theta, NO_CAP)
    approx = opt.dal_lr(banana, theta, opt.DalConfig(lr_cap=np.inf, proxy='fd_approx'))
    assert approx == pytest.approx(exact, rel=5e-2)


def test_dal_lr_scales_inversely_with_loss(rng):
    M = rng.normal(size=(3, 3))
    A = M @ M.T + np.eye(3)
    theta = rng.normal(size=3)
    base = opt.dal_lr(dft.problems.quadratic_new(A), theta, NO_CAP)
    scaled = opt.dal_lr(dft.problems.quadratic_new(7.0 * A), theta, NO_CAP)
    assert scaled == pytest.approx(base / 7.0)


def test_dal_step_reflects_one_dimensional_quadratic():
    E = dft.problems.quadratic_new(np.array([[2.0]]))
    assert np.allclose(opt.dal_step(E, [0.3]), [-0.3])


def test_dal_config_validation():
    with pytest.raises(ConfigError):
        opt.DalConfig(p=0.0)
    with pytest.raises(ConfigError):
        opt.DalConfig(p=1.5)
    with pytest.raises(ConfigError):
        opt.DalConfig(lr_cap=0.0)
    with pytest.raises(ConfigError):
        opt.DalConfig(proxy='secant')


def test_dal_momentum_scale(diag14):
    theta = np.array([1.0, 0.0])
    cfg = opt.DalConfig(momentum_scale=0.25)
    new, v = opt.dal_momentum_step(diag14, theta, np.zeros(2), 0.5, cfg)
    # drift is 1, so the coefficient is 0.25 * 2 = 0.5
    assert np.allclose(v, [-0.5, 0.0])
    assert np.allclose(new, [0.5, 0.0])


def test_dal_per_parameter_lr(diag14):
    theta = np.array([1.0, 1.0])
    rates = opt.dal_per_parameter_lr(diag14, theta, NO_CAP)
    drift = np.array([1.0, 16.0]) / np.sqrt(17.0) / np.sqrt(2.0)
    assert np.allclose(rates, 2.0 / drift)


def test_dal_per_parameter_zero_coordinate(diag14):
    with pytest.warns(ZeroCoordinate):
        rates = opt.dal_per_parameter_lr(diag14, np.array([1.0, 0.0]))
    assert rates[1] == 5.0
    assert rates[0] == pytest.approx(min(5.0, 2.0 * np.sqrt(2.0)))


def test_dal_per_parameter_step(diag14):
    theta = np.array([1.0, 1.0])
    rates = opt.dal_per_parameter_lr(diag14, theta)
    new = opt.dal_per_parameter_step(diag14, theta)
    assert np.allclose(new, theta - rates * np.array([1.0, 4.0]))


def test_game_sim_step(bilinear):
    cfg = opt.GameStepConfig(h=0.1)
    phi, theta = opt.game_sim_step(bilinear, [1.0], [1.0], cfg)
    assert np.allclose(phi, [1.1])
    assert np.allclose(theta, [0.9])


def test_game_alt_step(bilinear):
    cfg = opt.GameStepConfig(h=0.1, mode='alternating')
    phi, theta = opt.game_alt_step(bilinear, [1.0], [1.0], cfg)
    assert np.allclose(phi, [1.1])
    assert np.allclose(theta, [0.89])


def test_game_alt_substeps(bilinear):
    cfg = opt.GameStepConfig(h=0.1, mode='alternating', m=2, k=1)
    phi, theta = opt.game_alt_step(bilinear, [1.0], [1.0], cfg)
    # f = theta does not depend on phi, so two half steps equal one full step
    assert np.allclose(phi, [1.1])
    assert np.allclose(theta, [0.89])


def test_game_sim_step_linear_game():
    game = dft.problems.linear_game_new(0.09, 0.09)
    phi, theta = opt.game_sim_step(game, [1.0], [0.0], opt.GameStepConfig(h=0.2))
    assert np.allclose(phi, [0.982])
    assert np.allclose(theta, [-0.2])


def test_game_steppers_check_mode(bilinear):
    with pytest.raises(ConfigError):
        opt.game_sim_step(bilinear, [1.0], [1.0], opt.GameStepConfig(h=0.1, mode='alternating'))
    with pytest.raises(ConfigError):
        opt.game_alt_step(bilinear, [1.0], [1.0], opt.GameStepConfig(h=0.1))


@pytest.mark.parametrize(
    'kwargs',
    [dict(h=0.0), dict(h=0.1, rate_phi=0.0), dict(h=0.1, mode='jacobi'), dict(h=0.1, m=0)],
)
def test_game_step_config_validation(kwargs):
    with pytest.raises(ConfigError):
        opt.GameStepConfig(**kwargs)


def test_game_rk4_matches_exponential():
    game = dft.problems.linear_game_new(0.09, 0.09)
    J = np.array([[-0.09, 1.0], [-1.0, 0.09]])
    h = 0.05
    phi, theta = opt.game_rk4_step(game, [1.0], [0.5], opt.GameStepConfig(h=h))
    exact = expm(h * J) @ np.array([1.0, 0.5])
    assert np.allclose(np.r_[phi, theta], exact, atol=1e-8)


def test_game_rk4_unequal_rates_scale_players():
    game = dft.problems.linear_game_new(0.0, 0.0)
    h = 0.02
    phi, theta = opt.game_rk4_step(game, [1.0], [0.0], opt.GameStepConfig(h=h, rate_theta=2.0))
    # the flow phi' = theta, theta' = -2 phi rotates with frequency sqrt(2)
    w = np.sqrt(2.0)
    assert phi[0] == pytest.approx(np.cos(w * h), abs=1e-8)
    assert theta[0] == pytest.approx(-w * np.sin(w * h), abs=1e-8)


def test_sgd_two_step():
    batches = dft.problems.quadratic_batches([[0.0], [2.0]])
    assert np.allclose(opt.sgd_two_step(batches, [1.0], 0.1), [1.01])


def test_sgd_two_step_needs_batches():
    with pytest.raises(ValueError):
        opt.sgd_two_step([], [1.0], 0.1)


def test_train_loss():
    E = dft.problems.quadratic_new(np.eye(1))
    df = opt.train(E, [1.0], 2, h=0.5)
    assert df['loss'].tolist() == [0.5, 0.125, 0.03125]
    assert df['iter'].tolist() == [0, 1, 2]
    assert df.attrs['theta'] == [0.25]


def test_train_columns(diag14):
    df = opt.train(diag14, [1.0, 1.0], 5, h=0.1, record_eigs=True)
    assert len(df) == 6
    for column in ['iter', 'loss', '|g|', 'lr', 'lambda0', 're(sc0)', 'im(sc0)']:
        assert column in df.columns
    assert np.allclose(df['lambda0'], 4.0)
    assert df['lr'].iloc[:-1].eq(0.1).all()
    assert np.isnan(df['lr'].iloc[-1])


def test_train_dal_records_rate(diag14):
    theta0 = np.array([0.0, 1.0])
    df = opt.train(diag14, theta0, 3, rule='dal')
    assert df['lr'].iloc[0] == pytest.approx(0.5)
    assert 'sc0' not in df.columns


def test_train_momentum_rule(diag14):
    df = opt.train(diag14, [1.0, 1.0], 50, rule='momentum', h=0.1, beta=0.5)
    assert df['loss'].iloc[-1] < 1e-3 * df['loss'].iloc[0]


def test_train_validation(diag14):
    with pytest.raises(ConfigError):
        opt.train(diag14, [1.0, 1.0], 3, rule='adam', h=0.1)
    with pytest.raises(ConfigError):
        opt.train(diag14, [1.0, 1.0], 3, rule='gd')


def test_game_stepper():
    assert opt.game_stepper('sim') is opt.game_sim_step
    assert opt.game_stepper('alt') is opt.game_alt_step
    with pytest.raises(ConfigError):
        opt.game_stepper('leapfrog')

def test_train_diverges_nonfinite():
    E = dft.problems.quadratic_new(np.eye(1))
    with pytest.raises(Nonfinite) as info:
        opt.train(E, [1.0], 2000, h=3.0)
    assert info.value.where is not None


def test_run_game_sim_radius(bilinear):
    df = opt.run_game(bilinear, [1.0], [1.0], 10, opt.GameStepConfig(h=0.1))
    assert len(df) == 11
    radius = df['|(phi, theta)|'].to_numpy()
    assert np.allclose(radius[1:] / radius[:-1], np.sqrt(1.01))
    assert {'phi0', 'theta0', '|f|', '|g|'} <= set(df.columns)


def test_run_game_alt_stays_bounded(bilinear):
    cfg = opt.GameStepConfig(h=0.1, mode='alternating')
    df = opt.run_game(bilinear, [1.0], [1.0], 500, cfg)
    assert df['|(phi, theta)|'].max() < 2.0


def test_run_game_unknown_scheme(bilinear):
    with pytest.raises(ConfigError):
        opt.run_game(bilinear, [1.0], [1.0], 3, opt.GameStepConfig(h=0.1), scheme='leapfrog')


@pytest.mark.parametrize('c', [1e-3, 0.5, 7.0, 1e4])
def test_dal_lr_ignores_the_scale_of_theta(rng, c):
    M = rng.normal(size=(4, 4))
    E = dft.problems.quadratic_new(M @ M.T + np.eye(4))
    theta = rng.normal(size=4)
    base = opt.dal_lr(E, theta, NO_CAP)
    assert opt.dal_lr(E, c * theta, NO_CAP) == pytest.approx(base, rel=1e-12)
