import numpy as np
import pytest

import driftflow as dft
from driftflow.common.errors import BadSplit, ConfigError, SchemeRequiresZeroSum
from driftflow.games import RegScheme, SgdModifiedLossInput
from driftflow.optimizers import GameStepConfig

gm = dft.games


def _partial(fn, x, i, eps=1e-6):
    e = np.zeros_like(x)
    e[i] = eps
    return (fn(x + e) - fn(x - e)) / (2 * eps)


def test_modified_game_field_simultaneous():
    game = dft.problems.linear_game_new()
    f, g = gm.modified_game_field(game, [1.0], [1.0], GameStepConfig(h=0.1))
    assert np.allclose(f, [1.05])
    assert np.allclose(g, [-0.95])


def test_modified_game_field_alternating():
    game = dft.problems.linear_game_new()
    cfg = GameStepConfig(h=0.1, mode='alternating')
    f, g = gm.modified_game_field(game, [1.0], [1.0], cfg)
    assert np.allclose(f, [1.05])
    assert np.allclose(g, [-1.05])


def test_modified_game_field_same_time():
    game = dft.problems.linear_game_new()
    f, g = gm.modified_game_field_same_time(game, [1.0], [1.0], 0.1, 2.0, 1.0)
    assert np.allclose(f, [2.1])
    assert np.allclose(g, [-0.9])


def test_modified_game_field_same_time_rejects_mode():
    game = dft.problems.linear_game_new()
    with pytest.raises(ConfigError):
        gm.modified_game_field_same_time(game, [1.0], [1.0], 0.1, mode='jacobi')


def test_same_time_reduces_to_standard_for_unit_rates(random_game, rng):
    phi, theta = rng.normal(size=2), rng.normal(size=2)
    for mode in ('simultaneous', 'alternating'):
        cfg = GameStepConfig(h=0.1, mode=mode)
        standard = gm.modified_game_field(random_game, phi, theta, cfg)
        same = gm.modified_game_field_same_time(random_game, phi, theta, 0.1, mode=mode)
        assert np.allclose(standard[0], same[0])
        assert np.allclose(standard[1], same[1])


def test_rk4_modified_field_equal_rates_is_exact(random_game, rng):
    phi, theta = rng.normal(size=2), rng.normal(size=2)
    f, g = gm.rk4_modified_game_field(random_game, phi, theta, GameStepConfig(h=0.1))
    f0, g0 = random_game.fields(phi, theta)
    assert np.allclose(f, f0)
    assert np.allclose(g, g0)


def test_dirac_radius_derivative_example():
    assert gm.dirac_radius_derivative(1.0, 1.0, 0.01) == pytest.approx(0.0014466, abs=1e-7)


@pytest.mark.parametrize('point', [(1.0, 1.0), (0.3, -2.0), (-1.5, 0.7)])
def test_dirac_radius_derivative_matches_modified_field(point):
    phi, theta = point
    game = dft.problems.dirac_gan_new()
    f, g = gm.modified_game_field(game, [phi], [theta], GameStepConfig(h=0.05))
    rate = 2 * (phi * f[0] + theta * g[0])
    assert gm.dirac_radius_derivative(phi, theta, 0.05) == pytest.approx(rate, rel=1e-9)


def test_modified_loss_weights():
    phi, theta = gm.modified_loss_weights(GameStepConfig(h=0.4))
    assert phi == pytest.approx((-1.0, 0.1, -0.1))
    assert theta == pytest.approx((1.0, -0.1, 0.1))


def test_modified_loss_weights_alternating():
    cfg = GameStepConfig(h=0.4, mode='alternating', m=2, k=5)
    phi, theta = gm.modified_loss_weights(cfg)
    assert phi == pytest.approx((-1.0, 0.05, -0.1))
    # the interaction weight flips sign for equal rates
    assert theta == pytest.approx((1.0, 0.1, 0.02))


def test_modified_loss_weights_validation():
    with pytest.raises(ConfigError):
        gm.modified_loss_weights(GameStepConfig(h=0.4), payoff='general_sum')
    with pytest.raises(ConfigError):
        gm.modified_loss_weights(GameStepConfig(h=0.4), timing='late')


def test_zero_sum_modified_losses_example():
    E = dft.problems.quadratic_new(np.array([[0.0, 1.0], [1.0, 0.0]]))
    e_phi, e_theta = gm.zero_sum_modified_losses(E, 1, [1.0, 2.0], GameStepConfig(h=0.4))
    assert e_theta == pytest.approx(1.7)
    assert e_phi == pytest.approx(-1.7)


def test_common_payoff_modified_losses():
    E = dft.problems.quadratic_new(np.array([[0.0, 1.0], [1.0, 0.0]]))
    cfg = GameStepConfig(h=0.4)
    e_phi, e_theta = gm.zero_sum_modified_losses(E, 1, [1.0, 2.0], cfg, payoff='common_payoff')
    # E = 2, |grad_phi E|^2 = 4, |grad_theta E|^2 = 1, both weights 0.1
    assert e_phi == pytest.approx(2.5)
    assert e_theta == pytest.approx(2.5)


def test_modified_losses_bad_split():
    E = dft.problems.quadratic_new(np.eye(2))
    with pytest.raises(BadSplit):
        gm.zero_sum_modified_losses(E, 2, [1.0, 2.0], GameStepConfig(h=0.1))


@pytest.mark.parametrize('payoff', ['zero_sum', 'common_payoff'])
@pytest.mark.parametrize('mode', ['simultaneous', 'alternating'])
def test_modified_loss_fields_are_negative_gradients(rng, payoff, mode):
    M = rng.normal(size=(4, 4))
    E = dft.problems.quadratic_new(0.5 * (M + M.T), rng.normal(size=4))
    cfg = GameStepConfig(h=0.2, rate_theta=2.0, mode=mode)
    x = rng.normal(size=4)
    field_phi, field_theta = gm.zero_sum_modified_loss_fields(E, 2, x, cfg, payoff)

    def loss(i):
        return lambda y: np.array(gm.zero_sum_modified_losses(E, 2, y, cfg, payoff)[i])

    grad_phi = [_partial(loss(0), x, i) for i in range(2)]
    grad_theta = [_partial(loss(1), x, i) for i in range(2, 4)]
    assert np.allclose(field_phi, -np.array(grad_phi), atol=1e-6)
    assert np.allclose(field_theta, -np.array(grad_theta), atol=1e-6)


def test_scheme_coefficients():
    assert gm.scheme_coefficients(RegScheme('sga', -0.5), 0.1) == {
        'c1': 0.5,
        'c2': 0.5,
        's1': 0.0,
        's2': 0.0,
    }
    sim = gm.scheme_coefficients(RegScheme('dd_cancel_sim'), 0.1)
    assert sim['c1'] == pytest.approx(0.025)
    assert sim['c2'] == pytest.approx(0.025)
    alt = gm.scheme_coefficients(RegScheme('dd_cancel_alt'), 0.1)
    assert alt['c2'] == pytest.approx(-0.025)
    scaled = gm.scheme_coefficients(RegScheme('dd_cancel_sim', scale=2.0), 0.1)
    assert scaled['c1'] == pytest.approx(0.05)
    co = gm.scheme_coefficients(RegScheme('co', 0.3), 0.1)
    assert set(co.values()) == {0.3}


def test_reg_scheme_validation():
    with pytest.raises(ConfigError):
        RegScheme('weight_decay')
    with pytest.raises(ConfigError):
        RegScheme('co')


def test_regularized_game_needs_zero_sum():
    E = dft.problems.quadratic_new(np.eye(2))
    game = dft.problems.common_payoff_game_from_loss(E, 1)
    with pytest.raises(SchemeRequiresZeroSum):
        gm.regularized_game(game, RegScheme('co', 0.1), GameStepConfig(h=0.1))


def test_regularized_game_coefficients():
    game = dft.problems.dirac_gan_new()
    reg = gm.regularized_game(game, RegScheme('dd_cancel_sim'), GameStepConfig(h=0.1))
    assert reg.extras['coefficients'] == pytest.approx(
        {'c1': 0.025, 'c2': 0.025, 's1': 0.0, 's2': 0.0}
    )
    assert reg.extras['scheme'] == 'dd_cancel_sim'


@pytest.mark.parametrize('kind, zeta', [('co', 0.2), ('sga', 0.1), ('strengthen_self', None)])
def test_regularized_fields_follow_losses(kind, zeta):
    game = dft.problems.dirac_gan_new()
    reg = gm.regularized_game(game, RegScheme(kind, zeta), GameStepConfig(h=0.1))
    phi, theta = np.array([0.4]), np.array([-0.8])
    f, g = reg.fields(phi, theta)
    loss_phi, loss_theta = reg.losses
    d_phi = _partial(lambda p: np.array(loss_phi(p, theta)), phi, 0)
    d_theta = _partial(lambda t: np.array(loss_theta(phi, t)), theta, 0)
    assert f[0] == pytest.approx(-d_phi, abs=1e-6)
    assert g[0] == pytest.approx(-d_theta, abs=1e-6)


def test_regularized_jacobian_matches_finite_differences():
    game = dft.problems.dirac_gan_new()
    reg = gm.regularized_game(game, RegScheme('co', 0.2), GameStepConfig(h=0.1))
    x = np.array([0.4, -0.8])
    J = np.real(reg.jacobian(x[:1], x[1:]))
    numeric = np.column_stack([_partial(reg.joint_field, x, j) for j in range(2)])
    assert np.allclose(J, numeric, atol=1e-6)


def test_regularized_dirac_game_converges():
    game = dft.problems.dirac_gan_new()
    cfg = GameStepConfig(h=0.1)
    reg = gm.regularized_game(game, RegScheme('dd_cancel_sim', scale=2.0), cfg)
    df = dft.optimizers.run_game(reg, [1.0], [1.0], 2000, cfg)
    radius = df['|(phi, theta)|']
    assert radius.iloc[-1] < radius.iloc[0]


def test_sgd_modified_loss_example():
    batches = dft.problems.quadratic_batches([[0.0], [2.0]])
    assert gm.sgd_modified_loss(SgdModifiedLossInput(batches, [1.0], 0.1)) == pytest.approx(0.55)


def test_sgd_modified_flow_matches_two_steps():
    batches = dft.problems.quadratic_batches([[0.0], [2.0]])
    data = SgdModifiedLossInput(batches, [1.0], 0.1)
    flow = data.theta + data.n * data.h * gm.sgd_modified_flow_field(data)
    assert np.allclose(flow, dft.optimizers.sgd_two_step(batches, [1.0], 0.1))


def test_sgd_single_batch_is_igr(diag14):
    theta = np.array([1.0, -0.5])
    data = SgdModifiedLossInput([diag14], theta, 0.1)
    igr = np.real(dft.flows.flow_field(dft.flows.FlowKind('igr', 0.1), diag14, theta))
    assert np.allclose(gm.sgd_modified_flow_field(data), igr, atol=1e-12)


def test_sgd_flow_field_is_negative_gradient(rng):
    centers = rng.normal(size=(3, 2))
    batches = dft.problems.quadratic_batches(centers, scale=1.5)
    theta = rng.normal(size=2)
    data = SgdModifiedLossInput(batches, theta, 0.05)
    numeric = [
        _partial(lambda t: np.array(gm.sgd_modified_loss(data.with_theta(t))), theta, i)
        for i in range(2)
    ]
    assert np.allclose(gm.sgd_modified_flow_field(data), -np.array(numeric), atol=1e-6)


def test_sgd_input_needs_batches():
    with pytest.raises(ValueError):
        SgdModifiedLossInput([], [1.0], 0.1)
