import json

import numpy as np
import pytest

import driftflow as dft
from driftflow.common.errors import NotEquilibrium, SingularArgument
from driftflow.stability import Regime, Verdict

st = dft.stability


@pytest.mark.parametrize(
    'h_lambda, regime',
    [
        (-1.0, Regime.REAL_STABLE),
        (0.5, Regime.REAL_STABLE),
        (1.0, Regime.BOUNDARY_ONE),
        (1.5, Regime.COMPLEX_STABLE),
        (2.0, Regime.BOUNDARY_TWO),
        (2.5, Regime.UNSTABLE_COMPLEX),
    ],
)
def test_classify(h_lambda, regime):
    assert st.classify(h_lambda) is regime


def test_boundaries():
    assert Regime.BOUNDARY_ONE.is_boundary
    assert not Regime.COMPLEX_STABLE.is_boundary


def test_stability_report_regimes(diag14):
    report = st.stability_report(diag14, np.array([1.0, 1.0]), 0.5)
    assert [r.value for r in report.regimes] == ['boundary_two', 'real_stable']
    assert np.allclose(report.eigenvalues, [4.0, 1.0])
    # the oscillating direction neither grows nor decays
    assert np.real(report.sc[0]) == pytest.approx(0.0, abs=1e-12)
    assert not report.unstable


def test_stability_report_unstable_direction(diag14):
    assert st.stability_report(diag14, np.array([1.0, 1.0]), 0.6).unstable
    assert not st.stability_report(diag14, np.array([1.0, 1.0]), 0.1).unstable


def test_stability_report_singular_direction(diag14):
    report = st.stability_report(diag14, np.array([1.0, 1.0]), 1.0)
    assert np.isnan(report.sc[1])
    assert report.regimes[1] is Regime.BOUNDARY_ONE


def test_stability_report_frame(diag14):
    report = st.stability_report(diag14, np.array([1.0, 1.0]), 0.1)
    df = report.to_frame()
    assert set(df.columns) == {'i', 'lambda', 'h lambda', 'g.u', 're(sc)', 'im(sc)', 'regime'}
    assert len(df) == len(report) == 2
    json.dumps(report.to_dict())


def test_stability_report_top_k(rng):
    M = rng.normal(size=(6, 6))
    E = dft.problems.quadratic_new(M @ M.T)
    report = st.stability_report(E, rng.normal(size=6), 0.01, top_k=2)
    assert len(report) == 2
    assert report.eigenvalues[0] >= report.eigenvalues[1]


def test_critical_jacobian_eigs():
    assert np.allclose(st.critical_jacobian_eigs('ngf', [-1.0], 0.1), [1.0])
    assert np.allclose(st.critical_jacobian_eigs('igr', [2.0], 0.1), [-2.2])
    third = st.critical_jacobian_eigs('third_order', [2.0], 0.1)
    assert np.allclose(third, [-(2.0 + 0.2 + 0.08 / 3)])
    pf = st.critical_jacobian_eigs(dft.flows.FlowKind('pf', 0.5), [1.0], 0.5)
    assert np.allclose(pf, [np.log(0.5) / 0.5])


def test_critical_jacobian_eigs_rejects_flow():
    with pytest.raises(ValueError):
        st.critical_jacobian_eigs('positive_gradient', [1.0], 0.1)


def test_exp_stable():
    assert st.exp_stable(np.diag([-1.0, -2.0])) is Verdict.STABLE
    assert st.exp_stable([[1.0]]) is Verdict.UNSTABLE
    assert st.exp_stable([[0.0, 1.0], [-1.0, 0.0]]) is Verdict.INCONCLUSIVE


def test_game_modified_jacobian_simultaneous():
    game = dft.problems.linear_game_new(0.09, 0.09)
    report = st.game_modified_jacobian(game, ([0.0], [0.0]), dft.optimizers.GameStepConfig(h=0.2))
    assert report.trace == pytest.approx(0.198, abs=1e-3)
    assert report.verdict is Verdict.UNSTABLE
    # K = J^2 = (eps^2 - 1) I for this game
    assert np.allclose(report.K, (0.09**2 - 1) * np.eye(2))


def test_game_modified_jacobian_alternating():
    game = dft.problems.linear_game_new(0.09, 0.09)
    cfg = dft.optimizers.GameStepConfig(h=0.2, mode='alternating')
    report = st.game_modified_jacobian(game, ([0.0], [0.0]), cfg)
    assert report.trace == pytest.approx(-0.00162, abs=1e-4)
    assert report.det == pytest.approx(0.9819, abs=1e-3)
    assert report.verdict is Verdict.STABLE
    json.dumps(report.to_dict())


def test_game_modified_jacobian_needs_equilibrium():
    game = dft.problems.linear_game_new(0.09, 0.09)
    with pytest.raises(NotEquilibrium):
        st.game_modified_jacobian(game, ([1.0], [0.0]), dft.optimizers.GameStepConfig(h=0.2))


def test_drift_matrix_player_rates():
    J = np.array([[-0.09, 1.0], [-1.0, 0.09]])
    cfg = dft.optimizers.GameStepConfig(h=0.1, rate_phi=1.0, rate_theta=3.0)
    K = st.drift_matrix(J, 1, cfg)
    assert np.allclose(K, np.diag([1.0, 3.0]) @ J @ J)


def test_dirac_regularized_jacobian():
    plain = st.dirac_regularized_jacobian(0.1)
    assert plain.trace == pytest.approx(0.1 / 2 * 2 * 0.25)
    assert plain.verdict is Verdict.UNSTABLE
    boundary = st.dirac_regularized_jacobian(0.1, gamma=0.025, zeta=0.025)
    assert abs(boundary.trace) <= 1e-12
    assert boundary.verdict is Verdict.INCONCLUSIVE
    strong = st.dirac_regularized_jacobian(0.1, gamma=0.1, zeta=0.1)
    assert strong.verdict is Verdict.STABLE


@pytest.mark.parametrize(
    'lam, h, expected',
    [(0.1 + 2j, 0.5, False), (1 + 1j, 0.99, True), (1 + 1j, 1.01, False), (-1.0, 0.01, False)],
)
def test_linear_game_converges(lam, h, expected):
    assert st.linear_game_converges(lam, h) is expected


def test_linear_game_lr_bound():
    assert st.linear_game_lr_bound(1 + 1j) == pytest.approx(1.0)
    assert st.linear_game_lr_bound(2.0) == pytest.approx(1.0)
    assert st.linear_game_lr_bound(-1 + 1j) == 0.0


def test_game_pf_eigs():
    assert np.allclose(st.game_pf_eigs([[-1.0]], 0.5), [np.log(0.5) / 0.5])
    eig = st.game_pf_eigs([[-3.0]], 0.5)[0]
    assert eig.real == pytest.approx(np.log(0.5) / 0.5)
    assert eig.imag == pytest.approx(np.pi / 0.5)


def test_game_pf_eigs_singular():
    with pytest.raises(SingularArgument):
        st.game_pf_eigs([[-2.0]], 0.5)


def test_gradient_descent_diverges_iff_some_factor_exceeds_one():
    mismatched = []
    for lam in np.linspace(-0.5, 5.0, 23):
        for h in np.linspace(0.05, 1.0, 20):
            eigenvalues = np.array([lam, 0.3 * lam + 0.2])
            factor = np.max(np.abs(1 - h * eigenvalues))
            if abs(factor - 1) < 0.02:
                continue
            E = dft.problems.quadratic_new(np.diag(eigenvalues))
            theta = np.ones(2)
            for _ in range(200):
                theta = dft.optimizers.gd_step(E, theta, h)
            diverged = np.linalg.norm(theta) > np.sqrt(2)
            unstable = any(
                x < 0 or st.classify(x) is Regime.UNSTABLE_COMPLEX for x in h * eigenvalues
            )
            if diverged != (factor > 1) or diverged != unstable:
                mismatched.append((lam, h))
    assert not mismatched
