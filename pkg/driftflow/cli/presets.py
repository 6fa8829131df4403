from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg

from ..calculus import leading_eig_hvp
from ..common.errors import UnknownPreset
from ..config import OUTPUT_DIR
from ..flows import (
    FlowKind,
    IntegratorConfig,
    flow_field,
    integrate,
    pf_quadratic_closed_form,
)
from ..games import (
    RegScheme,
    SgdModifiedLossInput,
    dirac_radius_derivative,
    modified_game_field,
    regularized_game,
    rk4_modified_game_field,
    sgd_modified_flow_field,
)
from ..measures import (
    drift_report,
    flow_local_errors,
    game_local_errors,
    gc_depth_trend,
    gc_init_depth_study,
    gc_relu_piecewise,
    geometric_complexity,
    order_estimate,
    sgd_local_errors,
)
from ..optimizers import (
    DalConfig,
    GameStepConfig,
    dal_lr,
    game_alt_step,
    game_rk4_step,
    game_sim_step,
    gd_step,
    hessian_normalized_gradient,
    run_game,
    train,
)
from ..problems import (
    MlpSpec,
    banana_new,
    dirac_gan_new,
    linear_game_new,
    mlp_init,
    mlp_new,
    mlp_spec_from_params,
    quadratic_batches,
    quadratic_new,
    zero_sum_game_from_loss,
)
from ..stability import (
    Regime,
    Verdict,
    classify,
    dirac_regularized_jacobian,
    game_modified_jacobian,
    linear_game_converges,
    linear_game_lr_bound,
)
from .config import PRESETS
from .experiment import Check, RunReport, write_summary, write_trace


def _finish(
    name: str,
    out_dir: Path,
    summary: dict,
    checks: List[Check],
    traces: Dict[str, pd.DataFrame],
    output_format: str,
    params: dict,
) -> RunReport:
    trace_path = None
    for trace_name, df in traces.items():
        path = write_trace(df, out_dir, output_format, trace_name)
        trace_path = trace_path or path
    summary['checks'] = {c.name: {'passed': c.passed, 'detail': c.detail} for c in checks}
    summary['passed'] = all(c.passed for c in checks)
    config = {'preset': name, **params}
    summary_path = write_summary({'config': config, 'summary': summary}, out_dir)
    return RunReport(config, out_dir, summary, trace_path, summary_path, checks)


def _random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.normal(size=(dim, dim)))
    return Q * np.sign(np.diag(R))[None, :]


def _iterate_until(step, phi, theta, radius_tol, max_steps) -> Tuple[int, float]:
    for i in range(1, max_steps + 1):
        phi, theta = step(phi, theta)
        radius = float(np.sqrt(phi @ phi + theta @ theta))
        if radius < radius_tol:
            return i, radius
    return max_steps, radius


def dirac_gan_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    n_steps: int = 1000,
    h: float = 0.01,
    reg_h: float = 0.1,
    reg_max_steps: int = 100_000,
    grid: int = 21,
) -> RunReport:
    """Simultaneous DiracGAN diverges; cancelling its drift twice over converges."""
    game = dirac_gan_new()
    checks = []
    sim = run_game(game, [0.5], [0.5], n_steps, GameStepConfig(h=h), 'sim')
    radius = sim['|(phi, theta)|'].to_numpy()
    increased = int(np.sum(np.diff(radius) > 0))
    checks.append(
        Check(
            'simultaneous radius increases every step',
            increased == n_steps,
            f'sim: radius increased {increased}/{n_steps} steps',
        )
    )

    values = np.linspace(-2.0, 2.0, grid)
    rates = [
        dirac_radius_derivative(p, t, h) for p in values for t in values if p != 0 or t != 0
    ]
    checks.append(
        Check(
            'radius derivative positive off equilibrium',
            bool(np.min(rates) > 0),
            f'min over {len(rates)} grid points = {np.min(rates):.3e}',
        )
    )

    unregularized = game_modified_jacobian(game, ([0.0], [0.0]), GameStepConfig(h=h))
    checks.append(
        Check(
            'modified Jacobian trace equals (h/2)(rate_phi + rate_theta) l\'(0)^2',
            abs(unregularized.trace - h / 2 * 2 * 0.25) < 1e-12
            and unregularized.verdict == Verdict.UNSTABLE,
            f'trace = {unregularized.trace:.6g}, {unregularized.verdict.value}',
        )
    )

    boundary = dirac_regularized_jacobian(h, 1.0, 1.0, h / 4, h / 4)
    checks.append(
        Check(
            'trace vanishes at gamma = zeta = h/4',
            abs(boundary.trace) <= 1e-12,
            f'trace = {boundary.trace:.3e}',
        )
    )

    reg_cfg = GameStepConfig(h=reg_h)
    reg = regularized_game(game, RegScheme('dd_cancel_sim', scale=2.0), reg_cfg)
    steps, final = _iterate_until(
        lambda p, t: game_sim_step(reg, p, t, reg_cfg),
        np.array([0.5]),
        np.array([0.5]),
        1e-4,
        reg_max_steps,
    )
    checks.append(
        Check(
            'regularized game with gamma = zeta = h/2 converges',
            final < 1e-4,
            f'radius {final:.3e} after {steps} steps (h = {reg_h})',
        )
    )

    # boundary regularization gamma = h/4 at the small learning rate, reported only
    edge = regularized_game(game, RegScheme('dd_cancel_sim'), GameStepConfig(h=h))
    edge_run = run_game(edge, [0.5], [0.5], n_steps, GameStepConfig(h=h), 'sim')
    edge_radius = edge_run['|(phi, theta)|'].to_numpy()
    summary = {
        'sim_radius_increased_steps': increased,
        'sim_final_radius': float(radius[-1]),
        'regularized_steps_to_1e-4': steps,
        'boundary_regularization_decreasing_steps': int(np.sum(np.diff(edge_radius) < 0)),
        'boundary_regularization_final_radius': float(edge_radius[-1]),
    }
    params = {'h': h, 'reg_h': reg_h, 'n_steps': n_steps, 'seed': seed}
    return _finish('diracgan', out_dir, summary, checks, {'trace': sim}, output_format, params)


def _random_diagonalizable(rng: np.random.Generator) -> np.ndarray:
    while True:
        P = rng.normal(size=(2, 2)) + 2 * np.eye(2)
        if np.linalg.cond(P) < 10:
            break
    if rng.random() < 0.5:
        x, y = rng.uniform(-0.5, 2.0), rng.uniform(0.1, 2.0)
        core = np.array([[x, y], [-y, x]])
    else:
        core = np.diag(rng.uniform(-0.5, 4.0, size=2))
    return P @ core @ np.linalg.inv(P)


def _decay_rates(H: np.ndarray, h: np.ndarray, n_steps: int, rng) -> np.ndarray:
    # growth rate of |x_t| for x_{t+1} = (I - h H) x_t, renormalized every step
    M = np.eye(2)[None] - h[:, None, None] * H
    x = rng.normal(size=(len(H), 2))
    log_norm = np.zeros(len(H))
    half = n_steps // 2
    for t in range(n_steps):
        x = np.einsum('nij,nj->ni', M, x)
        norms = np.linalg.norm(x, axis=1)
        x = x / norms[:, None]
        if t >= half:
            log_norm += np.log(norms)
    return log_norm / (n_steps - half)


def linear_game_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    eps: float = 0.09,
    h: float = 0.2,
    sim_steps: int = 500,
    alt_steps: int = 5000,
    alt_max_steps: int = 50_000,
    n_samples: int = 200,
    n_power_steps: int = 20_000,
) -> RunReport:
    """Simultaneous updates of the linear game diverge, alternating ones converge."""
    game = linear_game_new(eps, eps)
    origin = ([0.0], [0.0])
    sim_cfg = GameStepConfig(h=h)
    alt_cfg = GameStepConfig(h=h, mode='alternating')
    sim_report = game_modified_jacobian(game, origin, sim_cfg)
    alt_report = game_modified_jacobian(game, origin, alt_cfg)
    checks = [
        Check(
            'trace of the simultaneous modified Jacobian',
            abs(sim_report.trace - 0.198) <= 1e-3 and sim_report.verdict == Verdict.UNSTABLE,
            f'{sim_report.trace:.5f}, {sim_report.verdict.value}',
        ),
        Check(
            'trace of the alternating modified Jacobian',
            abs(alt_report.trace + 0.00162) <= 1e-4 and alt_report.verdict == Verdict.STABLE,
            f'{alt_report.trace:.5f}, {alt_report.verdict.value}',
        ),
        Check(
            'determinant of the alternating modified Jacobian',
            abs(alt_report.det - 0.9819) <= 1e-3,
            f'{alt_report.det:.5f}',
        ),
    ]

    sim = run_game(game, [1.0], [0.0], sim_steps, sim_cfg, 'sim')
    radius = sim['|(phi, theta)|'].to_numpy()
    growth = float(np.max(radius) / radius[0])
    checks.append(
        Check('simultaneous run grows tenfold', growth >= 10, f'growth x{growth:.3g}')
    )

    def alt_step(phi, theta):
        return game_alt_step(game, phi, theta, alt_cfg)

    steps, final = _iterate_until(alt_step, np.array([1.0]), np.array([0.0]), 1e-3, alt_steps)
    # the alternating map is linear; its matrix carries the run on past alt_steps
    M = np.column_stack([np.concatenate(alt_step(*np.split(e, 2))) for e in np.eye(2)])
    z = np.linalg.matrix_power(M, steps) @ np.array([1.0, 0.0])
    checks.append(
        Check(
            'stepper agrees with the alternating matrix',
            abs(float(np.linalg.norm(z)) - final) <= 1e-9,
            f'radius {final:.6e} after {steps} steps',
        )
    )
    while final >= 1e-3 and steps < alt_max_steps:
        z = M @ z
        steps += 1
        final = float(np.linalg.norm(z))
    contraction = float(np.max(np.abs(np.linalg.eigvals(M))))
    analytic_steps = int(np.ceil(np.log(1e-3) / np.log(contraction)))
    detail = f'radius {final:.3e} after {steps} steps; needs about {analytic_steps} steps'
    if analytic_steps > alt_steps:
        detail += f' at contraction {contraction:.6f}, beyond the {alt_steps}-step bound'
    checks.append(Check('alternating run shrinks below 1e-3', final < 1e-3, detail))

    rng = np.random.default_rng(seed)
    H = np.stack([_random_diagonalizable(rng) for _ in range(n_samples)])
    lr = rng.uniform(0.05, 1.0, size=n_samples)
    rates = _decay_rates(H, lr, n_power_steps, rng)
    agree = bound_agree = kept = 0
    for Hn, hn, rate in zip(H, lr, rates):
        lam = np.linalg.eigvals(Hn)
        lhs = (1 - hn * lam.real) ** 2 + (hn * lam.imag) ** 2
        if np.any(np.abs(lhs - 1) < 1e-3):
            continue
        kept += 1
        predicted = all(linear_game_converges(x, hn) for x in lam)
        agree += predicted == bool(rate < 0)
        bound_agree += predicted == all(hn < linear_game_lr_bound(x) for x in lam)
    checks.append(
        Check(
            'convergence test matches simulation',
            agree == kept,
            f'{agree}/{kept} samples outside the boundary band',
        )
    )
    checks.append(
        Check(
            'learning-rate bound matches the convergence test',
            bound_agree == kept,
            f'{bound_agree}/{kept} samples',
        )
    )
    summary = {
        'trace_sim': sim_report.trace,
        'trace_alt': alt_report.trace,
        'det_alt': alt_report.det,
        'sim_diverged': growth >= 10,
        'alt_converged': final < 1e-3,
        'alt_steps_to_1e-3': steps,
        'alt_steps_analytic': analytic_steps,
        'alt_contraction': contraction,
        f'alt_converged_within_{alt_steps}': analytic_steps <= alt_steps,
    }
    params = {'eps': eps, 'h': h, 'seed': seed, 'alt_steps': alt_steps}
    return _finish('lineargame', out_dir, summary, checks, {'trace': sim}, output_format, params)


def _gd_path(A: np.ndarray, b: np.ndarray, theta0: np.ndarray, h: float, n: int):
    E = quadratic_new(A, b)
    path = [theta0]
    for _ in range(n):
        path.append(gd_step(E, path[-1], h))
    return E, path


def _regime_behaviour(lam: float, h: float, n_steps: int = 50) -> Optional[Regime]:
    theta = [1.0]
    for _ in range(n_steps):
        theta.append(theta[-1] - h * lam * theta[-1])
    theta = np.array(theta)
    magnitude = np.abs(theta)
    if np.all(theta[1:] > 0) and np.all(np.diff(magnitude) < 0):
        return Regime.REAL_STABLE
    signs = np.sign(theta)
    alternating = np.all(signs[1:] * signs[:-1] < 0)
    if alternating and np.all(np.diff(magnitude) < 0):
        return Regime.COMPLEX_STABLE
    if np.all(np.diff(magnitude) > 0):
        return Regime.UNSTABLE_COMPLEX
    return None


def quadratic_exact_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    n_problems: int = 20,
    n_steps: int = 50,
    substeps_per_step: int = 64,
) -> RunReport:
    """Gradient descent on quadratics equals the principal flow at integer times."""
    rng = np.random.default_rng(seed)
    regime_targets = (0.5, 1.5, 2.1)
    rows = []
    worst_closed = worst_integrated = 0.0
    for i in range(n_problems):
        dim = int(rng.integers(1, 11))
        lam = rng.uniform(-0.05, 1.0, size=dim)
        lam[0] = 1.0
        Q = _random_orthogonal(rng, dim)
        scale = rng.uniform(0.5, 6.0)
        A = scale * (Q * lam) @ Q.T
        A = 0.5 * (A + A.T)
        b = rng.normal(size=dim)
        theta0 = rng.normal(size=dim)
        h = regime_targets[i % len(regime_targets)] / scale
        E, path = _gd_path(A, b, theta0, h, n_steps)
        errors = []
        for n, theta in enumerate(path):
            exact = pf_quadratic_closed_form(A, b, theta0, n * h, h)
            size = 1 + max(np.linalg.norm(theta0), np.linalg.norm(theta))
            errors.append(float(np.linalg.norm(theta - exact)) / size)
        worst_closed = max(worst_closed, max(errors))
        row = {'problem': i, 'dim': dim, 'h_lambda0': h * scale, 'closed_form_error': max(errors)}
        config = IntegratorConfig(
            substep=h / substeps_per_step, scheme='rk4', record_every=substeps_per_step
        )
        flowed = integrate(FlowKind('pf', h), E, theta0, n_steps * h, config).states
        error = max(
            float(np.linalg.norm(x - theta)) / (1 + np.linalg.norm(theta))
            for x, theta in zip(flowed, path)
        )
        worst_integrated = max(worst_integrated, error)
        row['integrated_error'] = error
        rows.append(row)
    checks = [
        Check(
            'closed-form principal flow equals gradient descent',
            worst_closed <= 1e-9,
            f'max relative error {worst_closed:.3e}',
        ),
        Check(
            'integrated principal flow equals gradient descent',
            worst_integrated <= 1e-4,
            f'max relative error {worst_integrated:.3e}',
        ),
    ]

    matched = total = 0
    for lam in np.linspace(0.1, 5.0, 25):
        for h in np.linspace(0.05, 1.0, 20):
            x = h * lam
            if abs(x - 1) < 1e-3 or abs(x - 2) < 1e-3:
                continue
            total += 1
            matched += _regime_behaviour(lam, h) == classify(x)
    checks.append(
        Check(
            'observed behaviour matches the regime classification',
            matched == total,
            f'{matched}/{total} grid cells',
        )
    )
    summary = {'max_closed_form_error': worst_closed, 'max_integrated_error': worst_integrated}
    params = {
        'n_problems': n_problems,
        'n_steps': n_steps,
        'seed': seed,
        'substeps_per_step': substeps_per_step,
    }
    return _finish(
        'quadratic-exact', out_dir, summary, checks, {'trace': pd.DataFrame(rows)},
        output_format, params,
    )


def _slope_check(name, pairs, low, high) -> Tuple[Check, dict]:
    fit = order_estimate(pairs)
    band = f'[{low}, {high}]' if np.isfinite(high) else f'>= {low}'
    return (
        Check(name, low <= fit.slope <= high, f'slope {fit.slope:.3f} in {band}'),
        {'name': name, 'slope': fit.slope, 'r2': fit.r2},
    )


def order_check_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    h0: float = 5e-3,
    game_h0: float = 0.1,
) -> RunReport:
    """Log-log slopes of the local errors of every continuous model."""
    checks, rows = [], []

    def add(result):
        checks.append(result[0])
        rows.append(result[1])

    banana = banana_new()
    point = np.array([-0.5, 0.5])
    hs = [h0 * 2.0**-k for k in range(4, 11)]
    for flow, low, high in (('ngf', 1.9, 2.1), ('igr', 2.85, 3.15), ('third_order', 3.8, 4.2)):
        add(_slope_check(f'banana {flow}', flow_local_errors(banana, point, flow, hs), low, high))

    rng = np.random.default_rng(seed)
    Q = _random_orthogonal(rng, 4)
    A = (Q * rng.uniform(-2.0, 2.0, size=4)) @ Q.T
    game = zero_sum_game_from_loss(quadratic_new(0.5 * (A + A.T)), 2)
    phi, theta = rng.normal(size=2), rng.normal(size=2)
    game_hs = [game_h0 * 2.0**-k for k in range(4, 11)]
    plain = game_local_errors(game, phi, theta, game_hs, 'sim')
    add(_slope_check('game sim vs game flow', plain, 1.9, 2.1))
    add(
        _slope_check(
            'game sim vs modified flow',
            game_local_errors(game, phi, theta, game_hs, 'sim', modified_game_field),
            2.85,
            3.15,
        )
    )
    add(
        _slope_check(
            'game alt vs modified flow',
            game_local_errors(game, phi, theta, game_hs, 'alt', modified_game_field),
            2.85,
            3.15,
        )
    )
    add(
        _slope_check(
            'game rk4 unequal rates vs rk4 modified flow',
            game_local_errors(
                game, phi, theta, game_hs, 'rk4', rk4_modified_game_field, 1.0, 2.0
            ),
            2.8,
            3.2,
        )
    )

    linear = linear_game_new(0.09, 0.09)
    J = linear.jacobian([0.0], [0.0])
    x0 = np.array([1.0, 0.5])
    pairs = []
    for h in (4.0 * 2.0**-k for k in range(4, 9)):
        phi_new, theta_new = game_rk4_step(linear, x0[:1], x0[1:], GameStepConfig(h=h))
        exact = scipy.linalg.expm(h * J) @ x0
        pairs.append((h, float(np.linalg.norm(np.r_[phi_new, theta_new] - exact))))
    add(_slope_check('game rk4 equal rates vs exact flow', pairs, 4.8, np.inf))

    batches = quadratic_batches(rng.normal(size=(2, 2)))
    sgd_hs = [0.1 * 2.0**-k for k in range(2, 8)]
    sgd_pairs = sgd_local_errors(batches, np.zeros(2), sgd_hs)
    add(_slope_check('two sgd steps vs modified flow', sgd_pairs, 2.85, 3.15))

    single = SgdModifiedLossInput(batches[:1], np.array([0.3, -0.2]), 0.05)
    igr = flow_field(FlowKind('igr', 0.05), batches[0], single.theta)
    gap = float(np.max(np.abs(sgd_modified_flow_field(single) - igr)))
    checks.append(
        Check('one-batch modified flow is the IGR flow', gap <= 1e-12, f'max gap {gap:.1e}')
    )

    summary = {row['name']: row['slope'] for row in rows}
    params = {'h0': h0, 'game_h0': game_h0, 'seed': seed}
    return _finish(
        'order-check', out_dir, summary, checks, {'trace': pd.DataFrame(rows)},
        output_format, params,
    )


def edge_of_stability_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    n_iters: int = 1000,
    h: Optional[float] = None,
    sharpness_margin: float = 0.01,
    n_per_class: int = 30,
) -> RunReport:
    """
    Full-batch gradient descent of a small network reaching lambda0 = 2/h

    Without ``h`` the learning rate puts 2/h a relative ``sharpness_margin``
    above the sharpness at initialization, so progressive sharpening crosses it
    within the run.
    """
    spec = mlp_spec_from_params(seed=seed, n_per_class=n_per_class)
    problem = mlp_new(spec)
    theta0 = spec.flatten()
    if h is None:
        initial = leading_eig_hvp(lambda v: problem.hvp(theta0, v), problem.dim)
        h = 2 / (float(initial.eigenvalues[0]) * (1 + sharpness_margin))
    df = train(problem, theta0, n_iters, 'gd', h=h, record_eigs=True)
    lam = df['lambda0'].to_numpy()
    above = np.nonzero(lam > 2 / h)[0]
    checks = [
        Check(
            'lambda0 rises and crosses 2/h',
            len(above) > 0 and lam.max() > lam[0],
            f'first crossing at iteration {int(above[0])}' if len(above) else 'no crossing',
        )
    ]
    loss = df['loss'].to_numpy()
    sc0 = df['re(sc0)'].to_numpy()
    increases = np.nonzero(np.diff(loss) > 0)[0]
    if len(increases):
        share = float(np.mean(sc0[increases] > 0))
        detail = f'{share:.0%} of {len(increases)} loss increases'
    else:
        share, detail = 0.0, 'the loss never increased'
    checks.append(Check('loss increases follow Re(sc0) > 0', share >= 0.8, detail))

    integrator = IntegratorConfig(substep=h / 20, scheme='rk4')
    drift = drift_report(problem, theta0, h, n_iters, FlowKind('ngf'), integrator)
    checks.append(
        Check(
            'drift ranks with |H g_hat|',
            bool(drift.spearman >= 0.8),
            f'spearman {drift.spearman:.3f}',
        )
    )
    df['drift'] = np.r_[np.nan, drift.drift]
    summary = {
        'h': h,
        'lambda0_first': float(lam[0]),
        'lambda0_max': float(lam.max()),
        'two_over_h': 2 / h,
        'first_crossing': int(above[0]) if len(above) else None,
        'spearman': drift.spearman,
        'final_loss': float(loss[-1]),
    }
    params = {'n_iters': n_iters, 'h': h, 'seed': seed, 'sharpness_margin': sharpness_margin}
    return _finish(
        'edge-of-stability', out_dir, summary, checks, {'trace': df}, output_format, params
    )


def dal_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    n_iters: int = 500,
) -> RunReport:
    """Drift-adjusted learning rates: defining identity, p ordering and a banana run."""
    rng = np.random.default_rng(seed)
    Q = _random_orthogonal(rng, 5)
    E = quadratic_new((Q * rng.uniform(0.5, 10.0, size=5)) @ Q.T)
    worst = 0.0
    for _ in range(20):
        theta = rng.normal(size=5)
        drift = np.linalg.norm(hessian_normalized_gradient(E, theta))
        worst = max(worst, abs(dal_lr(E, theta) * drift - 2))
    checks = [Check('h |H g_hat| = 2 below the cap', worst <= 1e-12, f'max gap {worst:.1e}')]

    powers = (0.25, 0.5, 0.75, 1.0)
    ordered = True
    for scale in (4.0, 0.5):
        E1 = quadratic_new(np.array([[scale]]))
        rates = [dal_lr(E1, [1.0], DalConfig(p=p, lr_cap=np.inf)) for p in powers]
        steps = np.diff(rates)
        ordered &= bool(np.all(steps < 0) if scale > 1 else np.all(steps > 0))
    checks.append(Check('DAL-p rates ordered by p', ordered, 'decreasing when |H g_hat| > 1'))

    banana = banana_new()
    df = train(banana, [-1.0, 1.0], n_iters, 'dal')
    loss = df['loss'].to_numpy()
    checks.append(
        Check(
            'DAL on banana stays finite and decreases the loss',
            bool(np.all(np.isfinite(loss)) and loss[-1] < loss[0]),
            f'loss {loss[0]:.4g} -> {loss[-1]:.4g}',
        )
    )
    momentum = train(banana, [-1.0, 1.0], n_iters, 'dal_momentum', beta=0.5)
    summary = {
        'banana_initial_loss': float(loss[0]),
        'banana_final_loss': float(loss[-1]),
        'banana_momentum_final_loss': float(momentum['loss'].iloc[-1]),
    }
    params = {'n_iters': n_iters, 'seed': seed}
    return _finish('dal', out_dir, summary, checks, {'trace': df}, output_format, params)


def _random_spec(rng, widths, activation) -> MlpSpec:
    weights = [rng.normal(size=(o, i)) / np.sqrt(i) for i, o in zip(widths, widths[1:])]
    biases = [rng.normal(size=o) for o in widths[1:]]
    return MlpSpec(widths, activation, weights, biases)


def gc_preset(
    out_dir: Path,
    seed: int = 0,
    output_format: str = 'csv',
    width: int = 500,
    depths: Tuple[int, ...] = (2, 3, 4, 5, 6),
    n_seeds: int = 10,
    n_samples: int = 20,
) -> RunReport:
    """Geometric Complexity: closed forms, the ReLU oracle and the depth trend."""
    rng = np.random.default_rng(seed)
    worst_linear = 0.0
    for _ in range(5):
        spec = _random_spec(rng, [3, 4, 5, 2], 'identity')
        product = spec.weights[2] @ spec.weights[1] @ spec.weights[0]
        expected = float(np.sum(product**2))
        gc = geometric_complexity(spec, rng.normal(size=(10, 3)))
        worst_linear = max(worst_linear, abs(gc - expected) / expected)
    checks = [
        Check('linear networks give |prod W|_F^2', worst_linear <= 1e-10, f'{worst_linear:.1e}')
    ]

    worst_relu = 0.0
    for _ in range(20):
        spec = _random_spec(rng, [2, 4, 3, 2], 'relu')
        X = rng.normal(size=(50, 2))
        gap = abs(geometric_complexity(spec, X) - gc_relu_piecewise(spec, X))
        worst_relu = max(worst_relu, gap)
    checks.append(
        Check('ReLU linear-region oracle', worst_relu <= 1e-8, f'max gap {worst_relu:.1e}')
    )

    study = gc_init_depth_study(
        width, depths, 'standard_truncated', tuple(range(n_seeds)), n_samples=n_samples
    )
    checks.append(Check('GC at initialization decreases with depth', gc_depth_trend(study), ''))
    summary = {'depth_study': study.to_dict(orient='records')}
    params = {'width': width, 'depths': list(depths), 'n_seeds': n_seeds, 'seed': seed}
    return _finish('gc', out_dir, summary, checks, {'trace': study}, output_format, params)


_PRESETS: Dict[str, Callable[..., RunReport]] = dict(
    zip(
        PRESETS,
        (
            dirac_gan_preset,
            linear_game_preset,
            quadratic_exact_preset,
            order_check_preset,
            edge_of_stability_preset,
            dal_preset,
            gc_preset,
        ),
    )
)


def list_presets() -> Dict[str, str]:
    """Preset names with a one-line description."""
    return {name: (fn.__doc__ or '').strip().splitlines()[0] for name, fn in _PRESETS.items()}


def reproduce(
    name: str,
    out: Optional[Path] = None,
    seed: int = 0,
    output_format: str = 'csv',
    **overrides,
) -> RunReport:
    """
    Run a canonical study and evaluate its pass/fail predicates

    Parameters
    ----------
    name : str
        one of ``diracgan``, ``lineargame``, ``quadratic-exact``,
        ``order-check``, ``edge-of-stability``, ``dal``, ``gc``
    out : Path, optional
        output directory, ``runs/<name>`` by default
    seed : int, optional
        seed of every random choice
    output_format : str, optional
        ``csv`` or ``json`` traces
    **overrides
        preset parameters such as ``n_iters`` or ``h``

    Returns
    -------
    RunReport
        ``passed`` is ``True`` when every check holds

    Raises
    ------
    UnknownPreset
        ``name`` is not a preset
    """
    if name not in _PRESETS:
        raise UnknownPreset(f'unknown preset {name!r}, expected one of {list(PRESETS)}')
    out_dir = Path(out) if out is not None else OUTPUT_DIR / name
    return _PRESETS[name](out_dir, seed=seed, output_format=output_format, **overrides)
