import numpy as np

from ..common.errors import BadSplit
from .core import GameProblem, Problem
from .zoo import dirac_gan_loss_new, log_sigmoid_derivatives, quadratic_new


def _check_split(E: Problem, split: int) -> int:
    if not isinstance(split, (int, np.integer)):
        raise TypeError(f'split must be an integer, got {split!r}')
    if not 0 < split < E.dim:
        raise BadSplit(f'split must lie in [1, {E.dim - 1}], got {split}')
    return int(split)


def _game_from_loss(E: Problem, split: int, sign_f: float, structure: str) -> GameProblem:
    s = _check_split(E, split)

    def joined(phi, theta):
        return np.concatenate([phi, theta])

    def f(phi, theta):
        return sign_f * E.grad(joined(phi, theta))[:s]

    def g(phi, theta):
        return -E.grad(joined(phi, theta))[s:]

    def block(sign, rows, cols):
        def run(phi, theta):
            return sign * E.hess(joined(phi, theta))[rows, cols]

        return run

    first, second = slice(0, s), slice(s, E.dim)
    if structure == 'zero_sum':
        losses = (
            lambda phi, theta: -E.eval(joined(phi, theta)),
            lambda phi, theta: E.eval(joined(phi, theta)),
        )
    else:
        losses = (
            lambda phi, theta: E.eval(joined(phi, theta)),
            lambda phi, theta: E.eval(joined(phi, theta)),
        )
    return GameProblem(
        dim_phi=s,
        dim_theta=E.dim - s,
        f=f,
        g=g,
        jac_phi_f=block(sign_f, first, first),
        jac_theta_f=block(sign_f, first, second),
        jac_phi_g=block(-1.0, second, first),
        jac_theta_g=block(-1.0, second, second),
        losses=losses,
        structure=structure,
        base=E,
        split=s,
        supports_complex=E.supports_complex,
        name=f'{structure}({E.name})',
    )


def zero_sum_game_from_loss(E: Problem, split: int) -> GameProblem:
    """
    Zero-sum game on ``E(phi, theta)``: ``phi`` ascends, ``theta`` descends

    Parameters
    ----------
    E : Problem
        loss over the concatenation ``(phi, theta)``
    split : int
        number of leading coordinates owned by ``phi``

    Returns
    -------
    GameProblem
        ``f = grad_phi E``, ``g = -grad_theta E``, losses ``(-E, E)``

    Raises
    ------
    BadSplit
        ``split`` leaves one of the players empty

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.array([[0.0, 1.0], [1.0, 0.0]]))
    >>> game = dft.problems.zero_sum_game_from_loss(E, 1)
    >>> game.fields([1.0], [2.0])
    (array([2.]), array([-1.]))
    """
    return _game_from_loss(E, split, 1.0, 'zero_sum')


def common_payoff_game_from_loss(E: Problem, split: int) -> GameProblem:
    """Both players descend ``E``: ``f = -grad_phi E``, ``g = -grad_theta E``."""
    return _game_from_loss(E, split, -1.0, 'common_payoff')


def dirac_gan_new(l: str = 'saturating_log_sigmoid') -> GameProblem:
    """
    DiracGAN: data is a point mass at zero, the generator is a point mass at
    ``theta`` and the discriminator is linear with slope ``phi``

    Parameters
    ----------
    l : str, optional
        only ``'saturating_log_sigmoid'``, ``l(z) = -log(1 + exp(-z))``

    Returns
    -------
    GameProblem
        ``f = l'(theta phi) theta``, ``g = -l'(theta phi) phi`` with analytic
        Jacobian blocks, zero-sum over ``E = l(theta phi) + l(0)``
    """
    if l != 'saturating_log_sigmoid':
        raise ValueError(f'unsupported DiracGAN loss {l!r}')

    def derivatives(phi, theta):
        return log_sigmoid_derivatives(theta[0] * phi[0])

    def f(phi, theta):
        return np.array([derivatives(phi, theta)[1] * theta[0]])

    def g(phi, theta):
        return np.array([-derivatives(phi, theta)[1] * phi[0]])

    def jac_phi_f(phi, theta):
        return np.array([[derivatives(phi, theta)[2] * theta[0] ** 2]])

    def jac_theta_f(phi, theta):
        _, d1, d2, _ = derivatives(phi, theta)
        return np.array([[d1 + d2 * theta[0] * phi[0]]])

    def jac_phi_g(phi, theta):
        _, d1, d2, _ = derivatives(phi, theta)
        return np.array([[-(d1 + d2 * theta[0] * phi[0])]])

    def jac_theta_g(phi, theta):
        return np.array([[-derivatives(phi, theta)[2] * phi[0] ** 2]])

    E = dirac_gan_loss_new()
    return GameProblem(
        dim_phi=1,
        dim_theta=1,
        f=f,
        g=g,
        jac_phi_f=jac_phi_f,
        jac_theta_f=jac_theta_f,
        jac_phi_g=jac_phi_g,
        jac_theta_g=jac_theta_g,
        losses=(
            lambda phi, theta: -E.eval(np.concatenate([phi, theta])),
            lambda phi, theta: E.eval(np.concatenate([phi, theta])),
        ),
        structure='zero_sum',
        base=E,
        split=1,
        supports_complex=False,
        name='diracgan',
    )


def linear_game_new(eps1: float = 0.0, eps2: float = 0.0) -> GameProblem:
    """
    Two-dimensional linear game ``f = -eps1 phi + theta``, ``g = eps2 theta - phi``.

    It is the zero-sum game of ``E = -eps1 phi^2 / 2 + phi theta - eps2 theta^2 / 2``;
    ``(0, 0)`` is its unique equilibrium.
    """
    A = np.array([[-eps1, 1.0], [1.0, -eps2]])
    E = quadratic_new(A, np.zeros(2))
    game = zero_sum_game_from_loss(E, 1)
    J = np.array([[-eps1, 1.0], [-1.0, eps2]])

    def constant(value):
        def run(phi, theta):
            return np.array([[value]])

        return run

    return GameProblem(
        dim_phi=1,
        dim_theta=1,
        f=lambda phi, theta: -eps1 * phi + theta,
        g=lambda phi, theta: eps2 * theta - phi,
        jac_phi_f=constant(J[0, 0]),
        jac_theta_f=constant(J[0, 1]),
        jac_phi_g=constant(J[1, 0]),
        jac_theta_g=constant(J[1, 1]),
        losses=game.losses,
        structure='zero_sum',
        base=E,
        split=1,
        supports_complex=True,
        name='lineargame',
    )
