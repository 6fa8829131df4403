from typing import List, Sequence

import numpy as np

from ..common.errors import NonSymmetric
from ..utils import as_vector
from .config import QUADRATIC_SYMMETRY_TOL
from .core import Problem, make_problem


def quadratic_new(A: np.ndarray, b: np.ndarray = None) -> Problem:
    """
    Quadratic objective ``E = 1/2 theta^T A theta + b^T theta``

    Parameters
    ----------
    A : ndarray
        real symmetric ``D x D`` matrix
    b : ndarray, optional
        linear term, zeros by default

    Returns
    -------
    Problem
        analytic in ``theta``, third derivatives vanish

    Raises
    ------
    NonSymmetric
        ``||A - A^T||_inf > 1e-10``

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(2), np.zeros(2))
    >>> E.eval(np.array([1.0, 1.0]))
    1.0
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise NonSymmetric(f'A must be square, got shape {A.shape}')
    if np.linalg.norm(A - A.T, ord=np.inf) > QUADRATIC_SYMMETRY_TOL:
        raise NonSymmetric('A is not symmetric')
    dim = A.shape[0]
    b = np.zeros(dim) if b is None else as_vector(b).astype(float)
    if len(b) != dim:
        raise ValueError(f'b must have length {dim}, got {len(b)}')

    def eval(theta):
        return 0.5 * theta @ (A @ theta) + b @ theta

    def grad(theta):
        return A @ theta + b

    def hess(theta):
        return A.copy()

    def hvp(theta, v):
        return A @ v

    def third(theta, v, w):
        return np.zeros(dim, dtype=np.result_type(theta, v, w))

    return make_problem(
        dim, eval, grad, hess, third, supports_complex=True, name='quadratic', hvp=hvp
    )


def banana_new() -> Problem:
    """
    Rosenbrock banana ``(1 - x)^2 + 100 (y - x^2)^2`` on ``theta = (x, y)``.

    Examples
    --------
    >>> import driftflow as dft
    >>> E = dft.problems.banana_new()
    >>> E.grad([0.0, 0.0])
    array([-2.,  0.])
    """

    def eval(theta):
        x, y = theta
        return (1 - x) ** 2 + 100 * (y - x**2) ** 2

    def grad(theta):
        x, y = theta
        return np.array([-2 * (1 - x) - 400 * x * (y - x**2), 200 * (y - x**2)])

    def hess(theta):
        x, y = theta
        return np.array([[2 - 400 * y + 1200 * x**2, -400 * x], [-400 * x, 200.0 + 0 * x]])

    def third(theta, v, w):
        # only d3/dx3 = 2400 x and d3/dx2dy = -400 survive
        x = theta[0]
        return np.array(
            [
                2400 * x * v[0] * w[0] - 400 * (v[0] * w[1] + v[1] * w[0]),
                -400 * v[0] * w[0],
            ]
        )

    return make_problem(2, eval, grad, hess, third, supports_complex=True, name='banana')


def cos1d_new() -> Problem:
    """
    Piecewise 1-D objective ``cos(t) + t`` for ``t < 0`` and
    ``2 (t / 3)^2 + 1 + t / 3`` otherwise.

    The branch is chosen on the real part; derivatives at 0 are the
    right-sided ones.
    """

    def left(theta):
        return np.real(theta[0]) < 0

    def eval(theta):
        t = theta[0]
        if left(theta):
            return np.cos(t) + t
        return 2 * (t / 3) ** 2 + 1 + t / 3

    def grad(theta):
        t = theta[0]
        if left(theta):
            return np.array([1 - np.sin(t)])
        return np.array([4 * t / 9 + 1 / 3])

    def hess(theta):
        t = theta[0]
        if left(theta):
            return np.array([[-np.cos(t)]])
        return np.array([[4 / 9 + 0 * t]])

    def third(theta, v, w):
        t = theta[0]
        if left(theta):
            return np.array([np.sin(t) * v[0] * w[0]])
        return np.array([0 * t * v[0] * w[0]])

    return make_problem(1, eval, grad, hess, third, supports_complex=True, name='cos1d')


def polynomial1d_new(coeffs: Sequence[float]) -> Problem:
    """
    ``E(t) = sum_k coeffs[k] t^k`` with exact derivatives.

    Examples
    --------
    >>> import driftflow as dft
    >>> E = dft.problems.polynomial1d_new([0.0, 0.0, 0.5])
    >>> E.grad([2.0])
    array([2.])
    """
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    d1, d2, d3 = p.deriv(1), p.deriv(2), p.deriv(3)

    def eval(theta):
        return p(theta[0])

    def grad(theta):
        return np.array([d1(theta[0])])

    def hess(theta):
        return np.array([[d2(theta[0])]])

    def third(theta, v, w):
        return np.array([d3(theta[0]) * v[0] * w[0]])

    return make_problem(
        1, eval, grad, hess, third, supports_complex=True, name='polynomial'
    )


def _sigmoid(z):
    return 0.5 * (1 + np.tanh(0.5 * z))


def log_sigmoid_derivatives(z):
    """
    ``l(z) = -log(1 + exp(-z))`` and its first three derivatives at ``z``.
    """
    s_pos, s_neg = _sigmoid(z), _sigmoid(-z)
    value = -np.logaddexp(0.0, -z) if np.isrealobj(z) else -np.log(1 + np.exp(-z))
    return (
        value,
        s_neg,
        -s_pos * s_neg,
        s_pos * s_neg * (s_pos - s_neg),
    )


def dirac_gan_loss_new() -> Problem:
    """
    DiracGAN value ``E(phi, theta) = l(theta * phi) + l(0)`` over ``x = (phi, theta)``.

    Plugged into ``zero_sum_game_from_loss(E, 1)`` it yields the DiracGAN
    fields ``f = l'(theta phi) theta``, ``g = -l'(theta phi) phi``.
    """
    l0 = log_sigmoid_derivatives(0.0)[0]

    def eval(x):
        phi, theta = x
        return log_sigmoid_derivatives(theta * phi)[0] + l0

    def grad(x):
        phi, theta = x
        _, d1, _, _ = log_sigmoid_derivatives(theta * phi)
        return np.array([d1 * theta, d1 * phi])

    def hess(x):
        phi, theta = x
        _, d1, d2, _ = log_sigmoid_derivatives(theta * phi)
        mixed = d1 + d2 * theta * phi
        return np.array([[d2 * theta**2, mixed], [mixed, d2 * phi**2]])

    def third(x, v, w):
        # z = theta * phi, dz = (theta, phi), d2z = [[0, 1], [1, 0]]
        phi, theta = x
        _, _, d2, d3 = log_sigmoid_derivatives(theta * phi)
        dz = np.array([theta, phi])
        Z = np.array([[0.0, 1.0], [1.0, 0.0]])
        zv, zw = dz @ v, dz @ w
        return d3 * zv * zw * dz + d2 * ((Z @ v) * zw + (v @ Z @ w) * dz + (Z @ w) * zv)

    return make_problem(
        2, eval, grad, hess, third, supports_complex=False, name='diracloss'
    )


def quadratic_batches(centers: Sequence, scale: float = 1.0) -> List[Problem]:
    """
    Batch losses ``E(theta; x) = scale / 2 |theta - x|^2``, one per center

    Examples
    --------
    >>> import driftflow as dft
    >>> batches = dft.problems.quadratic_batches([[0.0], [2.0]])
    >>> batches[1].grad([1.0])
    array([-1.])
    """
    return [_shifted_quadratic(as_vector(center).astype(float), scale) for center in centers]


def _shifted_quadratic(x: np.ndarray, scale: float) -> Problem:
    dim = len(x)

    def eval(theta):
        d = theta - x
        return 0.5 * scale * (d @ d)

    def grad(theta):
        return scale * (theta - x)

    def hess(theta):
        return scale * np.eye(dim)

    def hvp(theta, v):
        return scale * v

    def third(theta, v, w):
        return np.zeros(dim, dtype=np.result_type(theta, v, w))

    return make_problem(
        dim, eval, grad, hess, third, supports_complex=True, name='batch', hvp=hvp
    )
