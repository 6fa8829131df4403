from typing import Callable

import numpy as np

from ..utils import as_vector
from .config import FD_EPS


def fd_grad(problem, theta: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    """Central-difference gradient of ``problem.eval``."""
    theta = as_vector(theta)
    out = np.empty(len(theta), dtype=float)
    for i in range(len(theta)):
        e = np.zeros(len(theta))
        e[i] = eps
        out[i] = np.real(problem.eval(theta + e) - problem.eval(theta - e)) / (2 * eps)
    return out


def fd_hvp(problem, theta: np.ndarray, v: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    """Central difference of ``problem.grad`` along ``v``."""
    theta = as_vector(theta)
    v = as_vector(v)
    return np.real(problem.grad(theta + eps * v) - problem.grad(theta - eps * v)) / (
        2 * eps
    )


def fd_third(
    problem, theta: np.ndarray, v: np.ndarray, w: np.ndarray, eps: float = FD_EPS
) -> np.ndarray:
    """Central difference of ``problem.hvp(., v)`` along ``w``."""
    theta = as_vector(theta)
    v = as_vector(v)
    w = as_vector(w)
    return np.real(
        problem.hvp(theta + eps * w, v) - problem.hvp(theta - eps * w, v)
    ) / (2 * eps)


def fd_jacobian(
    field: Callable[[np.ndarray], np.ndarray], x: np.ndarray, eps: float = FD_EPS
) -> np.ndarray:
    """
    Central-difference Jacobian of a vector field

    Parameters
    ----------
    field : Callable
        maps a vector of length ``n`` to a vector of length ``m``
    x : ndarray
        evaluation point
    eps : float, optional
        step, by default ``1e-5``

    Returns
    -------
    ndarray
        ``m x n`` matrix with ``J[i, j] = d field_i / d x_j``
    """
    x = as_vector(x)
    columns = []
    for j in range(len(x)):
        e = np.zeros(len(x))
        e[j] = eps
        columns.append((as_vector(field(x + e)) - as_vector(field(x - e))) / (2 * eps))
    return np.stack(columns, axis=1)
