from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..calculus import Spectrum, eig_complex_sym, eig_sym
from ..common.errors import ComplexUnsupported, SingularArgument
from ..problems import Problem
from ..utils import as_vector, is_real
from .config import (
    FLOW_KINDS,
    IGR,
    NEEDS_LR,
    NGF,
    PF,
    PF_NON_PRINCIPAL,
    POSITIVE_GRADIENT,
    SERIES_TOL,
    SIGN_SWAP_LEADING,
    SINGULAR_TOL,
    THIRD_ORDER,
)


@dataclass(frozen=True)
class FlowKind:
    """
    A continuous-time model of gradient descent.

    ``h`` is the modeled learning rate; it is required by ``igr``,
    ``third_order``, ``pf`` and ``pf_non_principal`` and ignored otherwise.
    """

    kind: str
    h: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FLOW_KINDS:
            raise ValueError(f'unknown flow {self.kind!r}, expected one of {FLOW_KINDS}')
        if self.kind in NEEDS_LR:
            if self.h is None or not self.h > 0:
                raise ValueError(f'flow {self.kind!r} needs a learning rate h > 0')

    @classmethod
    def parse(cls, text: str, h: Optional[float] = None) -> 'FlowKind':
        """``'pf'`` or ``'pf:0.5'``; an explicit ``h`` in the text wins."""
        name, _, value = text.partition(':')
        name = name.strip().lower()
        if value:
            h = float(value)
        return cls(name, h if name in NEEDS_LR else None)

    def __str__(self) -> str:
        return self.kind if self.h is None else f'{self.kind}:{self.h:g}'


def _principal_log(w):
    # Im in (-pi, pi]; a signed zero imaginary part must not select -pi
    w = np.asarray(w, dtype=complex)
    w = np.where(w.imag == 0, w.real + 0j, w)
    return np.log(w)


def pf_coefficient(x) -> np.ndarray:
    """
    ``log(1 - x) / x`` on the principal branch, vectorized, ``-1`` at ``x = 0``.

    Raises ``SingularArgument`` when ``|1 - x| < 1e-12``.
    """
    x = np.asarray(x, dtype=complex)
    if np.any(np.abs(1 - x) < SINGULAR_TOL):
        raise SingularArgument('log(1 - h lambda) is singular at h lambda = 1')
    small = np.abs(x) < SERIES_TOL
    safe = np.where(small, 0.5, x)
    out = np.where(small, -1 - x / 2 - x**2 / 3, _principal_log(1 - safe) / safe)
    return out


def alpha(kind: Union[FlowKind, str], h_lambda: complex) -> complex:
    """
    Per-eigendirection coefficient of a flow

    Parameters
    ----------
    kind : FlowKind or str
        flow model
    h_lambda : complex
        learning rate times Hessian eigenvalue

    Returns
    -------
    complex
        ``-1`` (ngf), ``-(1 + x/2)`` (igr), ``-(1 + x/2 + x^2/3)`` (third
        order, principal part), ``log(1 - x)/x`` (pf), ``+1`` (positive
        gradient)

    Raises
    ------
    SingularArgument
        pf at ``h_lambda = 1``

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.flows.alpha('pf', 2.0)
    1.5707963267948966j
    """
    name = kind.kind if isinstance(kind, FlowKind) else str(kind)
    x = complex(h_lambda)
    if name == NGF:
        return complex(-1.0)
    if name == IGR:
        return -(1 + x / 2)
    if name == THIRD_ORDER:
        return -(1 + x / 2 + x**2 / 3)
    if name in (PF, PF_NON_PRINCIPAL):
        return complex(pf_coefficient(x))
    if name == POSITIVE_GRADIENT:
        return complex(1.0)
    raise ValueError(f'flow {name!r} has no scalar per-direction coefficient')


def _spectrum(problem: Problem, theta: np.ndarray, g: np.ndarray) -> Spectrum:
    H = problem.hess(theta)
    if is_real(theta) and is_real(H):
        return eig_sym(np.real(H), ref_grad=np.real(g))
    return eig_complex_sym(H, ref_grad=g)


def _check_point(problem: Problem, theta) -> np.ndarray:
    theta = as_vector(theta)
    if not is_real(theta) and not problem.supports_complex:
        raise ComplexUnsupported(
            f'{problem.name} does not support complex parameters, the principal '
            'flow can only be followed one step at a time (pf_frozen_step)'
        )
    return theta


def pf_field(problem: Problem, theta: np.ndarray, h: float) -> np.ndarray:
    g = problem.grad(theta)
    spectrum = _spectrum(problem, theta, g)
    U = spectrum.eigenvectors
    coefficients = pf_coefficient(h * spectrum.eigenvalues)
    return U @ (coefficients * (g @ U))


def flow_field(kind: FlowKind, problem: Problem, theta: np.ndarray) -> np.ndarray:
    """
    Vector field of a flow at ``theta``

    Parameters
    ----------
    kind : FlowKind
        flow model
    problem : Problem
        objective
    theta : ndarray
        real or (for analytic problems) complex point

    Returns
    -------
    ndarray
        the field, complex for the principal flow

    Raises
    ------
    ComplexUnsupported
        ``theta`` is complex and the problem is real-only
    SingularArgument
        some ``h lambda_i = 1`` for the principal flow

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.eye(1))
    >>> dft.flows.flow_field(dft.flows.FlowKind('pf', 0.5), E, np.array([1.0]))
    array([-1.38629436+0.j])
    """
    theta = _check_point(problem, theta)
    name, h = kind.kind, kind.h
    if name == NGF:
        return -problem.grad(theta)
    if name == POSITIVE_GRADIENT:
        return problem.grad(theta)
    if name == IGR:
        g = problem.grad(theta)
        return -g - h / 2 * problem.hvp(theta, g)
    if name == THIRD_ORDER:
        g = problem.grad(theta)
        Hg = problem.hvp(theta, g)
        HHg = problem.hvp(theta, Hg)
        return (
            -g
            - h / 2 * Hg
            - h**2 * (HHg / 3 + problem.third_contraction(theta, g, g) / 12)
        )
    if name == PF:
        return pf_field(problem, theta, h)
    if name == PF_NON_PRINCIPAL:
        g = problem.grad(theta)
        return pf_field(problem, theta, h) - h**2 / 12 * problem.third_contraction(
            theta, g, g
        )
    # sign swap: keep the ascent along u0, descend along every other direction
    g = problem.grad(theta)
    spectrum = _spectrum(problem, theta, g)
    U = spectrum.eigenvectors
    signs = -np.ones(len(spectrum))
    signs[0] = 1.0
    return U @ (signs * (g @ U))


def pf_quadratic_closed_form(
    A: np.ndarray, b: np.ndarray, theta0: np.ndarray, t: float, h: float
) -> np.ndarray:
    """
    Exact principal-flow solution on ``E = 1/2 theta^T A theta + b^T theta``

    In the eigenbasis ``z' = c (z + beta / lambda)`` with
    ``c = log(1 - h lambda) / h``, so
    ``z(t) = e^{ct} z0 + beta (e^{ct} - 1) / lambda``; the second term tends
    to ``-t beta`` when ``lambda -> 0``. At ``t = n h`` this equals ``n``
    gradient-descent steps.

    Raises
    ------
    SingularArgument
        some ``h lambda_i = 1``
    """
    A = np.asarray(A, dtype=float)
    theta0 = as_vector(theta0)
    b = np.zeros(len(theta0)) if b is None else as_vector(b)
    spectrum = eig_sym(A)
    lam, U = spectrum.eigenvalues, spectrum.eigenvectors
    alpha_pf = pf_coefficient(h * lam)
    c = alpha_pf * lam
    growth = np.exp(c * t)
    # (e^{ct} - 1) / lambda = alpha h (e^{ct} - 1) / (c h)
    ct = c * t
    small = np.abs(ct) < SERIES_TOL
    safe_c = np.where(small, 1.0, c)
    ratio = np.where(small, t * (1 + ct / 2), np.expm1(safe_c * t) / safe_c)
    z0 = theta0 @ U
    beta = b @ U
    z = growth * z0 + alpha_pf * beta * ratio
    return U @ z


def grad_dot_u_prediction(g_dot_u0: float, lam: float, h: float, t: float) -> complex:
    """
    Principal-flow prediction of ``grad E . u`` after time ``t``

    ``(grad E . u)(t) = (grad E . u)(0) exp(log(1 - h lam) t / h)``; its
    magnitude decays iff ``lam < 2 / h``.

    Examples
    --------
    >>> import driftflow as dft
    >>> abs(dft.flows.grad_dot_u_prediction(1.0, 3.0, 1.0, 1.0))
    2.0
    """
    x = h * lam
    if abs(1 - x) < SINGULAR_TOL:
        raise SingularArgument('log(1 - h lambda) is singular at h lambda = 1')
    return complex(g_dot_u0 * np.exp(_principal_log(1 - x) * t / h))


def pf_frozen_step(
    problem: Problem, theta: np.ndarray, h: float, t: Optional[float] = None
) -> np.ndarray:
    """
    Principal flow followed for time ``t`` with the spectrum frozen at ``theta``.

    This is the exact principal-flow solution of the local quadratic model
    ``E(theta) + g.d + 1/2 d^T H d``, the per-step mode offered for real-only
    problems such as MLPs; at ``t = h`` it returns the gradient-descent step.
    """
    theta = as_vector(theta)
    t = h if t is None else t
    g = problem.grad(theta)
    H = np.real(problem.hess(theta))
    step = pf_quadratic_closed_form(H, g - H @ np.real(theta), np.real(theta), t, h)
    return step
