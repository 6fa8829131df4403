from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..calculus import eig_general, eig_sym
from ..common.errors import SingularArgument
from ..flows import FlowKind, alpha, pf_coefficient
from ..problems import Problem
from ..utils import as_vector, rename_dataframe_and_series, split_complex_columns, to_jsonable
from .config import (
    BOUNDARY_TOL,
    DEFAULT_TOP_K,
    FULL_SPECTRUM_MAX_DIM,
    STABILITY_FIELDS,
    VERDICT_MARGIN,
    Regime,
    Verdict,
)


def classify(h_lambda: float) -> Regime:
    """
    Regime of an eigendirection

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.stability.classify(1.5)
    <Regime.COMPLEX_STABLE: 'complex_stable'>
    """
    x = float(h_lambda)
    if abs(x - 1.0) <= BOUNDARY_TOL:
        return Regime.BOUNDARY_ONE
    if abs(x - 2.0) <= BOUNDARY_TOL:
        return Regime.BOUNDARY_TWO
    if x < 1.0:
        return Regime.REAL_STABLE
    if x < 2.0:
        return Regime.COMPLEX_STABLE
    return Regime.UNSTABLE_COMPLEX


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """
    Per-eigendirection stability coefficients ``sc_i = alpha_PF(h lambda_i) (g . u_i)``.

    ``sc_i`` is NaN along directions with ``h lambda_i = 1``.
    """

    h: float
    eigenvalues: np.ndarray
    g_dot_u: np.ndarray
    sc: np.ndarray
    regimes: List[Regime]

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def unstable(self) -> bool:
        """any direction with ``Re(sc_i) > 0``"""
        return bool(np.any(np.real(self.sc) > 0))

    @rename_dataframe_and_series(STABILITY_FIELDS)
    @split_complex_columns
    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                'index': np.arange(len(self)),
                'eigenvalue': self.eigenvalues,
                'h_lambda': self.h * self.eigenvalues,
                'g_dot_u': self.g_dot_u,
                'sc': self.sc.astype(complex),
                'regime': [r.value for r in self.regimes],
            }
        )

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                'h': self.h,
                'eigenvalues': self.eigenvalues,
                'g_dot_u': self.g_dot_u,
                'sc': self.sc,
                'regimes': self.regimes,
            }
        )


def stability_report(
    problem: Problem, theta: np.ndarray, h: float, top_k: Optional[int] = None
) -> StabilityReport:
    """
    Stability coefficients of gradient descent with learning rate ``h`` at ``theta``

    Parameters
    ----------
    problem : Problem
        objective
    theta : ndarray
        real point
    h : float
        learning rate
    top_k : int, optional
        keep only the leading eigenpairs; problems with more than 256
        parameters default to 16

    Returns
    -------
    StabilityReport
        eigenvalues in descending order, eigenvectors signed so that
        ``g . u_i >= 0``

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> E = dft.problems.quadratic_new(np.diag([1.0, 4.0]))
    >>> report = dft.stability.stability_report(E, np.array([1.0, 1.0]), 0.5)
    >>> [r.value for r in report.regimes]
    ['boundary_two', 'real_stable']
    """
    theta = problem.check_point(np.real(as_vector(theta)))
    g = np.real(problem.grad(theta))
    if top_k is None and problem.dim > FULL_SPECTRUM_MAX_DIM:
        top_k = DEFAULT_TOP_K
    spectrum = eig_sym(np.real(problem.hess(theta)), ref_grad=g, top_k=top_k)
    lam = np.real(spectrum.eigenvalues)
    g_dot_u = g @ np.real(spectrum.eigenvectors)
    sc = np.empty(len(lam), dtype=complex)
    for i, (x, d) in enumerate(zip(h * lam, g_dot_u)):
        try:
            sc[i] = alpha('pf', x) * d
        except SingularArgument:
            sc[i] = complex('nan')
    return StabilityReport(
        h=float(h),
        eigenvalues=lam,
        g_dot_u=g_dot_u,
        sc=sc,
        regimes=[classify(x) for x in h * lam],
    )


def critical_jacobian_eigs(
    flow: Union[FlowKind, str], lam_star: Sequence[float], h: float
) -> np.ndarray:
    """
    Eigenvalues of a flow's Jacobian at a critical point with Hessian
    eigenvalues ``lam_star``

    Parameters
    ----------
    flow : FlowKind or str
        ``ngf``, ``igr``, ``third_order`` or ``pf``
    lam_star : Sequence[float]
        Hessian eigenvalues at the critical point
    h : float
        modeled learning rate

    Returns
    -------
    ndarray
        ``-lambda``, ``-(lambda + h lambda^2 / 2)``,
        ``-(lambda + h lambda^2 / 2 + h^2 lambda^3 / 3)`` or
        ``log(1 - h lambda) / h``

    Raises
    ------
    SingularArgument
        PF with ``h lambda = 1``

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.stability.critical_jacobian_eigs('ngf', [-1.0], 0.1)
    array([1.+0.j])
    """
    kind = flow.kind if isinstance(flow, FlowKind) else str(flow)
    lam = np.asarray(as_vector(lam_star), dtype=complex)
    if kind == 'ngf':
        return -lam
    if kind == 'igr':
        return -(lam + h / 2 * lam**2)
    if kind == 'third_order':
        return -(lam + h / 2 * lam**2 + h**2 / 3 * lam**3)
    if kind == 'pf':
        return pf_coefficient(h * lam) * lam
    raise ValueError(f'no critical-point Jacobian for flow {kind!r}')


def verdict_from_eigenvalues(eigenvalues: np.ndarray) -> Verdict:
    top = float(np.max(np.real(eigenvalues)))
    if top < -VERDICT_MARGIN:
        return Verdict.STABLE
    if top > VERDICT_MARGIN:
        return Verdict.UNSTABLE
    return Verdict.INCONCLUSIVE


def exp_stable(J: np.ndarray) -> Verdict:
    """
    Exponential stability of ``x' = J x`` from the largest real part of the spectrum

    Examples
    --------
    >>> import driftflow as dft
    >>> dft.stability.exp_stable([[0.0, 1.0], [-1.0, 0.0]])
    <Verdict.INCONCLUSIVE: 'inconclusive'>
    """
    return verdict_from_eigenvalues(eig_general(np.atleast_2d(J)).eigenvalues)
