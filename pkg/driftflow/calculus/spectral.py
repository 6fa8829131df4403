from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ..common.errors import Defective, NoConvergence, NonSymmetric
from .config import DEFECTIVE_COND, LANCZOS_TOL, SYMMETRY_TOL


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenpairs sorted by descending real part.

    ``eigenvectors`` holds one eigenvector per column, or ``None`` when only
    the eigenvalues were requested.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def leading(self) -> complex:
        return self.eigenvalues[0]

    def residual(self, M: np.ndarray) -> float:
        """max over pairs of ``||M u - lambda u||``"""
        if self.eigenvectors is None:
            raise ValueError('spectrum was computed without eigenvectors')
        M = np.asarray(M)
        U = self.eigenvectors
        R = M @ U - U * self.eigenvalues[None, :]
        return float(np.max(np.linalg.norm(R, axis=0))) if R.size else 0.0


def _sort_order(values: np.ndarray) -> np.ndarray:
    # descending real part, then descending imaginary part, then index
    values = np.asarray(values, dtype=complex)
    index = np.arange(len(values))
    return np.lexsort((index, -values.imag, -values.real))


def _fix_signs(U: np.ndarray, ref_grad: Optional[np.ndarray]) -> np.ndarray:
    if ref_grad is None:
        return U
    dots = np.asarray(ref_grad) @ U
    signs = np.where(np.real(dots) < 0, -1.0, 1.0)
    return U * signs[None, :]


def check_symmetric(H: np.ndarray, tol: float = SYMMETRY_TOL) -> None:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NonSymmetric(f'expected a square matrix, got shape {H.shape}')
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if H.size and float(np.max(np.abs(H - H.T))) > tol * scale:
        raise NonSymmetric('matrix is not symmetric')


def eig_sym(
    H: np.ndarray, ref_grad: Optional[np.ndarray] = None, top_k: Optional[int] = None
) -> Spectrum:
    """
    Eigen-decomposition of a real symmetric matrix

    Parameters
    ----------
    H : ndarray
        real symmetric matrix (checked to ``1e-8`` relative)
    ref_grad : ndarray, optional
        reference gradient, eigenvectors are flipped so that
        ``Re(ref_grad @ u) >= 0``
    top_k : int, optional
        only the ``top_k`` largest eigenpairs

    Returns
    -------
    Spectrum
        descending eigenvalues with unit-norm eigenvector columns

    Raises
    ------
    NonSymmetric
        ``H`` is not symmetric
    NoConvergence
        the LAPACK driver did not converge

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> dft.calculus.eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]])).eigenvalues
    array([3., 1.])
    """
    H = np.asarray(H)
    if np.iscomplexobj(H):
        if np.max(np.abs(H.imag), initial=0.0) > SYMMETRY_TOL:
            raise NonSymmetric('eig_sym expects a real matrix')
        H = H.real
    check_symmetric(H)
    H = 0.5 * (H + H.T)
    n = H.shape[0]
    subset = None
    if top_k is not None and 0 < top_k < n:
        subset = [n - top_k, n - 1]
    try:
        values, vectors = scipy.linalg.eigh(H, subset_by_index=subset)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise NoConvergence(str(e)) from e
    order = np.argsort(-values, kind='stable')
    values = values[order]
    vectors = vectors[:, order]
    if ref_grad is not None:
        ref_grad = np.real(np.asarray(ref_grad))
    return Spectrum(values, _fix_signs(vectors, ref_grad))


def eig_complex_sym(
    H: np.ndarray, ref_grad: Optional[np.ndarray] = None
) -> Spectrum:
    """
    Eigenpairs of a complex symmetric (not Hermitian) matrix.

    Eigenvectors are scaled so that ``u.T @ u == 1``; with that bilinear
    normalization ``sum_i (g.T u_i) u_i == g`` for diagonalizable ``H``.
    """
    H = np.asarray(H, dtype=complex)
    if not np.iscomplexobj(H) or np.max(np.abs(H.imag), initial=0.0) == 0.0:
        spectrum = eig_sym(H.real, ref_grad=None)
        U = _fix_signs(spectrum.eigenvectors.astype(complex), ref_grad)
        return Spectrum(spectrum.eigenvalues.astype(complex), U)
    H = 0.5 * (H + H.T)
    try:
        values, vectors = scipy.linalg.eig(H)
    except scipy.linalg.LinAlgError as e:
        raise NoConvergence(str(e)) from e
    norms = np.sqrt(np.sum(vectors * vectors, axis=0))
    if np.any(np.abs(norms) < 1.0 / np.sqrt(DEFECTIVE_COND)):
        raise Defective('complex symmetric matrix has an isotropic eigenvector')
    vectors = vectors / norms[None, :]
    order = _sort_order(values)
    return Spectrum(values[order], _fix_signs(vectors[:, order], ref_grad))


def eig_general(J: np.ndarray, vectors: bool = False) -> Spectrum:
    """
    Eigenvalues (and optionally eigenvectors) of a general square matrix

    Parameters
    ----------
    J : ndarray
        real or complex square matrix
    vectors : bool, optional
        also return eigenvectors, in which case a defective ``J`` raises

    Returns
    -------
    Spectrum
        complex eigenvalues sorted by descending real part

    Raises
    ------
    Defective
        eigenvectors were requested and ``J`` is not diagonalizable
    """
    J = np.asarray(J)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValueError(f'expected a square matrix, got shape {J.shape}')
    try:
        if vectors:
            values, V = scipy.linalg.eig(J)
        else:
            values, V = scipy.linalg.eigvals(J), None
    except scipy.linalg.LinAlgError as e:
        raise NoConvergence(str(e)) from e
    values = values.astype(complex)
    order = _sort_order(values)
    values = values[order]
    if V is None:
        return Spectrum(values)
    V = V[:, order]
    if V.size and np.linalg.cond(V) > DEFECTIVE_COND:
        raise Defective('matrix is not diagonalizable')
    return Spectrum(values, V)


def leading_eig_hvp(
    hvp: Callable[[np.ndarray], np.ndarray],
    dim: int,
    ref_grad: Optional[np.ndarray] = None,
    tol: float = LANCZOS_TOL,
) -> Spectrum:
    """
    Largest eigenpair of a real symmetric operator known only through products

    Parameters
    ----------
    hvp : Callable
        ``v -> H v``
    dim : int
        size of ``H``
    ref_grad : ndarray, optional
        the eigenvector is flipped so that ``ref_grad @ u >= 0``
    tol : float, optional
        relative accuracy of the Lanczos iteration

    Returns
    -------
    Spectrum
        one eigenvalue and its unit eigenvector

    Raises
    ------
    NoConvergence
        ARPACK did not converge
    """
    operator = LinearOperator((dim, dim), matvec=lambda v: np.real(hvp(v)), dtype=float)
    # fixed start vector keeps repeated runs identical
    v0 = np.random.default_rng(0).normal(size=dim)
    try:
        values, vectors = eigsh(operator, k=1, which='LA', v0=v0, tol=tol)
    except ArpackNoConvergence as e:
        raise NoConvergence(str(e)) from e
    if ref_grad is not None:
        ref_grad = np.real(np.asarray(ref_grad))
    return Spectrum(values, _fix_signs(vectors, ref_grad))
