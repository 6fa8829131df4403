from .oracles import fd_grad, fd_hvp, fd_jacobian, fd_third
from .spectral import Spectrum, eig_complex_sym, eig_general, eig_sym, leading_eig_hvp

__all__ = [
    'Spectrum',
    'eig_sym',
    'eig_complex_sym',
    'eig_general',
    'leading_eig_hvp',
    'fd_grad',
    'fd_hvp',
    'fd_third',
    'fd_jacobian',
]
