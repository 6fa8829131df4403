from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from ..common.errors import ComplexUnsupported
from ..utils import as_vector, is_real

Vector = np.ndarray


@dataclass(frozen=True, eq=False)
class Problem:
    """
    Differentiable scalar objective with derivatives up to third order.

    ``third_contraction(theta, v, w)[k] = sum_ij d3E/dtheta_i dtheta_k dtheta_j v_i w_j``
    """

    dim: int
    eval: Callable[[Vector], complex]
    grad: Callable[[Vector], Vector]
    hess: Callable[[Vector], np.ndarray]
    hvp: Callable[[Vector, Vector], Vector]
    third_contraction: Callable[[Vector, Vector, Vector], Vector]
    supports_complex: bool
    name: str = 'problem'

    def check_point(self, theta) -> np.ndarray:
        theta = as_vector(theta)
        if len(theta) != self.dim:
            raise ValueError(f'{self.name} expects {self.dim} parameters, got {len(theta)}')
        if not self.supports_complex and not is_real(theta):
            raise ComplexUnsupported(f'{self.name} is only defined on real parameters')
        return theta


def make_problem(
    dim: int,
    eval: Callable,
    grad: Callable,
    hess: Callable,
    third_contraction: Callable,
    supports_complex: bool,
    name: str,
    hvp: Optional[Callable] = None,
) -> Problem:
    """
    Assemble a ``Problem`` whose evaluators validate their input point.

    ``hvp`` defaults to ``hess(theta) @ v``.
    """
    holder = {}

    def checked(f):
        def run(theta, *args):
            theta = holder['problem'].check_point(theta)
            return f(theta, *[as_vector(a) for a in args])

        return run

    if hvp is None:

        def hvp(theta, v):
            return hess(theta) @ v

    problem = Problem(
        dim=dim,
        eval=checked(eval),
        grad=checked(grad),
        hess=checked(hess),
        hvp=checked(hvp),
        third_contraction=checked(third_contraction),
        supports_complex=supports_complex,
        name=name,
    )
    holder['problem'] = problem
    return problem


Field = Callable[[Vector, Vector], Vector]
Block = Callable[[Vector, Vector], np.ndarray]


@dataclass(frozen=True, eq=False)
class GameProblem:
    """
    Two-player dynamics ``phi' = f(phi, theta)``, ``theta' = g(phi, theta)``.

    ``jac_x_y`` is the Jacobian of field ``y`` with respect to player ``x``:
    ``jac_theta_f`` has shape ``dim_phi x dim_theta``.
    ``structure`` is ``'zero_sum'`` or ``'common_payoff'`` for games derived
    from a single loss ``base`` over the concatenation ``(phi, theta)``,
    whose first ``split`` coordinates belong to ``phi``.
    """

    dim_phi: int
    dim_theta: int
    f: Field
    g: Field
    jac_phi_f: Block
    jac_theta_f: Block
    jac_phi_g: Block
    jac_theta_g: Block
    losses: Optional[Tuple[Callable, Callable]] = None
    structure: Optional[str] = None
    base: Optional[Problem] = None
    split: Optional[int] = None
    supports_complex: bool = False
    name: str = 'game'
    extras: dict = field(default_factory=dict)

    def fields(self, phi, theta) -> Tuple[Vector, Vector]:
        phi, theta = as_vector(phi), as_vector(theta)
        return as_vector(self.f(phi, theta)), as_vector(self.g(phi, theta))

    def jacobian(self, phi, theta) -> np.ndarray:
        """Full Jacobian of ``(f, g)`` with respect to ``(phi, theta)``."""
        phi, theta = as_vector(phi), as_vector(theta)
        return np.block(
            [
                [self.jac_phi_f(phi, theta), self.jac_theta_f(phi, theta)],
                [self.jac_phi_g(phi, theta), self.jac_theta_g(phi, theta)],
            ]
        )

    def joint_field(self, x) -> Vector:
        x = as_vector(x)
        f, g = self.fields(x[: self.dim_phi], x[self.dim_phi :])
        return np.concatenate([f, g])
