from enum import Enum

# |f|, |g| must stay below this for the drift-matrix formulas to apply
EQUILIBRIUM_TOL = 1e-8
# real parts within this margin of zero give an inconclusive verdict
VERDICT_MARGIN = 1e-10
# h lambda within this distance of 1 or 2 is reported as a boundary
BOUNDARY_TOL = 1e-12
# above this dimension only the leading eigenpairs are reported
FULL_SPECTRUM_MAX_DIM = 256
DEFAULT_TOP_K = 16


class Regime(Enum):
    """Behaviour of gradient descent along an eigendirection, a function of ``h lambda``."""

    REAL_STABLE = 'real_stable'
    # h lambda = 1, the direction is solved in one step
    BOUNDARY_ONE = 'boundary_one'
    COMPLEX_STABLE = 'complex_stable'
    # h lambda = 2, constant-magnitude oscillation
    BOUNDARY_TWO = 'boundary_two'
    UNSTABLE_COMPLEX = 'unstable_complex'

    @property
    def is_boundary(self) -> bool:
        return self in (Regime.BOUNDARY_ONE, Regime.BOUNDARY_TWO)


class Verdict(Enum):
    STABLE = 'stable'
    UNSTABLE = 'unstable'
    INCONCLUSIVE = 'inconclusive'


# per-direction report headers
STABILITY_FIELDS = {
    'index': 'i',
    'eigenvalue': 'lambda',
    'h_lambda': 'h lambda',
    'g_dot_u': 'g.u',
    'sc': 'sc',
    'regime': 'regime',
}
