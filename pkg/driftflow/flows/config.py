# |1 - h lambda| below this makes the principal log singular
SINGULAR_TOL = 1e-12
# |h lambda| below this uses the series of log(1 - x) / x
SERIES_TOL = 1e-6
# Euler substep of the flow-estimation procedure
DEFAULT_SUBSTEP = 5e-5
DEFAULT_MAX_STEPS = 10_000_000
SCHEMES = ('euler', 'rk4')

NGF = 'ngf'
IGR = 'igr'
THIRD_ORDER = 'third_order'
PF = 'pf'
PF_NON_PRINCIPAL = 'pf_non_principal'
POSITIVE_GRADIENT = 'positive_gradient'
SIGN_SWAP_LEADING = 'sign_swap_leading'

FLOW_KINDS = (
    NGF,
    IGR,
    THIRD_ORDER,
    PF,
    PF_NON_PRINCIPAL,
    POSITIVE_GRADIENT,
    SIGN_SWAP_LEADING,
)
# kinds parametrised by the modeled learning rate
NEEDS_LR = (IGR, THIRD_ORDER, PF, PF_NON_PRINCIPAL)

# trajectory csv headers
TRAJECTORY_FIELDS = {
    't': 't',
    'loss': 'Re(E)',
    'grad_norm': '|g|',
    'lambda0': 'lambda0',
    'sc0': 'sc0',
}
