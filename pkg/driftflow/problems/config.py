# asymmetry allowed in quadratic_new, infinity norm of A - A.T
QUADRATIC_SYMMETRY_TOL = 1e-10
# mlp Hessians are assembled from exact hvps up to this dimension
EXACT_HESSIAN_MAX_DIM = 200
# complex-step size used for exact mlp Hessian-vector products
COMPLEX_STEP = 1e-20
# relative step of finite differences of the mlp gradient (Hessian, dim > 200)
MLP_HESS_EPS = 1e-5
# relative step of finite differences of the mlp hvp (third derivatives)
MLP_THIRD_EPS = 1e-4

ACTIVATIONS = ('relu', 'elu', 'tanh', 'identity')
LOSSES = ('mse', 'cross-entropy')
INITS = ('standard_truncated', 'glorot', 'zeros')

# desk-scale edge-of-stability network
DEFAULT_MLP_WIDTHS = [4, 10, 10, 10, 3]

# string ids understood by get_problem
PROBLEM_IDS = {
    'quadratic': 'quadratic_new',
    'banana': 'banana_new',
    'cos1d': 'cos1d_new',
    'polynomial': 'polynomial1d_new',
    'diracgan': 'dirac_gan_new',
    'diracloss': 'dirac_gan_loss_new',
    'lineargame': 'linear_game_new',
    'mlp': 'mlp_new',
}

# starting points used when a run config gives none
DEFAULT_POINTS = {
    'banana': [-1.0, 1.0],
    'cos1d': [-1.0],
    'diracgan': [0.5, 0.5],
    'diracloss': [0.5, 0.5],
    'lineargame': [1.0, 0.0],
}
