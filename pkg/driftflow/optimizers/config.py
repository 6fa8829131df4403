# maximum DAL learning rate
DAL_LR_CAP = 5.0
# length of the finite-difference probe along the gradient, eps = 0.01 / |g|
DAL_FD_PROBE = 0.01
# probe step used instead when |g| exceeds DAL_FD_GRAD_LIMIT
DAL_FD_FALLBACK_EPS = 1e-6
DAL_FD_GRAD_LIMIT = 1e4
# gradients with a smaller norm cannot be normalized
ZERO_GRAD_TOL = 1e-12
# per-parameter drift coordinates below this use the rate cap
ZERO_COORD_TOL = 1e-12

DAL_PROXIES = ('exact_hvp', 'fd_approx')
GAME_MODES = ('simultaneous', 'alternating')
GAME_SCHEMES = ('sim', 'alt', 'rk4')
RULES = ('gd', 'momentum', 'dal', 'dal_momentum', 'dal_per_parameter')

# per-iteration training log headers
TRAIN_FIELDS = {
    'iter': 'iter',
    'loss': 'loss',
    'grad_norm': '|g|',
    'lr': 'lr',
    'lambda0': 'lambda0',
}
GAME_FIELDS = {
    'iter': 'iter',
    'radius': '|(phi, theta)|',
    'f_norm': '|f|',
    'g_norm': '|g|',
}
