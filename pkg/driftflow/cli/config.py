# exit codes of the command line
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

TRACE_CSV = 'trace.csv'
TRACE_JSON = 'trace.json'
SUMMARY_JSON = 'summary.json'
OUTPUT_FORMATS = ('csv', 'json')

# flat config keys -> ExperimentConfig attribute
CONFIG_KEYS = {
    'problem.id': 'problem',
    'optimizer.rule': 'optimizer',
    'optimizer.h': 'h',
    'optimizer.beta': 'beta',
    'dal.p': 'dal_p',
    'dal.lr_cap': 'dal_lr_cap',
    'dal.proxy': 'dal_proxy',
    'game.rate_phi': 'rate_phi',
    'game.rate_theta': 'rate_theta',
    'game.m': 'm',
    'game.k': 'k',
    'flows': 'flows',
    'integrator.substep': 'substep',
    'integrator.scheme': 'scheme',
    'run.n_iters': 'n_iters',
    'run.seed': 'seed',
    'run.out': 'out',
    'run.theta0': 'theta0',
    'run.record_eigs': 'record_eigs',
}
# keys under this prefix are passed to the problem builder
PROBLEM_PARAM_PREFIX = 'problem.'

SINGLE_RULES = ('gd', 'momentum', 'dal', 'dal_momentum', 'dal_per_parameter')
GAME_RULES = ('sim', 'alt', 'rk4')

PRESETS = (
    'diracgan',
    'lineargame',
    'quadratic-exact',
    'order-check',
    'edge-of-stability',
    'dal',
    'gc',
)
