# |g| below this leaves the normalized drift proxy undefined
ZERO_GRAD_TOL = 1e-12
# order_estimate needs at least this many (h, error) pairs
MIN_FIT_PAIRS = 4

# per-iteration drift report headers
DRIFT_FIELDS = {
    'iter': 'iter',
    'loss': 'loss',
    'drift': 'drift',
    'hg': '|Hg|',
    'hg_hat': '|H g_hat|',
    'grad_norm': '|g|',
}
GC_FIELDS = {
    'depth': 'depth',
    'mean': 'mean GC',
    'std': 'std GC',
    'n_seeds': 'seeds',
}
