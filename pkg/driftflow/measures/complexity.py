from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..common.errors import NotPiecewiseLinear, ShapeMismatch
from ..problems import MlpSpec, input_jacobians, layer_activations, mlp_init
from ..utils import rename_dataframe_and_series
from .config import GC_FIELDS


def _inputs(spec: MlpSpec, inputs: Optional[np.ndarray]) -> np.ndarray:
    X = spec.inputs if inputs is None else np.atleast_2d(np.asarray(inputs, dtype=float))
    if X is None or len(X) == 0:
        raise ShapeMismatch('geometric complexity needs at least one input')
    return X


def geometric_complexity(spec: MlpSpec, inputs: Optional[np.ndarray] = None) -> float:
    """
    Mean squared Frobenius norm of the logits' input Jacobian

    Parameters
    ----------
    spec : MlpSpec
        network; its dataset is used when ``inputs`` is omitted
    inputs : ndarray, optional
        ``(N, widths[0])`` inputs

    Returns
    -------
    float
        ``mean_n |d f(x_n) / d x|_F^2``

    Raises
    ------
    ShapeMismatch
        empty inputs or wrong feature count

    Examples
    --------
    >>> import numpy as np
    >>> import driftflow as dft
    >>> spec = dft.problems.MlpSpec([2, 2], 'identity', [np.eye(2)], [np.zeros(2)])
    >>> dft.measures.geometric_complexity(spec, np.ones((3, 2)))
    2.0
    """
    J = input_jacobians(spec, _inputs(spec, inputs))
    return float(np.mean(np.sum(J**2, axis=(1, 2))))


def gc_relu_piecewise(spec: MlpSpec, inputs: Optional[np.ndarray] = None) -> float:
    """
    Geometric complexity of a ReLU network from its linear regions

    Every activation pattern realized on ``inputs`` contributes
    ``(n_p / N) |A_p|_F^2`` where ``A_p`` is the product of the weights
    masked by the pattern.

    Raises ``NotPiecewiseLinear`` for activations other than ``relu`` and
    ``identity``.
    """
    if spec.activation not in ('relu', 'identity'):
        raise NotPiecewiseLinear(f'{spec.activation} networks are not piecewise linear')
    X = _inputs(spec, inputs)
    pre, _ = layer_activations(spec.weights, spec.biases, spec.activation, X)
    hidden = pre[:-1]
    if spec.activation == 'identity' or not hidden:
        # a single linear region
        patterns, counts = [None], [len(X)]
    else:
        masks = np.concatenate([z > 0 for z in hidden], axis=1)
        patterns, counts = np.unique(masks, axis=0, return_counts=True)
    widths = [len(b) for b in spec.biases[:-1]]
    total = 0.0
    for pattern, count in zip(patterns, counts):
        A = spec.weights[0]
        start = 0
        for W, width in zip(spec.weights[1:], widths):
            if spec.activation == 'relu':
                A = A * pattern[start : start + width][:, None]
            start += width
            A = W @ A
        total += count / len(X) * float(np.sum(A**2))
    return float(total)


def gc_init_depth_study(
    widths_base: int,
    depth_range: Sequence[int],
    init: str = 'standard_truncated',
    seeds: Sequence[int] = tuple(range(10)),
    input_dim: int = 2,
    n_samples: int = 100,
    output_dim: int = 1,
    activation: str = 'relu',
) -> pd.DataFrame:
    """
    Geometric complexity at initialization as a function of depth

    A network of depth ``d`` has widths ``[input_dim] + [widths_base] * (d - 1)
    + [output_dim]``; each seed draws the weights and ``n_samples`` standard
    normal inputs.

    Returns
    -------
    DataFrame
        one row per depth with the mean and standard deviation over seeds
    """
    rows = []
    for depth in depth_range:
        widths = [input_dim] + [widths_base] * (depth - 1) + [output_dim]
        values = []
        for seed in seeds:
            rng = np.random.default_rng(seed)
            weights, biases = mlp_init(widths, init, rng)
            X = rng.normal(size=(n_samples, input_dim))
            spec = MlpSpec(widths, activation, weights, biases)
            values.append(geometric_complexity(spec, X))
        rows.append(
            {
                'depth': depth,
                'mean': float(np.mean(values)),
                'std': float(np.std(values)),
                'n_seeds': len(values),
            }
        )
    return _depth_frame(rows)


@rename_dataframe_and_series(GC_FIELDS)
def _depth_frame(rows) -> pd.DataFrame:
    return pd.DataFrame(rows)


def gc_depth_trend(study: pd.DataFrame) -> bool:
    """``True`` when the mean GC strictly decreases with depth."""
    means = study.sort_values(GC_FIELDS['depth'])[GC_FIELDS['mean']].to_numpy()
    return bool(np.all(np.diff(means) < 0))
