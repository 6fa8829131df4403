from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import truncnorm

from ..common.errors import ShapeMismatch
from .config import (
    ACTIVATIONS,
    COMPLEX_STEP,
    EXACT_HESSIAN_MAX_DIM,
    INITS,
    LOSSES,
    MLP_HESS_EPS,
    MLP_THIRD_EPS,
)
from .core import Problem, make_problem

Params = Tuple[List[np.ndarray], List[np.ndarray]]


@dataclass(frozen=True, eq=False)
class MlpSpec:
    """
    Fully connected network together with its full-batch dataset.

    ``weights[i]`` has shape ``(widths[i + 1], widths[i])``; the activation is
    applied to every layer but the last, whose output are the logits.
    """

    widths: List[int]
    activation: str = 'elu'
    weights: List[np.ndarray] = field(default_factory=list)
    biases: List[np.ndarray] = field(default_factory=list)
    inputs: Optional[np.ndarray] = None
    targets: Optional[np.ndarray] = None
    loss: str = 'mse'

    def __post_init__(self):
        widths = [int(w) for w in self.widths]
        if len(widths) < 2 or min(widths) < 1:
            raise ShapeMismatch(f'need at least two positive widths, got {self.widths}')
        if self.activation not in ACTIVATIONS:
            raise ValueError(f'unknown activation {self.activation!r}')
        if self.loss not in LOSSES:
            raise ValueError(f'unknown loss {self.loss!r}')
        object.__setattr__(self, 'widths', widths)
        if not self.weights:
            object.__setattr__(
                self, 'weights', [np.zeros((o, i)) for i, o in zip(widths, widths[1:])]
            )
        if not self.biases:
            object.__setattr__(self, 'biases', [np.zeros(o) for o in widths[1:]])
        for n, (i, o) in enumerate(zip(widths, widths[1:])):
            if np.shape(self.weights[n]) != (o, i) or np.shape(self.biases[n]) != (o,):
                raise ShapeMismatch(f'layer {n} parameters do not match widths {widths}')
        if self.inputs is not None:
            X = np.atleast_2d(np.asarray(self.inputs, dtype=float))
            if X.shape[1] != widths[0]:
                raise ShapeMismatch(
                    f'inputs have {X.shape[1]} features, widths start with {widths[0]}'
                )
            object.__setattr__(self, 'inputs', X)
        if self.targets is not None:
            Y = np.atleast_2d(np.asarray(self.targets, dtype=float))
            if Y.shape[1] != widths[-1]:
                raise ShapeMismatch(
                    f'targets have {Y.shape[1]} columns, widths end with {widths[-1]}'
                )
            if self.inputs is not None and len(Y) != len(self.inputs):
                raise ShapeMismatch('inputs and targets have different row counts')
            object.__setattr__(self, 'targets', Y)

    @property
    def n_params(self) -> int:
        return sum(i * o + o for i, o in zip(self.widths, self.widths[1:]))

    def flatten(self) -> np.ndarray:
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(np.ravel(W))
            parts.append(np.ravel(b))
        return np.concatenate(parts)

    def unflatten(self, theta: np.ndarray) -> Params:
        theta = np.asarray(theta)
        if theta.shape != (self.n_params,):
            raise ShapeMismatch(f'expected {self.n_params} parameters, got {theta.shape}')
        weights, biases = [], []
        start = 0
        for i, o in zip(self.widths, self.widths[1:]):
            weights.append(theta[start : start + i * o].reshape(o, i))
            start += i * o
            biases.append(theta[start : start + o])
            start += o
        return weights, biases


def _elu_negative(z):
    if np.iscomplexobj(z):
        return np.exp(np.minimum(np.real(z), 0) + 1j * np.imag(z))
    return np.exp(np.minimum(z, 0))


def activate(name: str, z: np.ndarray) -> np.ndarray:
    # branches are taken on the real part so that complex-step probes stay analytic
    if name == 'relu':
        return np.where(np.real(z) > 0, z, 0 * z)
    if name == 'elu':
        return np.where(np.real(z) > 0, z, _elu_negative(z) - 1)
    if name == 'tanh':
        return np.tanh(z)
    return z


def activate_prime(name: str, z: np.ndarray) -> np.ndarray:
    if name == 'relu':
        return np.where(np.real(z) > 0, 1.0, 0.0) + 0 * z
    if name == 'elu':
        return np.where(np.real(z) > 0, 1.0 + 0 * z, _elu_negative(z))
    if name == 'tanh':
        return 1 - np.tanh(z) ** 2
    return np.ones_like(z)


def layer_activations(
    weights, biases, activation: str, X: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Pre-activations of every layer and the post-activations starting with ``X``."""
    pre = []
    post = [X]
    a = X
    last = len(weights) - 1
    for n, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W.T + b
        pre.append(z)
        a = z if n == last else activate(activation, z)
        post.append(a)
    return pre, post


def mlp_forward(spec: MlpSpec, inputs: Optional[np.ndarray] = None) -> np.ndarray:
    """Logits of the network on ``inputs`` (its own dataset by default)."""
    X = spec.inputs if inputs is None else np.atleast_2d(np.asarray(inputs, dtype=float))
    if X is None:
        raise ShapeMismatch('no inputs were given')
    if X.shape[1] != spec.widths[0]:
        raise ShapeMismatch(f'inputs have {X.shape[1]} features, expected {spec.widths[0]}')
    pre, _ = layer_activations(spec.weights, spec.biases, spec.activation, X)
    return pre[-1]


def input_jacobians(spec: MlpSpec, inputs: np.ndarray) -> np.ndarray:
    """
    Jacobians of the logits with respect to the inputs, shape ``(N, out, in)``.

    Computed by pushing the identity through the layers, one pass for all
    examples.
    """
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    if X.shape[1] != spec.widths[0]:
        raise ShapeMismatch(f'inputs have {X.shape[1]} features, expected {spec.widths[0]}')
    pre, _ = layer_activations(spec.weights, spec.biases, spec.activation, X)
    J = np.broadcast_to(np.eye(X.shape[1]), (len(X), X.shape[1], X.shape[1]))
    last = len(spec.weights) - 1
    for n, W in enumerate(spec.weights):
        J = np.einsum('oi,nij->noj', W, J)
        if n != last:
            J = J * activate_prime(spec.activation, pre[n])[:, :, None]
    return J


def _loss_and_delta(kind, logits, Y):
    N = len(Y)
    if kind == 'mse':
        r = logits - Y
        return 0.5 * np.sum(r * r) / N, r / N
    # cross-entropy with a real shift so the expression stays analytic
    shift = np.max(np.real(logits), axis=1, keepdims=True)
    e = np.exp(logits - shift)
    s = np.sum(e, axis=1, keepdims=True)
    lse = shift + np.log(s)
    loss = np.sum(lse[:, 0] - np.sum(logits * Y, axis=1)) / N
    return loss, (e / s - Y) / N


def _loss(spec: MlpSpec, theta):
    weights, biases = spec.unflatten(theta)
    pre, _ = layer_activations(weights, biases, spec.activation, spec.inputs)
    return _loss_and_delta(spec.loss, pre[-1], spec.targets)[0]


def _grad(spec: MlpSpec, theta):
    weights, biases = spec.unflatten(theta)
    pre, post = layer_activations(weights, biases, spec.activation, spec.inputs)
    _, delta = _loss_and_delta(spec.loss, pre[-1], spec.targets)
    grads = []
    for n in reversed(range(len(weights))):
        gW = delta.T @ post[n]
        gb = np.sum(delta, axis=0)
        grads.append(np.concatenate([gW.ravel(), gb]))
        if n > 0:
            delta = (delta @ weights[n]) * activate_prime(spec.activation, pre[n - 1])
    return np.concatenate(grads[::-1])


def _hvp(spec: MlpSpec, theta, v):
    # complex-step differentiation of the reverse-mode gradient
    theta = np.real(theta).astype(float)
    if np.iscomplexobj(v) and np.any(np.imag(v) != 0):
        return _hvp(spec, theta, np.real(v)) + 1j * _hvp(spec, theta, np.imag(v))
    v = np.real(v).astype(float)
    return np.imag(_grad(spec, theta + 1j * COMPLEX_STEP * v)) / COMPLEX_STEP


def _hess(spec: MlpSpec, theta):
    theta = np.real(theta).astype(float)
    dim = len(theta)
    if dim <= EXACT_HESSIAN_MAX_DIM:
        H = np.stack([_hvp(spec, theta, e) for e in np.eye(dim)], axis=1)
    else:
        eps = MLP_HESS_EPS * (1 + np.max(np.abs(theta)))
        columns = []
        for e in np.eye(dim):
            step = _grad(spec, theta + eps * e) - _grad(spec, theta - eps * e)
            columns.append(step / (2 * eps))
        H = np.stack(columns, axis=1)
    return 0.5 * (H + H.T)


def _third(spec: MlpSpec, theta, v, w):
    theta = np.real(theta).astype(float)
    eps = MLP_THIRD_EPS * (1 + np.max(np.abs(theta)))
    return (_hvp(spec, theta + eps * np.real(w), v) - _hvp(spec, theta - eps * np.real(w), v)) / (
        2 * eps
    )


def mlp_new(spec: MlpSpec) -> Problem:
    """
    Full-batch training loss of an MLP as a ``Problem`` over its flattened
    parameters

    Parameters
    ----------
    spec : MlpSpec
        network, dataset and loss

    Returns
    -------
    Problem
        real-only problem; gradients by reverse accumulation, Hessian-vector
        products by complex-step differentiation of the gradient, Hessians
        exact up to ``dim = 200`` and from finite differences above,
        third derivatives from finite differences of the Hessian-vector
        product

    Raises
    ------
    ShapeMismatch
        the dataset is missing or does not match the widths
    """
    if spec.inputs is None or spec.targets is None:
        raise ShapeMismatch('mlp_new needs both inputs and targets')
    return make_problem(
        spec.n_params,
        eval=lambda theta: float(np.real(_loss(spec, np.real(theta)))),
        grad=lambda theta: np.real(_grad(spec, np.real(theta).astype(float))),
        hess=lambda theta: _hess(spec, theta),
        hvp=lambda theta, v: _hvp(spec, theta, v),
        third_contraction=lambda theta, v, w: np.real(_third(spec, theta, v, w)),
        supports_complex=False,
        name='mlp',
    )


def mlp_init(
    widths: List[int], init: str = 'standard_truncated', rng: np.random.Generator = None
) -> Params:
    """
    Seeded initial weights and zero biases

    Parameters
    ----------
    widths : List[int]
        layer widths
    init : str, optional
        ``'standard_truncated'`` (truncated normal on [-2, 2] scaled by
        ``1/sqrt(fan_in)``), ``'glorot'`` (normal with variance
        ``2 / (fan_in + fan_out)``) or ``'zeros'``
    rng : Generator, optional
        random source, ``default_rng(0)`` by default

    Returns
    -------
    Tuple[List[ndarray], List[ndarray]]
        weights and biases
    """
    if init not in INITS:
        raise ValueError(f'unknown init {init!r}, expected one of {INITS}')
    rng = np.random.default_rng(0) if rng is None else rng
    weights, biases = [], []
    for fan_in, fan_out in zip(widths, widths[1:]):
        if init == 'standard_truncated':
            W = truncnorm.rvs(-2.0, 2.0, size=(fan_out, fan_in), random_state=rng)
            W = W / np.sqrt(fan_in)
        elif init == 'glorot':
            W = rng.normal(0.0, np.sqrt(2.0 / (fan_in + fan_out)), size=(fan_out, fan_in))
        else:
            W = np.zeros((fan_out, fan_in))
        weights.append(np.asarray(W, dtype=float))
        biases.append(np.zeros(fan_out))
    return weights, biases


def make_blobs(
    n_per_class: int,
    n_classes: int,
    dim: int,
    rng: np.random.Generator = None,
    spread: float = 1.0,
    separation: float = 3.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gaussian blobs with one-hot targets.

    Returns ``(inputs, targets)`` of shapes ``(n, dim)`` and ``(n, n_classes)``
    with ``n = n_per_class * n_classes``, rows grouped by class.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    centers = rng.normal(0.0, separation, size=(n_classes, dim))
    X = np.concatenate(
        [c + spread * rng.normal(size=(n_per_class, dim)) for c in centers], axis=0
    )
    labels = np.repeat(np.arange(n_classes), n_per_class)
    Y = np.eye(n_classes)[labels]
    return X, Y
