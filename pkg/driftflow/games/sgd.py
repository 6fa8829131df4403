from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..problems import Problem
from ..utils import as_vector


@dataclass(frozen=True, eq=False)
class SgdModifiedLossInput:
    """
    ``n`` consecutive mini-batch losses visited from ``theta_ref`` with
    learning rate ``h``; ``theta_ref`` defaults to ``theta``.
    """

    batches: List[Problem]
    theta: np.ndarray
    h: float
    theta_ref: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.batches) < 1:
            raise ValueError('at least one batch is needed')
        object.__setattr__(self, 'theta', as_vector(self.theta))
        ref = self.theta if self.theta_ref is None else as_vector(self.theta_ref)
        object.__setattr__(self, 'theta_ref', ref)

    @property
    def n(self) -> int:
        return len(self.batches)

    def with_theta(self, theta: np.ndarray) -> 'SgdModifiedLossInput':
        """Same batches and reference point, evaluated at ``theta``."""
        return SgdModifiedLossInput(self.batches, theta, self.h, self.theta_ref)


def _alignment_sums(data: SgdModifiedLossInput) -> List[np.ndarray]:
    # S_mu = sum_{tau < mu} grad E_tau(theta_ref)
    sums, running = [], np.zeros_like(data.theta_ref, dtype=float)
    for batch in data.batches:
        sums.append(running.copy())
        running = running + batch.grad(data.theta_ref)
    return sums


def sgd_modified_loss(data: SgdModifiedLossInput) -> float:
    """
    Modified loss followed by ``n`` sequential mini-batch steps

    ``E + (n h / 4) |grad E|^2 - (h / n) sum_mu grad E_mu(theta) . S_mu``, with
    ``E`` the mean batch loss and ``S_mu`` the sum of the earlier batch
    gradients at ``theta_ref``.

    Examples
    --------
    >>> import driftflow as dft
    >>> batches = dft.problems.quadratic_batches([[0.0], [2.0]])
    >>> data = dft.games.SgdModifiedLossInput(batches, [1.0], 0.1)
    >>> round(dft.games.sgd_modified_loss(data), 12)
    0.55
    """
    theta, n, h = data.theta, data.n, data.h
    mean_loss = np.mean([np.real(b.eval(theta)) for b in data.batches])
    grads = [b.grad(theta) for b in data.batches]
    mean_grad = np.mean(grads, axis=0)
    alignment = sum(float(g @ s) for g, s in zip(grads, _alignment_sums(data)))
    return float(mean_loss + n * h / 4 * (mean_grad @ mean_grad) - h / n * alignment)


def sgd_modified_flow_field(data: SgdModifiedLossInput) -> np.ndarray:
    """
    ``-grad sgd_modified_loss`` with ``theta_ref`` held fixed

    For ``n = 1`` this is the IGR field ``-g - (h/2) H g``.
    """
    theta, n, h = data.theta, data.n, data.h
    grads = [b.grad(theta) for b in data.batches]
    mean_grad = np.mean(grads, axis=0)
    mean_hvp = np.mean([b.hvp(theta, mean_grad) for b in data.batches], axis=0)
    alignment = sum(
        b.hvp(theta, s) for b, s in zip(data.batches, _alignment_sums(data))
    )
    return -mean_grad - n * h / 2 * mean_hvp + h / n * alignment
