"""
.. include:: ../README.md
"""
__docformat__ = "restructuredtext"
from driftflow.__version__ import __version__
from driftflow.api import (
    calculus,
    cli,
    flows,
    games,
    measures,
    optimizers,
    problems,
    stability,
)

__all__ = [
    'calculus',
    'problems',
    'flows',
    'optimizers',
    'stability',
    'games',
    'measures',
    'cli',
]
