__title__ = 'driftflow'
__version__ = '0.1.0'
__author__ = 'driftflow developers'
__keywords__ = [
    'gradient descent',
    'backward error analysis',
    'principal flow',
    'edge of stability',
    'two-player games',
]
__description__ = (
    'Continuous-time models of gradient descent and the drift they leave behind'
)
