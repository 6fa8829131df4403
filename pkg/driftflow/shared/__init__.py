import warnings

from rich.console import Console

from ..common.errors import DriftFlowWarning

# process-wide console used by the cli and the presets
console = Console(highlight=False)

warnings.filterwarnings('once', category=DriftFlowWarning)
