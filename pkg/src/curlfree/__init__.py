"""Structure-preserving finite-volume solver for a barotropic two-phase model
whose relative velocity is kept discretely curl-free on a staggered grid."""

from .boundary import BC, BoundarySpec
from .cases import CASES, get_case
from .config import ConfigError, RunConfig, load_config, parse_config
from .driver import Simulation, compute_dt, convergence_study, run
from .eos import EosSpec
from .grid import StaggeredGrid
from .model import Phases
from .muscl import NumericalError

__all__ = [
    "BC", "BoundarySpec", "CASES", "get_case", "ConfigError", "RunConfig", "load_config",
    "parse_config", "Simulation", "compute_dt", "convergence_study", "run", "EosSpec",
    "StaggeredGrid", "Phases", "NumericalError",
]
__version__ = "0.1.0"
