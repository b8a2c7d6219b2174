"""Record-value multi-start global optimization.

Subpackages: :mod:`recordstart.special` (closed-form record statistics),
:mod:`recordstart.hasplid` (Monte-Carlo lab), :mod:`recordstart.objectives`
(benchmark functions), :mod:`recordstart.newton_cg` (inner search),
:mod:`recordstart.multistart` (DMSS/RDMSS drivers), :mod:`recordstart.bench`
(experiment CLI).
"""

from .bench import ExperimentConfig, run_experiment
from .multistart import AlgoParams, run_dmss, run_rdmss
from .objectives import make

__all__ = [
    "AlgoParams",
    "ExperimentConfig",
    "make",
    "run_dmss",
    "run_rdmss",
    "run_experiment",
]
