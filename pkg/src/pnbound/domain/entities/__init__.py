from .bim_result import BimResult
from .fisher_blocks import (
    DeltaProfile,
    FisherBlocks,
    MonteCarloEstimate,
    MonteCarloMeta,
    SymbolBlocks,
)
from .map_result import MapResult
from .phase_trajectories import PhaseTrajectories, ReceivedBlock
from .prior_model import PriorModel

__all__ = [
    "BimResult",
    "DeltaProfile",
    "FisherBlocks",
    "MapResult",
    "MonteCarloEstimate",
    "MonteCarloMeta",
    "PhaseTrajectories",
    "PriorModel",
    "ReceivedBlock",
    "SymbolBlocks",
]
