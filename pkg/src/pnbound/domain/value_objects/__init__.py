from .constellation import Constellation, draw_symbols, make_constellation
from .pn_config import DEFAULT_SIGMA2_INIT, ChannelConfig, PnConfig

__all__ = [
    "ChannelConfig",
    "Constellation",
    "DEFAULT_SIGMA2_INIT",
    "PnConfig",
    "draw_symbols",
    "make_constellation",
]
