"""
Network definitions built on ndgrad.
"""

from .definitions import LARGE_BASE, NetConfig
from .gradcheck import network_suite
from .models import RECON_TARGETS, StudentNet, TeacherNet, TokenizerDecoder, TokenizerEncoder

__all__ = [
    "LARGE_BASE",
    "RECON_TARGETS",
    "NetConfig",
    "StudentNet",
    "TeacherNet",
    "TokenizerDecoder",
    "TokenizerEncoder",
    "network_suite",
]
