"""Executable models of expregular string functions and their translations."""

from .errors import ExpregError
from .words import LMARK, RMARK, Move

__all__ = ["ExpregError", "LMARK", "RMARK", "Move"]
__version__ = "0.1.0"
