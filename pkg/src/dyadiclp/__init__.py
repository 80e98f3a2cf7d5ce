"""Exact linear programming over p-adic and [p]-adic number classes."""

from .exactnum import AdicClass
from .problems import LlpInstance, LlpOutcome

__all__ = ["AdicClass", "LlpInstance", "LlpOutcome"]
__version__ = "0.1.0"
