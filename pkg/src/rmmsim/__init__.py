"""Restricted multiplicative merging, the multiplicative coalescent and
near-critical stochastic block models: simulation and verification."""

from .engine import ComponentVector, ordered, rmm, rmm_many
from .field import ThresholdField
from .kernels import BACKEND
from .relations import parse_relation

__version__ = "0.1.0"

__all__ = ["BACKEND", "ComponentVector", "ThresholdField", "ordered", "parse_relation", "rmm", "rmm_many"]
