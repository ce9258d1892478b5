# fracdense/__init__.py
"""Densidade de funções suaves em espaços de Sobolev fracionários: Whitney, P^η e seminormas."""

from .catalog import FunctionOracle, catalog_function
from .errors import FracDenseError
from .geometry import OpenSetSpec, WhitneyDecomposition, decompose
from .norms import SobolevParams, gagliardo, hardy_term, lp_norm
from .partition import PartitionOfUnity
from .quadrature import QuadratureConfig, QuadResult
from .smoothing import EtaSchedule, apply_P, select_eta, uniform_eta

__all__ = [
    "EtaSchedule",
    "FracDenseError",
    "FunctionOracle",
    "OpenSetSpec",
    "PartitionOfUnity",
    "QuadResult",
    "QuadratureConfig",
    "SobolevParams",
    "WhitneyDecomposition",
    "apply_P",
    "catalog_function",
    "decompose",
    "gagliardo",
    "hardy_term",
    "lp_norm",
    "select_eta",
    "uniform_eta",
]
