"""Exact McKay-Thompson series for the largest Mathieu group, their
irreducible decompositions, and Rademacher-sum verification of the
coefficient formulas."""

from .config import RunConfig
from .m24 import (
    CLASS_NAMES,
    ClassRecord,
    character_table,
    class_data,
    class_records,
    decompose,
    eta_mckay_series,
    integral_multiplicities,
)
from .modgroup import GroupCtx, Mat2
from .phase import PhaseExp, Rat
from .pseries import PSeries

__all__ = [
    "CLASS_NAMES",
    "ClassRecord",
    "GroupCtx",
    "Mat2",
    "PhaseExp",
    "PSeries",
    "Rat",
    "RunConfig",
    "character_table",
    "class_data",
    "class_records",
    "decompose",
    "eta_mckay_series",
    "integral_multiplicities",
]

__version__ = "0.1.0"
