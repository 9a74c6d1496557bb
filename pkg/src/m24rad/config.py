"""Run configuration shared by the CLI and the verification drivers."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction

C_MAX_HARD_CAP = 100000


@dataclass
class RunConfig:
    """Knobs for the numeric verification runs.

    tolerance must stay below 1/2 so that integer rounding of coefficient
    estimates is unambiguous; c_max must not be below the largest group
    level being requested (checked at use, not here).
    """

    precision_bits: int = 128
    c_max: int = 20000
    order: Fraction = Fraction(81, 8)  # exponent bound 10 + 1/8
    threads: int = 1
    tolerance: float = 0.4
    output_format: str = "json"

    def __post_init__(self):
        if self.precision_bits < 8:
            raise ValueError("precision must be at least 8 bits")
        if not 0 < self.tolerance < 0.5:
            raise ValueError("tolerance must lie in (0, 1/2) for unambiguous rounding")
        if not 1 <= self.c_max <= C_MAX_HARD_CAP:
            raise ValueError(f"c_max must lie in [1, {C_MAX_HARD_CAP}]")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output format must be json or csv")

    def with_env_overrides(self) -> "RunConfig":
        """Apply M24RAD_PRECISION_BITS / M24RAD_THREADS if set."""
        kw = {}
        if os.environ.get("M24RAD_PRECISION_BITS"):
            kw["precision_bits"] = int(os.environ["M24RAD_PRECISION_BITS"])
        if os.environ.get("M24RAD_THREADS"):
            kw["threads"] = int(os.environ["M24RAD_THREADS"])
        return replace(self, **kw) if kw else self
