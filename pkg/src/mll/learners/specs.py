"""Learner configuration records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import ConfigError


@dataclass(frozen=True)
class ZeroRSpec:
    display = "ZeroR"


@dataclass(frozen=True)
class NaiveBayesSpec:
    display = "NaiveBayes"


@dataclass(frozen=True)
class KnnSpec:
    k: int = 5

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigError(f"kNN needs k >= 1, got {self.k}")

    @property
    def display(self) -> str:
        return f"KNN({self.k})"


@dataclass(frozen=True)
class HoeffdingSpec:
    delta: float = 1e-7
    tau: float = 0.05
    grace_period: int = 200
    leaf_strategy: str = "majority"  # or "nb"

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must be in (0, 1), got {self.delta}")
        if self.tau < 0.0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")
        if self.grace_period < 1:
            raise ConfigError(f"grace_period must be >= 1, got {self.grace_period}")
        if self.leaf_strategy not in ("majority", "nb"):
            raise ConfigError(f"unknown leaf strategy {self.leaf_strategy!r}")

    display = "HoeffdingTree"


@dataclass(frozen=True)
class RipperSpec:
    folds_for_prune: int = 3
    optimization_passes: int = 2
    min_coverage: int = 2

    def __post_init__(self) -> None:
        if self.folds_for_prune < 2:
            raise ConfigError("folds_for_prune must be >= 2")
        if self.optimization_passes < 0:
            raise ConfigError("optimization_passes must be >= 0")
        if self.min_coverage < 1:
            raise ConfigError("min_coverage must be >= 1")

    display = "RIPPER"


LearnerSpec = Union[ZeroRSpec, NaiveBayesSpec, KnnSpec, HoeffdingSpec, RipperSpec]
