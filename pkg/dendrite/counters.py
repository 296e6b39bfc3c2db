"""Operation-count accounting: closed-form baseline and measured bypass counts"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from run_config import ERROR_MESSAGES
from .core import Dendrite, DendriteConfig


class AccountingMode(str, Enum):
    FORMULA = "formula-baseline"
    BYPASS = "bypass"
    BYPASS_PROBABILISTIC = "bypass+probabilistic"


@dataclass(frozen=True)
class OpCounts:
    inference: float
    capture: float
    backoff: float
    search: float

    @property
    def total(self) -> float:
        return self.inference + self.capture + self.backoff + self.search

    def as_row(self) -> list:
        return [self.inference, self.capture, self.backoff, self.search, self.total]


def formula_counts(config: DendriteConfig) -> OpCounts:
    """Additions per feature vector with no bypassing"""
    window = config.m * config.window
    return OpCounts(
        inference=config.p * (window - 1),
        capture=window,
        backoff=config.m * (config.n - config.window),
        search=(config.p - 1) * window,
    )


@dataclass
class OpCounters:
    mode: AccountingMode = AccountingMode.FORMULA
    inference_adds: int = 0
    capture_adds: int = 0
    backoff_adds: int = 0
    search_adds: int = 0
    steps: int = field(default=0)

    @property
    def measures(self) -> bool:
        """True when counts come from the weights rather than the formulas"""
        return self.mode is not AccountingMode.FORMULA

    def record(self, inference: int, capture: int, backoff: int, search: int) -> None:
        self.inference_adds += inference
        self.capture_adds += capture
        self.backoff_adds += backoff
        self.search_adds += search
        self.steps += 1

    def record_formula(self, config: DendriteConfig) -> None:
        counts = formula_counts(config)
        self.record(int(counts.inference), int(counts.capture), int(counts.backoff), int(counts.search))

    @property
    def total(self) -> int:
        return self.inference_adds + self.capture_adds + self.backoff_adds + self.search_adds

    def per_step(self) -> OpCounts:
        steps = max(self.steps, 1)
        return OpCounts(
            inference=self.inference_adds / steps,
            capture=self.capture_adds / steps,
            backoff=self.backoff_adds / steps,
            search=self.search_adds / steps,
        )


def count_ops(config: DendriteConfig, mode: AccountingMode,
              features: Optional[Sequence[Sequence[int]]] = None,
              dendrite: Optional[Dendrite] = None) -> OpCounts:
    """Per-step additions under an accounting mode.

    The formula mode is closed-form. Bypass modes stream `features` through
    `dendrite` (a fresh zero-weight dendrite when omitted) and return the
    measured mean per step.
    """
    mode = AccountingMode(mode)
    if mode is AccountingMode.FORMULA:
        return formula_counts(config)
    if features is None or len(features) == 0:
        raise ValueError(ERROR_MESSAGES["NEEDS_FEATURES"])

    probabilistic = mode is AccountingMode.BYPASS_PROBABILISTIC
    if config.prob_search != probabilistic:
        config = DendriteConfig(**{**config.model_dump(), "prob_search": probabilistic})
    if dendrite is None:
        dendrite = Dendrite(config)
    elif dendrite.config != config:
        dendrite = Dendrite.from_fixed_point(config, dendrite.weights * config.scale // dendrite.scale)

    counters = OpCounters(mode=mode)
    for x in features:
        dendrite.step(np.asarray(x), counters)
    return counters.per_step()
