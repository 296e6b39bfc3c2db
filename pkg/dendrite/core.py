"""Neuromorphic dendrite: similarity-coded inference and capture/backoff/search learning"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import (
    FEATURE_COUNT, FEATURE_VALUES, RADIUS, W_MAX, W_BASE,
    CAPTURE_SMALL_DEV, BACKOFF_SMALL_DEV, SEARCH, SEARCH_PROBABILITY, MAX_SCALE
)
from run_config import ERROR_MESSAGES

if TYPE_CHECKING:
    from .counters import OpCounters

logger = logging.getLogger(__name__)


class DendriteConfig(BaseModel):
    """Hyperparameters of one dendrite (defaults: the small-deviation column)"""
    model_config = ConfigDict(frozen=True)

    p: int = Field(default=8, ge=1)
    m: int = Field(default=FEATURE_COUNT, ge=1)
    n: int = Field(default=FEATURE_VALUES, ge=2)
    r: int = Field(default=RADIUS, ge=0)
    w_max: int = W_MAX
    w_base: int = W_BASE
    capture: int = Field(default=CAPTURE_SMALL_DEV, gt=0)
    backoff: int = Field(default=BACKOFF_SMALL_DEV, ge=0)
    search: float = Field(default=SEARCH, ge=0)
    prob_search: bool = False
    search_probability: float = Field(default=SEARCH_PROBABILITY, ge=0, le=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_ranges(self):
        if not 0 < self.w_base < self.w_max:
            raise ValueError("w_base must satisfy 0 < w_base < w_max")
        if 2 * self.r + 1 > self.n:
            raise ValueError("similarity window 2r+1 must fit in n values")
        if self.search >= self.capture:
            raise ValueError("search must be much smaller than capture")
        if not self.prob_search and float(self.search_step) != self.search:
            raise ValueError(f"search must be a fraction with denominator <= {MAX_SCALE}")
        return self

    @property
    def search_step(self) -> Fraction:
        return Fraction(self.search).limit_denominator(MAX_SCALE)

    @property
    def search_enabled(self) -> bool:
        return self.search > 0 and (not self.prob_search or self.search_probability > 0)

    @property
    def scale(self) -> int:
        """Fixed-point denominator of the weight grid"""
        if self.prob_search or self.search == 0:
            return 1
        return self.search_step.denominator

    @property
    def window(self) -> int:
        return 2 * self.r + 1


@dataclass(frozen=True)
class FeatureArray:
    """Feature array: feature j active at every value listed in values[j]"""
    values: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_vector(cls, x: Sequence[int]) -> "FeatureArray":
        return cls(tuple((int(v),) for v in x))


@dataclass(frozen=True)
class InferenceResult:
    cid: int  # 1-based winning template
    scores: np.ndarray  # summed weights per template, in weight units

    @property
    def winning_score(self) -> float:
        return float(self.scores[self.cid - 1])


class Dendrite:
    """p templates over an m x n weight array, trained online by step()

    Weights are held as integers on a fixed-point grid: one weight unit is
    `scale` grid steps, so a fractional search increment stays exact.
    A dendrite is single-writer; serialize calls to step().
    """

    def __init__(self, config: DendriteConfig, weights: Optional[np.ndarray] = None):
        self.config = config
        self.scale = config.scale
        self.rng = np.random.default_rng(config.seed)
        self.weights = np.zeros((config.p, config.m, config.n), dtype=np.int64)
        if weights is not None:
            self.set_weights(weights)

        self._values = np.arange(1, config.n + 1)
        self._w_max = config.w_max * self.scale
        self._w_base = config.w_base * self.scale
        self._capture = config.capture * self.scale
        self._backoff = config.backoff * self.scale
        if config.prob_search:
            self._search = 1
        else:
            self._search = int(config.search_step * self.scale)

    @classmethod
    def from_fixed_point(cls, config: DendriteConfig, raw: np.ndarray) -> "Dendrite":
        dendrite = cls(config)
        raw = np.asarray(raw, dtype=np.int64)
        if raw.shape != dendrite.weights.shape:
            raise ValueError(f"weight array shape {raw.shape} != {dendrite.weights.shape}")
        if raw.min() < 0 or raw.max() > dendrite._w_max:
            raise ValueError("weights outside [0, w_max]")
        dendrite.weights = raw.copy()
        return dendrite

    def set_weights(self, weights: np.ndarray) -> None:
        """Load weights given in weight units; they must lie on the fixed-point grid"""
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != self.weights.shape:
            raise ValueError(f"weight array shape {weights.shape} != {self.weights.shape}")
        raw = np.rint(weights * self.scale).astype(np.int64)
        if not np.array_equal(raw, weights * self.scale):
            raise ValueError("weights are not on the fixed-point grid")
        if raw.min() < 0 or raw.max() > self.config.w_max * self.scale:
            raise ValueError("weights outside [0, w_max]")
        self.weights = raw

    def snapshot(self, path):
        """Write the config and fixed-point weights to a versioned .npz archive"""
        from .snapshot import save_snapshot
        return save_snapshot(self, path)

    @property
    def weight_values(self) -> np.ndarray:
        """Weights in weight units"""
        return self.weights / self.scale

    def check_features(self, x: Sequence[int]) -> np.ndarray:
        x = np.asarray(x).reshape(-1)
        if x.shape[0] != self.config.m:
            raise ValueError(f"{ERROR_MESSAGES['FEATURE_LENGTH']}: {x.shape[0]} != {self.config.m}")
        if not np.issubdtype(x.dtype, np.integer):
            if not np.all(np.mod(x, 1) == 0):
                raise ValueError(f"{ERROR_MESSAGES['FEATURE_RANGE']}: non-integer value")
            x = x.astype(np.int64)
        if np.any((x < 1) | (x > self.config.n)):
            raise ValueError(f"{ERROR_MESSAGES['FEATURE_RANGE']}: {x.tolist()}")
        return x.astype(np.int64)

    def check_cid(self, z: int) -> int:
        if not 1 <= z <= self.config.p:
            raise ValueError(f"{ERROR_MESSAGES['CID_RANGE']}: {z}")
        return z - 1

    def window_mask(self, x: np.ndarray) -> np.ndarray:
        """(m, n) mask of the values within r of each feature, clamped to [1, n]"""
        return np.abs(self._values[None, :] - x[:, None]) <= self.config.r

    def _winner(self, addressed: np.ndarray) -> InferenceResult:
        raw = np.tensordot(self.weights, addressed.astype(np.int64), axes=([1, 2], [0, 1]))
        # argmax returns the first maximum, so the lowest CId wins ties
        return InferenceResult(cid=int(np.argmax(raw)) + 1, scores=raw / self.scale)

    def infer(self, x: Sequence[int]) -> InferenceResult:
        """Winning template for a feature vector; does not mutate the weights"""
        return self._winner(self.window_mask(self.check_features(x)))

    def infer_multi(self, features: FeatureArray) -> InferenceResult:
        """Inference for a feature array; a position is addressed once if any
        active value of its feature covers it"""
        if len(features.values) != self.config.m:
            raise ValueError(f"{ERROR_MESSAGES['FEATURE_LENGTH']}: {len(features.values)} != {self.config.m}")
        addressed = np.zeros((self.config.m, self.config.n), dtype=bool)
        for j, active in enumerate(features.values):
            for value in active:
                if not 1 <= value <= self.config.n:
                    raise ValueError(f"{ERROR_MESSAGES['FEATURE_RANGE']}: {value}")
                addressed[j] |= np.abs(self._values - value) <= self.config.r
        return self._winner(addressed)

    def _capture_backoff(self, addressed: np.ndarray, index: int) -> Tuple[int, int]:
        template = self.weights[index]
        captured = int(np.count_nonzero(addressed & (template < self._w_max)))
        template[addressed] = np.minimum(template[addressed] + self._capture, self._w_max)
        if not self._backoff:
            return captured, 0
        others = ~addressed
        backed_off = int(np.count_nonzero(others & (template > 0)))
        template[others] = np.maximum(template[others] - self._backoff, 0)
        return captured, backed_off

    def _search_losers(self, addressed: np.ndarray, index: int, rng: np.random.Generator) -> int:
        if not self.config.search_enabled or self.config.p == 1:
            return 0
        losers = np.arange(self.config.p) != index
        block = self.weights[losers]
        target = np.broadcast_to(addressed, block.shape)
        if self.config.prob_search:
            # one trigger draw per weight position
            target = target & (rng.random(block.shape) < self.config.search_probability)
        # max(w, min(w + search, w_base)) only moves weights below w_base
        target = target & (block < self._w_base)
        block[target] = np.minimum(block[target] + self._search, self._w_base)
        self.weights[losers] = block
        return int(np.count_nonzero(target))

    def update_winner(self, x: Sequence[int], z: int) -> Tuple[int, int]:
        """Capture the addressed weights of template z and back off the rest.

        Returns the (capture, backoff) additions that were not bypassed.
        """
        index = self.check_cid(z)
        return self._capture_backoff(self.window_mask(self.check_features(x)), index)

    def update_search(self, x: Sequence[int], z: int,
                      rng: Optional[np.random.Generator] = None) -> int:
        """Raise the addressed weights of every template except z toward w_base.

        Returns the number of search additions that were not bypassed.
        """
        index = self.check_cid(z)
        return self._search_losers(self.window_mask(self.check_features(x)), index,
                                   self.rng if rng is None else rng)

    def inference_adds(self, addressed: np.ndarray) -> int:
        """Additions left after skipping zero-weight addends"""
        nonzero = np.count_nonzero((self.weights != 0) & addressed, axis=(1, 2))
        return int(np.maximum(nonzero - 1, 0).sum())

    def step(self, x: Sequence[int], counters: Optional["OpCounters"] = None) -> int:
        """Infer, then update winner and losers against the pre-step winner"""
        addressed = self.window_mask(self.check_features(x))
        cid = self._winner(addressed).cid
        inference = self.inference_adds(addressed) if counters is not None and counters.measures else 0

        capture, backoff = self._capture_backoff(addressed, cid - 1)
        search = self._search_losers(addressed, cid - 1, self.rng)

        if counters is not None:
            if counters.measures:
                counters.record(inference, capture, backoff, search)
            else:
                counters.record_formula(self.config)
        return cid


def init_templates(centroids: Sequence[Sequence[int]], config: DendriteConfig,
                   stamp_weight: Optional[float] = None) -> Dendrite:
    """Stamp each centroid's similarity window into its template"""
    if len(centroids) != config.p:
        raise ValueError(f"{ERROR_MESSAGES['CENTROID_COUNT']}: {len(centroids)} != {config.p}")
    stamp = config.w_base if stamp_weight is None else stamp_weight
    if not 0 <= stamp <= config.w_max:
        raise ValueError("stamp weight outside [0, w_max]")

    dendrite = Dendrite(config)
    raw = int(round(stamp * dendrite.scale))
    for i, centroid in enumerate(centroids):
        dendrite.weights[i][dendrite.window_mask(dendrite.check_features(centroid))] = raw

    logger.debug(f"[DENDRITE] Stamped {config.p} templates at weight {stamp}")
    return dendrite
