"""Synthetic spike generation: canonical shape, base neurons, labeled streams"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import (
    CANONICAL_MEANS, FEATURE_COUNT, BASE_DEV, DEV_GRID, STREAM_LENGTH, ZIPF_EXPONENT
)
from run_config import ERROR_MESSAGES
from .discretize import discretize

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]

# Independent child seed streams, in spawn order
SEED_STREAMS = ("neurons", "centroids", "selection", "instances", "switch")


class CanonicalShape(BaseModel):
    """Mean values of the six shape features"""
    model_config = ConfigDict(frozen=True)

    means: Tuple[float, ...] = CANONICAL_MEANS

    @field_validator("means")
    @classmethod
    def check_means(cls, means):
        if len(means) != FEATURE_COUNT:
            raise ValueError(f"canonical shape needs {FEATURE_COUNT} features, got {len(means)}")
        if any(not np.isfinite(v) or v <= 0 for v in means):
            raise ValueError("canonical feature means must be positive")
        return means

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.means, dtype=np.float64)


@dataclass(frozen=True)
class BaseNeuron:
    id: int
    features: np.ndarray


class GeneratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    neuron_count: int = Field(ge=1)
    base_dev: float = Field(default=BASE_DEV, ge=0)
    instance_dev: float = Field(default=DEV_GRID[1], ge=0)
    rate_model: Literal["uniform", "zipf"] = "uniform"
    zipf_exponent: float = Field(default=ZIPF_EXPONENT, ge=0)
    stream_length: int = Field(default=STREAM_LENGTH, ge=1)
    seed: int = 0
    switch_at: Optional[int] = Field(default=None, ge=0)


@dataclass
class LabeledStream:
    raw: np.ndarray  # (L, 6) real features
    labels: np.ndarray  # (L,) true neuron ids, 1-based; switched neurons follow the originals
    features: Optional[np.ndarray]  # (L, 6) discretized 1..32; None when base_dev is 0
    neurons: List[BaseNeuron]
    switched_neurons: Optional[List[BaseNeuron]] = None

    def __len__(self) -> int:
        return len(self.labels)


def seed_streams(seed: Seed) -> Dict[str, np.random.SeedSequence]:
    """Split one seed into the named independent streams"""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return dict(zip(SEED_STREAMS, seed.spawn(len(SEED_STREAMS))))


def gen_base_neurons(canonical: CanonicalShape, count: int, base_dev: float,
                     seed: Seed, first_id: int = 1) -> List[BaseNeuron]:
    """Base neurons as normal deviations from the canonical means.

    Draw order is neuron-major, feature-minor; sigma_j = base_dev * mean_j.
    """
    if base_dev < 0:
        raise ValueError(f"{ERROR_MESSAGES['NEGATIVE_DEV']}: {base_dev}")
    if count < 1:
        raise ValueError(f"neuron count must be at least 1, got {count}")

    means = canonical.array
    rng = np.random.default_rng(seed)
    features = means + rng.standard_normal((count, means.size)) * (base_dev * means)
    return [BaseNeuron(first_id + i, features[i]) for i in range(count)]


def gen_initial_centroids(canonical: CanonicalShape, k: int, base_dev: float,
                          seed: Seed) -> np.ndarray:
    """Neuron-like centroid draws, independent of the base neurons"""
    return np.stack([c.features for c in gen_base_neurons(canonical, k, base_dev, seed)])


def rate_probabilities(count: int, rate_model: str = "uniform",
                       exponent: float = ZIPF_EXPONENT) -> np.ndarray:
    """Spike probability of each neuron, ordered by id"""
    if rate_model == "uniform":
        return np.full(count, 1.0 / count)
    if rate_model == "zipf":
        weights = 1.0 / np.arange(1, count + 1, dtype=np.float64) ** exponent
        return weights / weights.sum()
    raise ValueError(f"unknown rate model: {rate_model}")


def gen_stream(neurons: List[BaseNeuron], config: GeneratorConfig,
               canonical: Optional[CanonicalShape] = None) -> LabeledStream:
    """Labeled stream of spike instances drawn around the chosen base neurons"""
    if not neurons:
        raise ValueError("stream generation needs at least one base neuron")
    canonical = canonical or CanonicalShape()
    streams = seed_streams(config.seed)
    neurons = sorted(neurons, key=lambda nrn: nrn.id)
    means = canonical.array
    length = config.stream_length

    probs = rate_probabilities(len(neurons), config.rate_model, config.zipf_exponent)
    picks = np.random.default_rng(streams["selection"]).choice(len(neurons), size=length, p=probs)
    bases = np.stack([nrn.features for nrn in neurons])[picks]
    ids = np.asarray([nrn.id for nrn in neurons], dtype=np.int64)
    labels = ids[picks]

    switched = None
    if config.switch_at is not None and config.switch_at < length:
        # the replacement set gets fresh ids after the highest original id
        switched = gen_base_neurons(canonical, len(neurons), config.base_dev, streams["switch"],
                                    first_id=int(ids.max()) + 1)
        after = picks[config.switch_at:]
        bases[config.switch_at:] = np.stack([nrn.features for nrn in switched])[after]
        labels[config.switch_at:] = np.asarray([nrn.id for nrn in switched], dtype=np.int64)[after]

    noise = np.random.default_rng(streams["instances"]).standard_normal((length, means.size))
    raw = bases + noise * (config.instance_dev * means)
    features = discretize(raw, canonical, config.base_dev) if config.base_dev > 0 else None

    logger.debug(f"[GENERATOR] {length} spikes from {len(neurons)} neurons "
                 f"(instance dev {config.instance_dev}, {config.rate_model})")
    return LabeledStream(raw=raw, labels=labels, features=features,
                         neurons=neurons, switched_neurons=switched)


class SpikeGenerator:
    """Base neurons, initial centroids and stream of one seeded benchmark cell"""

    def __init__(self, config: GeneratorConfig, canonical: Optional[CanonicalShape] = None):
        self.config = config
        self.canonical = canonical or CanonicalShape()
        self.streams = seed_streams(config.seed)

    def base_neurons(self) -> List[BaseNeuron]:
        return gen_base_neurons(self.canonical, self.config.neuron_count,
                                self.config.base_dev, self.streams["neurons"])

    def initial_centroids(self, k: int) -> np.ndarray:
        return gen_initial_centroids(self.canonical, k, self.config.base_dev, self.streams["centroids"])

    def generate(self) -> LabeledStream:
        return gen_stream(self.base_neurons(), self.config, self.canonical)
