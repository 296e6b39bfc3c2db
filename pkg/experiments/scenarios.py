"""Experiment specifications and per-scenario defaults"""

from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import (
    W_MAX, W_BASE, RADIUS, SEARCH, SEARCH_PROBABILITY,
    CAPTURE_SMALL_DEV, BACKOFF_SMALL_DEV, CAPTURE_LARGE_DEV, BACKOFF_LARGE_DEV, SMALL_DEV_LIMIT,
    NEURON_COUNTS, DEV_GRID, SEEDS, MASTER_SEED, STREAM_LENGTH, WARMUP, BASE_DEV, ZIPF_EXPONENT,
    SWITCH_AT, WINDOW, MAA_LEVELS, ADAPT_NEURONS, ADAPT_DEV, MISMATCH_NEURONS, MISMATCH_CIDS
)
from run_config import SCENARIOS, ERROR_MESSAGES
from dendrite import DendriteConfig

ZIPF_SCENARIOS = {"zipf-nd", "zipf-kmeans", "maa-count", "cid-mismatch", "cid-merge-purity"}


class DendriteParams(BaseModel):
    """One column of the hyperparameter table"""
    model_config = ConfigDict(frozen=True)

    w_max: int = W_MAX
    w_base: int = W_BASE
    capture: int = CAPTURE_SMALL_DEV
    backoff: int = BACKOFF_SMALL_DEV
    search: float = SEARCH
    r: int = RADIUS
    prob_search: bool = False
    search_probability: float = SEARCH_PROBABILITY

    def dendrite_config(self, p: int, seed: int = 0) -> DendriteConfig:
        return DendriteConfig(p=p, seed=seed, **self.model_dump())


class HyperparameterTable(BaseModel):
    """Small-deviation and large-deviation hyperparameter columns"""
    model_config = ConfigDict(frozen=True)

    small: DendriteParams = DendriteParams(capture=CAPTURE_SMALL_DEV, backoff=BACKOFF_SMALL_DEV)
    large: DendriteParams = DendriteParams(capture=CAPTURE_LARGE_DEV, backoff=BACKOFF_LARGE_DEV)

    def for_dev(self, dev: float) -> DendriteParams:
        return self.small if dev <= SMALL_DEV_LIMIT else self.large

    def with_overrides(self, **overrides) -> "HyperparameterTable":
        """Apply the same non-None overrides to both columns"""
        update = {key: value for key, value in overrides.items() if value is not None}
        if not update:
            return self
        return HyperparameterTable(small=self.small.model_copy(update=update),
                                   large=self.large.model_copy(update=update))


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: str
    neuron_counts: Tuple[int, ...] = NEURON_COUNTS
    devs: Tuple[float, ...] = DEV_GRID
    seeds: int = Field(default=SEEDS, ge=1)
    master_seed: int = MASTER_SEED
    stream_length: int = Field(default=STREAM_LENGTH, ge=2)
    warmup: int = Field(default=WARMUP, ge=0)
    base_dev: float = Field(default=BASE_DEV, gt=0)
    rate_model: Literal["uniform", "zipf"] = "uniform"
    zipf_exponent: float = Field(default=ZIPF_EXPONENT, ge=0)
    cid_counts: Optional[Tuple[int, ...]] = None  # None: one CId per neuron
    kmeans_init: Literal["ideal", "realistic"] = "realistic"
    discretized: bool = False
    switch_at: Optional[int] = None
    window: int = Field(default=WINDOW, ge=1)
    maa_levels: Tuple[float, ...] = MAA_LEVELS
    hyperparameters: HyperparameterTable = HyperparameterTable()
    workers: int = Field(default=1, ge=1)

    @field_validator("scenario")
    @classmethod
    def check_scenario(cls, scenario):
        if scenario not in SCENARIOS:
            raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_SCENARIO']}: {scenario}")
        return scenario

    @field_validator("devs")
    @classmethod
    def check_devs(cls, devs):
        if not devs or any(dev < 0 for dev in devs):
            raise ValueError(f"{ERROR_MESSAGES['NEGATIVE_DEV']}: {devs}")
        return devs

    @model_validator(mode="after")
    def check_protocol(self):
        if self.warmup >= self.stream_length:
            raise ValueError(f"warmup {self.warmup} leaves nothing to score in {self.stream_length} spikes")
        if not self.neuron_counts or min(self.neuron_counts) < 1:
            raise ValueError(f"neuron counts must be positive: {self.neuron_counts}")
        if self.cid_counts is not None and (not self.cid_counts or min(self.cid_counts) < 1):
            raise ValueError(f"CId counts must be positive: {self.cid_counts}")
        if self.kmeans_init == "ideal" and self.cid_counts is not None:
            if any(c != n for c in self.cid_counts for n in self.neuron_counts):
                raise ValueError("ideal k-means initialization needs one CId per neuron")
        # fail before any cell runs
        self.hyperparameters.small.dendrite_config(p=1)
        self.hyperparameters.large.dendrite_config(p=1)
        return self

    @property
    def kind(self) -> str:
        return SCENARIOS[self.scenario]["kind"]

    def cids_for(self, neurons: int) -> Tuple[int, ...]:
        return self.cid_counts if self.cid_counts is not None else (neurons,)


def scenario_defaults(scenario: str) -> dict:
    """Protocol settings that differ from the nd-baseline defaults"""
    if scenario not in SCENARIOS:
        raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_SCENARIO']}: {scenario}")
    defaults = {}
    if scenario in ZIPF_SCENARIOS:
        defaults["rate_model"] = "zipf"
    if scenario == "kmeans-ideal":
        defaults["kmeans_init"] = "ideal"
    if scenario == "kmeans-discretized":
        defaults["discretized"] = True
    if scenario == "nd-adapt":
        defaults.update(neuron_counts=(ADAPT_NEURONS,), devs=(ADAPT_DEV,), seeds=1, switch_at=SWITCH_AT)
    if scenario in ("cid-mismatch", "cid-merge-purity"):
        defaults.update(neuron_counts=(MISMATCH_NEURONS,), cid_counts=MISMATCH_CIDS)
    if scenario == "op-count":
        defaults.update(neuron_counts=(8,), devs=(ADAPT_DEV,), seeds=1)
    return defaults


def scenario_hyperparameters(scenario: str) -> dict:
    if scenario == "nd-no-search":
        return {"search": 0.0}
    if scenario == "nd-prob-search":
        return {"prob_search": True}
    return {}


def _given(values: Optional[dict]) -> dict:
    return {key: value for key, value in (values or {}).items() if value is not None}


def build_spec(scenario: str, hyperparameters: Optional[dict] = None,
               small: Optional[dict] = None, large: Optional[dict] = None, **fields) -> ExperimentSpec:
    """Scenario defaults, then explicit fields and hyperparameter overrides (None = keep default).

    `hyperparameters` applies to both table columns, `small`/`large` to one.
    """
    values = scenario_defaults(scenario)
    values.update(_given(fields))
    overrides = {**scenario_hyperparameters(scenario), **_given(hyperparameters)}
    table = HyperparameterTable().with_overrides(**overrides)
    values["hyperparameters"] = HyperparameterTable(small=table.small.model_copy(update=_given(small)),
                                                    large=table.large.model_copy(update=_given(large)))
    return ExperimentSpec(scenario=scenario, **values)
