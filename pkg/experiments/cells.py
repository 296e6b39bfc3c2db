"""One benchmark cell: a (neurons, CIds, deviation, seed) run of a scenario"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from dendrite import AccountingMode, count_ops, formula_counts, init_templates
from evaluation import (
    ContingencyTable, SortingResult, accurate_neuron_count, contingency_table, purity,
    sorting_accuracy, windowed_accuracy
)
from generation import GeneratorConfig, SpikeGenerator, discretize, normalize
from baseline import KMeansConfig, KMeansModel, assign, fit
from .scenarios import ExperimentSpec

logger = logging.getLogger(__name__)

DEV_KEY_SCALE = 1 << 20  # deviations enter the seed as integers


@dataclass(frozen=True, order=True)
class CellKey:
    neurons: int
    cids: int
    dev: float
    seed: int  # seed index, 0-based


@dataclass
class CellResult:
    key: CellKey
    table: Optional[ContingencyTable] = None
    sorting: Optional[SortingResult] = None
    purity: float = float("nan")
    metrics: Dict[str, float] = field(default_factory=dict)
    trace: List[Tuple[int, float]] = field(default_factory=list)
    ops: Dict[str, list] = field(default_factory=dict)
    model: Optional[KMeansModel] = None

    @property
    def accuracy(self) -> float:
        return self.sorting.accuracy if self.sorting else float("nan")


def cell_seed(master_seed: int, neurons: int, dev: float, seed_index: int) -> int:
    """Seed shared by every scenario's cell at (neurons, dev, seed index).

    The CId count is left out so nD and k-means, and every CId count of the
    mismatch sweep, see the same stream and the same initial centroid draws.
    """
    entropy = [master_seed, neurons, int(round(dev * DEV_KEY_SCALE)), seed_index]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def cell_keys(spec: ExperimentSpec) -> List[CellKey]:
    keys = [CellKey(n, c, dev, s)
            for n in spec.neuron_counts
            for c in spec.cids_for(n)
            for dev in spec.devs
            for s in range(spec.seeds)]
    return sorted(keys)


def _generator(spec: ExperimentSpec, key: CellKey) -> SpikeGenerator:
    config = GeneratorConfig(
        neuron_count=key.neurons,
        base_dev=spec.base_dev,
        instance_dev=key.dev,
        rate_model=spec.rate_model,
        zipf_exponent=spec.zipf_exponent,
        stream_length=spec.stream_length,
        seed=cell_seed(spec.master_seed, key.neurons, key.dev, key.seed),
        switch_at=spec.switch_at,
    )
    return SpikeGenerator(config)


def _score(labels: np.ndarray, cids: np.ndarray, key: CellKey) -> CellResult:
    table = contingency_table(labels, cids, key.neurons, key.cids)
    return CellResult(key=key, table=table, sorting=sorting_accuracy(table), purity=purity(table))


def _sort_stream(spec: ExperimentSpec, key: CellKey, generator: SpikeGenerator):
    stream = generator.generate()
    centroids = discretize(generator.initial_centroids(key.cids), generator.canonical, spec.base_dev)
    config = spec.hyperparameters.for_dev(key.dev).dendrite_config(p=key.cids, seed=generator.config.seed)
    dendrite = init_templates(centroids, config)
    cids = np.fromiter((dendrite.step(x) for x in stream.features), dtype=np.int64, count=len(stream))
    return stream, cids


def run_nd_cell(spec: ExperimentSpec, key: CellKey) -> CellResult:
    """Stream every spike through the dendrite; score the spikes after warmup"""
    stream, cids = _sort_stream(spec, key, _generator(spec, key))
    result = _score(stream.labels[spec.warmup:], cids[spec.warmup:], key)
    if spec.kind == "maa":
        for maa in spec.maa_levels:
            result.metrics[f"accurate_{maa}"] = accurate_neuron_count(result.table, maa, result.sorting)
    return result


def run_adapt_cell(spec: ExperimentSpec, key: CellKey) -> CellResult:
    """Windowed accuracy over the whole stream, across the base-neuron switch.

    Each window is scored under the assignment of the window before it, so the
    replacement neurons count as missed until the dendrite has sorted them.
    """
    stream, cids = _sort_stream(spec, key, _generator(spec, key))
    n_neurons = int(stream.labels.max())
    table = contingency_table(stream.labels, cids, n_neurons, key.cids)
    result = CellResult(key=key, table=table, sorting=sorting_accuracy(table), purity=purity(table))
    result.trace = windowed_accuracy(stream.labels, cids, spec.window, n_neurons, key.cids,
                                     carry_assignment=True)
    return result


def run_kmeans_cell(spec: ExperimentSpec, key: CellKey) -> CellResult:
    """Fit on the warmup spikes, assign the rest in a single pass"""
    generator = _generator(spec, key)
    stream = generator.generate()
    canonical = generator.canonical

    def features(raw: np.ndarray) -> np.ndarray:
        if spec.discretized:
            return discretize(raw, canonical, spec.base_dev).astype(np.float64)
        return normalize(raw, canonical, spec.base_dev)

    if spec.kmeans_init == "ideal":
        initial = np.stack([nrn.features for nrn in stream.neurons])
    else:
        initial = generator.initial_centroids(key.cids)

    vectors = features(stream.raw)
    config = KMeansConfig(k=key.cids)
    model = fit(vectors[:spec.warmup], config, features(initial))
    cids = assign(model, vectors[spec.warmup:])

    result = _score(stream.labels[spec.warmup:], cids, key)
    result.metrics["iterations"] = model.iterations_used
    result.metrics["convergence"] = model.final_convergence
    result.model = model
    return result


def run_ops_cell(spec: ExperimentSpec, key: CellKey) -> CellResult:
    """Additions per spike: closed-form, bypass, and bypass with probabilistic search"""
    generator = _generator(spec, key)
    stream = generator.generate()
    centroids = discretize(generator.initial_centroids(key.cids), generator.canonical, spec.base_dev)
    params = spec.hyperparameters.for_dev(key.dev)

    fractional = params.model_copy(update={"prob_search": False}).dendrite_config(key.cids, generator.config.seed)
    probabilistic = params.model_copy(update={"prob_search": True}).dendrite_config(key.cids, generator.config.seed)

    result = CellResult(key=key)
    result.ops[AccountingMode.FORMULA.value] = formula_counts(fractional).as_row()
    result.ops[AccountingMode.BYPASS.value] = count_ops(
        fractional, AccountingMode.BYPASS, stream.features, init_templates(centroids, fractional)).as_row()
    result.ops[AccountingMode.BYPASS_PROBABILISTIC.value] = count_ops(
        probabilistic, AccountingMode.BYPASS_PROBABILISTIC, stream.features,
        init_templates(centroids, probabilistic)).as_row()
    return result


CELL_RUNNERS = {
    "nd": run_nd_cell,
    "maa": run_nd_cell,
    "mismatch": run_nd_cell,
    "adapt": run_adapt_cell,
    "kmeans": run_kmeans_cell,
    "ops": run_ops_cell,
}


def run_cell(spec: ExperimentSpec, key: CellKey) -> CellResult:
    return CELL_RUNNERS[spec.kind](spec, key)
