"""Scenario orchestration: fan cells out to worker processes, merge in key order"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from run_config import PER_SEED_COLUMNS, PLOT_COLUMNS, SCENARIOS, ERROR_MESSAGES
from .cells import CellKey, CellResult, cell_keys, run_cell
from .scenarios import ExperimentSpec

logger = logging.getLogger(__name__)


@dataclass
class ResultTable:
    scenario: str
    columns: List[str]
    per_seed: List[dict] = field(default_factory=list)
    summary_columns: List[str] = field(default_factory=list)
    summary: List[dict] = field(default_factory=list)
    plot_columns: List[str] = field(default_factory=list)
    plot: List[dict] = field(default_factory=list)
    cells: List[CellResult] = field(default_factory=list)

    def column(self, name: str, rows: Optional[Sequence[dict]] = None) -> List:
        return [row[name] for row in (self.summary if rows is None else rows)]


def cell_job(spec: ExperimentSpec, key: CellKey) -> CellResult:
    """Worker-process entry point; validation errors come back as plain ValueErrors"""
    try:
        return run_cell(spec, key)
    except ValueError as e:
        raise ValueError(f"cell {key}: {e}") from None


class ExperimentRunner:
    def __init__(self, spec: ExperimentSpec, workers: Optional[int] = None):
        """
        Runs every cell of a scenario.

        Args:
            spec: Experiment specification
            workers: Number of worker processes (defaults to spec.workers; 1 runs in-process)
        """
        self.spec = spec
        self.workers = workers or spec.workers
        self.results: Dict[CellKey, CellResult] = {}

    def record(self, key: CellKey, result: CellResult):
        self.results[key] = result
        logger.info(f"[RUNNER] {self.spec.scenario} cell {len(self.results)}: N={key.neurons} CIds={key.cids} "
                    f"dev={key.dev:g} seed={key.seed} acc={result.accuracy:.4f}")

    def run_serial(self, keys: List[CellKey]):
        for key in keys:
            try:
                result = run_cell(self.spec, key)
            except Exception as e:
                logger.error(f"[RUNNER] Cell {key} failed: {e}")
                raise
            self.record(key, result)

    def run_pool(self, keys: List[CellKey]):
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            futures = {pool.submit(cell_job, self.spec, key): key for key in keys}
            for future in as_completed(futures):
                key = futures[future]
                try:
                    result = future.result()
                except Exception as e:
                    logger.error(f"[RUNNER] Cell {key} failed: {e}")
                    for pending in futures:
                        pending.cancel()
                    raise
                self.record(key, result)

    def run(self) -> List[CellResult]:
        keys = cell_keys(self.spec)
        workers = min(self.workers, len(keys))
        logger.info(f"[RUNNER] 🚀 {self.spec.scenario}: {len(keys)} cells on {workers} worker(s)")
        if workers <= 1:
            self.run_serial(keys)
        else:
            self.run_pool(keys)
        return [self.results[key] for key in keys]


def _per_seed_rows(spec: ExperimentSpec, cells: List[CellResult]) -> List[dict]:
    rows = []
    for cell in cells:
        key = cell.key
        base = {"scenario": spec.scenario, "neurons": key.neurons, "cids": key.cids,
                "dev": key.dev, "seed": key.seed}
        if spec.kind == "ops":
            for mode, counts in cell.ops.items():
                metrics = dict(zip(PER_SEED_COLUMNS["ops"][-5:], counts))
                rows.append({**base, "mode": mode, **metrics})
        elif spec.kind == "adapt":
            for window, accuracy in cell.trace:
                rows.append({**base, "window": window, "step": (window + 1) * spec.window,
                             "accuracy": accuracy})
        else:
            rows.append({**base, "accuracy": cell.accuracy, "purity": cell.purity, **cell.metrics})
    return rows


def summarize(columns: List[str], rows: List[dict]) -> List[dict]:
    """Seed means: group by the columns before `seed`, average the columns after it"""
    split = columns.index("seed")
    groups, metrics = columns[:split], columns[split + 1:]
    merged: Dict[tuple, List[dict]] = {}
    for row in rows:
        merged.setdefault(tuple(row[c] for c in groups), []).append(row)

    summary = []
    for group, members in merged.items():
        entry = dict(zip(groups, group))
        for metric in metrics:
            entry[metric] = float(np.mean([row[metric] for row in members]))
        entry["seeds"] = len(members)
        summary.append(entry)
    return summary


def _plot_rows(scenario: str, summary: List[dict]):
    series, x, y = PLOT_COLUMNS[scenario]
    columns = [c for c in (series, x, y) if c]
    return columns, [{c: row[c] for c in columns} for row in summary]


def run_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    """Run any scenario and build its per-seed, summary and plot tables"""
    if spec.scenario not in SCENARIOS:
        raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_SCENARIO']}: {spec.scenario}")
    cells = ExperimentRunner(spec, workers).run()
    columns = list(PER_SEED_COLUMNS[spec.kind])
    per_seed = _per_seed_rows(spec, cells)
    summary = summarize(columns, per_seed)
    split = columns.index("seed")
    plot_columns, plot = _plot_rows(spec.scenario, summary)
    return ResultTable(
        scenario=spec.scenario,
        columns=columns,
        per_seed=per_seed,
        summary_columns=columns[:split] + columns[split + 1:] + ["seeds"],
        summary=summary,
        plot_columns=plot_columns,
        plot=plot,
        cells=cells,
    )


def _expect(spec: ExperimentSpec, *kinds: str):
    if spec.kind not in kinds:
        raise ValueError(f"{ERROR_MESSAGES['UNKNOWN_SCENARIO']}: {spec.scenario} is not a {'/'.join(kinds)} scenario")


def run_nd_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "nd", "maa")
    return run_scenario(spec, workers)


def run_kmeans_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "kmeans")
    return run_scenario(spec, workers)


def run_mismatch_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "mismatch")
    return run_scenario(spec, workers)


def run_adapt_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "adapt")
    return run_scenario(spec, workers)


def run_maa_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "maa")
    return run_scenario(spec, workers)


def run_op_count_scenario(spec: ExperimentSpec, workers: Optional[int] = None) -> ResultTable:
    _expect(spec, "ops")
    return run_scenario(spec, workers)
