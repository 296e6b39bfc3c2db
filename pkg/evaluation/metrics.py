"""Sorting metrics over neuron x cluster contingency tables"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from run_config import ERROR_MESSAGES


@dataclass(frozen=True)
class ContingencyTable:
    """counts[i, j]: spikes of neuron i+1 mapped to CId j+1"""
    counts: np.ndarray

    @classmethod
    def from_labels(cls, labels: Sequence[int], cids: Sequence[int],
                    n_neurons: Optional[int] = None, n_clusters: Optional[int] = None) -> "ContingencyTable":
        labels = np.asarray(labels, dtype=np.int64)
        cids = np.asarray(cids, dtype=np.int64)
        if labels.shape != cids.shape:
            raise ValueError(f"{ERROR_MESSAGES['LENGTH_MISMATCH']}: {labels.shape} != {cids.shape}")
        n_neurons = n_neurons or int(labels.max(initial=0))
        n_clusters = n_clusters or int(cids.max(initial=0))
        counts = np.zeros((n_neurons, n_clusters), dtype=np.int64)
        np.add.at(counts, (labels - 1, cids - 1), 1)
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class SortingResult:
    accuracy: float
    matched: int
    assignment: Dict[int, int]  # neuron id -> CId, both 1-based


def contingency_table(labels: Sequence[int], cids: Sequence[int],
                      n_neurons: Optional[int] = None, n_clusters: Optional[int] = None) -> ContingencyTable:
    return ContingencyTable.from_labels(labels, cids, n_neurons, n_clusters)


def _check(table: ContingencyTable) -> np.ndarray:
    counts = np.asarray(table.counts, dtype=np.int64)
    if counts.size == 0 or counts.sum() == 0:
        raise ValueError(ERROR_MESSAGES["EMPTY_TABLE"])
    return counts


def sorting_accuracy(table: ContingencyTable) -> SortingResult:
    """Largest one-to-one neuron/CId assignment mass over total spikes (Munkres)"""
    counts = _check(table)
    rows, cols = counts.shape
    size = max(rows, cols)
    # zero padding rows/columns absorb unmatched neurons or CIds
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:rows, :cols] = counts
    chosen_rows, chosen_cols = linear_sum_assignment(padded, maximize=True)

    matched = int(padded[chosen_rows, chosen_cols].sum())
    real = (chosen_rows < rows) & (chosen_cols < cols)
    assignment = {int(i) + 1: int(j) + 1 for i, j in zip(chosen_rows[real], chosen_cols[real])}
    return SortingResult(accuracy=matched / int(counts.sum()), matched=matched, assignment=assignment)


def purity(table: ContingencyTable) -> float:
    """Potential accuracy when CIds may be merged: each column's largest count"""
    counts = _check(table)
    return int(counts.max(axis=0).sum()) / int(counts.sum())


def per_neuron_recall(table: ContingencyTable, result: Optional[SortingResult] = None) -> np.ndarray:
    """Assigned-cell count over row total per neuron; nan for silent neurons"""
    counts = _check(table)
    result = result or sorting_accuracy(table)
    totals = counts.sum(axis=1)
    recall = np.full(counts.shape[0], np.nan)
    for neuron in range(counts.shape[0]):
        if totals[neuron] == 0:
            continue
        cid = result.assignment.get(neuron + 1)
        recall[neuron] = counts[neuron, cid - 1] / totals[neuron] if cid else 0.0
    return recall


def accurate_neuron_count(table: ContingencyTable, maa: float,
                          result: Optional[SortingResult] = None) -> int:
    """Neurons whose recall under the sorting assignment is >= maa"""
    if not 0 < maa <= 1:
        raise ValueError(f"{ERROR_MESSAGES['BAD_MAA']}: {maa}")
    recall = per_neuron_recall(table, result)
    return int(np.count_nonzero(recall[~np.isnan(recall)] >= maa))


def windowed_accuracy(labels: Sequence[int], cids: Sequence[int], window: int,
                      n_neurons: Optional[int] = None, n_clusters: Optional[int] = None,
                      carry_assignment: bool = False) -> List[Tuple[int, float]]:
    """Sorting accuracy of each non-overlapping window.

    Each window is scored on its own table. With carry_assignment, a window is
    scored under the assignment fitted on the window before it instead, so a
    neuron first seen in this window counts as missed; window 0 uses its own.
    """
    labels = np.asarray(labels, dtype=np.int64)
    cids = np.asarray(cids, dtype=np.int64)
    if labels.shape != cids.shape:
        raise ValueError(f"{ERROR_MESSAGES['LENGTH_MISMATCH']}: {labels.shape} != {cids.shape}")
    if window < 1:
        raise ValueError(f"{ERROR_MESSAGES['BAD_WINDOW']}: {window}")
    n_neurons = n_neurons or int(labels.max(initial=0))
    n_clusters = n_clusters or int(cids.max(initial=0))

    trace = []
    previous = None
    for index, start in enumerate(range(0, len(labels), window)):
        table = contingency_table(labels[start:start + window], cids[start:start + window],
                                  n_neurons, n_clusters)
        own = sorting_accuracy(table)
        if carry_assignment and previous is not None:
            trace.append((index, assigned_fraction(table, previous.assignment)))
        else:
            trace.append((index, own.accuracy))
        previous = own
    return trace


def assigned_fraction(table: ContingencyTable, assignment: Dict[int, int]) -> float:
    """Fraction of the table's spikes that land on their neuron's assigned CId"""
    counts = _check(table)
    rows, cols = counts.shape
    hits = sum(int(counts[neuron - 1, cid - 1]) for neuron, cid in assignment.items()
               if neuron <= rows and cid <= cols)
    return hits / int(counts.sum())


def write_table_csv(table: ContingencyTable, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["neuron"] + [f"cid{j + 1}" for j in range(table.counts.shape[1])])
        for i, row in enumerate(table.counts):
            writer.writerow([i + 1] + [int(v) for v in row])
    return path


def write_assignment_csv(result: SortingResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["neuron", "cid"])
        for neuron in sorted(result.assignment):
            writer.writerow([neuron, result.assignment[neuron]])
    return path
