"""CSV output for scenario results"""

import csv
import logging
from pathlib import Path
from typing import Dict, List, Union

from baseline import write_model_csv
from evaluation import write_assignment_csv, write_table_csv
from run_config import (
    RESULTS_FILE, PER_SEED_FILE, PLOT_FILE, CELLS_DIR, TABLE_SUFFIX, ASSIGNMENT_SUFFIX, MODEL_SUFFIX
)
from .cells import CellKey, CellResult
from .runner import ResultTable

logger = logging.getLogger(__name__)


def format_value(value):
    """Stable text for a CSV cell: integral floats as ints, other floats via repr"""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return int(value) if value.is_integer() else repr(value)
    if hasattr(value, "item"):  # numpy scalar
        return format_value(value.item())
    return value


def write_csv(path: Path, columns: List[str], rows: List[Dict]) -> Path:
    """Write rows as CSV with a mandatory header, in the given column order"""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in columns])
    logger.info(f"[OUTPUT] Saved {len(rows)} rows to '{path}'")
    return path


def cell_stem(key: CellKey) -> str:
    return f"n{key.neurons}_p{key.cids}_dev{key.dev:g}_seed{key.seed}"


def write_cell_artifacts(cells: List[CellResult], cells_dir: Path) -> List[Path]:
    """Contingency table and assignment of each scored cell, plus the k-means model of k-means cells"""
    paths = []
    for cell in cells:
        stem = cell_stem(cell.key)
        if cell.table is not None and cell.table.total:
            paths.append(write_table_csv(cell.table, cells_dir / f"{stem}_{TABLE_SUFFIX}"))
        if cell.sorting is not None:
            paths.append(write_assignment_csv(cell.sorting, cells_dir / f"{stem}_{ASSIGNMENT_SUFFIX}"))
        if cell.model is not None:
            paths.append(write_model_csv(cell.model, cells_dir / f"{stem}_{MODEL_SUFFIX}"))
    if paths:
        logger.info(f"[OUTPUT] Saved {len(paths)} cell files to '{cells_dir}'")
    return paths


def write_results(result: ResultTable, out_dir: Union[str, Path]) -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": write_csv(out_dir / RESULTS_FILE, result.summary_columns, result.summary),
        "per_seed": write_csv(out_dir / PER_SEED_FILE, result.columns, result.per_seed),
        "plot": write_csv(out_dir / PLOT_FILE, result.plot_columns, result.plot),
    }
    if any(cell.table is not None for cell in result.cells):
        cells_dir = out_dir / CELLS_DIR
        cells_dir.mkdir(exist_ok=True)
        write_cell_artifacts(result.cells, cells_dir)
        paths["cells"] = cells_dir
    return paths
