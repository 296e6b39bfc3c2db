"""Labeled stream CSV files: step, true_neuron, f1..f6 (raw), d1..d6 (discretized)"""

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np

from run_config import STREAM_COLUMNS
from .generator import LabeledStream

logger = logging.getLogger(__name__)


def write_stream_csv(stream: LabeledStream, path: Union[str, Path]) -> Path:
    """Write one row per spike; floats use repr so they read back bit-exactly"""
    path = Path(path)
    features = stream.features
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(STREAM_COLUMNS)
        for step in range(len(stream)):
            row = [step + 1, int(stream.labels[step])]
            row += [repr(float(v)) for v in stream.raw[step]]
            row += [int(v) for v in features[step]] if features is not None else [""] * 6
            writer.writerow(row)
    logger.info(f"[STREAM] Saved {len(stream)} spikes to '{path}'")
    return path


def read_stream_csv(path: Union[str, Path]) -> LabeledStream:
    with open(Path(path), newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != STREAM_COLUMNS:
            raise ValueError(f"unexpected stream header: {header}")
        rows = list(reader)

    labels = np.asarray([int(row[1]) for row in rows], dtype=np.int64)
    raw = np.asarray([[float(v) for v in row[2:8]] for row in rows], dtype=np.float64)
    features = None
    if rows and rows[0][8] != "":
        features = np.asarray([[int(v) for v in row[8:14]] for row in rows], dtype=np.int64)
    return LabeledStream(raw=raw.reshape(-1, 6), labels=labels, features=features, neurons=[])
