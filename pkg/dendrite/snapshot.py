"""Dendrite state snapshots.

Format (version 1): a numpy ``.npz`` archive with three arrays

    format_version  int64 scalar, currently 1
    config          0-d unicode array holding DendriteConfig as JSON
    weights         int64 array (p, m, n) of fixed-point weights;
                    weight units = weights / scale, scale derived from config

Loading reproduces the weight array bit-exactly. The random source is not
saved; a loaded dendrite reseeds from config.seed.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from config import SNAPSHOT_VERSION
from run_config import ERROR_MESSAGES
from .core import Dendrite, DendriteConfig

logger = logging.getLogger(__name__)


def save_snapshot(dendrite: Dendrite, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "wb") as f:
        np.savez(
            f,
            format_version=np.int64(SNAPSHOT_VERSION),
            config=np.array(dendrite.config.model_dump_json()),
            weights=dendrite.weights.astype(np.int64),
        )
    logger.info(f"[SNAPSHOT] Wrote {dendrite.weights.shape} weights to {path}")
    return path


def load_snapshot(path: Union[str, Path]) -> Dendrite:
    with np.load(Path(path), allow_pickle=False) as archive:
        version = int(archive["format_version"])
        if version != SNAPSHOT_VERSION:
            raise ValueError(f"{ERROR_MESSAGES['SNAPSHOT_VERSION']}: {version}")
        config = DendriteConfig.model_validate_json(str(archive["config"]))
        return Dendrite.from_fixed_point(config, archive["weights"])
