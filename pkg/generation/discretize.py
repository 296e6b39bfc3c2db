"""Normalization and discretization of spike features to integers 1..32"""

from typing import TYPE_CHECKING

import numpy as np

from config import FEATURE_VALUES, NORMALIZE_SIGMAS
from run_config import ERROR_MESSAGES

if TYPE_CHECKING:
    from .generator import CanonicalShape

CENTER = (1 + FEATURE_VALUES) / 2  # 16.5, where the canonical mean lands


def normalize(raw: np.ndarray, canonical: "CanonicalShape", base_dev: float) -> np.ndarray:
    """Affine map of [mean - 3 sigma, mean + 3 sigma] onto [1, 32], unclamped"""
    if base_dev <= 0:
        raise ValueError(f"{ERROR_MESSAGES['ZERO_BASE_DEV']}: {base_dev}")
    means = canonical.array
    span = 2 * NORMALIZE_SIGMAS * base_dev * means
    # measured from the mean so raw == mean maps to CENTER exactly
    return CENTER + (np.asarray(raw, dtype=np.float64) - means) / span * (FEATURE_VALUES - 1)


def discretize(raw: np.ndarray, canonical: "CanonicalShape", base_dev: float) -> np.ndarray:
    """Round half-up and clamp to 1..32; the canonical mean maps to 17"""
    values = np.floor(normalize(raw, canonical, base_dev) + 0.5)
    return np.clip(values, 1, FEATURE_VALUES).astype(np.int64)
