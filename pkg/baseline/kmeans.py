"""Offline Lloyd's k-means baseline"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import MIN_CONVERGENCE, MAX_ITERS
from run_config import ERROR_MESSAGES

logger = logging.getLogger(__name__)


class KMeansConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(ge=1)
    min_convergence: float = Field(default=MIN_CONVERGENCE, gt=0, le=1)
    max_iters: int = Field(default=MAX_ITERS, ge=1)


@dataclass
class KMeansModel:
    centroids: np.ndarray  # (k, features)
    iterations_used: int
    final_convergence: float
    min_convergence: float = MIN_CONVERGENCE
    wcss_history: List[float] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        """False when the iteration cap stopped the fit first"""
        return self.final_convergence >= self.min_convergence


def nearest_centroid(centroids: np.ndarray, vectors: np.ndarray) -> Tuple[np.ndarray, float]:
    """0-based nearest centroid per vector (squared Euclidean) and the WCSS"""
    distances = ((vectors[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(distances, axis=1)  # first minimum: lowest index wins ties
    return labels, float(distances[np.arange(len(vectors)), labels].sum())


def _move_centroids(centroids: np.ndarray, vectors: np.ndarray, labels: np.ndarray) -> np.ndarray:
    k = centroids.shape[0]
    sums = np.zeros_like(centroids)
    np.add.at(sums, labels, vectors)
    counts = np.bincount(labels, minlength=k)
    moved = centroids.copy()
    filled = counts > 0  # an empty cluster keeps its stale centroid
    moved[filled] = sums[filled] / counts[filled, None]
    return moved


def fit(train: np.ndarray, config: KMeansConfig, initial_centroids: np.ndarray) -> KMeansModel:
    """Lloyd iterations until the fraction of vectors keeping their nearest
    centroid reaches min_convergence, or max_iters"""
    train = np.asarray(train, dtype=np.float64)
    if train.ndim != 2 or len(train) == 0:
        raise ValueError(ERROR_MESSAGES["EMPTY_TRAINING"])
    centroids = np.array(initial_centroids, dtype=np.float64)
    if centroids.shape != (config.k, train.shape[1]):
        raise ValueError(f"initial centroids shape {centroids.shape} != {(config.k, train.shape[1])}")

    labels, wcss = nearest_centroid(centroids, train)
    history = [wcss]
    iterations = 0
    convergence = 0.0
    while iterations < config.max_iters:
        centroids = _move_centroids(centroids, train, labels)
        iterations += 1
        new_labels, wcss = nearest_centroid(centroids, train)
        history.append(wcss)
        convergence = float(np.mean(new_labels == labels))
        labels = new_labels
        if convergence >= config.min_convergence:
            break

    model = KMeansModel(centroids=centroids, iterations_used=iterations, final_convergence=convergence,
                        min_convergence=config.min_convergence, wcss_history=history)
    if not model.converged:
        logger.warning(f"[KMEANS] Hit max_iters={config.max_iters} at convergence {convergence:.4f}")
    else:
        logger.debug(f"[KMEANS] k={config.k} converged to {convergence:.4f} in {iterations} iterations")
    return model


def assign(model: KMeansModel, test: np.ndarray) -> np.ndarray:
    """1-based CId of the nearest centroid; centroids do not move"""
    if model.centroids is None or len(model.centroids) == 0:
        raise ValueError(ERROR_MESSAGES["NOT_FITTED"])
    test = np.asarray(test, dtype=np.float64)
    labels, _ = nearest_centroid(model.centroids, test)
    return labels + 1


def write_model_csv(model: KMeansModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    width = model.centroids.shape[1]
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["cid"] + [f"f{j + 1}" for j in range(width)] + ["iterations", "convergence"])
        for i, centroid in enumerate(model.centroids):
            writer.writerow([i + 1] + [repr(float(v)) for v in centroid]
                            + [model.iterations_used, repr(model.final_convergence)])
    return path
