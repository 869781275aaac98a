"""Synthetic minority oversampling (SMOTE).

Synthetic rows are convex interpolants between a minority row and one of its
k nearest minority neighbours (Euclidean distance on raw feature values).
Originals are kept first, in their input order; synthetics are appended.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .dataset import LabelVector
from .errors import SingleClass, TooFewMinority


@dataclass(frozen=True)
class SmoteParams:
    k_neighbors: int = 5
    seed: int = 0
    target_ratio: float = 1.0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if not 0.0 < self.target_ratio <= 1.0:
            raise ValueError("target_ratio must be in (0, 1]")


def _minority_neighbors(minority: np.ndarray, k: int) -> np.ndarray:
    """Index matrix of the k nearest minority neighbours of each minority row,
    self excluded."""
    tree = cKDTree(minority)
    _, idx = tree.query(minority, k=k + 1)
    neighbors = np.empty((minority.shape[0], k), dtype=int)
    for i, row in enumerate(idx):
        others = row[row != i]
        # duplicates of row i can push the self index out of the result
        neighbors[i] = others[:k]
    return neighbors


def smote_balance(X, y: LabelVector, params: SmoteParams):
    """Oversample the minority class until minority = majority * target_ratio.

    Returns ``(X_out, y_out)`` with all input rows preserved in order and the
    synthetics appended. Deterministic under ``params.seed``.
    """
    X = np.asarray(X, dtype=float)
    labels = y.values
    pos, neg = y.positive_count, y.negative_count
    if pos == 0 or neg == 0:
        raise SingleClass("both classes are required for SMOTE")
    minority_label = 1 if pos < neg else 0
    minority_count = min(pos, neg)
    majority_count = max(pos, neg)
    if minority_count < 2:
        raise TooFewMinority("need at least 2 minority rows")

    n_synthetic = int(round(majority_count * params.target_ratio)) - minority_count
    if n_synthetic <= 0:
        return X, y

    k = params.k_neighbors
    if k > minority_count - 1:
        warnings.warn(
            f"k_neighbors={k} clamped to {minority_count - 1} "
            "(minority class too small)",
            stacklevel=2,
        )
        k = minority_count - 1

    minority_rows = X[labels == minority_label]
    neighbors = _minority_neighbors(minority_rows, k)

    rng = np.random.default_rng(params.seed)
    base = rng.integers(0, minority_count, size=n_synthetic)
    pick = rng.integers(0, k, size=n_synthetic)
    gap = rng.random(n_synthetic)

    xi = minority_rows[base]
    xj = minority_rows[neighbors[base, pick]]
    synthetic = xi + gap[:, None] * (xj - xi)

    X_out = np.vstack([X, synthetic])
    y_out = LabelVector(
        np.concatenate([labels, np.full(n_synthetic, minority_label, dtype=int)])
    )
    return X_out, y_out
