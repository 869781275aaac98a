"""Exhaustive grid search scored by k-fold cross-validated ROC AUC."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dataset import LabelVector
from .errors import BadParams, FoldDegenerate, SingleClass
from .logistic import LogRegParams, fit_logreg, predict_proba
from .metrics import roc_curve
from .tree import TreeParams, fit_tree, predict_tree

DEFAULT_LOGISTIC_GRID = {
    "C": [0.01, 0.1, 1.0, 10.0, 100.0],
    "optimizer": ["gradient", "coordinate"],
}

DEFAULT_TREE_GRID = {
    "max_depth": [None, 3, 5, 10],
    "min_samples_split": [2, 10, 50],
    "min_samples_leaf": [1, 5, 20],
}


@dataclass(frozen=True)
class CvConfig:
    folds: int = 5
    seed: int = 0
    scoring: str = "roc_auc"

    def __post_init__(self):
        if self.folds < 2:
            raise BadParams("folds must be >= 2")
        if self.scoring != "roc_auc":
            raise BadParams("only roc_auc scoring is supported")


@dataclass(frozen=True)
class GridCell:
    params: dict
    fold_scores: tuple
    mean_score: float
    std_score: float


@dataclass(frozen=True)
class GridResult:
    family: str
    cells: tuple
    best_params: dict
    best_mean_score: float
    n_fits: int
    cv: CvConfig = field(default=None)


def k_fold_indices(n: int, k: int, seed: int):
    """Shuffled partition into k validation folds; sizes differ by at most 1,
    earlier folds take the remainder."""
    if k > n or k < 1:
        raise BadParams("need 1 <= k <= n")
    perm = np.random.default_rng(seed).permutation(n)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(perm[start:start + size])
        start += size
    return folds


def _combinations(grid: dict):
    names = list(grid.keys())
    for values in itertools.product(*(grid[n] for n in names)):
        yield dict(zip(names, values))


def _fit_score(family, combo, X, y, train_idx, valid_idx):
    Xtr, ytr = X[train_idx], y[train_idx]
    Xva, yva = X[valid_idx], y[valid_idx]
    if family == "logistic":
        params = LogRegParams(
            penalty=combo.get("penalty", "l2"),
            C=combo.get("C", 1.0),
            optimizer=combo.get("optimizer", "gradient"),
            max_iter=combo.get("max_iter", 1000),
            tol=combo.get("tol", 1e-6),
        )
        model = fit_logreg(Xtr, LabelVector(ytr), params)
        scores = predict_proba(model, Xva)
    elif family == "tree":
        params = TreeParams(
            max_depth=combo.get("max_depth"),
            min_samples_split=combo.get("min_samples_split", 2),
            min_samples_leaf=combo.get("min_samples_leaf", 1),
        )
        model = fit_tree(Xtr, LabelVector(ytr), params)
        _, scores = predict_tree(model, Xva)
    else:
        raise BadParams(f"unknown model family: {family}")
    return roc_curve(yva, scores).auc


def _draw_folds(y, n, cv: CvConfig):
    """Folds whose training sides all contain both classes; re-drawn from a
    derived seed when violated, at most 10 attempts."""
    for attempt in range(10):
        seed = cv.seed if attempt == 0 else hash((cv.seed, attempt)) % (2**31)
        folds = k_fold_indices(n, cv.folds, seed)
        ok = True
        for fold in folds:
            mask = np.ones(n, dtype=bool)
            mask[fold] = False
            if len(np.unique(y[mask])) < 2 or len(np.unique(y[fold])) < 2:
                ok = False
                break
        if ok:
            return folds
    raise FoldDegenerate("could not draw folds with both classes present")


def grid_search(X, y, family: str, grid: dict = None,
                cv: CvConfig = CvConfig()) -> GridResult:
    X = np.asarray(X, dtype=float)
    labels = y.values if isinstance(y, LabelVector) else np.asarray(y, dtype=int)
    if len(np.unique(labels)) < 2:
        raise SingleClass("both classes are required for tuning")
    if grid is None:
        grid = DEFAULT_LOGISTIC_GRID if family == "logistic" else DEFAULT_TREE_GRID
    if any(not values for values in grid.values()):
        raise BadParams("every grid dimension needs at least one value")

    n = X.shape[0]
    folds = _draw_folds(labels, n, cv)
    all_idx = np.arange(n)

    cells = []
    for combo in _combinations(grid):
        fold_scores = []
        for fold in folds:
            train_idx = np.setdiff1d(all_idx, fold, assume_unique=False)
            fold_scores.append(
                _fit_score(family, combo, X, labels, train_idx, fold)
            )
        cells.append(GridCell(
            params=dict(combo),
            fold_scores=tuple(fold_scores),
            mean_score=float(np.mean(fold_scores)),
            std_score=float(np.std(fold_scores)),
        ))

    best = max(range(len(cells)), key=lambda i: cells[i].mean_score)
    # max() keeps the first cell on exact ties, i.e. grid order wins
    best = next(
        i for i, c in enumerate(cells) if c.mean_score == cells[best].mean_score
    )
    return GridResult(
        family=family,
        cells=tuple(cells),
        best_params=dict(cells[best].params),
        best_mean_score=cells[best].mean_score,
        n_fits=len(cells) * cv.folds,
        cv=cv,
    )
