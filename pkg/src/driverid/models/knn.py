"""k-nearest-neighbors with exact, deterministic neighbor selection.

Distances are Euclidean.  The neighbor set of a query is defined as if all
training points were sorted by (distance, training index) and the first k
taken — so distance ties always admit the lowest-index points, and the
implementation below is exactly interchangeable with that brute-force scan.
Vote ties resolve to the lowest class.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch
from .base import Classifier


def euclidean_distance(x, y) -> float:
    """√Σ(x_i − y_i)² between two equal-length vectors."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DimensionMismatch(f"length {x.shape[0]} vs {y.shape[0]}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


class KNearestNeighbors(Classifier):
    """Lazy learner: stores the training matrix, votes among the k nearest.

    k defaults to 1.  When fewer than k training rows exist, all of them
    vote.  Queries are processed in chunks so the distance matrix never
    exceeds a few hundred MB regardless of training-set size.
    """

    kind = "knn"
    query_chunk = 256

    def __init__(self, k: int = 1):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = int(k)

    def _fit(self, X: np.ndarray, y_idx: np.ndarray) -> None:
        self.X_ = X
        self.y_idx_ = y_idx
        self._sq_norms = np.einsum("ij,ij->i", X, X)
        self._onehot = np.zeros((X.shape[0], len(self.classes_)))
        self._onehot[np.arange(X.shape[0]), y_idx] = 1.0

    def _vote_counts(self, Q: np.ndarray) -> np.ndarray:
        """(n_queries, n_classes) neighbor vote counts."""
        n_train = self.X_.shape[0]
        k = min(self.k, n_train)
        counts = np.empty((Q.shape[0], len(self.classes_)))
        for lo in range(0, Q.shape[0], self.query_chunk):
            q = Q[lo : lo + self.query_chunk]
            # Squared distances via the expansion ‖q‖² − 2q·x + ‖x‖²;
            # clamp the roundoff negatives.  Monotone in true distance, so
            # neighbor selection is unaffected by skipping the sqrt.
            d2 = self._sq_norms - 2.0 * (q @ self.X_.T)
            d2 += np.einsum("ij,ij->i", q, q)[:, None]
            np.maximum(d2, 0.0, out=d2)

            kth = np.partition(d2, k - 1, axis=1)[:, k - 1 : k]
            strict = d2 < kth
            at_kth = d2 == kth
            need = k - strict.sum(axis=1, keepdims=True)
            # Fill remaining seats with the lowest-index rows at the kth
            # distance — the order a (distance, index) sort would produce.
            fill = at_kth & (np.cumsum(at_kth, axis=1) <= need)
            members = (strict | fill).astype(np.float64)
            counts[lo : lo + q.shape[0]] = members @ self._onehot
        return counts

    def _scores(self, X: np.ndarray) -> np.ndarray:
        return self._vote_counts(X)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        counts = self._vote_counts(X)
        return counts / counts.sum(axis=1, keepdims=True)

    def _config_dict(self) -> dict:
        return {"k": self.k}

    def _params_dict(self) -> dict:
        return {
            "train": [[float(v) for v in row] for row in self.X_],
            "labels": [int(i) for i in self.y_idx_],
        }

    def _load_params(self, params: dict) -> None:
        X = np.asarray(params["train"], dtype=np.float64)
        y_idx = np.asarray(params["labels"], dtype=np.intp)
        self._fit(X, y_idx)
