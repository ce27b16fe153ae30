"""Linear SVM trained with the Pegasos stochastic subgradient method.

One weight vector per class, one-vs-rest, on the λ-regularized hinge
objective.  ``hinge_loss`` / ``primal_objective`` / ``primal_subgradient``
are standalone so the subgradient can be finite-difference checked away
from the hinge kink.

``predict_proba`` returns a softmax over the raw margins — calibrated
scores, not true probabilities — and documents itself as such.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, softmax


def hinge_loss(margins):
    """max(0, 1 − m) elementwise, where m = y·f(x)."""
    m = np.asarray(margins, dtype=np.float64)
    out = np.maximum(0.0, 1.0 - m)
    return out if out.ndim else float(out)


def primal_objective(w: np.ndarray, X: np.ndarray, y_signs: np.ndarray, lam: float) -> float:
    """λ/2‖w‖² + mean hinge loss of the margins y·(X @ w)."""
    margins = y_signs * (X @ w)
    return 0.5 * lam * float(w @ w) + float(np.mean(hinge_loss(margins)))


def primal_subgradient(w: np.ndarray, X: np.ndarray, y_signs: np.ndarray, lam: float) -> np.ndarray:
    """Subgradient of ``primal_objective`` in w (0 chosen at the kink)."""
    margins = y_signs * (X @ w)
    active = margins < 1.0
    g = lam * w
    if active.any():
        g = g - (y_signs[active, None] * X[active]).sum(axis=0) / X.shape[0]
    return g


class LinearSvm(Classifier):
    """One-vs-rest linear SVM via mini-batch Pegasos.

    Each step t draws the next ``batch_size`` rows of a seed-controlled
    per-epoch shuffle, applies the decayed update with η = 1/(λt) to every
    class vector at once (hinge-active rows only), then projects onto the
    ‖w‖ ≤ 1/√λ ball.  ``batch_size=1`` is the classic per-sample algorithm;
    the default 64 trades nothing but update granularity for a large
    constant-factor speedup.  A constant 1-feature is appended, so the bias
    is regularized with the rest of the vector.
    """

    kind = "svm"

    def __init__(self, lam: float = 1e-4, epochs: int = 20, seed: int = 1, batch_size: int = 64):
        if lam <= 0:
            raise ValueError("lam must be positive")
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.lam = float(lam)
        self.epochs = int(epochs)
        self.seed = int(seed)
        self.batch_size = int(batch_size)

    def _fit(self, X: np.ndarray, y_idx: np.ndarray) -> None:
        n, d = X.shape
        K = len(self.classes_)
        X_aug = np.hstack([X, np.ones((n, 1))])
        # y_signs[i, c] = +1 when row i belongs to class c, else −1
        y_signs = np.full((n, K), -1.0)
        y_signs[np.arange(n), y_idx] = 1.0

        W = np.zeros((K, d + 1))
        radius = 1.0 / np.sqrt(self.lam)
        rng = np.random.default_rng(self.seed)
        t = 0
        for _ in range(self.epochs):
            perm = rng.permutation(n)
            for lo in range(0, n, self.batch_size):
                t += 1
                eta = 1.0 / (self.lam * t)
                rows = perm[lo : lo + self.batch_size]
                Xb = X_aug[rows]  # (b, d+1)
                Sb = y_signs[rows]  # (b, K)
                active = Sb * (Xb @ W.T) < 1.0  # (b, K)
                W *= 1.0 - eta * self.lam
                W += (eta / rows.size) * ((Sb * active).T @ Xb)
                norms = np.sqrt(np.einsum("ij,ij->i", W, W))
                np.maximum(norms, radius, out=norms)
                W *= (radius / norms)[:, None]
        self.weights_ = W

    def _margins(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights_[:, :-1].T + self.weights_[:, -1]

    def _scores(self, X: np.ndarray) -> np.ndarray:
        return self._margins(X)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        # softmax-calibrated margins; ordering matches predict
        return softmax(self._margins(X), axis=1)

    def _config_dict(self) -> dict:
        return {
            "lam": self.lam,
            "epochs": self.epochs,
            "seed": self.seed,
            "batch_size": self.batch_size,
        }

    def _params_dict(self) -> dict:
        return {"weights": [[float(v) for v in row] for row in self.weights_]}

    def _load_params(self, params: dict) -> None:
        self.weights_ = np.asarray(params["weights"], dtype=np.float64)
