"""Multinomial logistic regression trained by full-batch gradient descent.

The probability model is a softmax over per-class linear scores; with two
classes this reduces to the logistic sigmoid 1/(1+e^{-x}) of the score
difference.  ``loss_and_grad`` is a standalone function so the analytic
gradient can be checked against finite differences.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, softmax


def sigmoid(x):
    """1/(1 + e^{-x}), elementwise, overflow-safe."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def loss_and_grad(W: np.ndarray, X_aug: np.ndarray, y_idx: np.ndarray, l2: float = 0.0):
    """Mean cross-entropy of softmax(X_aug @ W.T) and its gradient in W.

    ``W`` is (n_classes, d+1) with the last column acting on the constant
    1-feature (the bias, excluded from the L2 penalty).  Returns
    ``(loss, grad)`` with ``grad.shape == W.shape``.
    """
    n = X_aug.shape[0]
    logits = X_aug @ W.T
    P = softmax(logits, axis=1)
    # cross-entropy: -mean log P[i, y_i], computed from logits for stability
    row_logsum = np.log(np.sum(np.exp(logits - logits.max(axis=1, keepdims=True)), axis=1))
    row_logsum += logits.max(axis=1)
    loss = float(np.mean(row_logsum - logits[np.arange(n), y_idx]))
    G = P.copy()
    G[np.arange(n), y_idx] -= 1.0
    grad = (G.T @ X_aug) / n
    if l2:
        penalized = W.copy()
        penalized[:, -1] = 0.0
        loss += 0.5 * l2 * float(np.sum(penalized**2))
        grad = grad + l2 * penalized
    return loss, grad


class LogisticRegression(Classifier):
    """Softmax regression; deterministic (zero init, full-batch updates)."""

    kind = "logreg"

    def __init__(
        self,
        learning_rate: float = 0.1,
        max_epochs: int = 1000,
        tol: float = 1e-8,
        l2: float = 0.0,
    ):
        if learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        self.learning_rate = float(learning_rate)
        self.max_epochs = int(max_epochs)
        self.tol = float(tol)
        self.l2 = float(l2)

    def _fit(self, X: np.ndarray, y_idx: np.ndarray) -> None:
        X_aug = np.hstack([X, np.ones((X.shape[0], 1))])
        W = np.zeros((len(self.classes_), X_aug.shape[1]))
        prev = np.inf
        for epoch in range(self.max_epochs):
            loss, grad = loss_and_grad(W, X_aug, y_idx, self.l2)
            if abs(prev - loss) < self.tol:
                break
            W -= self.learning_rate * grad
            prev = loss
        self.weights_ = W
        self.n_epochs_ = epoch + 1
        self.final_loss_ = prev if np.isfinite(prev) else loss

    def _logits(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights_[:, :-1].T + self.weights_[:, -1]

    def _scores(self, X: np.ndarray) -> np.ndarray:
        return self._logits(X)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self._logits(X), axis=1)

    def _config_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "max_epochs": self.max_epochs,
            "tol": self.tol,
            "l2": self.l2,
        }

    def _params_dict(self) -> dict:
        return {"weights": [[float(v) for v in row] for row in self.weights_]}

    def _load_params(self, params: dict) -> None:
        self.weights_ = np.asarray(params["weights"], dtype=np.float64)
