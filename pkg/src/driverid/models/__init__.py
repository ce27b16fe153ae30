"""Classifier registry and uniform train/predict/save/load entry points.

All models share the :class:`~driverid.models.base.Classifier` contract:
sorted class alphabet, lowest-class tie-breaking, valid probability
distributions from ``predict_proba``, and bit-exact JSON round-trips.
"""

from __future__ import annotations

import json

from ..errors import DriverIdError
from ..features import FeatureMatrix
from .base import Classifier, logsumexp, mse, prepare_training, softmax
from .baseline import ZeroR
from .ensemble import DEFAULT_VOTE_MEMBERS, AdaBoost, MajorityVote
from .knn import KNearestNeighbors, euclidean_distance
from .logistic import LogisticRegression, loss_and_grad, sigmoid
from .naive_bayes import GaussianNaiveBayes
from .svm import LinearSvm, hinge_loss, primal_objective, primal_subgradient
from .tree import RepTree

#: kind identifier → classifier class
KINDS: dict[str, type[Classifier]] = {
    cls.kind: cls
    for cls in (
        ZeroR,
        KNearestNeighbors,
        GaussianNaiveBayes,
        LogisticRegression,
        LinearSvm,
        RepTree,
        AdaBoost,
        MajorityVote,
    )
}

SERIALIZATION_FORMAT = "driverid-model"
SERIALIZATION_VERSION = 1


def make(kind: str, config: dict | None = None) -> Classifier:
    """Instantiate an unfitted classifier of the given kind."""
    if kind not in KINDS:
        raise DriverIdError(f"unknown model kind {kind!r}; choose from {sorted(KINDS)}")
    try:
        return KINDS[kind](**(config or {}))
    except TypeError as e:
        raise DriverIdError(f"bad config for {kind!r}: {e}") from None


def train(kind: str, matrix: FeatureMatrix, config: dict | None = None) -> Classifier:
    """Fit a fresh model of ``kind`` on a FeatureMatrix."""
    return make(kind, config).fit(matrix.features, matrix.labels)


def save_model(model: Classifier, target) -> None:
    """Write a model as versioned JSON; floats round-trip bit-exactly."""
    payload = {
        "format": SERIALIZATION_FORMAT,
        "version": SERIALIZATION_VERSION,
        **model.to_dict(),
    }
    if hasattr(target, "write"):
        json.dump(payload, target, sort_keys=True)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)


def load_model(source) -> Classifier:
    """Inverse of :func:`save_model`."""
    if hasattr(source, "read"):
        payload = json.load(source)
    else:
        with open(source, encoding="utf-8") as fh:
            payload = json.load(fh)
    if payload.get("format") != SERIALIZATION_FORMAT:
        raise DriverIdError(f"not a model file (format={payload.get('format')!r})")
    if payload.get("version") != SERIALIZATION_VERSION:
        raise DriverIdError(f"unsupported model version {payload.get('version')!r}")
    kind = payload.get("kind")
    if kind not in KINDS:
        raise DriverIdError(f"unknown model kind {kind!r}")
    return KINDS[kind].from_dict(payload)


__all__ = [
    "AdaBoost",
    "Classifier",
    "DEFAULT_VOTE_MEMBERS",
    "GaussianNaiveBayes",
    "KINDS",
    "KNearestNeighbors",
    "LinearSvm",
    "LogisticRegression",
    "MajorityVote",
    "RepTree",
    "ZeroR",
    "euclidean_distance",
    "hinge_loss",
    "load_model",
    "logsumexp",
    "loss_and_grad",
    "make",
    "mse",
    "prepare_training",
    "primal_objective",
    "primal_subgradient",
    "save_model",
    "sigmoid",
    "softmax",
    "train",
]
