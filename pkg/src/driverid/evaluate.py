"""Cross-validation, confusion matrices, and classification metrics.

The confusion convention is ``counts[i, j]`` = instances of true class ``i``
predicted as class ``j``.  Per-class TP/FP/FN/TN follow from the matrix
(diagonal / column remainder / row remainder / double sum), precision,
recall, and F1 are reported in percent, and overall accuracy is
``100 · trace / total`` — algebraically the same as computing accuracy on
the class-averaged 2×2 matrix, which is also reported.

Cross-validation assigns windows to folds (stratified round-robin after a
seeded per-class shuffle by default, or contiguous time blocks), fits any
normalization on the training folds only, and pools one confusion matrix
across folds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import models
from .errors import (
    DriverIdError,
    EmptyMatrix,
    NoBaselineDesignated,
    TooFewInstancesPerClass,
    UnknownLabel,
)
from .features import FeatureMatrix, apply_normalizer, fit_normalizer

SPLIT_MODES = ("random-window", "blocked-time")
NORMALIZE_POLICIES = ("train", "all", "none")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count matrix over an ordered class alphabet."""

    classes: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        n = len(self.classes)
        if counts.shape != (n, n):
            raise DriverIdError(f"counts shape {counts.shape} for {n} classes")
        if (counts < 0).any():
            raise DriverIdError("confusion counts must be nonnegative")
        counts.flags.writeable = False

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion_from_predictions(
    y_true: Sequence[str], y_pred: Sequence[str], classes: Sequence[str] | None = None
) -> ConfusionMatrix:
    """Count (true, predicted) pairs over ``classes`` (default: sorted union)."""
    if len(y_true) != len(y_pred):
        raise DriverIdError(f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    if classes is None:
        classes = sorted(set(y_true) | set(y_pred))
    classes = tuple(classes)
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        try:
            counts[index[t], index[p]] += 1
        except KeyError as missing:
            raise UnknownLabel(f"label {missing} is not among classes {classes}") from None
    return ConfusionMatrix(classes=classes, counts=counts)


def per_class_counts(cm: ConfusionMatrix, i: int) -> tuple[int, int, int, int]:
    """(TP, FP, FN, TN) for class index ``i``.

    TP is the diagonal cell; FP sums the rest of column i (others predicted
    as i); FN sums the rest of row i (i predicted as others); TN is
    everything else.  The four always sum to the instance total.
    """
    n = len(cm.classes)
    if not 0 <= i < n:
        raise IndexError(f"class index {i} out of range [0, {n})")
    c = cm.counts
    tp = int(c[i, i])
    fp = int(c[:, i].sum() - c[i, i])
    fn = int(c[i, :].sum() - c[i, i])
    tn = int(c.sum() - tp - fp - fn)
    return tp, fp, fn, tn


@dataclass(frozen=True)
class MetricsReport:
    """Percent metrics computed from one (possibly pooled) confusion matrix."""

    classes: tuple[str, ...]
    counts: np.ndarray
    accuracy: float
    per_class: tuple[dict, ...]
    averaged_2x2: tuple[tuple[float, float], tuple[float, float]]
    fold_accuracies: tuple[float, ...] | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "confusion": [[int(v) for v in row] for row in self.counts],
            "accuracy": self.accuracy,
            "per_class": [dict(d) for d in self.per_class],
            "averaged_2x2": [list(row) for row in self.averaged_2x2],
            "fold_accuracies": list(self.fold_accuracies)
            if self.fold_accuracies is not None
            else None,
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        avg = d["averaged_2x2"]
        return cls(
            classes=tuple(d["classes"]),
            counts=np.asarray(d["confusion"], dtype=np.int64),
            accuracy=float(d["accuracy"]),
            per_class=tuple(dict(row) for row in d["per_class"]),
            averaged_2x2=((avg[0][0], avg[0][1]), (avg[1][0], avg[1][1])),
            fold_accuracies=tuple(d["fold_accuracies"])
            if d.get("fold_accuracies") is not None
            else None,
            metadata=dict(d.get("metadata", {})),
        )


def metrics(cm: ConfusionMatrix, **report_fields) -> MetricsReport:
    """Per-class precision/recall/F1 and overall accuracy, in percent.

    A zero denominator (class never predicted, class absent, or both
    precision and recall zero for F1) yields metric 0 and an entry in that
    class's ``undefined`` list — the report never divides by zero.
    """
    total = cm.total
    if total == 0:
        raise EmptyMatrix("confusion matrix has no instances")
    rows = []
    avg = np.zeros((2, 2))
    for i, cls in enumerate(cm.classes):
        tp, fp, fn, tn = per_class_counts(cm, i)
        undefined = []
        if tp + fp > 0:
            precision = 100.0 * tp / (tp + fp)
        else:
            precision = 0.0
            undefined.append("precision")
        if tp + fn > 0:
            recall = 100.0 * tp / (tp + fn)
        else:
            recall = 0.0
            undefined.append("recall")
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
            undefined.append("f1")
        rows.append(
            {
                "class": cls,
                "precision": precision,
                "recall": recall,
                "f1": f1,
                "undefined": undefined,
            }
        )
        avg += np.array([[tp, fn], [fp, tn]], dtype=np.float64)
    avg /= len(cm.classes)
    # Parenthesized so the ratio rounds once: a baseline's pooled accuracy is
    # then bit-identical to 100 * the majority proportion (count / n).
    accuracy = 100.0 * (float(np.trace(cm.counts)) / total)
    return MetricsReport(
        classes=cm.classes,
        counts=cm.counts,
        accuracy=accuracy,
        per_class=tuple(rows),
        averaged_2x2=((avg[0, 0], avg[0, 1]), (avg[1, 0], avg[1, 1])),
        **report_fields,
    )


def metrics_to_csv(report: MetricsReport) -> str:
    """Flat per-class table (plottable): class, precision, recall, f1."""
    lines = ["class,precision,recall,f1"]
    for row in report.per_class:
        lines.append(
            f"{row['class']},{row['precision']!r},{row['recall']!r},{row['f1']!r}"
        )
    lines.append(f"__overall__,{report.accuracy!r},,")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CvPlan:
    """How to split instances into folds."""

    folds: int = 10
    stratified: bool = True
    seed: int = 1
    split_mode: str = "random-window"

    def __post_init__(self) -> None:
        if self.folds < 2:
            raise DriverIdError(f"folds must be >= 2, got {self.folds}")
        if self.split_mode not in SPLIT_MODES:
            raise DriverIdError(
                f"split_mode must be one of {SPLIT_MODES}, got {self.split_mode!r}"
            )

    def to_dict(self) -> dict:
        return {
            "folds": self.folds,
            "stratified": self.stratified,
            "seed": self.seed,
            "split_mode": self.split_mode,
        }


def fold_assignments(labels: Sequence[str], plan: CvPlan) -> np.ndarray:
    """Fold index per instance.

    random-window: seeded shuffle, then round-robin — per class when
    stratified (requiring every class to have at least ``folds`` instances)
    or globally otherwise.  blocked-time: ``folds`` contiguous index blocks,
    preserving time order at the cost of class balance.  Every instance
    lands in exactly one fold.
    """
    n = len(labels)
    if n < plan.folds:
        raise TooFewInstancesPerClass(f"{n} instances for {plan.folds} folds")
    fold_of = np.empty(n, dtype=np.intp)
    if plan.split_mode == "blocked-time":
        fold_of[:] = (np.arange(n) * plan.folds) // n
        return fold_of
    rng = np.random.default_rng(plan.seed)
    if not plan.stratified:
        fold_of[rng.permutation(n)] = np.arange(n) % plan.folds
        return fold_of
    y = np.asarray(labels)
    for cls in sorted(set(labels)):
        idx = np.where(y == cls)[0]
        if idx.size < plan.folds:
            raise TooFewInstancesPerClass(
                f"class {cls!r} has {idx.size} instances, fewer than {plan.folds} folds"
            )
        fold_of[rng.permutation(idx)] = np.arange(idx.size) % plan.folds
    return fold_of


def cross_validate(
    kind: str,
    config: dict | None,
    matrix: FeatureMatrix,
    plan: CvPlan = CvPlan(),
    *,
    normalize: str = "train",
) -> MetricsReport:
    """K-fold evaluation with one pooled confusion matrix.

    ``normalize`` controls min-max scaling: ``"train"`` fits on each fold's
    training rows only (the leakage-free default), ``"all"`` fits once on
    the full matrix, ``"none"`` skips scaling.  Per-fold accuracies ride
    along in the report; everything is deterministic for a fixed plan seed.
    """
    if normalize not in NORMALIZE_POLICIES:
        raise DriverIdError(
            f"normalize must be one of {NORMALIZE_POLICIES}, got {normalize!r}"
        )
    classes = matrix.label_alphabet
    fold_of = fold_assignments(matrix.labels, plan)
    labels = np.asarray(matrix.labels)
    pooled = np.zeros((len(classes), len(classes)), dtype=np.int64)
    fold_accuracies = []
    whole = fit_normalizer(matrix.features) if normalize == "all" else None
    for f in range(plan.folds):
        test_mask = fold_of == f
        X_train, X_test = matrix.features[~test_mask], matrix.features[test_mask]
        y_train, y_test = labels[~test_mask], labels[test_mask]
        if normalize == "train":
            params = fit_normalizer(X_train)
            X_train, X_test = apply_normalizer(params, X_train), apply_normalizer(params, X_test)
        elif normalize == "all":
            X_train, X_test = apply_normalizer(whole, X_train), apply_normalizer(whole, X_test)
        model = models.make(kind, config).fit(X_train, y_train)
        pred = model.predict(X_test)
        cm = confusion_from_predictions(y_test, pred, classes=classes)
        pooled += cm.counts
        fold_accuracies.append(100.0 * (float(np.trace(cm.counts)) / cm.total))
    report = metrics(
        ConfusionMatrix(classes=classes, counts=pooled),
        fold_accuracies=tuple(fold_accuracies),
        metadata={
            "kind": kind,
            "config": dict(config or {}),
            "plan": plan.to_dict(),
            "normalize": normalize,
            "n_instances": len(matrix),
            "n_features": matrix.n_features,
        },
    )
    return report


BASELINE_KIND = "zeror"


def baseline_compare(reports: Sequence[MetricsReport]) -> dict:
    """Accuracy deltas against the ZeroR baseline report, ranked.

    Every report appears as a row (the baseline compares to itself with
    delta 0); rows whose accuracy does not exceed the baseline are flagged
    ``better: false``.  Raises NoBaselineDesignated when no report came
    from a ZeroR run.
    """
    baseline = next(
        (r for r in reports if r.metadata.get("kind") == BASELINE_KIND), None
    )
    if baseline is None:
        raise NoBaselineDesignated(
            f"no report with kind {BASELINE_KIND!r} among {len(reports)} reports"
        )
    rows = []
    for r in reports:
        delta = r.accuracy - baseline.accuracy
        rows.append(
            {
                "kind": r.metadata.get("kind", "?"),
                "accuracy": r.accuracy,
                "delta_vs_baseline": delta,
                "better_than_baseline": delta > 0,
            }
        )
    rows.sort(key=lambda row: (-row["accuracy"], row["kind"]))
    return {
        "baseline": {"kind": BASELINE_KIND, "accuracy": baseline.accuracy},
        "ranking": rows,
    }
