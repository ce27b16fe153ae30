"""Train every classifier kind on the same toy problem and compare.

Three Gaussian blobs, one per driver. Nothing here is tuned; the point is
to show the shared fit/predict/predict_proba surface and the serialization
round-trip.

Run with:  python3 demos/classifiers_toy.py
"""

import json
import tempfile

import numpy as np

from driverid import models

N_PER_CLASS = 80
CENTERS = {"A": (0.0, 0.0), "B": (4.0, 0.0), "C": (2.0, 3.5)}

# The toy set is tiny, so give the step-count-hungry SVM extra epochs.
CONFIGS = {"svm": {"epochs": 60}, "knn": {"k": 5}}


def make_blobs(seed=3):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for label, (cx, cy) in CENTERS.items():
        xs.append(rng.normal((cx, cy), 0.8, size=(N_PER_CLASS, 2)))
        ys.extend([label] * N_PER_CLASS)
    return np.vstack(xs), ys


def main():
    X, y = make_blobs()
    rng = np.random.default_rng(7)
    order = rng.permutation(len(y))
    split = int(0.75 * len(y))
    train, test = order[:split], order[split:]
    y_arr = np.asarray(y)

    print(f"{split} training rows, {len(y) - split} held out")
    print()
    print("kind          accuracy")
    print("----          --------")
    for kind in models.KINDS:
        clf = models.make(kind, CONFIGS.get(kind))
        clf.fit(X[train], y_arr[train])
        pred = clf.predict(X[test])
        acc = float(np.mean(pred == y_arr[test]))
        print(f"{kind:<13} {acc:.3f}")

    # Every model serializes to a small JSON document and comes back
    # predicting identically.
    clf = models.make("reptree").fit(X[train], y_arr[train])
    with tempfile.NamedTemporaryFile("w+", suffix=".json") as fh:
        models.save_model(clf, fh.name)
        fh.seek(0)
        doc = json.load(fh)
        clone = models.load_model(fh.name)
    same = bool(np.all(clone.predict(X[test]) == clf.predict(X[test])))
    print()
    print(f"reptree round-trip: format={doc['format']!r} "
          f"kind={doc['kind']!r} identical_predictions={same}")

    # predict_proba rows are proper distributions over the class alphabet.
    nb = models.make("naive_bayes").fit(X[train], y_arr[train])
    proba = nb.predict_proba(X[test][:3])
    print()
    print("naive_bayes posteriors for 3 held-out points"
          f" (classes {nb.classes_}):")
    for row in proba:
        print("  ", np.round(row, 3), "sum =", round(float(row.sum()), 6))


if __name__ == "__main__":
    main()
