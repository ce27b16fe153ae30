"""Feature selection and sliding-window extraction on a synthetic trip log.

Builds a small two-driver trip CSV in a temp directory, then walks the same
preprocessing path the full pipeline uses: load, rank channels by class
correlation, min-max normalize, and cut overlapping windows with
mean/median/std summaries.

Run with:  python3 demos/windows_and_features.py
"""

import os
import tempfile

import numpy as np

from driverid import features, ingest


def make_trip(path, rows_per_driver=200, seed=11):
    rng = np.random.default_rng(seed)
    header = ["Engine_speed", "Vehicle_speed", "Fuel_consumption",
              "Cabin_noise", "Time(s)", "Class"]
    lines = [",".join(header)]
    for label, aggression in (("A", 0.0), ("B", 2.5)):
        for i in range(rows_per_driver):
            row = [
                f"{1500 + 300 * aggression + rng.normal(0, 150):.1f}",
                f"{55 + 10 * aggression + rng.normal(0, 8):.1f}",
                f"{4.0 + aggression + rng.normal(0, 0.8):.2f}",
                f"{rng.normal(0, 1):.3f}",          # pure noise channel
                str(i),
                label,
            ]
            lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def main():
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = os.path.join(tmp, "trip.csv")
        make_trip(csv_path)

        dataset = ingest.load_dataset(csv_path)
        print(f"loaded {len(dataset)} records, {dataset.n_channels} channels "
              f"(bookkeeping columns are dropped on load)")
        print("label mix:", ingest.class_distribution(dataset))
        print()

        # Rank channels by how well each correlates with the driver label;
        # the noise channel should land in the irrelevant bucket.
        report = features.select_features(
            dataset, mode="correlation-ranked", k=3, irrelevance_threshold=0.12
        )
        print("kept      :", report.kept)
        print("irrelevant:", report.discarded_irrelevant)
        print("scores    :", {c: round(s, 3) for c, s in report.scores.items()})
        print()

        # Min-max normalization maps each kept channel onto [0, 1].
        cols = [dataset.column_index(c) for c in report.kept]
        raw = dataset.channels[:, cols]
        params = features.fit_normalizer(raw)
        normalized = features.apply_normalizer(params, raw)
        for j, name in enumerate(report.kept):
            print(f"  {name}: raw [{raw[:, j].min():.1f}, {raw[:, j].max():.1f}]"
                  f" -> normalized [{normalized[:, j].min():.2f},"
                  f" {normalized[:, j].max():.2f}]")
        print()

        spec = features.WindowSpec(length=30, stride=10)
        matrix, dropped = features.extract_windows(dataset, report.kept, spec)
        positions = features.window_count(len(dataset), spec.length, spec.stride)
        print(f"windows: {len(matrix)} kept, {dropped} dropped at the "
              f"label seam ({positions} positions total)")
        print("window columns:", matrix.column_names[:3], "...")

        # Each window row is the per-channel mean/median/std of 30 records.
        first = matrix.features[0]
        print("first window, first channel -> "
              f"mean={first[0]:.3f} median={first[1]:.3f} std={first[2]:.3f}")


if __name__ == "__main__":
    main()
