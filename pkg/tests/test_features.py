"""Feature selection, normalization, sliding-window extraction."""

import io

import numpy as np
import pytest

from driverid import features, ingest
from driverid.errors import (
    ColumnCountMismatch,
    DriverIdError,
    UnknownFeatureName,
    WindowLongerThanSeries,
)
from driverid.features import (
    DEFAULT_FIXED_FEATURES,
    FeatureMatrix,
    NormalizationParams,
    WindowSpec,
    apply_normalizer,
    column_stats,
    extract_windows,
    fit_normalizer,
    select_features,
    window_count,
)


def _dataset(columns, rows, labels):
    text = ",".join(list(columns) + ["Class"]) + "\n"
    for row, lab in zip(rows, labels):
        text += ",".join(str(v) for v in row) + f",{lab}\n"
    return ingest.load_dataset(io.StringIO(text))


# -- selection ---------------------------------------------------------------

def test_fixed_list_matches_loose_spellings():
    # the canonical 15 names resolve case/punctuation-insensitively
    cols = [name.upper().replace(" ", "_").replace("-", "_") for name in DEFAULT_FIXED_FEATURES]
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(30, 15))
    labels = ["A"] * 15 + ["B"] * 15
    ds = _dataset(cols, rows, labels)
    report = select_features(ds, "fixed-list")
    assert len(report.kept) == 15
    assert set(report.kept) == set(cols)


def test_fixed_list_friction_torque_alias():
    cols = ["Torque_of_friction", "Other"]
    ds = _dataset(cols, [[1.0, 2.0], [3.0, 4.0]], ["A", "B"])
    report = select_features(ds, "fixed-list", feature_list=("Friction torque",))
    assert report.kept == ("Torque_of_friction",)


def test_fixed_list_unknown_feature():
    ds = _dataset(["x", "y"], [[1, 2], [3, 4]], ["A", "B"])
    with pytest.raises(UnknownFeatureName):
        select_features(ds, "fixed-list", feature_list=("nonexistent_channel",))


def test_selection_report_buckets_are_disjoint_cover():
    rng = np.random.default_rng(1)
    n = 200
    labels = ["A" if i < n // 2 else "B" for i in range(n)]
    # a perfect indicator: correlation with the label is exactly 1, so the
    # noisy copy below can only rank behind it
    signal = np.asarray([0.0 if l == "A" else 5.0 for l in labels])
    cols = {
        "signal": signal,
        "signal_copy": signal.copy(),           # exact duplicate -> superfluous
        "signal_shifted": signal + 0.01 * rng.normal(size=n),  # r > 0.95 -> correlated
        "flat": np.zeros(n),                    # zero variance -> homogeneous
        "noise": rng.normal(size=n),            # low relevance -> irrelevant
    }
    names = list(cols)
    rows = np.column_stack([cols[c] for c in names])
    ds = _dataset(names, rows, labels)
    report = select_features(ds, "correlation-ranked", k=5, irrelevance_threshold=0.12)
    assert report.kept == ("signal",)
    assert report.discarded_superfluous == ("signal_copy",)
    assert report.discarded_correlated == ("signal_shifted",)
    assert report.discarded_homogeneous == ("flat",)
    assert report.discarded_irrelevant == ("noise",)
    buckets = (
        report.kept
        + report.discarded_homogeneous
        + report.discarded_irrelevant
        + report.discarded_superfluous
        + report.discarded_correlated
    )
    assert sorted(buckets) == sorted(names)


def test_ranked_selection_caps_at_k():
    rng = np.random.default_rng(2)
    n = 100
    labels = ["A"] * 50 + ["B"] * 50
    y = np.asarray([0.0] * 50 + [1.0] * 50)
    rows = np.column_stack([y + rng.normal(0, 0.3 + j, size=n) for j in range(6)])
    ds = _dataset([f"c{j}" for j in range(6)], rows, labels)
    report = select_features(ds, "correlation-ranked", k=3, correlation_threshold=2.0)
    assert len(report.kept) == 3
    # the strongest channel (least noise) ranks first
    assert report.kept[0] == "c0"
    assert report.scores["c0"] >= report.scores["c1"]


def test_selection_rejects_unknown_mode(trip_dataset):
    with pytest.raises(DriverIdError):
        select_features(trip_dataset, "chi-squared")


# -- normalization -----------------------------------------------------------

def test_normalizer_maps_train_to_unit_interval():
    rng = np.random.default_rng(3)
    X = rng.normal(5.0, 3.0, size=(50, 4))
    params = fit_normalizer(X)
    Z = apply_normalizer(params, X)
    assert Z.min() >= 0.0 and Z.max() <= 1.0
    np.testing.assert_allclose(Z.min(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(Z.max(axis=0), 1.0, atol=1e-12)


def test_normalizer_constant_column_maps_to_zero():
    X = np.column_stack([np.full(10, 7.0), np.arange(10.0)])
    params = fit_normalizer(X)
    Z = apply_normalizer(params, X)
    assert (Z[:, 0] == 0.0).all()


def test_normalizer_does_not_clip_unseen_values():
    X = np.array([[0.0], [10.0]])
    params = fit_normalizer(X)
    Z = apply_normalizer(params, np.array([[20.0], [-10.0]]))
    assert Z[0, 0] == 2.0 and Z[1, 0] == -1.0


def test_normalizer_column_count_mismatch():
    params = fit_normalizer(np.zeros((3, 2)))
    with pytest.raises(ColumnCountMismatch):
        apply_normalizer(params, np.zeros((3, 5)))


def test_normalizer_dict_round_trip():
    params = fit_normalizer(np.random.default_rng(4).normal(size=(20, 3)))
    again = NormalizationParams.from_dict(params.to_dict())
    np.testing.assert_array_equal(again.mins, params.mins)
    np.testing.assert_array_equal(again.maxs, params.maxs)


# -- windows -----------------------------------------------------------------

def test_window_count_formula():
    assert window_count(10, 10, 1) == 1
    assert window_count(10, 3, 1) == 8
    assert window_count(10, 4, 2) == 4
    assert window_count(10, 4, 3) == 3


def test_window_spec_validation():
    with pytest.raises(DriverIdError):
        WindowSpec(length=0)
    with pytest.raises(DriverIdError):
        WindowSpec(stride=0)
    with pytest.raises(DriverIdError):
        WindowSpec(statistics=("mean", "mode"))


def test_extract_windows_statistics_against_numpy():
    rng = np.random.default_rng(5)
    rows = rng.normal(size=(40, 2))
    ds = _dataset(["u", "v"], rows, ["A"] * 40)
    matrix, dropped = extract_windows(ds, ("u", "v"), WindowSpec(length=8, stride=4))
    assert dropped == 0
    assert len(matrix) == window_count(40, 8, 4)
    assert matrix.column_names == (
        "u_mean", "u_median", "u_std", "v_mean", "v_median", "v_std",
    )
    w0 = rows[0:8]
    np.testing.assert_allclose(matrix.features[0, 0], w0[:, 0].mean())
    np.testing.assert_allclose(matrix.features[0, 1], np.median(w0[:, 0]))
    np.testing.assert_allclose(matrix.features[0, 2], w0[:, 0].std())  # population
    w1 = rows[4:12]
    np.testing.assert_allclose(matrix.features[1, 3], w1[:, 1].mean())


def test_extract_windows_drops_label_changes():
    rows = [[float(i)] for i in range(8)]
    ds = _dataset(["x"], rows, ["A"] * 4 + ["B"] * 4)
    matrix, dropped = extract_windows(ds, ("x",), WindowSpec(length=4, stride=1))
    # starts 0..4; only 0 (all A) and 4 (all B) are label-pure
    assert len(matrix) == 2
    assert dropped == 3
    assert matrix.labels == ("A", "B")


def test_extract_windows_too_long():
    ds = _dataset(["x"], [[1.0], [2.0]], ["A", "A"])
    with pytest.raises(WindowLongerThanSeries):
        extract_windows(ds, ("x",), WindowSpec(length=3))


def test_extract_windows_subset_and_order():
    rows = np.arange(30.0).reshape(10, 3)
    ds = _dataset(["a", "b", "c"], rows, ["A"] * 10)
    matrix, _ = extract_windows(ds, ("c", "a"), WindowSpec(length=5, stride=5, statistics=("mean",)))
    assert matrix.column_names == ("c_mean", "a_mean")
    np.testing.assert_allclose(matrix.features[0], [rows[:5, 2].mean(), rows[:5, 0].mean()])


# -- FeatureMatrix / column_stats ---------------------------------------------

def test_feature_matrix_csv_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    m = FeatureMatrix.from_arrays(
        ("p_mean", "p_std"), rng.normal(size=(12, 2)), ["A", "B"] * 6
    )
    path = str(tmp_path / "m.csv")
    m.to_csv(path)
    back = FeatureMatrix.from_csv(path)
    assert back.column_names == m.column_names
    assert back.labels == m.labels
    np.testing.assert_array_equal(back.features, m.features)  # bit-exact


def test_column_stats_population_std():
    ds = _dataset(["x"], [[1.0], [2.0], [3.0], [4.0]], ["A"] * 4)
    mean, std = column_stats(ds, "x")
    assert mean == 2.5
    np.testing.assert_allclose(std, np.std([1, 2, 3, 4]))  # ddof=0


def test_column_stats_by_index_and_unknown_name():
    ds = _dataset(["x", "y"], [[1.0, 10.0], [3.0, 30.0]], ["A", "B"])
    assert column_stats(ds, 1)[0] == 20.0
    with pytest.raises(UnknownFeatureName):
        column_stats(ds, "z")
