"""End-to-end runs: ingest → select → window → cross-validate → report.

A :class:`RunConfig` captures every knob of a run and is embedded verbatim
in the emitted report, so re-running a report's config reproduces it
bit-for-bit (reports carry no timestamps, and all randomness is seeded).

Two presets reproduce the headline benchmark setups: ``table6`` (binary
driver A vs D) and ``table7`` (all ten drivers).
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace

from . import evaluate, ingest, models
from .errors import DriverIdError
from .features import WindowSpec, extract_windows, select_features

#: Environment variable consulted for the benchmark dataset location.
DATASET_ENV_VAR = "OCSLAB_DRIVING_CSV"
#: Fallback dataset path relative to the working directory.
DATASET_DEFAULT_PATH = os.path.join("data", "driving_dataset.csv")


@dataclass(frozen=True)
class RunConfig:
    """Complete, serializable description of one pipeline run."""

    input: str
    label_column: str = ingest.DEFAULT_LABEL_COLUMN
    exclude_columns: tuple[str, ...] = ingest.DEFAULT_EXCLUDE_COLUMNS
    keep_labels: tuple[str, ...] | None = None
    feature_mode: str = "fixed-list"
    feature_count: int = 15
    feature_list: tuple[str, ...] | None = None
    irrelevance_threshold: float = 0.01
    correlation_threshold: float = 0.95
    window_length: int = 60
    window_stride: int = 1
    statistics: tuple[str, ...] = ("mean", "median", "std")
    normalize: str = "train"
    kinds: tuple[str, ...] = ("zeror", "knn", "reptree")
    model_configs: dict = field(default_factory=dict)
    folds: int = 10
    stratified: bool = True
    split_mode: str = "random-window"
    seed: int = 1
    out_dir: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for key, value in d.items():
            if isinstance(value, tuple):
                d[key] = list(value)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        kwargs = dict(d)
        for key in ("exclude_columns", "keep_labels", "feature_list", "statistics", "kinds"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(kwargs[key])
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise DriverIdError(f"unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)


#: Benchmark presets — model line-ups mirror the experiments they rerun:
#: the binary table6 setup includes logistic regression, the ten-driver
#: table7 setup does not.
PRESETS: dict[str, dict] = {
    "table6": {
        "keep_labels": ("A", "D"),
        "feature_mode": "fixed-list",
        "kinds": ("zeror", "naive_bayes", "logreg", "knn", "svm", "reptree", "adaboost"),
        "seed": 1,
    },
    "table7": {
        "keep_labels": None,
        "feature_mode": "fixed-list",
        "kinds": ("zeror", "naive_bayes", "knn", "svm", "reptree", "adaboost"),
        "seed": 1,
    },
}


def preset_config(name: str, input_path: str, **overrides) -> RunConfig:
    """RunConfig for a named preset, with optional field overrides."""
    if name not in PRESETS:
        raise DriverIdError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return replace(RunConfig(input=input_path, **PRESETS[name]), **overrides)


def default_dataset_path() -> str:
    """Benchmark dataset location: $OCSLAB_DRIVING_CSV or data/driving_dataset.csv."""
    return os.environ.get(DATASET_ENV_VAR) or DATASET_DEFAULT_PATH


def prepare_matrix(config: RunConfig):
    """Run the data half of the pipeline.

    Returns ``(dataset, selection_report, matrix, n_dropped_windows)``.
    """
    ds = ingest.load_dataset(
        config.input,
        label_column=config.label_column,
        exclude_columns=config.exclude_columns,
    )
    if config.keep_labels is not None:
        ds = ingest.filter_labels(ds, config.keep_labels)
    selection = select_features(
        ds,
        config.feature_mode,
        k=config.feature_count,
        irrelevance_threshold=config.irrelevance_threshold,
        correlation_threshold=config.correlation_threshold,
        feature_list=config.feature_list,
    )
    spec = WindowSpec(
        length=config.window_length,
        stride=config.window_stride,
        statistics=config.statistics,
    )
    matrix, n_dropped = extract_windows(ds, selection.kept, spec)
    return ds, selection, matrix, n_dropped


def run_pipeline(config: RunConfig) -> dict:
    """Execute a full run and return the report bundle.

    The bundle nests the verbatim config, dataset and window summaries, the
    feature-selection report, one metrics report per model kind, and the
    baseline comparison (when a ZeroR run is present).  With
    ``config.out_dir`` set, the bundle is also written to
    ``<out_dir>/report.json``.
    """
    ds, selection, matrix, n_dropped = prepare_matrix(config)
    plan = evaluate.CvPlan(
        folds=config.folds,
        stratified=config.stratified,
        seed=config.seed,
        split_mode=config.split_mode,
    )
    results = {}
    for kind in config.kinds:
        if kind not in models.KINDS:
            raise DriverIdError(f"unknown model kind {kind!r}")
        report = evaluate.cross_validate(
            kind,
            config.model_configs.get(kind),
            matrix,
            plan,
            normalize=config.normalize,
        )
        results[kind] = report

    comparison = None
    if evaluate.BASELINE_KIND in results:
        comparison = evaluate.baseline_compare(list(results.values()))

    bundle = {
        "config": config.to_dict(),
        "dataset": {
            "n_records": len(ds),
            "n_channels": ds.n_channels,
            "label_alphabet": list(ds.label_alphabet),
            "class_distribution": ingest.class_distribution(ds),
        },
        "selection": selection.to_dict(),
        "windows": {
            "count": len(matrix),
            "dropped_mixed_label": n_dropped,
            "n_columns": matrix.n_features,
            "class_distribution": ingest.class_distribution(matrix),
            "spec": {
                "length": config.window_length,
                "stride": config.window_stride,
                "statistics": list(config.statistics),
            },
        },
        "results": {kind: rep.to_dict() for kind, rep in results.items()},
        "comparison": comparison,
    }
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        write_report(bundle, os.path.join(config.out_dir, "report.json"))
    return bundle


def write_report(bundle: dict, path: str) -> None:
    """Serialize a report deterministically (sorted keys, repr floats)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, sort_keys=True, indent=2)
        fh.write("\n")
