"""Command-line interface: subcommands, exit codes, config precedence."""

import json

import pytest

from driverid.cli import main

from conftest import write_trip_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def prepared(tmp_path, trip_csv, capsys):
    out = str(tmp_path / "windows.csv")
    code = main(["prepare", "--input", trip_csv, "--features", "rank:3",
                 "--window", "30", "--stride", "10", "--out", out])
    capsys.readouterr()
    assert code == 0
    return out


# -- decode ---------------------------------------------------------------

def test_decode_text(capsys):
    code, out, err = run(capsys, "decode", "--service", "01", "--pid", "0C",
                         "--bytes", "1AF8")
    assert code == 0
    assert "1726" in out and "rpm" in out


def test_decode_json(capsys):
    code, out, _ = run(capsys, "decode", "--service", "01", "--pid", "0D",
                       "--bytes", "4B", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 75.0
    assert payload["unit"] == "km/h"


def test_decode_unknown_pid_is_data_error(capsys):
    code, _, err = run(capsys, "decode", "--service", "01", "--pid", "EE",
                       "--bytes", "00")
    assert code == 2
    assert "UnknownPid" in err


def test_decode_bad_hex_is_usage_error(capsys):
    code, _, err = run(capsys, "decode", "--service", "01", "--pid", "0C",
                       "--bytes", "xyz")
    assert code == 1


def test_missing_required_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decode", "--service", "01"])
    assert exc.value.code == 1


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["transmogrify"])
    assert exc.value.code == 1


# -- ingest ---------------------------------------------------------------

def test_ingest_summary(capsys, trip_csv):
    code, out, _ = run(capsys, "ingest", "--input", trip_csv)
    assert code == 0
    assert "records: 360" in out


def test_ingest_json_with_keep(capsys, trip_csv):
    code, out, _ = run(capsys, "ingest", "--input", trip_csv, "--keep", "A,C",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["n_records"] == 240
    assert payload["label_alphabet"] == ["A", "C"]


def test_ingest_missing_file_is_data_error(capsys, tmp_path):
    code, _, err = run(capsys, "ingest", "--input", str(tmp_path / "nope.csv"))
    assert code == 2


# -- prepare ---------------------------------------------------------------

def test_prepare_writes_matrix_and_sidecar(tmp_path, trip_csv, capsys):
    out = str(tmp_path / "w.csv")
    code, stdout, _ = run(capsys, "prepare", "--input", trip_csv,
                          "--features", "rank:2", "--window", "20",
                          "--stride", "20", "--out", out, "--format", "json")
    assert code == 0
    sidecar = json.load(open(out + ".json"))
    assert sidecar["windows"]["count"] == 18  # 120 rows per driver / 20
    assert sidecar["windows"]["dropped_mixed_label"] == 0
    assert len(sidecar["selection"]["kept"]) == 2
    with open(out) as fh:
        header = fh.readline().strip().split(",")
    assert header[-1] == "Class"
    assert any(name.endswith("_mean") for name in header)


def test_prepare_requires_out(capsys, trip_csv):
    code, _, err = run(capsys, "prepare", "--input", trip_csv)
    assert code == 1
    assert "--out" in err


def test_prepare_rejects_bad_feature_spec(capsys, trip_csv, tmp_path):
    code, _, err = run(capsys, "prepare", "--input", trip_csv,
                       "--features", "pca:3", "--out", str(tmp_path / "w.csv"))
    assert code == 1


# -- train -------------------------------------------------------------------

def test_train_writes_model(tmp_path, prepared, capsys):
    model_path = str(tmp_path / "m.json")
    code, out, _ = run(capsys, "train", "--input", prepared, "--kind", "knn",
                       "--k", "3", "--out", model_path, "--format", "json")
    assert code == 0
    saved = json.load(open(model_path))
    assert saved["kind"] == "knn"
    assert saved["config"]["k"] == 3


def test_train_unknown_kind(capsys, prepared, tmp_path):
    code, _, err = run(capsys, "train", "--input", prepared, "--kind", "nope",
                       "--out", str(tmp_path / "m.json"))
    assert code == 1


# -- evaluate / compare ---------------------------------------------------------

def test_evaluate_single_kind_report(tmp_path, prepared, capsys):
    report_path = str(tmp_path / "rep.json")
    code, out, _ = run(capsys, "evaluate", "--input", prepared, "--kind", "knn",
                       "--folds", "5", "--report", report_path, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["knn"]["accuracy"] > 90.0
    on_disk = json.load(open(report_path))
    assert on_disk["results"]["knn"]["metadata"]["plan"]["folds"] == 5


def test_evaluate_text_ranking(prepared, capsys):
    code, out, _ = run(capsys, "evaluate", "--input", prepared, "--kind", "zeror",
                       "--folds", "3")
    assert code == 0
    assert "zeror" in out


def test_evaluate_rejects_bad_split(prepared, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["evaluate", "--input", prepared, "--kind", "knn", "--split", "holdout"])
    assert exc.value.code == 1


def test_compare_ranks_reports_written_by_evaluate(tmp_path, prepared, capsys):
    # compare consumes evaluate's own --report files directly
    paths = []
    for kind in ("zeror", "knn"):
        rpt = str(tmp_path / f"{kind}.json")
        code = main(["evaluate", "--input", prepared, "--kind", kind,
                     "--folds", "3", "--report", rpt])
        capsys.readouterr()
        assert code == 0
        paths.append(rpt)
    code, out, _ = run(capsys, "compare", *paths, "--format", "json")
    assert code == 0
    table = json.loads(out)
    assert table["ranking"][0]["kind"] == "knn"
    assert table["ranking"][0]["better_than_baseline"] is True


def test_compare_accepts_bare_per_model_reports(tmp_path, prepared, capsys):
    rpt = str(tmp_path / "both.json")
    code = main(["evaluate", "--input", prepared, "--kind", "all",
                 "--folds", "3", "--report", rpt])
    capsys.readouterr()
    assert code == 0
    results = json.load(open(rpt))["results"]
    flats = []
    for kind in ("zeror", "reptree"):
        flat = str(tmp_path / f"{kind}_flat.json")
        json.dump(results[kind], open(flat, "w"))
        flats.append(flat)
    code, out, _ = run(capsys, "compare", *flats, "--format", "json")
    assert code == 0
    assert json.loads(out)["baseline"]["kind"] == "zeror"


def test_compare_rejects_non_report_file(tmp_path, capsys):
    bad = str(tmp_path / "bad.json")
    json.dump({"nope": 1}, open(bad, "w"))
    code, _, err = run(capsys, "compare", bad)
    assert code == 2
    assert "not an evaluation report" in err


def test_compare_without_baseline_is_data_error(tmp_path, prepared, capsys):
    rpt = str(tmp_path / "knn.json")
    code = main(["evaluate", "--input", prepared, "--kind", "knn", "--folds", "3",
                 "--report", rpt])
    capsys.readouterr()
    flat = str(tmp_path / "flat.json")
    json.dump(json.load(open(rpt))["results"]["knn"], open(flat, "w"))
    code, _, err = run(capsys, "compare", flat)
    assert code == 2
    assert "NoBaselineDesignated" in err


# -- repro -----------------------------------------------------------------------

def test_repro_missing_dataset_names_the_path(capsys, tmp_path):
    absent = str(tmp_path / "absent.csv")
    code, _, err = run(capsys, "repro", "table6", "--input", absent)
    assert code == 2
    assert "absent.csv" in err


def test_repro_rejects_unknown_preset(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["repro", "table9"])
    assert exc.value.code == 1


# -- config file ------------------------------------------------------------------

def test_config_file_supplies_defaults(tmp_path, trip_csv, capsys):
    cfg = str(tmp_path / "cfg.json")
    json.dump({"input": trip_csv, "keep": "A,B"}, open(cfg, "w"))
    code, out, _ = run(capsys, "ingest", "--config", cfg, "--format", "json")
    assert code == 0
    assert json.loads(out)["n_records"] == 240


def test_flags_override_config_file(tmp_path, trip_csv, capsys):
    cfg = str(tmp_path / "cfg.json")
    json.dump({"input": trip_csv, "keep": "A,B"}, open(cfg, "w"))
    code, out, _ = run(capsys, "ingest", "--config", cfg, "--keep", "A",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["n_records"] == 120


def test_dashed_config_keys_are_normalized(tmp_path, trip_csv, capsys):
    cfg = str(tmp_path / "cfg.json")
    json.dump({"input": trip_csv, "label-column": "Class"}, open(cfg, "w"))
    code, out, _ = run(capsys, "ingest", "--config", cfg, "--format", "json")
    assert code == 0
    assert json.loads(out)["n_records"] == 360


def test_cli_report_bytes_are_deterministic(tmp_path, prepared, capsys):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for path in (a, b):
        code = main(["evaluate", "--input", prepared, "--kind", "reptree",
                     "--folds", "5", "--seed", "3", "--report", path])
        capsys.readouterr()
        assert code == 0
    assert open(a, "rb").read() == open(b, "rb").read()
