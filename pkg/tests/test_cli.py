from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from multireg import cli, experiment
from multireg.experiment import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    InstanceReport,
    emit_report,
    reports_from_json,
    run_experiment,
)
from multireg.points import random_points
from multireg.ring import SpaceShape


def small_cfg(**kw):
    base = dict(mode="verify-theorem", shapes=[(1, 1)], s_range=(2, 4), seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_reduced_mode_matches_formula():
    reports, summary = run_experiment(small_cfg())
    assert len(reports) == 3 and summary.violations == 0
    assert all(r.reg == r.reg_formula for r in reports)
    assert summary.exit_code == 0


def test_bound_mode_p2_triple():
    cfg = ExperimentConfig(mode="verify-bound", shapes=[(2,)], mult_profiles=[(2, 2, 2)], seed=3)
    (rep,), summary = run_experiment(cfg)
    assert rep.reg <= 4 and rep.reg_bound == 4
    assert summary.violations == 0


def test_ri_mode_single_point():
    cfg = ExperimentConfig(mode="ri", shapes=[(1, 1)], mult_profiles=[(3,)], seed=3)
    (rep,), _ = run_experiment(cfg)
    assert rep.ri == 1 and rep.flags()["ri_value"]


def test_determinism_and_threads(monkeypatch):
    a = emit_report(run_experiment(small_cfg())[0], "csv", None)
    b = emit_report(run_experiment(small_cfg())[0], "csv", None)
    assert a == b
    monkeypatch.setenv("MULTIREG_THREADS", "2")
    c = emit_report(run_experiment(small_cfg())[0], "csv", None)
    assert a == c


def test_cell_seeds_differ():
    assert len({experiment.cell_seed(1, i) for i in range(50)}) == 50
    assert experiment.cell_seed(1, 0) != experiment.cell_seed(2, 0)


def test_emit_report_formats(tmp_path):
    rep = InstanceReport(shape=(1, 1), s=2, mults=(1, 1), seed=5, reg=2, reg_formula=2, ri=1, gin_reg=2)
    text = emit_report([rep], "csv", tmp_path / "r.csv")
    lines = text.splitlines()
    assert len(lines) == 2 and lines[0] == ",".join(CSV_HEADER)
    assert (tmp_path / "r.csv").read_text() == text
    assert lines[1] == "1x1,2,1-1,5,2,2,1,,,2,1"
    js = emit_report([rep], "json", None)
    assert reports_from_json(js) == [rep]
    with pytest.raises(ValueError):
        emit_report([], "csv", None)
    with pytest.raises(OSError, match="r.csv"):
        emit_report([rep], "csv", tmp_path / "missing" / "r.csv")


def test_flags_are_functions_of_fields():
    rep = InstanceReport(shape=(2,), s=2, mults=(2, 1), seed=0, reg=3, ri=2, ri_bound=2, reg_bound=3, gin_reg=3)
    assert rep.passed
    worse = InstanceReport(**{**rep.to_dict(), "shape": (2,), "mults": (2, 1), "reg": 4, "gin_reg": 4})
    assert worse.flags()["reg_bound"] is False and worse.passed is False
    skipped = InstanceReport(shape=(2,), s=2, mults=(1, 1), seed=0, status="skipped", reason="x")
    assert skipped.passed is None and skipped.pass_field() == "skip"


@pytest.mark.parametrize(
    "cfg",
    [
        small_cfg(mode="bogus"),
        small_cfg(s_range=(4, 2)),
        small_cfg(shapes=[(5, 4)]),
        small_cfg(p=32001),
        ExperimentConfig(mode="verify-bound", shapes=[(2,)], mult_profiles=[(5, 4)]),
        ExperimentConfig(mode="verify-bound", shapes=[(2,)], mult_profiles=None),
    ],
)
def test_config_errors(cfg):
    with pytest.raises(ConfigError):
        run_experiment(cfg)


def test_cli_verify_theorem(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = cli.main(["verify-theorem", "--dims", "1,1", "--s", "2..3", "--seed", "42", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["pass"] for r in rows] == ["1", "1"]
    assert "violations=0" in capsys.readouterr().err


def test_cli_verify_bound_json(tmp_path):
    out = tmp_path / "b.json"
    code = cli.main(["verify-bound", "--dims", "2", "--mults", "2,2,2", "--out", str(out)])
    assert code == 0
    (rep,) = reports_from_json(out.read_text())
    assert rep.reg_bound == 4


def test_cli_config_error_exit_code(capsys):
    assert cli.main(["verify-theorem", "--dims", "5,5", "--s", "2"]) == 2
    assert cli.main(["verify-theorem", "--dims", "1,1", "--p", "100"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-theorem", "--dims", "a,b"])
    assert exc.value.code == 2


def test_cli_violation_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(experiment, "reduced_regularity_formula", lambda shape, s: 99)
    assert cli.main(["verify-theorem", "--dims", "1,1", "--s", "2"]) == 1
    assert "violation in cell 0" in capsys.readouterr().err


@pytest.fixture
def point_file(tmp_path):
    X = random_points(SpaceShape((1, 1)), 3, np.random.default_rng(8), seed=8).with_mults([2, 1, 1])
    path = tmp_path / "z.json"
    X.to_json(path)
    return path


def test_cli_regularity(point_file, tmp_path):
    out = tmp_path / "reg.json"
    assert cli.main(["regularity", "--points", str(point_file), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["reg"] == doc["gin_reg"]
    assert doc["ri"] <= doc["reg"] <= doc["ri"] + 2
    assert doc["reg"] <= doc["bounds"]["reg_bound"]


def test_cli_hilbert(point_file, capsys):
    assert cli.main(["hilbert", "--points", str(point_file), "--box", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    values = {tuple(e["t"]): e["value"] for e in doc["multigraded"]}
    assert values[(0, 0)] == 1 and values[(3, 3)] == 5  # 3 + 1 + 1 at deep multidegrees


def test_cli_missing_point_file(tmp_path):
    assert cli.main(["regularity", "--points", str(tmp_path / "nope.json")]) == 2
