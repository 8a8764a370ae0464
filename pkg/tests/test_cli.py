import json

import numpy as np
import pytest

from moplms.cli import main
from moplms.io import read_csv


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("synth")
    assert run("synth", "--k", 50, "--d", 30, "--s", 5, "--n-train", 200, "--n-test", 100,
               "--seed", 7, "--out", d) == 0
    return d


def test_synth_outputs(synth_dir):
    assert read_csv(synth_dir / "train_X.csv").shape == (200, 30)
    assert read_csv(synth_dir / "test_Y.csv").shape == (100, 50)
    planted = json.loads((synth_dir / "planted.json").read_text())
    assert planted["landmarks"] == [0, 1, 2, 3, 4]


def test_pipeline(synth_dir, tmp_path, capsys):
    d = synth_dir
    assert run("fit", "--x", d / "train_X.csv", "--y", d / "train_Y.csv", "--lambda1", 5,
               "--out", tmp_path / "m.json") == 0
    out = capsys.readouterr().out
    assert "s = " in out and "objective = " in out and "iterations = " in out
    assert run("predict", "--model", tmp_path / "m.json", "--x", d / "test_X.csv",
               "--out", tmp_path / "p.csv") == 0
    assert run("eval", "--y", d / "test_Y.csv", "--y-hat", tmp_path / "p.csv",
               "--out", tmp_path / "e.csv") == 0
    assert "mse:" in capsys.readouterr().out
    assert (tmp_path / "e.csv").read_text().startswith("metric,value\nmse,")


@pytest.mark.parametrize("method", ["one_vs_all", "group_lasso", "low_rank"])
def test_baseline_pipeline(synth_dir, tmp_path, method):
    d = synth_dir
    assert run("fit", "--x", d / "train_X.csv", "--y", d / "train_Y.csv", "--method", method,
               "--lambda", 10, "--out", tmp_path / "b.json") == 0
    assert run("predict", "--model", tmp_path / "b.json", "--x", d / "test_X.csv",
               "--out", tmp_path / "p.csv") == 0
    assert read_csv(tmp_path / "p.csv").shape == (100, 50)


def test_classification_pipeline(tmp_path):
    d = tmp_path / "c"
    assert run("synth", "--k", 12, "--d", 6, "--s", 3, "--n-train", 80, "--n-test", 20,
               "--task", "classification", "--out", d) == 0
    assert run("fit", "--x", d / "train_X.csv", "--y", d / "train_Y.csv", "--task",
               "classification", "--lambda1", 20, "--out", tmp_path / "m.json") == 0
    assert run("predict", "--model", tmp_path / "m.json", "--x", d / "test_X.csv",
               "--out", tmp_path / "p.csv") == 0
    assert run("eval", "--task", "classification", "--y", d / "test_Y.csv",
               "--y-hat", tmp_path / "p.csv") == 0


def test_fit_over_regularized(synth_dir, tmp_path, capsys):
    d = synth_dir
    code = run("fit", "--x", d / "train_X.csv", "--y", d / "train_Y.csv", "--lambda1", 1e9,
               "--out", tmp_path / "m.json")
    err = capsys.readouterr().err
    assert code != 0 and "empty landmark support" in err
    assert len(err.strip().splitlines()) == 1
    assert not (tmp_path / "m.json").exists()


def test_eval_shape_mismatch(synth_dir, capsys):
    code = run("eval", "--y", synth_dir / "test_Y.csv", "--y-hat", synth_dir / "test_X.csv")
    assert code != 0
    assert "100x50" in capsys.readouterr().err


def test_missing_input(tmp_path, capsys):
    code = run("predict", "--model", tmp_path / "none.json", "--x", tmp_path / "x.csv",
               "--out", tmp_path / "p.csv")
    assert code != 0 and not (tmp_path / "p.csv").exists()


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as exc:
        run("fit", "--lamda1", 1)
    assert exc.value.code != 0


def test_bad_flag_value():
    with pytest.raises(SystemExit) as exc:
        run("synth", "--k", -1, "--d", 2, "--s", 1, "--n-train", 5, "--n-test", 5, "--out", "x")
    assert exc.value.code != 0


def test_cv_recover_bench(synth_dir, tmp_path, capsys):
    d = synth_dir
    assert run("cv", "--x", d / "train_X.csv", "--y", d / "train_Y.csv",
               "--fractions", "0.01,0.1", "--stage2-fractions", "0.01", "--out",
               tmp_path / "cv.csv") == 0
    lines = (tmp_path / "cv.csv").read_text().splitlines()
    assert lines[0] == "lambda1,lambda2,lambda_stage2,mean_loss,fold0,fold1,fold2"
    assert len(lines) == 3
    assert run("recover", "--k", 20, "--s", 3, "--n-grid", "20,40", "--trials", 2,
               "--out", tmp_path / "r.csv") == 0
    assert (tmp_path / "r.csv").read_text().startswith("n,lambda1,recovery_rate\n20,")
    assert run("bench", "--k", 15, "--d", 6, "--s", 3, "--n-grid", 30, "--seeds", 1,
               "--n-test", 20, "--out", tmp_path / "b.csv") == 0
    table = (tmp_path / "b.csv").read_text()
    assert "mlcs,,,,not implemented (out of scope)" in table
    assert "ml-cca,,,,not implemented (out of scope)" in table
    assert "low_rank,30,0,mse," in table
    assert "not implemented (out of scope)" in capsys.readouterr().out


def test_inputs_not_mutated(synth_dir, tmp_path):
    before = (synth_dir / "train_Y.csv").read_bytes()
    run("fit", "--x", synth_dir / "train_X.csv", "--y", synth_dir / "train_Y.csv",
        "--lambda1", 5, "--out", tmp_path / "m.json")
    assert (synth_dir / "train_Y.csv").read_bytes() == before
