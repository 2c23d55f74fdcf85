import json

import numpy as np
import pytest

from svmcoreset import load_coreset, load_csv, load_preprocessed_csv, make_synthetic, save_csv
from svmcoreset.cli import main


@pytest.fixture()
def raw_csv(tmp_path):
    ds = make_synthetic(120, 4, seed=3)
    return str(save_csv(ds, tmp_path / "raw.csv"))


def run(*argv):
    return main(list(argv))


class TestPreprocess:
    def test_writes_output_and_sidecar(self, raw_csv, tmp_path, capsys):
        out = tmp_path / "pp.csv"
        assert run("preprocess", raw_csv, "--out", str(out)) == 0
        assert "preprocessed" in capsys.readouterr().out
        back = load_preprocessed_csv(out)
        assert back.preprocessed
        assert np.linalg.norm(back.X, axis=1).max() <= 1.0 + 1e-9

    def test_add_bias_extends_dimension(self, raw_csv, tmp_path):
        out = tmp_path / "pp.csv"
        run("preprocess", raw_csv, "--add-bias", "--out", str(out))
        assert load_csv(out).d == 5

    def test_missing_input_is_data_error(self, tmp_path):
        code = run("preprocess", str(tmp_path / "none.csv"),
                   "--out", str(tmp_path / "o.csv"))
        assert code == 2


class TestProfile:
    def test_dump(self, raw_csv, tmp_path):
        out = tmp_path / "prof.csv"
        assert run("profile", raw_csv, "--out", str(out)) == 0
        header = out.read_text().splitlines()[0]
        assert header == "index,norm,gamma,prob"


class TestCoresetCommand:
    def test_sensitivity_with_explicit_size(self, raw_csv, tmp_path):
        out = tmp_path / "core.csv"
        assert run("coreset", raw_csv, "--size", "20", "--seed", "3",
                   "--out", str(out)) == 0
        cs = load_coreset(out)
        assert cs.m == 20
        assert cs.method == "sensitivity"

    def test_uniform_requires_size(self, raw_csv, tmp_path):
        code = run("coreset", raw_csv, "--method", "uniform",
                   "--out", str(tmp_path / "c.csv"))
        assert code == 2

    def test_uniform(self, raw_csv, tmp_path):
        out = tmp_path / "u.csv"
        assert run("coreset", raw_csv, "--method", "uniform", "--size", "16",
                   "--out", str(out)) == 0
        assert load_coreset(out).method == "uniform"


class TestTrainEval:
    def test_train_writes_model(self, raw_csv, tmp_path):
        model = tmp_path / "model.json"
        assert run("train", raw_csv, "--reg-c", "1.0", "--max-iters", "200",
                   "--out", str(model)) == 0
        payload = json.loads(model.read_text())
        assert len(payload["w"]) == 4
        assert payload["final_objective"] >= 0
        assert payload["config"]["max_iters"] == 200

    def test_eval_reports_objective_and_error(self, raw_csv, tmp_path, capsys):
        model = tmp_path / "model.json"
        run("train", raw_csv, "--max-iters", "150", "--out", str(model))
        capsys.readouterr()
        out_json = tmp_path / "eval.json"
        assert run("eval", raw_csv, "--model", str(model), "--ref-model",
                   str(model), "--out", str(out_json)) == 0
        result = json.loads(out_json.read_text())
        assert result["rel_error"] == 0.0
        assert result["objective"] > 0

    def test_train_on_coreset_file(self, raw_csv, tmp_path):
        core = tmp_path / "core.csv"
        run("coreset", raw_csv, "--size", "25", "--out", str(core))
        model = tmp_path / "m.json"
        assert run("train", str(core), "--coreset", "--max-iters", "150",
                   "--out", str(model)) == 0
        assert json.loads(model.read_text())["iterations_run"] >= 1


class TestBenchCommand:
    def test_flags_run(self, raw_csv, tmp_path):
        out = tmp_path / "report.csv"
        assert run("bench", "--data", raw_csv, "--sizes", "10,20",
                   "--trials", "2", "--out", str(out)) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 4  # header + 2 methods x 2 sizes

    def test_plan_file_with_flag_override(self, raw_csv, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({"data": raw_csv, "sizes": [10, 20],
                                    "trials": 5, "methods": ["uniform"]}))
        out = tmp_path / "report.json"
        assert run("bench", "--plan", str(plan), "--trials", "1",
                   "--format", "json", "--out", str(out)) == 0
        rows = json.loads(out.read_text())
        assert all(r["trials"] == 1 for r in rows)


class TestStreamCommand:
    def test_stream(self, raw_csv, tmp_path):
        out = tmp_path / "stream.csv"
        assert run("stream", raw_csv, "--block-size", "40", "--size", "15",
                   "--seed", "2", "--out", str(out)) == 0
        assert load_coreset(out).size <= 15


class TestExitCodes:
    def test_usage_error_is_one(self):
        with pytest.raises(SystemExit) as exc:
            run("coreset")  # missing required arguments
        assert exc.value.code == 1

    def test_unknown_command_is_one(self):
        with pytest.raises(SystemExit) as exc:
            run("frobnicate")
        assert exc.value.code == 1

    def test_data_error_is_two(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("label,f1\n7,1.0\n")
        assert run("profile", str(bad), "--out", str(tmp_path / "p.csv")) == 2
