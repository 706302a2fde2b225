import csv
import json

import numpy as np
import pytest

from solitonlab import cli


def run(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path)])


def only_run_dir(tmp_path, command):
    (d,) = (tmp_path / command).iterdir()
    return d


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_soliton_depth(tmp_path, capsys):
    assert run(tmp_path, "soliton", "--eq", "kdv", "--c", "4") == 0
    d = only_run_dir(tmp_path, "soliton")
    rows = read_csv(d / "profile.csv")
    assert min(float(r["u"]) for r in rows) == pytest.approx(-2.0, abs=1e-12)
    meta = json.loads((d / "meta.json").read_text())
    assert meta["residual"] <= meta["tolerance"]
    assert json.loads((d / "config.json").read_text())["c"] == 4.0


def test_glm_discrete_matches_oracle(tmp_path):
    assert run(tmp_path, "glm", "--kernel", "discrete", "--kappa", "1.0", "--b", "2.0", "--t", "0.3", "--x_min", "-10", "--x_max", "10") == 0
    d = only_run_dir(tmp_path, "glm")
    rows = read_csv(d / "glm.csv")
    x = np.array([float(r["x"]) for r in rows])
    u = np.array([float(r["u"]) for r in rows])
    from solitonlab.glm import one_soliton_oracle

    assert np.max(np.abs(u - one_soliton_oracle(1.0, 2.0, x, 0.3))) <= 1e-8


@pytest.mark.parametrize("model", ["kdv", "shg", "nls", "liouville"])
def test_bt_models(tmp_path, model):
    assert run(tmp_path, "bt", "--model", model) == 0
    assert (only_run_dir(tmp_path, "bt") / "bt.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "--model", "toda", "--steps", "200", "--dt", "1e-3"],
        ["evolve", "--model", "dnls", "--steps", "200", "--dt", "1e-3"],
        ["evolve", "--model", "kdv", "--steps", "50", "--dt", "1e-3"],
    ],
)
def test_evolve_runs(tmp_path, argv):
    assert run(tmp_path, *argv) == 0


def test_charges_command(tmp_path, capsys):
    assert run(tmp_path, "charges", "--scheme", "gardner", "--n_max", "3") == 0


@pytest.mark.parametrize("model, code", [("kdv", 0), ("nls", 0), ("liouville_flipped", 1)])
def test_laxcheck(tmp_path, capsys, model, code):
    assert run(tmp_path, "laxcheck", "--model", model) == code
    if model == "kdv":
        assert "u_t = 6*u*u[1] - u[3]" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["soliton", "--eq", "burgers"],
        ["soliton", "--c", "-1"],
        ["glm", "--kernel", "airy", "--t", "-1"],
        ["evolve", "--model", "toda", "--dt", "abc"],
        ["verify", "--suite", "nosuch"],
    ],
)
def test_config_errors(tmp_path, capsys, argv):
    assert run(tmp_path, *argv) == 2
    assert "config error" in capsys.readouterr().err


def test_unknown_flag_is_argparse_error(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(tmp_path, "soliton", "--nosuchkey", "1")
    assert e.value.code == 2


def test_unknown_key_in_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eq": "kdv", "speed": 4}))
    assert run(tmp_path, "soliton", "--config", str(cfg)) == 2


def test_flags_override_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eq": "kdv", "c": 1.0}))
    assert run(tmp_path, "soliton", "--config", str(cfg), "--c", "9", "--dry-run") == 0
    assert json.loads(capsys.readouterr().out)["c"] == 9.0


def test_dry_run_writes_nothing(tmp_path, capsys):
    assert run(tmp_path, "glm", "--dry-run") == 0
    assert not (tmp_path / "glm").exists()
    assert json.loads(capsys.readouterr().out)["kernel"] == "discrete"


def test_sweep(tmp_path, capsys):
    assert run(tmp_path, "soliton", "--eq", "kdv", "--sweep", "c=1,4") == 0
    d = only_run_dir(tmp_path, "soliton")
    assert sorted(p.name for p in d.iterdir()) == ["c=1", "c=4"]
    assert json.loads((d / "c=4" / "config.json").read_text())["c"] == 4.0


def test_bad_sweep(tmp_path, capsys):
    assert run(tmp_path, "soliton", "--sweep", "speed=1,2") == 2


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SOLITONLAB_THREADS", "zero")
    assert run(tmp_path, "soliton", "--dry-run") == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    # window centred on the singular branch's pole
    assert run(tmp_path, "bt", "--model", "kdv", "--A", "1", "--x_min", "-5", "--x_max", "5") == 1
    assert "PoleOnGrid" in capsys.readouterr().err


def test_csv_format_helpers():
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert cli.csv_text(["a", "b"], [(1, "x, y")]) == 'a,b\n1,"x, y"\n'


def test_verify_is_deterministic(tmp_path, capsys):
    outs = []
    for sub in ("a", "b"):
        assert cli.main(["verify", "--suite", "charges", "--out", str(tmp_path / sub)]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    reports = [(only_run_dir(tmp_path / s, "verify") / "report.csv").read_bytes() for s in ("a", "b")]
    assert reports[0] == reports[1]
