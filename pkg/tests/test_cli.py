import json

import pytest

from plandscape.cli import load_config, main
from plandscape.experiments import ConfigError

SMALL = {"N": 6, "M": 8, "A": 5, "B_T": 10, "mu_k": 3, "n_sims": 4}


@pytest.fixture
def config(tmp_path):
    def write(**overrides):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({**SMALL, **overrides}))
        return path

    return write


def _read(path):
    return path.read_text().splitlines()


def test_generate(config, tmp_path):
    out = tmp_path / "gen"
    assert main(["generate", "--config", str(config()), "--seed", "3", "--out", str(out)]) == 0
    assert _read(out / "edges.csv")[0] == "policy_id,target_id,coefficient"
    assert len(_read(out / "matrix.csv")) == 9
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["base_seed"] == 3
    assert manifest["outputs"] == ["edges.csv", "matrix.csv"]


def test_baseline_config_generates(tmp_path):
    path = tmp_path / "base.json"
    path.write_text(json.dumps({"N": 100, "M": 30, "A": 5, "B_T": 300, "mu_k": 5, "beta_k": 2,
                                "mu_c": 1 / 3, "beta_c": 2, "mu_w": 8, "beta_w": 15, "eta": 3}))
    assert main(["generate", "--config", str(path), "--out", str(tmp_path / "o")]) == 0


def test_invalid_mu_c_exits_2(config, tmp_path, capsys):
    code = main(["generate", "--config", str(config(mu_c=1.5)), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "mu_c" in capsys.readouterr().err


def test_invalid_mu_c_message_names_range(config, tmp_path, capsys):
    main(["generate", "--config", str(config(mu_c=1.5)), "--out", str(tmp_path / "o")])
    err = capsys.readouterr().err
    assert "mu_c" in err and "(-1, 1)" in err


def test_climb_zero_budget(config, tmp_path):
    out = tmp_path / "c"
    assert main(["climb", "--config", str(config(B_T=0)), "--out", str(out)]) == 0
    rows = _read(out / "trajectory.csv")
    assert len(rows) == 2 and rows[1].startswith("0,0,0,0,0,0,0,0,")


def test_climb_output_is_increasing(config, tmp_path):
    out = tmp_path / "c"
    assert main(["climb", "--config", str(config(B_T=15)), "--seed", "9", "--out", str(out)]) == 0
    f = [float(r.split(",")[-1]) for r in _read(out / "trajectory.csv")[1:]]
    assert all(b > a for a, b in zip(f, f[1:]))
    assert json.loads((out / "manifest.json").read_text())["final_is_local_optimum"]


def test_climb_nonconvergence_exit_3(config, tmp_path):
    assert main(["climb", "--config", str(config(B_T=24, max_steps=1)), "--seed", "2",
                 "--out", str(tmp_path / "c")]) == 3


def test_sweep(config, tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "--config", str(config()), "--budgets", "5,10,24", "--workers", "1",
                 "--out", str(out)]) == 0
    assert len(_read(out / "summary.csv")) == 4
    assert len(_read(out / "results.csv")) == 13


def test_sweep_rejects_unsorted(config, tmp_path):
    assert main(["sweep", "--config", str(config()), "--budgets", "10,5", "--out", str(tmp_path / "s")]) == 2


def test_one_point_sweep_matches_ensemble(config, tmp_path):
    from plandscape.experiments import run_ensemble
    out = tmp_path / "s"
    main(["sweep", "--config", str(config()), "--budgets", "10", "--workers", "1", "--out", str(out)])
    cfg, _ = load_config(config())
    ens = run_ensemble(cfg, workers=1)
    assert _read(out / "summary.csv")[1] == f"10.0,{ens.q25!r},{ens.median!r},{ens.q75!r}"


def test_grid(config, tmp_path):
    out = tmp_path / "g"
    assert main(["grid", "--config", str(config()), "--axis1", "mu_c=0.1,0.3", "--axis2", "M=8,12",
                 "--fix-rho", "--workers", "1", "--out", str(out)]) == 0
    assert len(_read(out / "summary.csv")) == 5
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["sweep"]["fix_rho"] is True


def test_grid_unknown_axis_exit_2(config, tmp_path):
    assert main(["grid", "--config", str(config()), "--axis1", "zeta=1,2", "--axis2", "mu_c=0.1",
                 "--out", str(tmp_path / "g")]) == 2


def test_landscape(config, tmp_path):
    out = tmp_path / "l"
    assert main(["landscape", "--config", str(config(N=3, M=30, B_T=9.5, mu_k=5)), "--out", str(out)]) == 0
    rows = [r.split(",") for r in _read(out / "landscape.csv")[1:]]
    assert len(rows) == 125
    assert sum(r[5] == "1" for r in rows) == 115
    assert any(r[6] == "1" for r in rows)


def test_landscape_size_guard(config, tmp_path, capsys):
    assert main(["landscape", "--config", str(config(N=9)), "--out", str(tmp_path / "l")]) == 2
    assert "10^6" in capsys.readouterr().err


def test_seed_env_fallback(config, tmp_path, monkeypatch):
    monkeypatch.setenv("PLANDSCAPE_SEED", "77")
    main(["generate", "--config", str(config()), "--out", str(tmp_path / "a")])
    assert json.loads((tmp_path / "a" / "manifest.json").read_text())["config"]["base_seed"] == 77
    main(["generate", "--config", str(config()), "--seed", "5", "--out", str(tmp_path / "b")])
    assert json.loads((tmp_path / "b" / "manifest.json").read_text())["config"]["base_seed"] == 5


def test_per_policy_budget_key(config, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"N": 10, "B": 2.5}))
    cfg, _ = load_config(path)
    assert cfg.B_T == 25
    path.write_text(json.dumps({"N": 10, "B": 2.5, "B_T": 25}))
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text(json.dumps({"N": 10, "B": 7}))
    with pytest.raises(ConfigError, match="B"):
        load_config(path)


def test_unknown_key_and_bad_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"N": 10, "colour": "red"}))
    with pytest.raises(ConfigError, match="colour"):
        load_config(path)
    path.write_text("{not json")
    assert main(["generate", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


def test_missing_config_is_io_error(tmp_path):
    assert main(["generate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 1


def test_bad_arguments_exit_2(capsys):
    assert main(["frobnicate"]) == 2
