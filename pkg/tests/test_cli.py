import json

import pytest

from rwa_rg import cli
from rwa_rg.output import load_records


def test_rabi_to_file(tmp_path):
    out = tmp_path / "r.csv"
    assert cli.main(["rabi", "--epsilon", "0.1", "--t-max", "2", "--samples", "11",
                     "--methods", "rwa,two_scale(1),numeric", "--output", str(out)]) == 0
    recs = load_records(out)
    assert len(recs) == 33
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["big_delta"] == 10.0 and meta["methods"] == ["rwa", "two_scale(1)", "numeric"]


def test_order_flag(tmp_path):
    out = tmp_path / "r.json"
    cli.main(["rabi", "--samples", "3", "--methods", "single_scale", "--order", "1",
              "--format", "json", "--output", str(out)])
    assert json.loads(out.read_text())["metadata"]["methods"] == ["single_scale(1)"]


def test_epsilon_and_big_delta_exclusive(capsys):
    with pytest.raises(SystemExit):
        cli.main(["jc", "--epsilon", "0.1", "--big-delta", "10"])


def test_config_file_and_override(tmp_path):
    conf = tmp_path / "c.ini"
    conf.write_text("big-delta = 20\nsamples = 4\nt_max = 1.5\nmethods = rwa\n")
    out = tmp_path / "o.json"
    cli.main(["rabi", "--config", str(conf), "--samples", "6", "--format", "json", "--output", str(out)])
    meta = json.loads(out.read_text())["metadata"]
    assert meta["big_delta"] == 20.0
    assert meta["grid"]["n_samples"] == 6 and meta["grid"]["t_end"] == 1.5
    cli.main(["rabi", "--config", str(conf), "--epsilon", "0.25", "--format", "json", "--output", str(out)])
    assert json.loads(out.read_text())["metadata"]["big_delta"] == 4.0


def test_config_rejects_unknown_key(tmp_path, capsys):
    conf = tmp_path / "c.ini"
    conf.write_text("colour = blue\n")
    assert cli.main(["rabi", "--config", str(conf)]) == 2
    assert "colour" in capsys.readouterr().err


def test_env_sets_default_directory(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    assert cli.main(["figure", "2", "--samples", "20"]) == 0
    assert (tmp_path / "fig2.csv").exists()
    explicit = tmp_path / "sub.csv"
    cli.main(["figure", "2", "--samples", "20", "--output", str(explicit)])
    assert explicit.exists()


def test_figure_big_delta_override(tmp_path):
    out = tmp_path / "f.json"
    cli.main(["figure", "5", "--samples", "20", "--t-max", "2", "--format", "json", "--output", str(out)])
    assert json.loads(out.read_text())["metadata"]["big_delta"] == 10.0
    cli.main(["figure", "5", "--big-delta", "50", "--samples", "20", "--t-max", "2",
              "--format", "json", "--output", str(out)])
    assert json.loads(out.read_text())["metadata"]["big_delta"] == 50.0


def test_riccati_and_sweep(tmp_path):
    out = tmp_path / "u.csv"
    assert cli.main(["riccati", "--samples", "30", "--output", str(out)]) == 0
    methods = {r["method"] for r in load_records(out)}
    assert methods == {"riccati_renormalized", "riccati_numeric", "numeric"}
    sw = tmp_path / "s.csv"
    assert cli.main(["sweep", "--methods", "renormalized", "--t-max", "5",
                     "--epsilons", "0.1,0.05", "--jobs", "2", "--output", str(sw)]) == 0
    rows = load_records(sw)
    assert 4 <= rows[0]["ratio_to_next"] <= 16


def test_stdout(capsys):
    assert cli.main(["rabi", "--samples", "3", "--methods", "rwa", "--output", "-"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("tau,method,re_a") and out.count("\n") == 4


def test_errors_exit_codes(tmp_path, capsys):
    assert cli.main(["rabi", "--delta", "0.3", "--methods", "rwa,numeric"]) == 2
    assert cli.main(["rabi", "--samples", "3", "--output", str(tmp_path / "no" / "x.csv")]) == 3
    assert cli.main(["sweep", "--epsilons", "0.1", "--output", "-"]) == 2
