import json
import math
import subprocess
import sys

import pytest

from ctxharvest import cli
from ctxharvest import ctxscen as cs
from ctxharvest import lpcf
from ctxharvest import measures as ms
from ctxharvest import sweep as sw
from ctxharvest.errors import ConfigError

SMALL = sw.SweepConfig(omega_grid=sw.OmegaGrid(0.0, 2.0, 3), temporal_widths=(1 / 30, 1 / 3),
                       alpha_invsqrt=(1.0,))


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# configs and presets

def test_presets():
    f1 = sw.preset("figure1")
    assert f1.lambda_ == 1e-4 and f1.tbar == 0.0
    assert f1.alpha_invsqrt == (1.0, 0.1)
    assert f1.temporal_widths == (1 / 30, 1 / 10, 1 / 3, 1.0)
    assert f1.omega_grid == sw.OmegaGrid(0.0, 4.0, 81)
    f2 = sw.preset("figure2")
    assert f2.setup == "qubit_qutrit" and f2.separations == (0.5, 3.0)
    with pytest.raises(ConfigError):
        sw.preset("figure3")


@pytest.mark.parametrize("kw", [
    dict(setup="two_qutrits"),
    dict(angle_set=4),
    dict(temporal_widths=()),
    dict(temporal_widths=(0.0,)),
    dict(alpha_invsqrt=(-1.0,)),
    dict(setup="qubit_qutrit"),
    dict(lambda_=math.nan),
    dict(threshold=-1.0),
    dict(workers=0),
])
def test_invalid_configs(kw):
    with pytest.raises(ConfigError):
        sw.SweepConfig(**kw)


@pytest.mark.parametrize("text", ["0:4", "0:4:1", "4:0:5", "a:b:c", "-1:2:3"])
def test_bad_omega_grids(text):
    with pytest.raises(ConfigError):
        sw.OmegaGrid.parse(text)


def test_config_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(sw.preset("figure2").to_dict()))
    assert sw.load_config(path) == sw.preset("figure2")
    doc = {"omega_grid": "0:1:2", "lambda": 1e-3}
    cfg = sw.SweepConfig.from_dict(doc)
    assert cfg.lambda_ == 1e-3 and cfg.omega_grid == sw.OmegaGrid(0.0, 1.0, 2)
    with pytest.raises(ConfigError, match="unknown"):
        sw.SweepConfig.from_dict({"gap": 1})
    path.write_text("[1, 2")
    with pytest.raises(ConfigError):
        sw.load_config(path)


# ---------------------------------------------------------------------------
# sweeps and CSV

def test_sweep_order_and_consistency():
    rows = sw.run_sweep(SMALL)
    assert [(r.omega, r.T) for r in rows] == [(o, t) for o in (0.0, 1.0, 2.0) for t in (1 / 30, 1 / 3)]
    for r in rows:
        assert not r.error
        assert r.genuine == (r.ratio <= SMALL.threshold and r.delta_cf_over_lambda2 > 0)
        assert r.ratio == pytest.approx(r.T, rel=1e-10)
        assert r.L is None and r.negativity_over_lambda2 is None


def test_parallel_sweep_matches_serial():
    serial = sw.rows_to_csv(sw.run_sweep(SMALL))
    parallel = sw.rows_to_csv(sw.run_sweep(sw.with_overrides(SMALL, workers=2)))
    assert serial == parallel


def test_set2_zero_gap_and_far_negativity():
    rows = sw.run_sweep(sw.with_overrides(sw.preset("figure1"), angle_set=2,
                                          omega_grid=sw.OmegaGrid(0.0, 1.0, 2)))
    for r in rows:
        if r.omega == 0.0:
            assert abs(r.delta_cf_over_lambda2) <= 1e-9
    far = sw.SweepConfig(setup="qubit_qutrit", separations=(50.0,),
                         omega_grid=sw.OmegaGrid(0.0, 4.0, 9))
    assert all(r.negativity_over_lambda2 <= 1e-12 for r in sw.run_sweep(far))


def test_csv_format(tmp_path):
    path = tmp_path / "empty.csv"
    sw.emit_csv([], path)
    assert path.read_bytes() == (",".join(sw.COLUMNS) + "\n").encode()
    rows = sw.run_sweep(sw.with_overrides(SMALL, temporal_widths=(1.0,),
                                          omega_grid=sw.OmegaGrid(0.5, 1.0, 2)))
    sw.emit_csv(rows[:1], path)
    data = path.read_bytes()
    assert b"\r" not in data and data.count(b"\n") == 2
    back = sw.read_csv(path)
    assert back == rows[:1]
    # 17 significant digits survive the round trip exactly
    assert back[0].abs_hadamard == rows[0].abs_hadamard


def test_emit_csv_reports_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        sw.emit_csv([], tmp_path / "missing" / "x.csv")


def test_figure1_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    sw.run_sweep(sw.with_overrides(sw.preset("figure1"), output_path=str(a)))
    sw.run_sweep(sw.with_overrides(sw.preset("figure1"), output_path=str(b)))
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# command line

def test_cli_sweep_to_stdout_and_file(tmp_path, capsys):
    code, out, _ = run(["sweep", "--omega", "0:1:2", "--T", "0.5", "--alpha-invsqrt", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split(",") == list(sw.COLUMNS) and len(lines) == 3
    target = tmp_path / "out.csv"
    code, out, _ = run(["sweep", "--preset", "figure2", "--omega", "0:1:2", "--T", "1",
                        "--alpha-invsqrt", "1", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    rows = sw.read_csv(target)
    assert [r.L for r in rows] == [0.5, 3.0] * 2


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"omega_grid": "0:1:2", "temporal_widths": [1.0],
                               "alpha_invsqrt": [1.0], "angle_set": 3}))
    code, out, _ = run(["sweep", "--config", str(cfg), "--T", "0.25"], capsys)
    assert code == 0
    rows = out.splitlines()[1:]
    assert len(rows) == 2 and all(r.split(",")[1] == "0.25" for r in rows)


@pytest.mark.parametrize("argv", [
    ["sweep", "--preset", "figure9"],
    ["sweep", "--omega", "1:0:3"],
    ["sweep", "--T", "x"],
    ["sweep", "--T", "0"],
    ["sweep", "--lambda", "0", "--omega", "0:1:2"],
    ["sweep", "--config", "/nonexistent.json"],
    ["scenario", "check", "7"],
    ["cf", "/nonexistent.json"],
    ["prop", "Wightman", "--params", "gap=1"],
    ["prop", "Wightman", "--signs", "+*"],
    ["frobnicate"],
    [],
])
def test_cli_config_errors_exit_1(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_cli_config_and_preset_conflict(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text("{}")
    code, _, err = run(["sweep", "--config", str(cfg), "--preset", "figure1"], capsys)
    assert code == 1 and "mutually exclusive" in err


@pytest.mark.parametrize("set_id", [1, 2, 3])
def test_cli_scenario_check(set_id, capsys):
    code, out, _ = run(["scenario", "check", str(set_id)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["valid"] and rep["failures"] == []
    assert rep["gamma"] == pytest.approx(2.0, abs=1e-6)


def test_cli_cf(tmp_path, capsys):
    path = tmp_path / "odd.json"
    cs.dump_model(cs.odd_cycle_model(), path)
    code, out, _ = run(["cf", str(path)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["contextual_fraction"] == pytest.approx(1.0, abs=1e-12)
    assert doc["status"] == lpcf.Status.OPTIMAL.value and doc["model_valid"]
    bad = tmp_path / "bad.json"
    m = cs.kcbs_table1()
    rows = m.rows.copy()
    rows[1] = [0, 0.5, 0.5, 0]
    cs.dump_model(cs.EmpiricalModel(5, m.contexts, rows), bad)
    code, out, _ = run(["cf", str(bad)], capsys)
    assert code == 1 and not json.loads(out)["model_valid"]


def test_cli_prop(capsys):
    code, out, _ = run(["prop", "Wightman", "--params", "omega=1,T=0.5,alpha=4",
                        "--signs=-+", "--same-system"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["relative_difference"] <= 1e-6
    code, out, _ = run(["prop", "Hadamard", "--params", "omega=0.5",
                        "--params2", "omega=0.5,x=2"], capsys)
    assert code == 0 and json.loads(out)["relative_difference"] <= 1e-6


def test_numerical_failure_exits_2(monkeypatch, capsys):
    def boom(*a, **k):
        raise FloatingPointError("overflow")
    monkeypatch.setattr(ms, "negativity_leading", boom)
    code, _, err = run(["sweep", "--preset", "figure2", "--omega", "0:1:2", "--T", "1",
                        "--alpha-invsqrt", "1"], capsys)
    assert code == 2 and "rows failed" in err


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "ctxharvest.cli", "scenario", "check", "1"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and json.loads(res.stdout)["valid"]
