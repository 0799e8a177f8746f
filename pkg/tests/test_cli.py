import csv
import io
import json

import pytest

from casimir.cli import (COLUMNS, format_csv, main, parse_config, parse_frequency, parse_length, parse_temperature,
                         run_sweep)
from casimir.constants import E_CHARGE, GOLD_OMEGA_P, HBAR
from casimir.errors import ConfigError
from casimir.lifshitz import PlanePlaneProblem, evaluate
from casimir.media import MirrorModel


def _run(argv):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_unit_parsing():
    assert parse_length("136 nm") == pytest.approx(136e-9)
    assert parse_length("1um") == pytest.approx(1e-6)
    assert parse_length(2e-3) == 2e-3
    assert parse_temperature("300K") == 300.0
    assert parse_frequency("9 eV") == pytest.approx(9 * E_CHARGE / HBAR)
    assert parse_frequency("1e15 rad/s") == 1e15
    with pytest.raises(ConfigError, match="L"):
        parse_length("3 furlong")


@pytest.mark.parametrize("config,key", [
    ({"command": "plane-plane", "L": -1}, "L"),
    ({"command": "plane-plane", "mirrors": "gold"}, "mirrors.kind"),
    ({"command": "plane-plane", "sweep": {"variable": "L", "start": 1e-6, "stop": 1e-5, "points": 0}},
     "sweep.points"),
    ({"command": "plane-plane", "sweep": {"variable": "Q"}}, "sweep.variable"),
    ({"command": "plane-plane", "format": "xml"}, "format"),
    ({"command": "fly"}, "command"),
    ({"command": "eta", "T": 300}, "T"),
    ({"command": "plane-plane", "mirror1": {"kind": "tabulated", "table": "/nonexistent.csv"}}, "mirror1.table"),
    ({"command": "plane-plane", "policy": {"rel_tol": 5}}, "policy.rel_tol"),
])
def test_config_errors_name_the_key(config, key):
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(config))
    assert info.value.key == key


def test_config_error_exit_code(tmp_path):
    assert _run(["plane-plane", "--L=-1um"])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(["plane-plane", "--config", str(bad)])[0] == 2


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "plane-plane", "L": "2um", "T": 300, "mirrors": "drude"}))
    code, text = _run(["plane-plane", "--config", str(path), "--L", "1um"])
    row = _rows(text)[0]
    assert code == 0 and float(row["L_m"]) == 1e-6 and row["model1"] == "drude" and float(row["T_K"]) == 300


def test_single_point_equals_engine_call():
    cfg = parse_config({"command": "plane-plane", "L": "1um", "T": 300, "mirrors": "plasma"})
    row = run_sweep(cfg)[0]
    direct = evaluate(PlanePlaneProblem.symmetric(MirrorModel.plasma(), 1e-6, 1.0, 300.0), cfg.policy())
    assert row["free_energy_J"] == direct.free_energy.value
    assert row["pressure_Pa"] == direct.pressure.value


def test_plane_plane_columns_and_determinism():
    argv = ["plane-plane", "--model", "drude", "--T", "300", "--sweep", "L:100nm:10um:4:log"]
    code, first = _run(argv)
    assert code == 0
    assert first.splitlines()[0] == ",".join(COLUMNS["plane-plane"])
    assert _run(argv)[1] == first
    assert _run(argv + ["--threads", "3"])[1] == first


def test_eta_sweep_increases_towards_one():
    code, text = _run(["eta", "--model", "plasma", "--sweep", "L:10nm:10um:12:log"])
    eta = [float(r["eta_F"]) for r in _rows(text)]
    assert code == 0 and all(a < b for a, b in zip(eta, eta[1:])) and 0.98 < eta[-1] < 1


def test_thermal_ratio_sweep_reaches_two():
    code, text = _run(["thermal-ratio", "--T", "300", "--sweep", "L:1um:100um:3:log"])
    rows = _rows(text)
    assert code == 0 and float(rows[-1]["ratio"]) == pytest.approx(2.0, abs=0.01)


def test_sidecar_reproduces_run(tmp_path):
    out = tmp_path / "pp.csv"
    code, _ = _run(["plane-plane", "--model", "plasma", "--omega-p", "9eV", "--sweep", "L:50nm:1um:3:log",
                    "--out", str(out)])
    assert code == 0
    meta = json.loads((tmp_path / "pp.csv.meta.json").read_text())
    assert meta["constants"]["hbar_J_s"] == HBAR
    assert {"numpy", "scipy", "casimir", "python"} <= set(meta["versions"])
    assert len(meta["points"]) == 3 and all(p["status"] == "ok" for p in meta["points"])
    again = tmp_path / "again.csv"
    assert _run(["plane-plane", "--config", str(tmp_path / "pp.csv.meta.json"), "--out", str(again)])[0] == 0
    assert again.read_bytes() == out.read_bytes()


def test_lambda_p_flag_sets_plasma_frequency():
    cfg = parse_config({"command": "eta", "mirrors": {"kind": "plasma", "lambda_p": "136nm"}})
    assert cfg.mirror1.omega_p == pytest.approx(GOLD_OMEGA_P, rel=1e-12)


def test_failed_points_are_recorded_in_row():
    code, text = _run(["cavity-1d", "--T", "300", "--sweep", "L:1um:2um:2:linear"])
    rows = _rows(text)
    assert code == 3 and len(rows) == 2
    assert all(r["status"].startswith("error: InvalidAmplitudeError") for r in rows)
    code, text = _run(["cavity-1d", "--r1", "0.9", "--r2", "0.9", "--L", "1um"])
    assert code == 0 and _rows(text)[0]["status"] == "ok"


def test_pfa_and_mie_commands():
    code, text = _run(["plane-sphere-pfa", "--R", "150um", "--L", "200nm", "--model", "drude"])
    row = _rows(text)[0]
    assert code == 0 and float(row["force_N"]) < 0 and row["pfa_advisory"] == "0"
    code, text = _run(["plane-sphere-mie", "--R", "1um", "--x", "0.5", "--ell-max", "8"])
    row = _rows(text)[0]
    assert code == 0 and text.splitlines()[0] == ",".join(COLUMNS["plane-sphere-mie"])
    assert int(row["ell_max"]) == 8 and 0.7 < float(row["rho_G"]) < 1 and row["valid_flag"] == "0"


def test_json_output():
    code, text = _run(["plane-plane", "--L", "1um", "--format", "json"])
    data = json.loads(text)
    assert code == 0 and data[0]["status"] == "ok" and data[0]["eta_F"] == pytest.approx(1.0, rel=1e-9)


def test_csv_uses_twelve_significant_digits():
    text = format_csv([{"a": 1 / 3, "b": "x"}], ["a", "b"])
    assert text == "a,b\n0.333333333333,x\n"
