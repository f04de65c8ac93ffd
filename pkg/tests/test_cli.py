import csv
import json
import math

import numpy as np
import pytest

from quditqsv.cli import SweepConfig, main, parse_noise, parse_state_spec
from quditqsv.errors import QuditError


def run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sweep_verify_qutrit_landmarks(tmp_path):
    code, out = run(["sweep-verify", "--d", "3", "--points", "3", "--tau-min", "1e-6", "--tau-max", str(math.pi)], tmp_path)
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["tau", "alpha", "theta3", "beta_basis", "beta_spectral", "n", "strategy_kind"]
    assert abs(int(rows[0]["n"]) - 460) <= 4.6
    assert abs(int(rows[-1]["n"]) - 695) <= 6.95


def test_sweep_verify_separable_endpoints(tmp_path):
    code, out = run(["sweep-verify", "--d", "3", "--points", "2", "--theta3", "0"], tmp_path)
    rows = read_csv(out)
    assert [r["strategy_kind"] for r in rows] == ["separable", "separable"]
    assert [r["n"] for r in rows] == ["230", "230"]
    code, out = run(["sweep-verify", "--d", "3", "--points", "2", "--theta3", "0", "--no-dispatch"], tmp_path)
    assert [r["strategy_kind"] for r in read_csv(out)] == ["two_qutrit", "two_qutrit"]


def test_sweep_verify_qubit_quarter_turn(tmp_path):
    code, out = run(["sweep-verify", "--d", "2", "--points", "3", "--tau-min", "0", "--tau-max", str(math.pi / 2)], tmp_path)
    assert code == 0
    rows = read_csv(out)
    assert float(rows[1]["alpha"]) == pytest.approx(0.2, abs=1e-12)
    assert rows[0]["strategy_kind"] == "separable"


def test_sweep_verify_deterministic(tmp_path):
    args = ["sweep-verify", "--d", "3", "--points", "4", "--tau-min", "0.2", "--tau-max", "2.5"]
    _, a = run(args, tmp_path, "a.csv")
    _, b = run(args, tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_sweep_verify_schmidt_file(tmp_path):
    src = tmp_path / "schmidt.csv"
    c = 1 / math.sqrt(4)
    src.write_text(f"tau,c0,c1,c2,c3\n0,{c},{c},{c},{c}\n1,1,0,0,0\n")
    code, out = run(["sweep-verify", "--schmidt-file", str(src)], tmp_path)
    assert code == 0
    rows = read_csv(out)
    assert rows[0]["strategy_kind"] == "qudit_general" and float(rows[0]["beta_spectral"]) < 1
    assert rows[1]["strategy_kind"] == "separable"


def test_sweep_charfunc_qutrit(tmp_path):
    code, out = run(["sweep-charfunc", "--d", "3", "--points", "25"], tmp_path)
    assert code == 0
    rows = read_csv(out)
    for r in rows:
        assert float(r["chi_0_0"]) == pytest.approx(1 / 3, abs=1e-12)
        assert float(r["chi_2_2"]) == pytest.approx(-float(r["chi_1_1"]), abs=1e-11)


def test_sweep_charfunc_qubit_quarter_turn(tmp_path):
    code, out = run(["sweep-charfunc", "--d", "2", "--points", "3", "--tau-max", str(math.pi / 2)], tmp_path)
    row = read_csv(out)[1]
    assert float(row["chi_1_1"]) == pytest.approx(0.5, abs=1e-12)
    assert float(row["chi_2_2"]) == pytest.approx(-0.5, abs=1e-12)


def test_sweep_charfunc_weyl_json(tmp_path):
    code, out = run(["sweep-charfunc", "--d", "3", "--points", "5", "--basis", "weyl", "--format", "json"], tmp_path, "w.json")
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 5
    assert "chi_0_0_0_0_re" in rows[0] and "chi_0_0_0_0_im" in rows[0]


def test_sweep_negativity(tmp_path):
    code, out = run(["sweep-negativity", "--d", "3", "--points", "201"], tmp_path)
    neg = np.array([float(r["negativity"]) for r in read_csv(out)])
    assert neg[0] == 0
    assert abs(neg[100] - 0.5) < 1e-9
    assert neg[100] < neg[99] and neg[100] < neg[101]


def test_dfe_plan_qubit(tmp_path):
    code, out = run(["dfe-plan", "--d", "2", "--tau", str(math.pi / 4), "--epsilon", "0.1", "--delta", "0.2"], tmp_path)
    rows = {r["label"]: r for r in read_csv(out)}
    assert float(rows["0_0"]["prob"]) == pytest.approx(0.25)


def test_dfe_plan_qutrit_rows_sum_to_one(tmp_path):
    code, out = run(["dfe-plan", "--d", "3", "--points", "9", "--epsilon", "0.1", "--delta", "0.2"], tmp_path)
    totals = {}
    for r in read_csv(out):
        totals[r["tau"]] = totals.get(r["tau"], 0) + float(r["prob"])
    assert len(totals) == 9
    assert all(abs(v - 1) < 1e-9 for v in totals.values())


def test_dfe_run_noise_none_bound(tmp_path):
    eps, delta = 0.1, 0.2
    code, out = run(
        ["dfe-run", "--d", "3", "--tau", "1.0", "--epsilon", str(eps), "--delta", str(delta), "--repeats", "100", "--seed", "4"],
        tmp_path,
    )
    assert code == 0
    ys = np.array([float(r["y_tilde"]) for r in read_csv(out)])
    assert len(ys) == 100
    assert np.mean(np.abs(ys - 1) <= 2 * eps) >= 1 - 2 * delta


@pytest.mark.parametrize("noise,fid", [("depol:0.3", 0.7 + 0.3 / 9), ("orth:0.2", 0.8)])
def test_dfe_run_noise_models(tmp_path, noise, fid):
    code, out = run(["dfe-run", "--d", "3", "--tau", "1.0", "--epsilon", "0.2", "--delta", "0.3", "--noise", noise, "--format", "json"], tmp_path, "r.json")
    assert code == 0
    rows = json.loads(out.read_text())
    assert rows[0]["true_fidelity"] == pytest.approx(fid, abs=1e-9)


def test_dfe_run_rejects_weyl(tmp_path):
    code, _ = run(["dfe-run", "--d", "3", "--tau", "1.0", "--basis", "weyl"], tmp_path)
    assert code == 2


def test_fidelity_command(capsys):
    assert main(["fidelity", "qutrit:0.4", "qutrit:0.4"]) == 0
    assert capsys.readouterr().out.strip() == "1.000000000000"
    main(["fidelity", "qutrit:0", f"qutrit:{math.pi}"])
    assert capsys.readouterr().out.strip() == "0.500000000000"
    main(["fidelity", "qutrit:0.4", "maxent:3", "--basis", "sud"])
    sud = capsys.readouterr().out
    main(["fidelity", "qutrit:0.4", "maxent:3", "--basis", "weyl"])
    assert capsys.readouterr().out == sud


def test_fidelity_parse_errors(capsys):
    assert main(["fidelity", "qutrit:abc", "qutrit:0"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["fidelity", "qubit:0.1", "qutrit:0"]) == 2


def test_parse_state_spec():
    s = parse_state_spec("schmidt:0.6,0.8@4")
    assert s.d == 4 and s.vector[5] == pytest.approx(0.8)
    with pytest.raises(QuditError):
        parse_state_spec("ghz:3")


def test_parse_noise():
    assert parse_noise("none") == ("none", 0.0)
    assert parse_noise("depol:0.25") == ("depol", 0.25)
    for bad in ("depol", "orth:2", "flip:0.1", "depol:x"):
        with pytest.raises(QuditError):
            parse_noise(bad)


@pytest.mark.parametrize(
    "args",
    [
        ["sweep-verify", "--points", "1"],
        ["sweep-verify", "--epsilon", "0"],
        ["sweep-verify", "--d", "4"],
        ["sweep-verify", "--theta3", "sideways"],
    ],
)
def test_config_validation_exit_code(tmp_path, args):
    code, out = run(args, tmp_path)
    assert code == 2
    assert not out.exists()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 3, "points": 3, "tau-max": 1.0, "format": "json"}))
    code, out = run(["sweep-negativity", "--config", str(cfg), "--points", "4"], tmp_path, "n.json")
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 4 and rows[-1]["tau"] == 1.0


def test_config_file_rejects_nested_and_unknown(tmp_path):
    for doc in ({"d": {"x": 1}}, {"colour": "red"}):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(doc))
        assert main(["sweep-negativity", "--config", str(cfg)]) == 2


def test_check_command(capsys):
    assert main(["check"]) == 0
    err = capsys.readouterr().err
    assert err.count("PASS") == 7 and "FAIL" not in err


def test_check_flag_runs_before_command(tmp_path, capsys):
    code, out = run(["sweep-negativity", "--d", "2", "--points", "2", "--check"], tmp_path)
    assert code == 0 and out.exists()
    assert "PASS" in capsys.readouterr().err


def test_csv_fixed_precision(tmp_path):
    _, out = run(["sweep-negativity", "--d", "2", "--points", "3", "--tau-max", "1"], tmp_path)
    row = read_csv(out)[1]
    assert row["tau"] == "0.5"
    assert len(row["negativity"].replace("0.", "", 1).lstrip("0")) <= 12


def test_taus_inclusive():
    t = SweepConfig(points=5, tau_min=0, tau_max=1).taus()
    assert t[0] == 0 and t[-1] == 1 and len(t) == 5
