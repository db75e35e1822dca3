import csv
import json
import math

import pytest

from fraxim import closedform as cf
from fraxim.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, main


def run(argv, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(argv + ["--output", str(out)])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sg_sweep_in_band_rows(tmp_path):
    code, out = run(["sweep", "--family", "sg", "--omega-start", "0.1", "--omega-stop", "10",
                     "--omega-count", "50", "--spacing", "log"], tmp_path)
    assert code == EXIT_OK
    rows = read_csv(out)
    assert list(rows[0]) == ["omega", "re_z", "im_z", "in_band"]
    assert len(rows) == 50
    band = cf.sg_band(1, 1)
    for row in rows:
        w = float(row["omega"])
        assert row["in_band"] == ("1" if band.omega_lo < w < band.omega_hi else "0")
        assert (float(row["re_z"]) > 0) == (row["in_band"] == "1")


def test_hanoi_half_sweep_is_flat(tmp_path):
    code, out = run(["sweep", "--family", "hanoi", "--r", "0.5", "--omega-start", "0.01",
                     "--omega-stop", "100", "--omega-count", "40"], tmp_path)
    assert code == EXIT_OK
    rows = read_csv(out)
    assert {"re_zv", "im_zv", "re_zl", "im_zl"} <= set(rows[0])
    assert {row["re_zl"] for row in rows} == {"2"}
    assert all(row["in_band"] == "1" for row in rows)


def test_ladder_sweep_crossover(tmp_path):
    code, out = run(["sweep", "--family", "ladder", "--omega-start", "1", "--omega-stop", "3",
                     "--omega-count", "3", "--spacing", "linear"], tmp_path)
    assert code == EXIT_OK
    rows = read_csv(out)
    assert [r["omega"] for r in rows] == ["1", "2", "3"]
    assert float(rows[1]["abs_alpha"]) == 1
    assert float(rows[0]["abs_alpha"]) == pytest.approx(1, abs=1e-12)
    assert float(rows[2]["abs_alpha"]) < 1


def test_sweep_oracle_columns(tmp_path):
    code, out = run(["sweep", "--family", "sg", "--omega", "1", "--oracle"], tmp_path)
    assert code == EXIT_OK
    row = read_csv(out)[0]
    z_num = complex(float(row["re_z_num"]), float(row["im_z_num"]))
    assert abs(z_num - cf.sg_Z(1, 1, 1)) < 5e-3


def test_sweep_is_byte_identical(tmp_path, monkeypatch):
    argv = ["sweep", "--family", "hanoi", "--r", "0.4", "--omega-start", "0.1",
            "--omega-stop", "10", "--omega-count", "30"]
    _, a = run(argv, tmp_path, "a.csv")
    monkeypatch.setenv("FRAXIM_THREADS", "1")
    _, b = run(argv, tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_band_json(tmp_path):
    code, out = run(["band", "--family", "sg"], tmp_path, "band.json")
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["family"] == "sg" and doc["nonempty"] is True
    assert doc["omega_lo"] == pytest.approx(0.756026, abs=1e-6)
    assert doc["omega_hi"] == pytest.approx(5.952178, abs=1e-6)


def test_band_hanoi(tmp_path):
    _, out = run(["band", "--family", "hanoi", "--r", "0.5"], tmp_path, "a.json")
    doc = json.loads(out.read_text())
    assert doc["omega_lo"] == 0 and doc["omega_hi"] is None and doc["nonempty"]
    _, out = run(["band", "--family", "hanoi", "--r", "0.7"], tmp_path, "b.json")
    assert json.loads(out.read_text())["nonempty"] is False


def test_band_to_stdout(capsys):
    assert main(["band", "--family", "ladder"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["omega_lo"] == 0 and doc["omega_hi"] == pytest.approx(2)


def test_validate_passes_for_long_ladder(tmp_path):
    code, out = run(["validate", "--family", "ladder", "--depth", "4000", "--epsilon", "1e-3",
                     "--omega", "1"], tmp_path, "v.json")
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["max_deviation"] < 2e-2


def test_validate_fails_when_network_is_too_shallow(tmp_path):
    code, out = run(["validate", "--family", "sg", "--depth", "6", "--epsilon", "1e-3",
                     "--omega", "1"], tmp_path, "v.json")
    assert code == EXIT_VALIDATION
    assert json.loads(out.read_text())["passed"] is False


def test_validate_unregularised_sg(tmp_path):
    argv = ["validate", "--family", "sg", "--depth", "1", "--epsilon", "0", "--omega", "1"]
    code, out = run(argv, tmp_path, "a.json")
    assert code == EXIT_VALIDATION
    assert json.loads(out.read_text())["rows"][0]["non_convergent_oracle"]
    code, _ = run(argv + ["--expect-divergence"], tmp_path, "b.json")
    assert code == EXIT_OK


def test_validate_expect_divergence_fails_on_convergence(tmp_path):
    code, _ = run(["validate", "--family", "sg", "--depth", "1", "--epsilon", "1e-2",
                   "--omega", "1", "--expect-divergence"], tmp_path, "v.json")
    assert code == EXIT_VALIDATION


def test_validate_resonance_exit(tmp_path):
    code, _ = run(["validate", "--family", "hanoi", "--r", "0.6", "--omega", str(math.sqrt(2)),
                   "--depth", "1"], tmp_path, "v.json")
    assert code == EXIT_NUMERIC


@pytest.mark.parametrize("argv", [
    ["sweep", "--family", "hanoi"],
    ["sweep", "--family", "sg", "--omega-start", "3", "--omega-stop", "1", "--omega-count", "4"],
    ["sweep", "--family", "sg", "--epsilon", "-1"],
    ["sweep", "--family", "sg", "--termination", "bogus"],
    ["band", "--family", "koch"],
    ["sweep", "--family", "sg", "--omega-count", "0"],
    ["sweep", "--family", "sg", "--config", "/nonexistent/cfg.json"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == EXIT_CONFIG


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "hanoi", "r": 0.5, "L": 4.0, "C": 1.0,
                               "omega": {"start": 1, "stop": 2, "count": 2, "spacing": "linear"}}))
    code, out = run(["sweep", "--config", str(cfg)], tmp_path, "a.csv")
    assert code == EXIT_OK
    assert [r["re_zl"] for r in read_csv(out)] == ["4", "4"]
    code, out = run(["sweep", "--config", str(cfg), "--L", "9"], tmp_path, "b.csv")
    assert [r["re_zl"] for r in read_csv(out)] == ["6", "6"]


def test_converge_table(tmp_path):
    code, out = run(["converge", "--family", "sg", "--omega", "1", "--depths", "0,1,2,3",
                     "--epsilons", "1e-2,1e-3", "--termination", "inductor"], tmp_path)
    assert code == EXIT_OK
    rows = read_csv(out)
    assert list(rows[0]) == ["epsilon", "n", "re_z", "im_z", "abs_err_vs_closedform"]
    assert len(rows) == 8
    for row in rows:
        if row["n"] == "0":
            eps = float(row["epsilon"])
            assert complex(float(row["re_z"]), float(row["im_z"])) == pytest.approx(eps + 1j)


def test_converge_fixed_termination(tmp_path):
    code, out = run(["converge", "--family", "ladder", "--omega", "1", "--depths", "0",
                     "--termination", '{"fixed": [0.5, -0.25]}'], tmp_path)
    assert code == EXIT_OK
    row = read_csv(out)[0]
    assert (row["re_z"], row["im_z"]) == ("0.5", "-0.25")


def test_converge_unregularised_does_not_settle(tmp_path):
    code, out = run(["converge", "--family", "ladder", "--omega", "1",
                     "--depths", "100,200,400,800", "--epsilons", "0,1e-2"], tmp_path)
    assert code == EXIT_OK
    rows = read_csv(out)
    errs0 = [float(r["abs_err_vs_closedform"]) for r in rows if r["epsilon"] == "0"]
    errs1 = [float(r["abs_err_vs_closedform"]) for r in rows if r["epsilon"] == "0.01"]
    assert min(errs0) > 0.1
    assert errs1[-1] < 1e-2 < min(errs0)
