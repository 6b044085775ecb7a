import csv
import io
import json
import math
import subprocess
import sys

import pytest

from ifmsim import __version__
from ifmsim.cli import main, sweep_alpha_rows

LN2 = math.log(2.0)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_scalars(text):
    """{label: value} for the scalar/probability rows of a `run` CSV."""
    rows = list(csv.DictReader(io.StringIO(text)))
    return {r["label"]: float(r["re"]) for r in rows if r["section"] in ("scalar", "probability")}


def assert_file_format(text):
    assert "\r" not in text
    assert text.endswith("\n")
    for line in text.splitlines():
        assert line == line.rstrip()


class TestRun:
    def test_ev(self, capsys):
        code, out, _ = run_cli(capsys, "run", "--alpha", "0", "--beta", "1", "--gamma", "0")
        assert code == 0
        vals = run_scalars(out)
        assert vals["p_dd"] == pytest.approx(0.25, abs=1e-12)
        assert vals["entropy_numeric"] == pytest.approx(LN2, abs=1e-9)
        assert vals["entropy_closed"] == pytest.approx(LN2, abs=1e-12)
        assert_file_format(out)

    def test_calibration(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--alpha", "0", "--beta", "1", "--gamma", "1")
        vals = run_scalars(out)
        assert vals["p_dd"] == 0
        assert vals["entropy_numeric"] == pytest.approx(0, abs=1e-12)
        assert "correlation_postselected" not in vals

    def test_equal_superposition(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--alpha", "0.70710678", "--beta", "0.70710678", "--gamma", "0")
        vals = run_scalars(out)
        assert vals["correlation"] == pytest.approx(0, abs=1e-12)
        assert vals["correlation_postselected"] == pytest.approx(0, abs=1e-12)
        assert vals["entropy_numeric"] == pytest.approx(1.0397208, abs=1e-7)

    def test_lists_every_stage_amplitude(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--alpha", "0.6", "--beta", "0.8", "--gamma", "0.5")
        rows = list(csv.DictReader(io.StringIO(out)))
        for stage in ("psi0", "psi1", "psi2", "psi3", "psi_final"):
            assert sum(r["section"] == stage for r in rows) == 12

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "run", "--alpha", "0", "--beta", "1", "--gamma", "0", "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert data["meta"]["tool_version"] == __version__
        assert data["probabilities"]["p_abs"] == pytest.approx(0.5)
        assert len(data["stages"]["psi_final"]) == 12
        assert data["conditional_states"]["DD"][1]["re"] == pytest.approx(1)

    @pytest.mark.parametrize(
        "argv,fragment",
        [
            (["--alpha", "0.5", "--beta", "0.5", "--gamma", "0"], "normalization"),
            (["--alpha", "-0.6", "--beta", "0.8", "--gamma", "0"], "nonnegative"),
            (["--alpha", "0", "--beta", "1", "--gamma", "1.2"], "gamma"),
        ],
    )
    def test_invalid_input(self, capsys, argv, fragment):
        code, out, err = run_cli(capsys, "run", *argv)
        assert code == 2
        assert fragment in err
        assert out == ""

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--alpha", "zero"])
        assert exc.value.code == 2


class TestSweeps:
    def test_alpha_csv(self, capsys, tmp_path):
        path = tmp_path / "fig3.csv"
        code, _, _ = run_cli(capsys, "sweep-alpha", "--out", str(path))
        text = path.read_text(encoding="utf-8")
        assert code == 0
        assert_file_format(text)
        lines = text.splitlines()
        assert lines[0] == "alpha,entropy_closed,entropy_numeric,correlation"
        assert len(lines) == 102
        first = dict(zip(lines[0].split(","), map(float, lines[1].split(","))))
        assert first["entropy_closed"] == pytest.approx(LN2, abs=1e-12)
        assert first["correlation"] == 1.0

    def test_alpha_row_nearest_equal_weights(self, capsys):
        # 1/sqrt(2) is never on a uniform grid; the closest of 1001 points is 0.707
        _, out, _ = run_cli(capsys, "sweep-alpha", "--points", "1001")
        rows = list(csv.DictReader(io.StringIO(out)))
        nearest = min(rows, key=lambda r: abs(float(r["alpha"]) - 1 / math.sqrt(2)))
        assert float(nearest["alpha"]) == 0.707
        assert float(nearest["correlation"]) < 1e-6

    def test_gamma_csv(self, capsys):
        _, out, _ = run_cli(capsys, "sweep-gamma", "--points", "11")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == ["gamma", "entropy_closed", "entropy_numeric", "p_dd"]
        assert float(rows[0]["entropy_closed"]) == pytest.approx(LN2, abs=1e-12)
        assert float(rows[0]["p_dd"]) == pytest.approx(0.25, abs=1e-12)
        assert float(rows[-1]["entropy_closed"]) == 0.0
        assert float(rows[-1]["p_dd"]) == 0.0
        ent = [float(r["entropy_closed"]) for r in rows]
        assert all(b < a for a, b in zip(ent, ent[1:]))

    def test_json(self, capsys):
        _, out, _ = run_cli(capsys, "sweep-gamma", "--points", "5", "--format", "json")
        data = json.loads(out)
        assert data["meta"]["points"] == 5
        assert data["columns"] == ["gamma", "entropy_closed", "entropy_numeric", "p_dd"]
        assert len(data["rows"]) == 5
        assert set(data["rows"][0]) == set(data["columns"])

    def test_values_round_trip_exactly(self, capsys):
        _, out, _ = run_cli(capsys, "sweep-alpha", "--points", "7")
        parsed = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(out))]
        assert parsed == sweep_alpha_rows(7)

    def test_too_few_points(self, capsys):
        code, _, err = run_cli(capsys, "sweep-alpha", "--points", "1")
        assert code == 2
        assert "points" in err

    def test_unwritable_path(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "sweep-gamma", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 3
        assert "cannot write" in err


class TestSample:
    def test_ev_passes(self, capsys):
        code, out, _ = run_cli(capsys, "sample", "--alpha", "0", "--beta", "1", "--gamma", "0", "--n", "100000")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [r["outcome"] for r in rows] == ["LD", "DD", "ABS"]
        assert sum(int(r["count"]) for r in rows) == 100000
        assert_file_format(out)

    def test_calibration_all_ld(self, capsys):
        code, out, _ = run_cli(capsys, "sample", "--alpha", "0", "--beta", "1", "--gamma", "1", "--n", "500",
                               "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert data["counts"] == {"LD": 500, "DD": 0, "ABS": 0}
        assert data["passed"] is True
        assert data["meta"]["seed"] == 42

    def test_single_trial(self, capsys):
        code, out, _ = run_cli(capsys, "sample", "--alpha", "0", "--beta", "1", "--gamma", "0", "--n", "1",
                               "--format", "json")
        data = json.loads(out)
        assert data["n"] == 1
        assert all(math.isfinite(z) for z in data["z_scores"].values())
        assert code in (0, 1)

    def test_bad_n(self, capsys):
        code, _, _ = run_cli(capsys, "sample", "--alpha", "0", "--beta", "1", "--gamma", "0", "--n", "0")
        assert code == 2

    def test_seed_reproducible(self, capsys):
        argv = ["sample", "--alpha", "0.6", "--beta", "0.8", "--gamma", "0.3", "--n", "2000", "--seed", "7"]
        _, a, _ = run_cli(capsys, *argv)
        _, b, _ = run_cli(capsys, *argv)
        assert a == b


class TestDicke:
    def test_no_scattering(self, capsys):
        _, out, _ = run_cli(capsys, "dicke", "--alpha", "1", "--beta", "0", "--format", "json")
        data = json.loads(out)
        assert data["entanglement_closed"] == 0
        assert data["null_probability"] == 1

    def test_equal_branches(self, capsys):
        _, out, _ = run_cli(capsys, "dicke", "--alpha", "0.7071067811865476", "--beta", "0.7071067811865476",
                            "--format", "json")
        data = json.loads(out)
        assert data["entanglement_closed"] == pytest.approx(LN2, abs=1e-12)
        assert data["entanglement_numeric"] == pytest.approx(LN2, abs=1e-10)
        assert data["null_probability"] == pytest.approx(0.5)
        assert data["null_target_overlap_free"] == pytest.approx(1, abs=1e-12)

    def test_csv(self, capsys):
        code, out, _ = run_cli(capsys, "dicke", "--alpha", "0.8", "--beta", "0.6")
        rows = {(r["section"], r["label"]): float(r["re"]) for r in csv.DictReader(io.StringIO(out))}
        assert code == 0
        assert rows[("scalar", "null_target_overlap_free")] == pytest.approx(1, abs=1e-12)
        assert rows[("null_target", "free")] == 1.0

    def test_null_impossible(self, capsys):
        code, out, _ = run_cli(capsys, "dicke", "--alpha", "0", "--beta", "1", "--format", "json")
        assert code == 0
        assert json.loads(out)["null_target_state"] is None


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ifmsim", "run", "--alpha", "0", "--beta", "1", "--gamma", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "p_dd" in proc.stdout
