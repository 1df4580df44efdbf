"""CLI tests: subcommands, config handling, determinism, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from su2qfi.cli import ConfigError, RunConfig, main


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestRunConfig:
    def test_round_trip_is_lossless(self):
        cfg = RunConfig.from_dict({"scenario": "magnetometry", "B": 2.5, "N": 7})
        again = RunConfig.from_dict(cfg.to_dict())
        assert again == cfg
        assert again.to_dict() == cfg.to_dict()

    def test_generic_round_trip(self):
        data = {
            "scenario": "generic",
            "x0": [0.5, 0.0, 1.0],
            "gradients": [[1.0, 0, 0], [0, 1.0, 0]],
            "x": [0.2, -0.3],
        }
        cfg = RunConfig.from_dict(data)
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError) as err:
            RunConfig.from_dict({"scneario": "magnetometry"})
        assert err.value.code == "unknown-field"

    @pytest.mark.parametrize(
        "data,code",
        [
            ({"t": 0.0}, "nonpositive-segment-time"),
            ({"t": -1.0}, "nonpositive-segment-time"),
            ({"N": 0}, "invalid-segment-count"),
            ({"r": [1.0, 1.0, 0.0]}, "bloch-norm"),
            (
                {
                    "scenario": "generic",
                    "gradients": [[1, 0, 0]] * 4,
                    "x": [0, 0, 0, 0],
                },
                "too-many-parameters",
            ),
            ({"probe": "thermal"}, "unknown-probe"),
            ({"scenario": "cavity"}, "unknown-scenario"),
        ],
    )
    def test_distinct_error_codes(self, data, code):
        with pytest.raises(ConfigError) as err:
            RunConfig.from_dict(data)
        assert err.value.code == code


class TestReport:
    def test_default_report_values(self, capsys):
        code, out, _ = run_main(capsys, "report")
        assert code == 0
        doc = json.loads(out)
        qfim = np.array(doc["qfim"])
        assert np.allclose(np.diag(qfim), [100.0, 900.0, 225.0], atol=1e-9)
        assert doc["attainable"] is True
        assert doc["probe_kind"] == "entangled_with_ancilla"
        assert doc["parameter_names"] == ["B", "theta", "phi"]
        assert doc["version"] == "0.1.0"
        assert doc["config"]["N"] == 5

    def test_pure_probe_without_control_not_attainable(self, capsys):
        code, out, _ = run_main(
            capsys, "report", "--probe", "pure", "--r", "0", "0", "1", "--control", "none"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["attainable"] is False

    def test_invalid_segment_count_exits_2(self, capsys):
        code, _, err = run_main(capsys, "report", "--N", "0")
        assert code == 2
        assert "invalid-segment-count" in err

    def test_overlong_bloch_vector_exits_2(self, capsys):
        code, _, err = run_main(capsys, "report", "--probe", "pure", "--r", "1", "1", "0")
        assert code == 2
        assert "bloch-norm" in err

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg_path = tmp_path / "run.json"
        cfg_path.write_text(json.dumps({"B": 2.0, "N": 4}), encoding="utf-8")
        code, out, _ = run_main(capsys, "--config", str(cfg_path), "report", "--N", "6")
        assert code == 0
        doc = json.loads(out)
        assert doc["config"]["B"] == 2.0
        assert doc["config"]["N"] == 6  # flag wins

    def test_generic_scenario(self, capsys, tmp_path):
        cfg_path = tmp_path / "generic.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "scenario": "generic",
                    "x0": [0.0, 0.0, 2.0],
                    "gradients": [[1.0, 0.0, 0.0]],
                    "x": [0.0],
                    "t": 5.0,
                    "N": 1,
                    "control": "none",
                }
            ),
            encoding="utf-8",
        )
        code, out, _ = run_main(capsys, "--config", str(cfg_path), "report")
        assert code == 0
        doc = json.loads(out)
        # orthogonal geometry: maximum oscillates as sin^2(T)
        assert doc["qfi_max"][0] == pytest.approx(np.sin(5.0) ** 2, abs=1e-12)
        assert doc["parameter_names"] == ["x1"]

    def test_pole_serializes_infinite_bound(self, capsys):
        code, out, _ = run_main(capsys, "report", "--theta", "0")
        assert code == 0
        doc = json.loads(out)
        assert doc["precision_bounds"][2] == "inf"

    def test_control_designed_at_offset_estimate(self, capsys):
        # control negates the coefficients at x_tilde, not at the true point,
        # so the per-segment coefficients no longer cancel and the maxima
        # fall back to the oscillating closed form
        code, out, _ = run_main(
            capsys, "report", "--x-tilde", "2.9", str(np.pi / 6), "0"
        )
        assert code == 0
        doc = json.loads(out)
        exact = json.loads(run_main(capsys, "report")[1])
        assert doc["qfi_max"][1] < exact["qfi_max"][1]
        assert doc["attainable"] is True  # entangled probe: still attainable

    def test_custom_control_vector_matches_optimal(self, capsys):
        # hand the negated coefficients in explicitly: identical report
        x_c = -2 * 3.0 * np.array([np.sin(np.pi / 6), 0.0, np.cos(np.pi / 6)])
        _, out_custom, _ = run_main(
            capsys,
            "report",
            "--control",
            "custom",
            "--control-vector",
            *[str(c) for c in x_c],
        )
        _, out_optimal, _ = run_main(capsys, "report", "--control", "optimal")
        custom = json.loads(out_custom)
        optimal = json.loads(out_optimal)
        assert np.allclose(custom["qfim"], optimal["qfim"], atol=1e-9)


class TestSweepAlpha:
    def test_header_and_order(self, capsys):
        code, out, _ = run_main(capsys, "sweep-alpha", "--alpha-count", "5")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["N", "alpha", "uncontrolled_max", "controlled_limit", "gap"]
        ns = [int(r[0]) for r in rows]
        assert ns == sorted(ns)
        assert len(rows) == 15  # 3 segment counts x 5 angles
        for n in (3, 5, 10):
            alphas = [float(r[1]) for r in rows if int(r[0]) == n]
            assert alphas == sorted(alphas)

    def test_right_angle_gap_value(self, capsys):
        code, out, _ = run_main(capsys, "sweep-alpha")
        _, rows = parse_csv(out)
        row = next(r for r in rows if int(r[0]) == 5 and abs(float(r[1]) - np.pi / 2) < 1e-12)
        assert float(row[4]) == pytest.approx(25.0 - np.sin(5.0) ** 2, abs=1e-12)
        assert float(row[2]) == pytest.approx(np.sin(5.0) ** 2, abs=1e-13)

    def test_colinear_rows_have_zero_gap(self, capsys):
        code, out, _ = run_main(capsys, "sweep-alpha")
        _, rows = parse_csv(out)
        for row in rows:
            if float(row[1]) == 0.0:
                assert float(row[4]) == 0.0

    def test_byte_stable_output(self, capsys, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["--out", str(out1), "sweep-alpha"]) == 0
        assert main(["--out", str(out2), "sweep-alpha"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_roundtrip_exact_serialization(self, capsys):
        code, out, _ = run_main(capsys, "sweep-alpha", "--alpha-count", "9")
        _, rows = parse_csv(out)
        for row in rows:
            for cell in row[1:]:
                assert f"{float(cell):.17g}" == cell

    def test_empty_grid_exits_2(self, capsys):
        code, _, err = run_main(capsys, "sweep-alpha", "--alpha-count", "0")
        assert code == 2
        assert "empty-grid" in err


class TestCurves:
    def test_controlled_reference_rows(self, capsys):
        code, out, _ = run_main(capsys, "curves")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["N", "T", "dB", "dtheta", "dphi"]
        row5 = next(r for r in rows if r[0] == "5")
        assert float(row5[3]) == pytest.approx(1 / 30, abs=1e-15)

    def test_uncontrolled_colatitude_bounded(self, capsys):
        code, out, _ = run_main(capsys, "curves", "--controlled", "false")
        _, rows = parse_csv(out)
        assert all(float(r[3]) >= 0.5 for r in rows)

    def test_field_entry_identical_across_modes(self, capsys):
        _, out_c, _ = run_main(capsys, "curves", "--controlled", "true")
        _, rows_c = parse_csv(out_c)
        _, out_u, _ = run_main(capsys, "curves", "--controlled", "false")
        _, rows_u = parse_csv(out_u)
        assert [r[2] for r in rows_c] == [r[2] for r in rows_u]

    def test_pole_emits_inf_literal(self, capsys):
        code, out, _ = run_main(capsys, "curves", "--theta", "0", "--n-max", "2")
        assert code == 0
        _, rows = parse_csv(out)
        assert all(r[4] == "inf" for r in rows)


class TestVerify:
    def test_passes_and_exits_zero(self, capsys):
        code, out, _ = run_main(capsys, "--samples", "25", "verify")
        assert code == 0
        assert "checks passed" in out
        assert "FAIL" not in out

    def test_byte_identical_for_fixed_seed(self, capsys):
        _, out1, _ = run_main(capsys, "--seed", "7", "--samples", "25", "verify")
        _, out2, _ = run_main(capsys, "--seed", "7", "--samples", "25", "verify")
        assert out1 == out2

    def test_injected_fault_exits_one(self, capsys):
        code, out, _ = run_main(
            capsys, "--samples", "10", "verify", "--tolerance-scale", "0"
        )
        assert code == 1
        assert "FAIL" in out
        assert "worst input" in out

    def test_bad_sample_count_exits_2(self, capsys):
        code, _, err = run_main(capsys, "--samples", "0", "verify")
        assert code == 2
        assert "invalid-sample-count" in err


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "su2qfi", "curves", "--n-max", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("N,T,dB,dtheta,dphi\n")

    def test_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "su2qfi", "--help"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert "report" in proc.stdout and "verify" in proc.stdout
