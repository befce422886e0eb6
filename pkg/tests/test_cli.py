import json
import subprocess
import sys

import pytest

from qndsim.cli import main

TWO_SINH1 = 2.3504023872876029138


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert "all checks passed" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert {c["name"] for c in doc["checks"]} >= {"fig3_equals_ideal", "snr_log_slopes"}

    def test_injected_fault_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--inject-fault")
        assert code == 1
        failing = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert len(failing) == 1 and "fig3_equals_ideal" in failing[0]


class TestAnalyze:
    def test_fig3(self, capsys):
        code, out, _ = run(capsys, "analyze", "--scheme", "fig3", "--r", "1")
        doc = json.loads(out)
        assert code == 0
        assert doc["scheme"] == "fig3_nopa"
        assert doc["gain"] == pytest.approx(TWO_SINH1, abs=1e-14)
        assert doc["readout"]["signal_cosine"]["variance"] == pytest.approx(0.5, abs=1e-14)

    def test_ideal_back_action(self, capsys):
        _, out, _ = run(capsys, "analyze", "--scheme", "ideal", "--r", "2")
        assert json.loads(out)["back_action_residual"] == 0.0

    def test_zero_gain_is_null(self, capsys):
        _, out, _ = run(capsys, "analyze", "--scheme", "fig4", "--r", "0")
        doc = json.loads(out)
        assert doc["zero_gain"] is True
        assert doc["estimator_variance_normalized"] is None

    def test_coherent_signal_and_loss(self, capsys):
        _, out, _ = run(capsys, "analyze", "--scheme", "fig3_nopa", "--r", "1",
                        "--signal-coherent", "1", "0", "--loss", "probe_out", "0.5")
        doc = json.loads(out)
        # probe mean: sqrt(0.5) * G * signal amplitude
        assert doc["readout"]["probe_cosine"]["mean"] == pytest.approx(TWO_SINH1 * 0.5**0.5, rel=1e-13)

    def test_unknown_scheme(self, capsys):
        code, _, err = run(capsys, "analyze", "--scheme", "fig9", "--r", "1")
        assert code == 2
        assert "fig3_nopa" in err

    def test_missing_arguments(self, capsys):
        code, _, err = run(capsys, "analyze", "--scheme", "fig3")
        assert code == 2 and "--config" in err

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text(
            "scheme: fig4_amplified\nr: 1.0\n"
            "signal_state: {kind: coherent, alpha_c: 2.0, alpha_s: 0.0}\n"
            "losses:\n  - {port: signal_in, eta: 0.8}\n"
        )
        code, out, _ = run(capsys, "analyze", "--config", str(path))
        assert code == 0
        assert json.loads(out)["scheme"] == "fig4_amplified"

    def test_config_parse_error_reports_line(self, capsys, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("scheme: fig3_nopa\nr: [1.0\n")
        code, _, err = run(capsys, "analyze", "--config", str(path))
        assert code == 2
        assert "line" in err

    def test_config_bad_field(self, capsys, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("scheme: fig3_nopa\nr: fast\n")
        code, _, err = run(capsys, "analyze", "--config", str(path))
        assert code == 2 and "'r'" in err

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "analyze", "--config", str(tmp_path / "none.yaml"))
        assert code == 2

    def test_dump_config_round_trip(self, capsys, tmp_path):
        dumped = tmp_path / "eff.yaml"
        args = ["--scheme", "fig1", "--r", "0.7", "--probe-coherent", "0.5", "-1",
                "--loss", "signal_out", "0.9"]
        _, direct, _ = run(capsys, "analyze", *args, "--dump-config", str(dumped))
        _, replay, _ = run(capsys, "analyze", "--config", str(dumped))
        assert direct == replay

    def test_dump_config_stdout(self, capsys):
        code, out, _ = run(capsys, "analyze", "--scheme", "fig3", "--r", "1", "--dump-config", "-")
        assert code == 0
        assert out.startswith("scheme: fig3_nopa")


class TestSweep:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "sweep", "fig4", "2", "5", "31")
        lines = out.splitlines()
        assert code == 0
        assert lines[0].startswith("# qndsim")
        assert lines[1] == "r,gain,signal_amplification,snr_ratio,estimator_variance_normalized"
        assert len(lines) == 2 + 31 + 1
        slope = float(lines[-1].split("=")[1].split()[0])
        assert abs(slope - 2.0) < 0.05

    def test_fig3_slope(self, capsys):
        _, out, _ = run(capsys, "sweep", "fig3_nopa", "2", "5", "31")
        slope = float(out.splitlines()[-1].split("=")[1].split()[0])
        assert abs(slope - 1.0) < 0.05

    def test_json(self, capsys):
        _, out, _ = run(capsys, "sweep", "fig3", "0.5", "1", "3", "--json")
        doc = json.loads(out)
        assert len(doc["rows"]) == 3

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "t.csv"
        code, out, _ = run(capsys, "sweep", "fig1", "0.1", "1", "4", "-o", str(path))
        assert code == 0 and out == ""
        assert path.read_text().count("\n") == 2 + 4 + 1

    @pytest.mark.parametrize("argv", [
        ("sweep", "fig4", "2", "5", "1"),
        ("sweep", "fig4", "5", "2", "10"),
        ("sweep", "fig4", "2", "500", "10"),
        ("sweep", "nope", "2", "5", "10"),
    ])
    def test_invalid(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2 and "error" in err


def test_argparse_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "fig4"])
    assert exc.value.code == 2


def test_module_entry_point_is_byte_deterministic():
    cmd = [sys.executable, "-m", "qndsim", "sweep", "fig3", "0", "2", "9"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert b"inf" in first
