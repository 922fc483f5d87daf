import os

import pytest

from wavespeed.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestClassify:
    def test_negative_exit_zero(self, capsys):
        code, out, _ = run(capsys, "classify", "11", "1", "3", "3")
        assert code == 0
        assert "verdict: Negative" in out
        assert "S1" in out and "N1" in out
        assert "k* bracket" in out

    def test_positive_exit_one(self, capsys):
        code, out, _ = run(capsys, "classify", str(1 / 11), "1", "3", "3")
        assert code == 1
        assert "verdict: Positive" in out
        assert "(reflected)" in out

    def test_inconclusive_exit_two(self, capsys):
        code, out, _ = run(capsys, "classify", "1", "1", "2", "2")
        assert code == 2
        assert "verdict: Inconclusive" in out
        assert "fired: none" in out

    def test_invalid_params_exit_64(self, capsys):
        code, _, err = run(capsys, "classify", "1", "1", "1", "2")
        assert code == 64
        assert "strong competition" in err

    def test_usage_error_exit_64(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "1", "1", "2"])
        capsys.readouterr()
        assert exc.value.code == 64


class TestSpeed:
    def test_reports_speed_and_verdict(self, capsys):
        code, out, _ = run(
            capsys, "speed", "7", "1", "1.8", "2",
            "--L", "40", "--dx", "0.2", "--dt", "0.05", "--t-end", "60",
        )
        assert code == 0
        assert "c_hat = -" in out
        assert "theory verdict: Negative" in out
        assert "agreement" in out

    def test_nonconvergence_exit_three(self, capsys):
        # A fast front in a short box trips the boundary-margin check.
        code, out, _ = run(
            capsys, "speed", "5", "1", "5", "2",
            "--L", "10", "--dx", "0.2", "--dt", "0.05", "--t-end", "60",
        )
        assert code == 3
        assert "converged: no" in out

    def test_trajectory_dump(self, capsys, tmp_path):
        path = tmp_path / "traj.csv"
        code, out, _ = run(
            capsys, "speed", "1", "1", "2", "2",
            "--L", "10", "--dx", "0.5", "--dt", "0.1", "--t-end", "5",
            "--dump-trajectory", str(path),
        )
        assert code == 0
        assert path.exists()
        assert path.read_text().startswith("t,x,u,v")


class TestCertify:
    def test_certifies_blocking_point(self, capsys):
        code, out, _ = run(capsys, "certify", "11", "1", "3", "3")
        assert code == 0
        assert "certified: yes" in out
        assert "candidate: p = 2.77200187" in out

    def test_no_candidate_hints_reflection(self, capsys):
        code, out, _ = run(capsys, "certify", "1", "1", "1.1", "5")
        assert code == 4
        assert "no admissible" in out
        assert "reflected parameters" in out

    def test_degenerate_path(self, capsys):
        code, out, _ = run(capsys, "certify", "--degenerate", "0.05", "1", "8", "2")
        assert code == 0
        assert "certified: yes" in out
        assert "phi' jump" in out

    def test_degenerate_fails_above_bound(self, capsys):
        code, out, _ = run(capsys, "certify", "--degenerate", "0.1", "1", "8", "2")
        assert code == 5
        assert "certified: no" in out

    def test_explicit_candidate(self, capsys):
        code, out, _ = run(
            capsys, "certify", "11", "1", "3", "3",
            "--p", "2.7720018754307674", "--a", "0.5222329678670935",
        )
        assert code == 0

    def test_export_tables(self, capsys, tmp_path):
        prefix = tmp_path / "prof"
        code, out, _ = run(
            capsys, "certify", "11", "1", "3", "3", "--export", str(prefix)
        )
        assert code == 0
        assert (tmp_path / "prof_phi.txt").exists()
        assert (tmp_path / "prof_psi.txt").exists()


class TestScan:
    def test_writes_outputs_and_counts(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "scan", "--plane", "sym",
            "--xrange", "1:10", "--yrange", "1.000001:4",
            "--nx", "10", "--ny", "7",
            "--output-dir", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "scan.csv").exists()
        assert (tmp_path / "scan.svg").exists()
        assert "cells fired per criterion" in out
        assert "S1:" in out

    def test_rerun_byte_identical(self, capsys, tmp_path):
        args = [
            "scan", "--plane", "k1d", "--k2", "2", "--r", "1", "--log",
            "--xrange", "1.05:50", "--yrange", "0.001:100",
            "--nx", "12", "--ny", "9",
        ]
        run(capsys, *args, "--output-dir", str(tmp_path / "a"))
        run(capsys, *args, "--output-dir", str(tmp_path / "b"))
        assert (tmp_path / "a/scan.csv").read_bytes() == (tmp_path / "b/scan.csv").read_bytes()
        assert (tmp_path / "a/scan.svg").read_bytes() == (tmp_path / "b/scan.svg").read_bytes()

    def test_env_var_output_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("WAVESPEED_OUT", str(tmp_path / "env_out"))
        code, _, _ = run(
            capsys, "scan", "--plane", "sym",
            "--xrange", "1:4", "--yrange", "1.5:2.5", "--nx", "4", "--ny", "3",
        )
        assert code == 0
        assert (tmp_path / "env_out" / "scan.csv").exists()

    def test_config_file_defaults_and_flag_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "scan.cfg"
        cfg.write_text(
            "# scan settings\n"
            "plane = sym\n"
            "xrange = 1:4\n"
            "yrange = 1.5:2.5\n"
            "nx = 5\n"
            "ny = 4\n"
            f"output_dir = {tmp_path / 'from_config'}\n"
        )
        code, _, _ = run(capsys, "--config", str(cfg), "scan", "--ny", "3")
        assert code == 0
        csv_path = tmp_path / "from_config" / "scan.csv"
        lines = csv_path.read_text().splitlines()
        assert len(lines) == 1 + 5 * 3  # nx from config, ny from flag
