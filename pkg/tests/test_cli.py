import json

import numpy as np
import pytest

from opticaltv import cli, imaging


@pytest.fixture
def small_image(tmp_path, rng):
    # piecewise-constant blocks plus a gradient: something TV can clean up
    img = np.zeros((32, 32))
    img[:16, :] = 0.3
    img[16:, :] = 0.7
    img += np.linspace(0, 0.1, 32)[None, :]
    path = tmp_path / "input.pgm"
    imaging.save_image(img, path)
    return path


def run(argv):
    return cli.main([str(a) for a in argv])


class TestNoiseTable:
    def test_rows_within_one_percent(self, capsys):
        assert run(["noise-table"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 7  # header + 6 gains
        for line in lines[1:]:
            rel = float(line.split()[-1].rstrip("%")) / 100.0
            assert rel < 0.01

    def test_noise_figure_override_halves_power(self, capsys):
        assert run(["noise-table"]) == 0
        base = [float(l.split()[1]) for l in capsys.readouterr().out.splitlines()[1:]]
        assert run(["noise-table", "--noise-figure", "1"]) == 0
        halved = [float(l.split()[1]) for l in capsys.readouterr().out.splitlines()[1:]]
        # printed with 6 decimal digits, so compare at that precision
        np.testing.assert_allclose(halved, np.array(base) / 2, rtol=1e-6)

    def test_zero_bandwidth_rejected(self, capsys):
        assert run(["noise-table", "--bandwidth", "0"]) != 0
        assert "error" in capsys.readouterr().err


class TestDenoise:
    def test_end_to_end(self, small_image, tmp_path):
        out = tmp_path / "out"
        code = run(["denoise", "--input", small_image, "--algo", "admm",
                    "--gamma", "10", "--lambda", "0.03", "--iters", "10",
                    "--sigma", "0.05", "--seed", "1", "--out", out])
        assert code == 0
        for name in ("observed.pgm", "restored.pgm", "trace.csv",
                     "summary.json", "config.json"):
            assert (out / name).is_file()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["mean_restored_psnr"] > summary["mean_observed_psnr"]
        trace = (out / "trace.csv").read_text().splitlines()
        assert trace[0].startswith("# opticaltv-trace")
        assert trace[1] == "iteration,objective,psnr,ssim"
        assert len(trace) == 2 + 10

    def test_config_echo_contains_defaults_and_seed(self, small_image, tmp_path):
        out = tmp_path / "out"
        assert run(["denoise", "--input", small_image, "--iters", "2",
                    "--out", out]) == 0
        echo = json.loads((out / "config.json").read_text())
        assert echo["seed"] == 0
        assert echo["gamma"] == 10.0
        assert echo["iters"] == 2

    def test_byte_identical_reruns(self, small_image, tmp_path):
        args = ["denoise", "--input", small_image, "--iters", "5", "--noisy",
                "--seed", "3", "--sigma", "0.05"]
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", out1]) == 0
        assert run(args + ["--out", out2]) == 0
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()
        assert (out1 / "restored.pgm").read_bytes() == (out2 / "restored.pgm").read_bytes()

    def test_invalid_patch_size(self, small_image, tmp_path, capsys):
        code = run(["denoise", "--input", small_image, "--patch", "13",
                    "--out", tmp_path / "o"])
        assert code != 0
        assert "divide" in capsys.readouterr().err

    def test_missing_input(self, tmp_path, capsys):
        assert run(["denoise", "--out", tmp_path / "o"]) != 0
        assert "--input" in capsys.readouterr().err

    def test_config_file_with_flag_override(self, small_image, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"iters": 3, "gamma": 5.0, "sigma": 0.05}))
        out = tmp_path / "out"
        assert run(["denoise", "--config", config, "--input", small_image,
                    "--gamma", "2.0", "--out", out]) == 0
        echo = json.loads((out / "config.json").read_text())
        assert echo["iters"] == 3       # from file
        assert echo["gamma"] == 2.0     # flag wins

    def test_unknown_config_key_rejected(self, small_image, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"bogus": 1}))
        assert run(["denoise", "--config", config, "--input", small_image,
                    "--out", tmp_path / "o"]) != 0
        assert "bogus" in capsys.readouterr().err


class TestSweep:
    def test_small_grid(self, small_image, tmp_path):
        out = tmp_path / "sweep"
        code = run(["sweep", "--input", small_image, "--algo", "admm",
                    "--grid", "1,10", "--iters", "4", "--reps", "2",
                    "--sigma", "0.05", "--workers", "2", "--out", out])
        assert code == 0
        rows = (out / "sweep.csv").read_text().splitlines()
        # header comment + column header + 2 params * 2 modes * 2 reps * 4 iters
        assert len(rows) == 2 + 2 * 2 * 2 * 4
        summary = (out / "summary.csv").read_text().splitlines()
        assert len(summary) == 2 + 2 * 2
        assert summary[1].startswith("# ") is False

    def test_deterministic_output(self, small_image, tmp_path):
        args = ["sweep", "--input", small_image, "--grid", "1,10",
                "--iters", "3", "--sigma", "0.05", "--workers", "4"]
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", out1]) == 0
        assert run(args + ["--out", out2]) == 0
        assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()


class TestCompare:
    def test_joint_summary(self, small_image, tmp_path):
        out = tmp_path / "cmp"
        code = run(["compare", "--input", small_image, "--iters", "4",
                    "--sigma", "0.05", "--out", out])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        expected = {"observed", "admm_noiseless", "admm_noisy",
                    "pds_noiseless", "pds_noisy"}
        assert expected <= set(summary)
        for name in expected - {"observed"}:
            assert (out / f"restored_{name}.pgm").is_file()
