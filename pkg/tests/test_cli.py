"""End-to-end command-line tests, run in process through main()."""

import numpy as np
import pytest

from sawbath.cli import main
from sawbath.saw import LossModel, qubit_loss


def _lines(path):
    return path.read_text().splitlines()


class TestTableCommands:
    def test_com_spectrum(self, tmp_path, capsys):
        code = main(["com-spectrum", "--out", str(tmp_path),
                     "--set", "com_spectrum.n_points=201"])
        assert code == 0
        out = capsys.readouterr().out
        csv = tmp_path / "com_spectrum.csv"
        assert f"wrote {csv}" in out
        lines = _lines(csv)
        assert lines[0] == "frequency,conductance"
        assert len(lines) == 202

    def test_loss_spectrum_with_plot(self, tmp_path, capsys):
        code = main(["loss-spectrum", "--out", str(tmp_path),
                     "--set", "loss_spectrum.n_points=51", "--plot"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("wrote") == 2
        assert (tmp_path / "loss_spectrum.csv").exists()
        svg = (tmp_path / "loss_spectrum.svg").read_text()
        assert "<?xml" in svg[:200] or "<svg" in svg[:200]

    def test_evolve_honors_overrides(self, tmp_path, capsys):
        code = main(["evolve", "--out", str(tmp_path),
                     "--set", "trace.n_steps=11", "--set", "trace.t_max=1 us"])
        assert code == 0
        lines = _lines(tmp_path / "time_trace.csv")
        assert lines[0] == "t,sigma_x,sigma_y,sigma_z,purity"
        assert len(lines) == 12
        assert lines[1].split(",")[3] == "-1"  # starts in the ground state

    def test_steady_map(self, tmp_path, capsys):
        code = main(["steady-map", "--out", str(tmp_path),
                     "--set", "grid.n_omega=3", "--set", "grid.n_delta=3"])
        assert code == 0
        lines = _lines(tmp_path / "steady_map.csv")
        assert lines[0] == ("omega,delta,sigma_x,sigma_y,sigma_z,"
                            "purity,t_eff,status")
        assert len(lines) == 10
        assert all(line.endswith(("ok", "unphysical-population"))
                   for line in lines[1:])

    def test_config_file_then_set(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("trace.n_steps = 5\ntrace.t_max = 1 us\n")
        code = main(["evolve", "--config", str(cfg), "--out", str(tmp_path),
                     "--set", "trace.n_steps=7"])
        assert code == 0
        assert len(_lines(tmp_path / "time_trace.csv")) == 8

    def test_runs_are_deterministic(self, tmp_path, capsys):
        args = ["steady-map", "--set", "grid.n_omega=2",
                "--set", "grid.n_delta=2"]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a" / "steady_map.csv").read_bytes() \
            == (tmp_path / "b" / "steady_map.csv").read_bytes()


class TestFitCommands:
    def test_fit_loss(self, tmp_path, capsys):
        freq = np.linspace(4.3e9, 4.7e9, 200)
        rates = qubit_loss(LossModel(), freq)
        path = tmp_path / "loss.csv"
        path.write_text("frequency,rate\n" + "\n".join(
            f"{f:.10g},{g:.10g}" for f, g in zip(freq, rates)) + "\n")
        code = main(["fit-loss", str(path)])
        assert code == 0
        out = capsys.readouterr().out
        fitted = {}
        for line in out.splitlines():
            if " = " in line:
                key, value = line.split(" = ", 1)
                fitted[key] = value
        assert float(fitted["q_internal"]) == pytest.approx(1.67e3, rel=1e-3)
        assert float(fitted["f_s"].split()[0]) == pytest.approx(4.504e9, rel=1e-4)
        assert "deviation" in fitted["idt_frequency"]

    def test_fit_loss_underdetermined(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        freq = np.linspace(4.3e9, 4.7e9, 20)
        path.write_text("\n".join(f"{f:.10g},2e6" for f in freq) + "\n")
        assert main(["fit-loss", str(path)]) == 3
        assert capsys.readouterr().err.startswith("numerical failure:")

    def test_fit_loss_missing_file(self, tmp_path, capsys):
        assert main(["fit-loss", str(tmp_path / "absent.csv")]) == 4
        assert capsys.readouterr().err.startswith("i/o failure:")

    def test_rabi_fit(self, tmp_path, capsys):
        amps = np.linspace(0.1, 1.0, 10)
        path = tmp_path / "cal.csv"
        path.write_text("\n".join(
            f"{a:.10g},{9.5e6 * a:.10g}" for a in amps) + "\n")
        assert main(["rabi-fit", str(path)]) == 0
        out = capsys.readouterr().out
        slope = float(out.splitlines()[0].split(" = ")[1].split()[0])
        assert slope == pytest.approx(9.5e6, rel=1e-9)

    def test_rabi_fit_wrong_shape(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("0.1,1e6,7\n0.2,2e6,7\n")
        assert main(["rabi-fit", str(path)]) == 2
        assert capsys.readouterr().err.startswith("error:")


class TestDephasing:
    def test_reference_value(self, capsys):
        assert main(["dephasing", "--t1", "0.5 us", "--t2star", "0.52 us"]) == 0
        assert "gamma_phi = 923076.923 1/s" in capsys.readouterr().out

    def test_lifetime_limited(self, capsys):
        assert main(["dephasing", "--t1", "1 us", "--t2star", "2 us"]) == 0
        assert "gamma_phi = 0 1/s" in capsys.readouterr().out

    def test_inconsistent_times(self, capsys):
        assert main(["dephasing", "--t1", "1 us", "--t2star", "2.5 us"]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_bad_unit(self, capsys):
        assert main(["dephasing", "--t1", "1 MHz", "--t2star", "2 us"]) == 2
        assert "error:" in capsys.readouterr().err


class TestErrorPaths:
    def test_unknown_set_key(self, tmp_path, capsys):
        code = main(["evolve", "--out", str(tmp_path),
                     "--set", "drive.omg=9 MHz"])
        assert code == 2
        assert "unknown key" in capsys.readouterr().err

    def test_output_dir_blocked_by_file(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("in the way")
        code = main(["evolve", "--out", str(blocker),
                     "--set", "trace.n_steps=2"])
        assert code == 4
        assert capsys.readouterr().err.startswith("i/o failure:")

    def test_unknown_subcommand_exits_via_argparse(self, capsys):
        with pytest.raises(SystemExit):
            main(["warp-drive"])
