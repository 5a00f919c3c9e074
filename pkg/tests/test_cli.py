import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lzsweep import torsion
from lzsweep.cli import main, parse_number
from lzsweep.errors import InputError, SolverError
from lzsweep.io import read_table


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _report(out):
    rows = {}
    for line in out.splitlines():
        k, sep, v = line.partition(": ")
        if sep:
            rows[k] = v
    return rows


def test_parse_number():
    assert parse_number("pi/4") == pytest.approx(np.pi / 4)
    assert parse_number("2*pi") == pytest.approx(2 * np.pi)
    assert parse_number("-1.5e-2") == -0.015
    for bad in ("__import__('os')", "pi**", "x"):
        with pytest.raises(InputError):
            parse_number(bad)


def test_design_figure8_reports_zero_area(work, capsys):
    assert main(["design", "--builder", "figure8", "--v", "1.0"]) == 0
    rep = _report(capsys.readouterr().out)
    assert all(abs(float(a)) < 1e-10 for a in rep["projected_areas"].split())
    assert float(rep["closure_defect"]) < 1e-10
    meta, cols = read_table(work / "figure8_pulse.csv")
    assert meta["cfg.design.builder"] == "figure8" and {"t", "omega"} <= set(cols)
    assert (work / "figure8_curve.csv").exists()


def test_design_two_spiral_peak(work, capsys):
    assert main(["design", "--builder", "two-spiral", "--root", "0", "--v", "4"]) == 0
    rep = _report(capsys.readouterr().out)
    assert float(rep["peak_omega"]) == pytest.approx(2.143566921562347 * 2, rel=1e-9)


def test_verify_exit_codes(work, capsys):
    main(["design", "--builder", "figure8"])
    main(["design", "--builder", "linear", "--T", "9.5718"])
    capsys.readouterr()
    assert main(["verify", "--input", "figure8_pulse.csv"]) == 0
    rep = _report(capsys.readouterr().out)
    assert rep["measured_order"] == "2" and rep["verified"] == "yes"
    assert main(["verify", "--input", "linear_pulse.csv"]) == 0
    assert _report(capsys.readouterr().out)["measured_order"] == "0"
    assert main(["verify", "--input", "linear_pulse.csv", "--order", "2"]) == 2
    assert "slope" in capsys.readouterr().err
    bad = work / "bad.csv"
    bad.write_text("t,omega\n0,1\n1,nan\n")
    assert main(["verify", "--input", str(bad)]) == 1
    assert ":3:" in capsys.readouterr().err


def test_verify_accepts_a_curve_file(work, capsys):
    main(["design", "--builder", "semicircle"])
    capsys.readouterr()
    assert main(["verify", "--input", "semicircle_curve.csv", "--order", "2"]) == 0


def test_usage_and_input_errors(work, capsys):
    assert main([]) == 1
    assert main(["design"]) == 1
    assert main(["design", "--builder", "nope"]) == 1
    assert main(["design", "--builder", "linear", "--v", "-1"]) == 1
    assert main(["simulate", "--input", "missing.csv"]) == 1
    assert main(["design", "--builder", "figure8", "--out-dir", "no/such/dir"]) == 1


def test_solver_failure_exit_code(work, monkeypatch):
    def fail(*a, **k):
        raise SolverError("did not converge", best=np.zeros(3), residual=1.0)

    monkeypatch.setattr(torsion, "design_torsion_pulse", fail)
    assert main(["design", "--builder", "torsion"]) == 3


def test_simulate_and_sweep_outputs(work):
    main(["design", "--builder", "figure8"])
    main(["design", "--builder", "linear", "--T", "8.574267686"])
    assert main(["simulate", "--input", "figure8_pulse.csv", "linear_pulse.csv", "--plot", "--threads", "2"]) == 0
    meta, cols = read_table(work / "figure8_pulse_results.csv")
    assert cols["delta"][0] == 0 and cols["fidelity"][0] == 1.0
    assert np.all(np.diff(cols["delta"]) > 0)
    ET.parse(work / "p_lz_vs_delta.svg")
    assert main(["sweep", "--input", "linear_pulse.csv", "--sigma-T", "1e-2,1,5", "--samples", "40",
                 "--plot"]) == 0
    _, sw = read_table(work / "linear_pulse_sweep.csv")
    assert np.all(np.diff(sw["mean_p_lz"]) > 0)
    assert list(work.glob("*.svg"))[0].stat().st_size > 0
    for svg in work.glob("*.svg"):
        ET.parse(svg)


def _snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.is_file()}


def test_reproducible_across_runs_and_thread_counts(tmp_path, monkeypatch):
    snaps = []
    for i, threads in enumerate(("1", "3", "1")):
        d = tmp_path / f"run{i}"
        d.mkdir()
        monkeypatch.chdir(d)
        assert main(["design", "--builder", "semicircle", "--smooth"]) == 0
        assert main(["sweep", "--input", "semicircle_pulse.csv", "--sigma-T", "1e-2,1,4", "--samples", "30",
                     "--seed", "7", "--threads", threads]) == 0
        assert main(["simulate", "--input", "semicircle_pulse.csv", "--threads", threads]) == 0
        snaps.append(_snapshot(d))
    assert snaps[0] == snaps[1] == snaps[2]


def test_config_file_and_flag_override(work, capsys):
    cfg = work / "job.ini"
    cfg.write_text("[design]\nbuilder = constant\nT = 2.0\narea = 4*pi\nprefix = c4\n")
    assert main(["design", "--config", str(cfg)]) == 0
    meta, cols = read_table(work / "c4_pulse.csv")
    assert cols["t"][-1] == 2.0 and cols["omega"][0] == pytest.approx(2 * np.pi)
    assert meta["cfg.source"] == str(cfg) and meta["cfg.design.area"] == "4*pi"
    assert main(["design", "--config", str(cfg), "--T", "4.0"]) == 0
    meta, cols = read_table(work / "c4_pulse.csv")
    assert cols["t"][-1] == 4.0 and meta["cfg.design.T"] == "4.0"


def test_scaling_analytic(work):
    assert main(["scaling", "--analytic", "--plot"]) == 0
    meta, cols = read_table(next(work.glob("*_scaling.csv")))
    assert float(meta["c1"]) == pytest.approx(-np.pi / 2, abs=1e-3)
    assert len(cols["x"]) == 201


def test_plot_command(work):
    main(["design", "--builder", "figure8"])
    assert main(["plot", "--input", "figure8_pulse.csv", "--x", "t", "--y", "omega", "--out", "o.svg"]) == 0
    ET.parse(work / "o.svg")
    assert main(["plot", "--input", "figure8_pulse.csv", "--x", "t", "--y", "nope"]) == 1


def test_design_with_gap(work, capsys):
    assert main(["design", "--builder", "linear", "--v", "2", "--T", "3", "--gap", "0.5", "--prefix", "g"]) == 0
    rep = _report(capsys.readouterr().out)
    assert float(rep["gap_delta"]) == 0.5 and rep["declared_order"] == "none"
    meta, _ = read_table(work / "g_pulse.csv")
    assert float(meta["delta"]) == 0.5
    assert main(["design", "--builder", "linear", "--gap", "-1"]) == 1
