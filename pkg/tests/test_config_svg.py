import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lzsweep.config import JobConfig, ensure_writable, parse_removals
from lzsweep.errors import InputError
from lzsweep.svg import Series, line_plot

NS = "{http://www.w3.org/2000/svg}"


def test_flag_beats_file_beats_default(tmp_path):
    p = tmp_path / "job.ini"
    p.write_text("[Design]\nV = 2.5\nbuilder = figure8\n[smoothing]\nremove = [(1.0, 3, 3)]\nflag = yes\n")
    cfg = JobConfig.load(p)
    assert cfg.value("design", "v", None, 1.0, float) == 2.5
    assert cfg.value("design", "v", 4.0, 1.0, float) == 4.0
    assert cfg.value("design", "T", None, 7.0, float) == 7.0
    assert cfg.value("smoothing", "remove", kind="removals") == ((1.0, 3, 3),)
    assert cfg.value("smoothing", "flag", kind=bool) is True
    prov = cfg.provenance()
    assert prov["cfg.source"] == str(p) and prov["cfg.design.v"] == "4.0"
    assert prov["cfg.smoothing.remove"] == "1.0 3 3"


def test_config_errors(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        JobConfig.load(tmp_path / "missing.ini")
    p = tmp_path / "bad.ini"
    p.write_text("no section\n")
    with pytest.raises(InputError, match="malformed"):
        JobConfig.load(p)
    p.write_text("[a]\nx = abc\n")
    with pytest.raises(InputError, match="a.x"):
        JobConfig.load(p).value("a", "x", kind=float)
    assert JobConfig.load(None).provenance() == {"cfg.source": "none"}


def test_parse_removals():
    assert parse_removals("(2.0, 1, 4)") == ((2.0, 1, 4),)
    assert parse_removals("[(1, 2, 3), [4.5, 0, 1]]") == ((1.0, 2, 3), (4.5, 0, 1))
    for bad in ("[(1, 2)]", "__import__('os')", "[1, 2, 3]"):
        with pytest.raises(InputError):
            parse_removals(bad)


def test_ensure_writable(tmp_path):
    assert ensure_writable(tmp_path / "x.csv") == tmp_path / "x.csv"
    with pytest.raises(InputError):
        ensure_writable(tmp_path / "nope" / "x.csv")
    with pytest.raises(InputError):
        ensure_writable(tmp_path)


def test_svg_is_well_formed(tmp_path):
    x = np.geomspace(1e-4, 1e-1, 13)
    p = line_plot(tmp_path / "p.svg", [Series("a<b", x, x**2), ("c & d", x, np.where(x > 1e-3, x, 0.0))],
                  "delta", "p_lz", "title", logx=True, logy=True)
    root = ET.parse(p).getroot()
    assert root.tag == NS + "svg"
    lines = root.findall(NS + "polyline")
    assert len(lines) == 2
    # the zero values are skipped on the log axis
    assert len(lines[1].get("points").split()) == int(np.sum(x > 1e-3))
    texts = [t.text for t in root.iter(NS + "text")]
    assert "a<b" in texts and "c & d" in texts and "1e-4" in texts


def test_svg_linear_axes_and_errors(tmp_path):
    p = line_plot(tmp_path / "p.svg", [("flat", [0, 1, 2], [3, 3, 3])])
    ET.parse(p)
    with pytest.raises(InputError):
        line_plot(tmp_path / "q.svg", [])
    with pytest.raises(InputError):
        line_plot(tmp_path / "q.svg", [("x", [1, 2], [1])])
    with pytest.raises(InputError):
        line_plot(tmp_path / "q.svg", [("x", [1, 2], [0, -1])], logy=True)
