from pathlib import Path

import numpy as np
import pytest

from wavefronts import emitters
from wavefronts.cli import parse_range, run
from wavefronts.errors import IoError


def test_parse_range_inclusive():
    vals = parse_range(" -2.8:-0.4:0.2")
    assert vals[0] == pytest.approx(-2.8)
    assert vals[-1] == pytest.approx(-0.4)
    assert len(vals) == 13


def test_verify_catalog_family(capsys):
    assert run(["verify", "--family", "cusp"]) == 0
    out = capsys.readouterr().out
    assert out.count("pass") == 3


def test_front_writes_csv_and_svg(tmp_path, capsys):
    csv = tmp_path / "front.csv"
    svg = tmp_path / "front.svg"
    code = run(
        ["front", "--family", "fold", "--t", "0.5", "--seed-density", "4",
         "--csv", str(csv), "--svg", str(svg)]
    )
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,x1,x2,q1,label"
    assert len(lines) > 10
    assert all(line.endswith(",front") for line in lines[1:])
    body = svg.read_text()
    assert body.startswith("<?xml")
    assert "<polyline" in body and 'class="front"' in body


def test_output_is_deterministic(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        run(["caustic", "--family", "cusp", "--seed-density", "3", "--csv", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_versal_subcommand(capsys):
    code = run(["versal", "--f", "q1^4", "--dfdx", "q1^2;q1", "--jet", "6"])
    assert code == 0
    out = capsys.readouterr().out
    assert "stability: pass" in out


def test_burgers_breaking_line(capsys):
    code = run(["burgers", "--t", "0:0.7:0.001", "--strips", "200", "--report-breaking"])
    assert code == 0
    out = capsys.readouterr().out
    assert "t* = 0.500" in out


def test_ode_gallery_svg(tmp_path):
    svg = tmp_path / "g4.svg"
    code = run(
        ["ode-gallery", "--germ", "4", "--t", " -0.3:0.3:0.3", "--seed-density", "4",
         "--svg", str(svg)]
    )
    assert code == 0
    body = svg.read_text()
    assert 'class="caustic"' in body and 'class="front"' in body


def test_parallels_svg(tmp_path):
    svg = tmp_path / "par.svg"
    code = run(
        ["parallels", "--curve", "ellipse", "--a", "2", "--b", "1",
         "--r", " -2.8:-0.4:0.4", "--svg", str(svg)]
    )
    assert code == 0
    assert svg.read_text().count("<polyline") >= 8


def test_unknown_family_exits_2(capsys):
    assert run(["front", "--family", "nope", "--t", "0"]) == 2
    assert "unknown family" in capsys.readouterr().err


def test_bad_range_exits_2():
    assert run(["big-front", "--family", "fold", "--t", "1:0:0.1"]) == 2


def test_module_error_exits_1(capsys):
    assert run(["ode-gallery", "--germ", "9", "--t", "0:1:1"]) == 1
    assert "UnknownGerm" in capsys.readouterr().err


def test_missing_subcommand_exits_2(capsys):
    assert run([]) == 2


def test_family_file_input(tmp_path):
    fam = tmp_path / "my.fam"
    fam.write_text(
        "k = 1\nn = 2\nexpr = q1^2 + x1*q1 + x2\n"
        "domain = [[-4, 4], [-6, 6], [-6, 6]]\nseeds = [[-1.0], [1.0]]\n"
    )
    assert run(["verify", "--family", str(fam)]) == 0


def test_emit_csv_empty_has_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emitters.emit_csv([], 3, 2, path)
    assert path.read_text() == "t,x1,x2,x3,q1,q2,label\n"


def test_emit_csv_rejects_non_finite(tmp_path):
    with pytest.raises(IoError):
        emitters.emit_csv([(np.nan, [0.0, 0.0], [0.0], "x")], 2, 1, tmp_path / "bad.csv")


def test_emit_svg_two_point_curve(tmp_path):
    path = tmp_path / "two.svg"
    emitters.emit_svg([(np.array([[0.0, 0.0], [1.0, 2.0]]), "front")], path)
    body = path.read_text()
    assert body.count("<polyline") == 1
    # y axis flipped
    assert 'points="0,0 1,-2"' in body


def test_emit_svg_rejects_unknown_class(tmp_path):
    with pytest.raises(IoError):
        emitters.emit_svg([(np.zeros((2, 2)), "bogus")], tmp_path / "bad.svg")
