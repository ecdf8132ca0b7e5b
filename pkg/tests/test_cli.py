import io
import math
from contextlib import redirect_stdout

import pytest

from flatsphere.cli import generate_surface, main, saddles_csv, trajectory_svg
from flatsphere.curvature import curvature_gap
from flatsphere.geodesic import PointAnchor, trace
from flatsphere.surface import cone_data, parse_surface, serialize_surface


def run_cli(args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


@pytest.fixture()
def equilateral_file(tmp_path, equilateral):
    path = tmp_path / "eq.fsph"
    path.write_text(serialize_surface(equilateral))
    return str(path)


def test_info_output(equilateral_file):
    code, out = run_cli(["info", equilateral_file])
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert lines["n"] == "3"
    assert lines["gap"] == "0.333333"
    assert lines["area"] == "0.866025"
    assert all(a == "2.094395" for a in lines["angles"].split(","))


def test_validate_pass_and_fail(equilateral_file, tmp_path):
    code, out = run_cli(["validate", equilateral_file])
    assert code == 0
    assert "gauss-bonnet=pass" in out
    bad = tmp_path / "bad.fsph"
    bad.write_text("fsph 1\nt 0 1 1 1\nt 1 1 1.1 1\n"
                   "g 0 0 1 2\ng 0 1 1 1\ng 0 2 1 0\n")
    code, out = run_cli(["validate", str(bad)])
    assert code == 1
    assert "fail" in out


def test_gap_command():
    code, out = run_cli(["gap", "--curvatures", "0.5,0.5,0.5,0.5"])
    assert code == 0
    assert out.strip() == "gap=0"


def test_bounds_command():
    code, out = run_cli(["bounds", "--n", "3", "--delta", "0.3333333", "--k", "0"])
    assert code == 0
    values = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert float(values["simple_count_bound"]) == pytest.approx(51914.5, rel=1e-4)
    assert float(values["simple_length_bound"]) == pytest.approx(81.87, abs=0.01)
    assert float(values["comb_length_bound"]) == pytest.approx(45.0, rel=1e-5)


def test_annulus_command():
    code, out = run_cli([
        "annulus", "--R", "1", "--Rp", "2", "--theta", "1.0",
        "--alpha", str(math.pi / 3),
    ])
    assert code == 0
    assert "modulus=0.69314718056" in out
    assert "regime=outer-returns-outer" in out


def test_missing_file_exits_2():
    code, _ = run_cli(["verify", "/nonexistent/file.fsph"])
    assert code == 2


def test_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.fsph"
    bad.write_text("not a surface\n")
    code, _ = run_cli(["validate", str(bad)])
    assert code == 2


def test_unknown_flag_exits_2(equilateral_file):
    with pytest.raises(SystemExit) as err:
        main(["info", equilateral_file, "--bogus"])
    assert err.value.code == 2


def test_delaunay_command_roundtrip(tmp_path):
    src = tmp_path / "obtuse.fsph"
    from flatsphere.surface import generate_doubled_polygon

    s = generate_doubled_polygon([(0, 0), (1, 0), (0.5, 0.2)])
    src.write_text(serialize_surface(s))
    out_path = tmp_path / "flat.fsph"
    code, out = run_cli([
        "delaunay", str(src), "--out", str(out_path), "--report",
    ])
    assert code == 0
    assert "flips=1" in out
    flat = parse_surface(out_path.read_text())
    assert flat.num_triangles == 2


def test_trace_command_with_svg(equilateral_file, tmp_path):
    svg = tmp_path / "out.svg"
    code, out = run_cli([
        "trace", equilateral_file, "--triangle", "0", "--bary", "0.4,0.4",
        "--angle", "0.7", "--max-length", "4.0", "--svg", str(svg),
    ])
    assert code == 0
    values = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert values["status"] in ("completed", "hit-vertex")
    text = svg.read_text()
    assert text.startswith("<?xml")
    assert "<polyline" in text
    assert text.count("<polygon") >= 1


def test_saddles_csv_shape(equilateral):
    csv, complete = saddles_csv(equilateral, 1.8)
    assert complete
    lines = csv.strip().splitlines()
    assert lines[0] == (
        "length,crossings,self_intersections,start_vertex,end_vertex,"
        "normal_coordinate"
    )
    assert len(lines) == 7
    edge_rows = [l for l in lines[1:] if l.endswith(",edge")]
    assert len(edge_rows) == 3
    for line in lines[4:]:
        assert line.split(",")[1] == "1"


def test_saddles_command_to_file(equilateral_file, tmp_path):
    out_path = tmp_path / "saddles.csv"
    code, _ = run_cli([
        "saddles", equilateral_file, "--max-length", "1.8",
        "--out", str(out_path),
    ])
    assert code == 0
    assert out_path.read_text().count("\n") == 7


def test_generate_deterministic_and_seeded():
    a = generate_surface(seed=3, vertices=5)
    b = generate_surface(seed=3, vertices=5)
    c = generate_surface(seed=4, vertices=5)
    assert serialize_surface(a) == serialize_surface(b)
    assert serialize_surface(a) != serialize_surface(c)
    assert curvature_gap([p.curvature for p in cone_data(a)]) > 0.01


def test_generate_cli_pipes_into_verify(tmp_path):
    for seed in (1, 2, 3):
        code, fsph = run_cli(["generate", "--seed", str(seed), "--vertices", "4"])
        assert code == 0
        path = tmp_path / f"gen{seed}.fsph"
        path.write_text(fsph)
        code, out = run_cli([
            "verify", str(path), "--budget-nodes", "40000",
            "--max-length", "2.5",
        ])
        assert code == 0, out


def test_verify_zero_gap_refused(tmp_path, square):
    path = tmp_path / "square.fsph"
    path.write_text(serialize_surface(square))
    code, out = run_cli(["verify", str(path)])
    assert code == 1
    assert "refused" in out


def test_svg_is_deterministic(equilateral):
    traj = trace(equilateral, PointAnchor(0, complex(0.3, 0.2)), 0.9, 3.0)
    assert trajectory_svg(traj) == trajectory_svg(traj)
