import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from yao4 import analysis as an
from yao4 import io
from yao4.build import PointSet, build_optimized
from yao4.cli import main
from yao4.generators import gen_random
from yao4.svg import render_svg


@st.composite
def scaled_sets(draw):
    scale = draw(st.integers(0, 12))
    pts = draw(
        st.lists(
            st.tuples(st.integers(-10**15, 10**15), st.integers(-10**15, 10**15)), min_size=0, max_size=20, unique=True
        )
    )
    return PointSet.from_coords(pts, scale=scale)


# -- point files -----------------------------------------------------------


@given(scaled_sets())
def test_point_file_round_trip(ps):
    text = io.serialize_point_set(ps)
    back = io.parse_point_set(text)
    assert back == ps
    assert io.serialize_point_set(back) == text


def test_parse_defaults_and_decimals():
    ps = io.parse_point_set("0,1.5,-2\n1,0.000000001,3\n")
    assert ps.scale == io.DEFAULT_SCALE
    assert ps[0] == (1_500_000_000, -2_000_000_000)
    assert ps[1] == (1, 3_000_000_000)
    ps = io.parse_point_set("# scale=2\n# a comment\n\n0,-0.25,1e1\n")
    assert ps[0] == (-25, 1000)


@pytest.mark.parametrize(
    "text",
    [
        "# scale=1\n0,0.25,1\n",  # too many decimals
        "0,1,2\n2,3,4\n",  # index gap
        "0,1\n",  # missing field
        "0,a,1\n",
        "0,nan,1\n",
        "x,1,1\n",
        "0,1,1\n# scale=2\n",  # header after records
        "# scale=-1\n",
        "# scale=q\n",
        "0,1,1\n1,1,1\n",  # duplicate point
    ],
)
def test_parse_errors(text):
    with pytest.raises(io.ParseError):
        io.parse_point_set(text)


def test_landmark_sidecar(tmp_path):
    path = tmp_path / "pts.csv"
    assert io.read_landmarks(path) is None
    side = io.write_landmarks(path, {"b": 2, "a": 0})
    assert side.name == "pts.landmarks.json"
    assert io.read_landmarks(path) == {"a": 0, "b": 2}


# -- report JSON -----------------------------------------------------------


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip_exactly(x):
    doc = {"schema": io.SCHEMA, "v": x}
    assert json.loads(io.dumps_report(doc))["v"] == x


def test_float_formatting():
    out = io.dumps_report({"a": 1.0, "b": 0.1, "c": math.inf, "d": [1, 2.5], "e": None, "f": True})
    doc = json.loads(out)
    assert doc == {"a": 1.0, "b": 0.1, "c": None, "d": [1, 2.5], "e": None, "f": True}
    assert '"b": 0.10000000000000001' in out
    assert '"a": 1.0' in out
    assert list(doc) == ["a", "b", "c", "d", "e", "f"]


def test_loads_report_checks_schema():
    with pytest.raises(io.ParseError):
        io.loads_report('{"schema": "other"}')


def test_report_doc_round_trip_and_determinism():
    ps = gen_random(25, 2).point_set
    g = build_optimized(ps, {0, 1})
    analyses = {
        "crossings": io.crossings_doc(an.find_crossings(g)),
        "components": io.components_doc(an.connected_components(g)),
        "stretch": io.stretch_doc(an.undirected_stretch(g)),
        "dilation": io.dilation_doc(an.directed_path_dilation(g)),
        "matrix": io.matrix_doc(an.property_matrix(ps)),
    }
    doc = io.report_doc(g, analyses)
    text = io.dumps_report(doc)
    assert io.loads_report(text) == json.loads(json.dumps(doc))
    assert io.dumps_report(io.loads_report(text)) == text
    assert text == io.dumps_report(io.report_doc(build_optimized(ps, {0, 1}), analyses))
    assert doc["point_set"]["digest"] == io.digest(ps)
    assert len(doc["edges"]) == g.edge_count
    assert doc["analyses"]["components"]["component_count"] == 1


# -- SVG -------------------------------------------------------------------


def test_svg_deterministic_with_panels():
    ps = gen_random(40, 7).point_set
    graphs = [build_optimized(ps, lam) for lam in ({0}, {1}, {0, 1})]
    a = render_svg(graphs, {"top": 3})
    assert a == render_svg([build_optimized(ps, lam) for lam in ({0}, {1}, {0, 1})], {"top": 3})
    assert a.count('class="panel"') == 3
    assert "Y4^{0,1}" in a and ">top<" in a


def test_svg_empty_graph_draws_dots_only():
    ps = PointSet.from_coords([(0, 5), (1, 4), (2, 3)])
    svg = render_svg([build_optimized(ps, {0})])
    assert "<line" not in svg
    assert svg.count('fill="black"') == 3


def test_svg_highlights_crossing():
    ps = PointSet.from_coords([(749, 793), (835, 583), (75, 165), (797, 160)])
    svg = render_svg([build_optimized(ps, {0, 1})])
    assert 'stroke="#e377c2" stroke-width="5"' in svg
    assert "<circle" in svg and 'r="4"' in svg


# -- CLI -------------------------------------------------------------------


def test_cli_gen_and_analyze(tmp_path, capsys):
    pts = tmp_path / "r.csv"
    assert main(["gen", "random", "--n", "40", "--seed", "7", "-o", str(pts)]) == 0
    out = capsys.readouterr().out
    assert "verdict: verified" in out
    assert len(io.read_point_set(pts)) == 40
    assert io.read_landmarks(pts)["top"] >= 0

    rep = tmp_path / "r.json"
    assert main(["analyze", str(pts), "--lambda", "0", "--check", "-o", str(rep)]) == 0
    doc = io.loads_report(rep.read_text())
    assert doc["analyses"]["crossings"]["count"] == 0
    assert doc["landmarks"] == io.read_landmarks(pts)
    assert doc["warnings"] == []

    assert main(["analyze", str(pts), "--lambda", "0,1", "--check", "-o", str(rep)]) == 0
    assert io.loads_report(rep.read_text())["analyses"]["components"]["component_count"] == 1

    assert main(["analyze", str(pts), "--lambda", "0,1,2,3", "--matrix", "-o", str(rep)]) == 0
    first = rep.read_text()
    rows = io.loads_report(first)["analyses"]["matrix"]["rows"]
    assert [r["lambda"] for r in rows] == [[0], [1], [2], [3], [0, 1], [1, 2], [2, 3], [0, 3]]
    assert main(["analyze", str(pts), "--lambda", "0,1,2,3", "--matrix", "-o", str(rep)]) == 0
    assert rep.read_text() == first


def test_cli_analyze_stdout_and_subset(tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pts.write_text("# scale=0\n0,0,0\n1,3,1\n2,1,4\n")
    assert main(["analyze", str(pts), "--lambda", "0", "--analyses", "crossings"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert list(doc["analyses"]) == ["crossings"]


def test_cli_dirty_input_downgrades_to_warnings(tmp_path, capsys):
    pts = tmp_path / "grid.csv"
    pts.write_text("# scale=0\n" + "".join(f"{k},{k % 3},{k // 3}\n" for k in range(9)))
    assert main(["analyze", str(pts), "--lambda", "0,1", "--check", "-o", str(tmp_path / "g.json")]) == 0
    doc = io.loads_report((tmp_path / "g.json").read_text())
    assert not doc["general_position"]["clean"]
    assert doc["warnings"]
    assert "warning" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "MISSING", "--lambda", "0"],
        ["analyze", "BAD", "--lambda", "7"],
        ["analyze", "BAD", "--analyses", "nope"],
        ["gen", "negline", "--n", "1"],
        ["gen", "lambda", "--w", "5", "--h", "1"],
        ["frobnicate"],
        ["gen", "nosuchfamily"],
    ],
)
def test_cli_usage_errors_exit_2(tmp_path, argv, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "BAD").write_text("0,0,0\n1,1,2\n")
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects unknown commands itself
        code = exc.code
    assert code == 2


def test_cli_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1,1\n5,2,2\n")
    assert main(["analyze", str(bad)]) == 2
    assert main(["render", str(bad)]) == 2


def test_cli_search_exhausted_exit_1(tmp_path):
    assert main(["gen", "crossing", "--max-tries", "3", "-o", str(tmp_path / "c.csv")]) == 1
    assert not (tmp_path / "c.csv").exists()


@pytest.mark.parametrize(
    "family, extra",
    [("negline", ["--n", "8"]), ("lambda", ["--n", "30", "--h", "10"]), ("tower", ["--t", "10"]), ("crossing", []), ("staircase", ["--m", "12"])],
)
def test_cli_gen_families(tmp_path, capsys, family, extra):
    out = tmp_path / f"{family}.csv"
    assert main(["gen", family, "-o", str(out), *extra]) == 0
    text = capsys.readouterr().out
    assert "claim:" in text and "verdict: verified" in text
    assert io.read_point_set(out).validation.clean


def test_cli_render(tmp_path):
    pts = tmp_path / "r.csv"
    main(["gen", "random", "--n", "40", "--seed", "7", "-o", str(pts)])
    svg = tmp_path / "r.svg"
    assert main(["render", str(pts), "-o", str(svg)]) == 0
    first = svg.read_text()
    assert first.count('class="panel"') == 3
    assert main(["render", str(pts), "--lambda", "0", "--lambda", "2,3"]) == 0
    assert (tmp_path / "r.svg").read_text().count('class="panel"') == 2


def test_threads_env_does_not_change_reports(tmp_path, monkeypatch):
    pts = tmp_path / "r.csv"
    main(["gen", "random", "--n", "300", "--seed", "1", "-o", str(pts)])
    outs = []
    for threads in ("1", "0", "3"):
        monkeypatch.setenv("YAO4_THREADS", threads)
        rep = tmp_path / f"{threads}.json"
        assert main(["analyze", str(pts), "--analyses", "crossings", "--check", "-o", str(rep)]) == 0
        outs.append(rep.read_text())
    assert outs[0] == outs[1] == outs[2]


def test_cli_reproduce_small(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["reproduce", str(a), "--seeds", "3", "--equivalence-sets", "5"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "BAD" not in out
    assert main(["reproduce", str(b), "--seeds", "3", "--equivalence-sets", "5"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert "summary.json" in names and "tower.report.json" in names
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert main(["reproduce", str(b), "--seeds", "0"]) == 2
