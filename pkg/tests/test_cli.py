import json

import pytest

from rigidlift.cli import main
from rigidlift.divisor import Divisor
from rigidlift.errors import ParseError, ValidationError
from rigidlift.graphio import (
    fixture_path,
    format_divisor,
    format_orientation,
    parse_divisor,
    parse_graph,
    parse_orientation,
)
from rigidlift.orientation import EdgeState, base_orientation


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestGraphFormat:
    def test_parse_round_trip(self, K):
        text = "\n".join(
            [f"edge {e} {K.o(e)} {K.t(e)}" for e in K.edge_ids] + ["base r1"]
        )
        assert parse_graph(text) == K

    def test_comments_and_blank_lines(self):
        text = """
        # a triangle
        edge e1 a b   # first
        edge e2 b c
        edge e3 c a
        edge e4 a b
        base e1
        """
        g = parse_graph(text)
        assert g.genus == 2

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_graph("edge e1 a b\nedge e2 a\nbase e1")
        with pytest.raises(ParseError, match="line 3"):
            parse_graph("edge e1 a b\nedge e2 b a\nwhat e3")
        with pytest.raises(ParseError, match="missing base"):
            parse_graph("edge e1 a b\nedge e2 b a")
        with pytest.raises(ParseError, match="duplicate base"):
            parse_graph("edge e1 a b\nedge e2 b a\nbase e1\nbase e2")

    def test_build_errors_become_validation_errors(self):
        with pytest.raises(ValidationError):
            parse_graph("edge e1 a a\nedge e2 a b\nbase e1")


class TestDivisorFormat:
    def test_round_trip(self, K):
        d = Divisor(K, {"w1": 2, "w3": -5})
        assert parse_divisor(K, format_divisor(d)) == d

    def test_leading_keyword_optional(self, K):
        assert parse_divisor(K, "w1:1 w2:-1") == parse_divisor(K, "div w1:1 w2:-1")

    def test_zero_divisor(self, K):
        assert format_divisor(Divisor(K)) == "div"
        assert parse_divisor(K, "div") == Divisor(K)

    def test_repeated_vertices_accumulate(self, K):
        assert parse_divisor(K, "w1:1 w1:2") == Divisor(K, {"w1": 3})

    def test_unknown_vertex_rejected(self, K):
        with pytest.raises(ValidationError):
            parse_divisor(K, "nope:1")

    def test_bad_coefficient_rejected(self, K):
        with pytest.raises(ParseError):
            parse_divisor(K, "w1:x")


class TestOrientationFormat:
    def test_round_trip(self, K):
        u = base_orientation(K).with_states(
            {"r2": EdgeState.UNORIENTED, "r3": EdgeState.BACKWARD}
        )
        assert parse_orientation(K, format_orientation(u)) == u

    def test_bioriented_state(self, K):
        u = parse_orientation(K, "r1:X r2:F r3:F r4:F r5:F r6:F")
        assert u.state("r1") is EdgeState.BIORIENTED

    def test_unknown_edge_rejected(self, K):
        with pytest.raises(ValidationError):
            parse_orientation(K, "zz:F")


class TestCliInfo:
    def test_info_reports_invariants(self, capsys):
        code, out = run(capsys, ["--no-timings", "info", fixture_path("G.graph")])
        assert code == 0
        assert out["schema"] == "1"
        assert out["genus"] == 3
        assert out["is_2_connected"] is True
        assert out["edge_connectivity"] == 2
        assert out["spanning_trees"] == 16
        blocks = {frozenset(b) for b in out["series_classes"]}
        assert frozenset({"e3", "e6", "e7"}) in blocks

    def test_missing_file_is_input_error(self, capsys):
        code, out = run(capsys, ["--no-timings", "info", "/nonexistent.graph"])
        assert code == 2
        assert "error" in out

    def test_timings_included_by_default(self, capsys):
        code, out = run(capsys, ["info", fixture_path("K.graph")])
        assert code == 0
        assert "timings" in out

    def test_no_timings_output_is_deterministic(self, capsys):
        _, out1 = run(capsys, ["--no-timings", "info", fixture_path("K.graph")])
        _, out2 = run(capsys, ["--no-timings", "info", fixture_path("K.graph")])
        assert out1 == out2


class TestCliRigidity:
    def test_rigid_pair_produces_lift(self, capsys):
        code, out = run(
            capsys, ["--no-timings", "rigidity", fixture_path("GH.morphism.json")]
        )
        assert code == 0
        assert out["is_rigid"] is True
        assert out["signs"] == {
            "e1": 1, "e2": 1, "e3": -1, "e4": -1, "e5": 1, "e6": -1, "e7": 1,
        }
        assert out["rigidity_divisor"]["representative"] == "div"
        assert out["lift"]["vertex_map"] == {
            "v1": "w2", "v2": "w1", "v3": "w5", "v4": "w4", "v5": "w3",
        }

    def test_non_rigid_pair_produces_witness(self, capsys):
        code, out = run(
            capsys, ["--no-timings", "rigidity", fixture_path("JK.morphism.json")]
        )
        assert code == 0
        assert out["is_rigid"] is False
        assert "witness" in out
        assert out["witness"]["theta_element"]["degree"] == 0

    def test_expect_rigid_fails_on_non_rigid(self, capsys):
        code, _ = run(
            capsys,
            [
                "--no-timings",
                "rigidity",
                fixture_path("JK.morphism.json"),
                "--expect-rigid",
            ],
        )
        assert code == 1


class TestCliLiftMatroid:
    def test_liftable(self, capsys, tmp_path):
        map_file = tmp_path / "map.json"
        map_file.write_text(
            json.dumps({"edge_map": {f"e{i}": f"r{i}" for i in range(1, 8)}})
        )
        code, out = run(
            capsys,
            [
                "--no-timings",
                "lift-matroid",
                fixture_path("G.graph"),
                fixture_path("H.graph"),
                str(map_file),
            ],
        )
        assert code == 0
        assert out["liftable"] is True
        assert sorted(out["vertex_map"].values()) == ["w1", "w2", "w3", "w4", "w5"]

    def test_bare_map_accepted(self, capsys, tmp_path):
        map_file = tmp_path / "map.json"
        map_file.write_text(json.dumps({f"e{i}": f"r{i}" for i in range(1, 8)}))
        code, out = run(
            capsys,
            [
                "--no-timings",
                "lift-matroid",
                fixture_path("G.graph"),
                fixture_path("H.graph"),
                str(map_file),
            ],
        )
        assert code == 0 and out["liftable"] is True

    def test_not_liftable_is_domain_error(self, capsys, tmp_path):
        map_file = tmp_path / "map.json"
        map_file.write_text(
            json.dumps({"edge_map": {f"e{i}": f"r{i}" for i in range(1, 7)}})
        )
        code, out = run(
            capsys,
            [
                "--no-timings",
                "lift-matroid",
                fixture_path("J.graph"),
                fixture_path("K.graph"),
                str(map_file),
            ],
        )
        assert code == 1
        assert out["liftable"] is False
        assert set(out["tried"]) == {"r1", "r4"}

    def test_invalid_json_is_input_error(self, capsys, tmp_path):
        map_file = tmp_path / "map.json"
        map_file.write_text("{nope")
        code, _ = run(
            capsys,
            [
                "--no-timings",
                "lift-matroid",
                fixture_path("J.graph"),
                fixture_path("K.graph"),
                str(map_file),
            ],
        )
        assert code == 2


class TestCliDivisor:
    def test_reduce_worked_example(self, capsys):
        code, out = run(
            capsys,
            [
                "--no-timings",
                "divisor",
                fixture_path("K.graph"),
                "reduce",
                "w2:1 w3:3 w4:-4",
                "--q",
                "w4",
            ],
        )
        assert code == 0
        assert out["reduced"] == "div w1:1 w3:1 w4:-2"

    def test_effective(self, capsys):
        code, out = run(
            capsys,
            ["--no-timings", "divisor", fixture_path("K.graph"), "effective", "w1:1"],
        )
        assert code == 0 and out["effective_class"] is True

    def test_classify(self, capsys):
        code, out = run(
            capsys,
            [
                "--no-timings",
                "divisor",
                fixture_path("K.graph"),
                "classify",
                "w3:1 w4:1",
            ],
        )
        assert code == 0 and out["classification"] == "Special"

    def test_theta_count(self, capsys):
        code, out = run(
            capsys, ["--no-timings", "divisor", fixture_path("K.graph"), "theta"]
        )
        assert code == 0
        assert out["count"] == 9
        assert len(out["theta"]) == 9

    def test_wrong_degree_is_domain_error(self, capsys):
        code, out = run(
            capsys,
            ["--no-timings", "divisor", fixture_path("K.graph"), "classify", "w1:1"],
        )
        assert code == 1 and out["error"]["type"] == "WrongDegree"

    def test_bad_divisor_string_is_input_error(self, capsys):
        code, _ = run(
            capsys,
            ["--no-timings", "divisor", fixture_path("K.graph"), "reduce", "w1"],
        )
        assert code == 2

    def test_max_classes_env_is_honoured(self, capsys, monkeypatch):
        monkeypatch.setenv("RIGIDLIFT_MAX_CLASSES", "3")
        code, out = run(
            capsys, ["--no-timings", "divisor", fixture_path("K.graph"), "theta"]
        )
        assert code == 1
        assert out["error"]["type"] == "EnumerationBoundExceeded"

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("RIGIDLIFT_MAX_CLASSES", "3")
        code, out = run(
            capsys,
            [
                "--no-timings",
                "--max-classes",
                "1000000",
                "divisor",
                fixture_path("K.graph"),
                "theta",
            ],
        )
        assert code == 0 and out["count"] == 9


class TestCliOrient:
    def test_chern(self, capsys):
        code, out = run(
            capsys,
            [
                "--no-timings",
                "orient",
                fixture_path("K.graph"),
                "chern",
                "r1:F r2:F r3:F r4:F r5:F r6:F",
            ],
        )
        assert code == 0
        assert out["chern_class"] == "div w3:1 w4:1"

    def test_liftdiv_success(self, capsys):
        code, out = run(
            capsys,
            ["--no-timings", "orient", fixture_path("K.graph"), "liftdiv", "w1:2"],
        )
        assert code == 0
        assert "orientation" in out

    def test_liftdiv_with_unoriented_set(self, capsys):
        code, out = run(
            capsys,
            [
                "--no-timings",
                "orient",
                fixture_path("K.graph"),
                "liftdiv",
                "w1:-1",
                "--unoriented",
                "r2,r3,r5",
            ],
        )
        assert code == 0
        orient = parse_orientation(
            __import__("rigidlift.graphio", fromlist=["load_fixture"]).load_fixture(
                "K.graph"
            ),
            out["orientation"],
        )
        assert orient.unoriented_set == frozenset({"r2", "r3", "r5"})

    def test_liftdiv_certificate_is_domain_error(self, capsys):
        code, out = run(
            capsys,
            [
                "--no-timings",
                "orient",
                fixture_path("K.graph"),
                "liftdiv",
                "w1:-3 w3:1",
                "--unoriented",
                "r2,r3,r5,r6",
            ],
        )
        assert code == 1
        assert out["not_partially_orientable"] is True
        assert out["class_partially_orientable"] is False

    def test_certify_branches(self, capsys):
        code, out = run(
            capsys,
            ["--no-timings", "orient", fixture_path("K.graph"), "certify", "w3:1 w4:1"],
        )
        assert code == 0 and out["branch"] == "sourceless"
        code, out = run(
            capsys,
            [
                "--no-timings",
                "orient",
                fixture_path("K.graph"),
                "certify",
                "w1:-2 w2:1 w3:2 w4:1",
            ],
        )
        assert code == 0 and out["branch"] == "acyclic"


class TestCliSelftest:
    def test_selftest_passes(self, capsys):
        code, out = run(capsys, ["--no-timings", "selftest"])
        assert code == 0
        assert out["ok"] is True
        assert all(out["checks"].values())
