import io
import json
import subprocess
import sys

import jsonschema
import pytest

from l2tt import catalog
from l2tt.cli import run
from l2tt.dsl import build, load, parse, render
from l2tt.errors import ParseError, StructuralError
from l2tt.morphism import validate

SCHEMA = json.loads(catalog.schema_text())

WRONG_VERTEX = """\
graph:
  vertex v
  vertex w
  edge a = v -> w
  edge b = v -> w
  edge c = v -> w

marking:
  basepoint v
  tree b

map:
  v -> v
  w -> w
  a -> a
  b -> b
  c -> a^-1
"""


class TestParse:
    @pytest.mark.parametrize("name", catalog.names())
    def test_roundtrip_bytes(self, name):
        text = catalog.text(name)
        assert render(parse(text)) == text

    def test_theta_data(self):
        doc = parse(catalog.text("theta"))
        assert doc.vertices == ["v", "w"]
        assert doc.edges == [("a", "v", "w"), ("b", "v", "w"), ("c", "v", "w")]
        assert doc.tree == ["b"]
        assert doc.edge_images == {"a": [("b", -1)], "b": [("c", -1)], "c": [("a", -1)]}
        assert doc.vertex_images == {"v": "w", "w": "v"}
        assert doc.connecting_path == [("b", 1)]

    def test_dkl_data(self):
        doc = parse(catalog.text("dkl"))
        assert doc.tree == ["a"]
        assert doc.edge_images["d"] == [("c", -1), ("a", 1), ("b", -1), ("d", 1), ("a", -1), ("b", 1)]
        assert doc.edge_images["c"] == [("b", 1), ("a", -1)]

    def test_comments_and_blank_lines(self):
        text = "graph:  # the graph\n  vertex v\n\n  edge a = v -> v  # loop\n  edge b = v -> v\nmap:\n  v -> v\n  a -> a\n  b -> b a\n"
        doc = parse(text)
        assert doc.edge_images["b"] == [("b", 1), ("a", 1)]

    def test_empty_path(self):
        text = "graph:\n  vertex v\n  edge a = v -> v\n  edge b = v -> v\nmap:\n  v -> v\n  a -> a\n  b -> b\n  p .\n"
        assert parse(text).connecting_path == []

    @pytest.mark.parametrize(
        ("text", "line", "column", "fragment"),
        [
            ("graph:\n  vertex v\n  bogus x\n", 3, 3, "unknown token"),
            ("graph:\n  vertex v\n  edge a = v -> q\n", 3, 17, "undeclared vertex"),
            ("graph:\n  vertex v\n  vertex v\n", 3, 10, "duplicate name"),
            ("graph:\n  vertex v\n  edge v = v -> v\n", 3, 8, "duplicate name"),
            ("vertex v\n", 1, 1, "outside any section"),
            ("graph:\n  vertex v\n  edge a = v -> v\nmap:\n  v -> v\n  a -> z\n", 6, 8, "undeclared edge"),
        ],
    )
    def test_errors_located(self, text, line, column, fragment):
        with pytest.raises(ParseError) as info:
            parse(text)
        err = info.value
        assert (err.line, err.column) == (line, column)
        assert fragment in str(err) and str(err).startswith(f"line {line}, column {column}")

    def test_missing_image(self):
        with pytest.raises(ParseError, match="no image for edge b"):
            parse("graph:\n  vertex v\n  edge a = v -> v\n  edge b = v -> v\nmap:\n  v -> v\n  a -> a\n")

    def test_wrong_start_names_edge(self):
        doc = parse(WRONG_VERTEX)
        with pytest.raises(StructuralError, match="edge c"):
            build(doc)

    def test_wrong_end_names_edge(self):
        problem = load(WRONG_VERTEX.replace("c -> a^-1", "c -> a b^-1"))
        with pytest.raises(StructuralError, match="edge c"):
            validate(problem.morphism)

    def test_missing_connecting_path(self):
        text = catalog.text("theta").replace("  p b\n", "")
        with pytest.raises(StructuralError, match="connecting path"):
            load(text)


@pytest.fixture
def dumped(tmp_path):
    assert run(["examples", "--dump", str(tmp_path / "examples")]) == 0
    return tmp_path / "examples"


class TestCommands:
    def test_bound_outputs(self, dumped, capsys):
        capsys.readouterr()
        assert run(["bound", str(dumped / "dkl.ttmap")]) == 0
        assert capsys.readouterr().out == "3.525494348\n"
        assert run(["bound", str(dumped / "theta.ttmap")]) == 0
        assert capsys.readouterr().out == "0\n"

    def test_bound_at_power_lines(self, capsys):
        assert run(["bound", "dkl", "--bound-at-power", "10", "40"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "3.525494348" and lines[1].startswith("k=10: ") and lines[2].startswith("k=40: ")

    def test_bound_json(self, capsys):
        assert run(["bound", "golden", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["bound_nats"] == pytest.approx(0.962423650119)

    def test_report_schema(self, dumped, capsys):
        capsys.readouterr()
        assert run(["report", str(dumped / "dkl.ttmap"), "--jacobians", "--chain-rule", "2", "--bound-at-power", "20"]) == 0
        out = capsys.readouterr().out
        assert "x3 - x3*x1*x2" in out
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert doc["schema"] == "l2tt.report/1"
        assert doc["checks"]["chain_rule"] == {"k": 2, "pass": True}
        assert doc["input_echo"] == (dumped / "dkl.ttmap").read_text()

    @pytest.mark.parametrize("name", catalog.names())
    def test_every_report_valid(self, name, capsys):
        assert run(["report", name]) == 0
        jsonschema.validate(json.loads(capsys.readouterr().out), SCHEMA)

    def test_strata_and_jacobian_text(self, capsys):
        assert run(["strata", "theta"]) == 0
        out = capsys.readouterr().out
        assert "f^2" in out and "lambda = 1 exactly" in out
        assert run(["jacobian", "dkl"]) == 0
        out = capsys.readouterr().out
        assert "x1 -> x2, x2 -> x3*x1*x2*x1^-1*x2^-1, x3 -> x1" in out
        assert "-x3*x1 + x3*x1*x2" in out

    def test_validate(self, capsys):
        assert run(["validate", "dkl"]) == 0
        assert capsys.readouterr().out.startswith("valid: 2 vertices, 4 edges, rank 3")

    def test_examples_listing(self, capsys):
        assert run(["examples"]) == 0
        out = capsys.readouterr().out
        assert all(name in out for name in catalog.names())
        assert run(["examples", "golden"]) == 0
        assert capsys.readouterr().out == catalog.text("golden")


class TestExitCodes:
    def test_validation_failure(self, tmp_path, capsys):
        path = tmp_path / "bad.ttmap"
        path.write_text(WRONG_VERTEX)
        assert run(["validate", str(path)]) == 1
        captured = capsys.readouterr()
        assert captured.out == "" and "edge c" in captured.err

    def test_parse_failure(self, tmp_path, capsys):
        path = tmp_path / "broken.ttmap"
        path.write_text("graph:\n  vertex v\n  vertex v\n")
        assert run(["bound", str(path)]) == 2
        assert "line 3, column 10" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert run(["bound", str(tmp_path / "nope.ttmap")]) == 1
        assert "nope.ttmap" in capsys.readouterr().err

    def test_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr(sys, "stdin", io.StringIO(catalog.text("dkl")))
        assert run(["bound", "-"]) == 0
        assert capsys.readouterr().out == "3.525494348\n"

    def test_tolerance_env(self, monkeypatch, capsys):
        monkeypatch.setenv("L2TT_TOL", "1e-3")
        assert run(["report", "golden"]) == 0
        (stratum,) = json.loads(capsys.readouterr().out)["strata"]
        loose = stratum["lambda"]["upper"] - stratum["lambda"]["lower"]
        assert 0 < loose <= 1e-3 * stratum["lambda"]["upper"]
        assert run(["report", "golden", "--tol", "1e-12"]) == 0
        (stratum,) = json.loads(capsys.readouterr().out)["strata"]
        assert stratum["lambda"]["upper"] - stratum["lambda"]["lower"] <= 1e-11


def test_console_script(tmp_path):
    result = subprocess.run([sys.executable, "-m", "l2tt", "bound", "dkl"], capture_output=True, text=True)
    assert result.returncode == 0 and result.stdout == "3.525494348\n"
