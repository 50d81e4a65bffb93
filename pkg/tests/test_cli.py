"""
tests/test_cli.py

The batch front end end to end: subcommands, written files and exit codes.
"""

import json

import pytest

from scripts import qulab
from store import codec


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    """Materialize the bundled instances once for the whole module."""
    root = tmp_path_factory.mktemp("instances")
    paths = {}
    for name in ("t0", "sierpinski", "sym", "alexandrov"):
        path = root / f"{name}.json"
        assert qulab.run(["examples", name, "--out", str(path)]) == qulab.EXIT_OK
        paths[name] = str(path)
    return paths


def test_examples_writes_a_loadable_instance(files):
    assert codec.load(files["t0"]).id == "t0"


def test_validate_passes_and_writes_a_report(files, tmp_path):
    out = tmp_path / "report.json"
    assert qulab.run(["validate", "--in", files["t0"], "--out", str(out)]) == qulab.EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert set(payload) == {"instance", "structures"}


def test_validate_reports_a_broken_closure(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "objects": [{"id": "X", "carrier": ["a"]}],
        "morphisms": [{"id": "1_X", "dom": "X", "cod": "X", "map": [0]}],
        "closures": [{"id": "bad", "category": "C", "maps": {"X": [0, 0]}}],
    }), encoding="utf-8")
    assert qulab.run(["validate", "--in", str(path)]) == qulab.EXIT_FAILED


def test_galois(files):
    assert qulab.run(["galois", "--in", files["sierpinski"]]) == qulab.EXIT_OK


def test_lift_writes_the_lifted_structure(files, tmp_path):
    out, report = tmp_path / "lifted.json", tmp_path / "lift-report.json"
    code = qulab.run([
        "lift", "pointed", "--repr", "closure", "--in", files["t0"],
        "--candidates", "20", "--out", str(out), "--report", str(report),
    ])
    assert code == qulab.EXIT_OK
    lifted = codec.load(out)
    assert len(lifted.structures) == 1
    assert json.loads(report.read_text(encoding="utf-8"))["certificates"]


def test_oracle_enumerate(files, capsys):
    assert qulab.run(["oracle", "enumerate", "--kind", "closure", "--in", files["sierpinski"]]) == qulab.EXIT_OK
    assert "closure structures on" in capsys.readouterr().out


def test_oracle_certify_adjoint_syntop(files):
    code = qulab.run([
        "oracle", "certify", "--family", "adjoint", "--repr", "syntop",
        "--in", files["alexandrov"], "--candidates", "20",
    ])
    assert code == qulab.EXIT_OK


def test_oracle_principality(files):
    assert qulab.run(["oracle", "principality", "--in", files["sym"]]) == qulab.EXIT_OK


def test_continuity_of_every_morphism(files, capsys):
    assert qulab.run(["continuity", "--in", files["t0"], "--a", "cl", "--b", "cl"]) == qulab.EXIT_OK
    assert "(cl, cl)-continuity" in capsys.readouterr().out


def test_input_errors_exit_with_two(files, capsys):
    assert qulab.run(["validate"]) == qulab.EXIT_INPUT
    assert qulab.run(["galois", "--in", files["t0"], "--structure", "nope"]) == qulab.EXIT_INPUT
    assert "ERROR" in capsys.readouterr().err


def test_usage_errors_exit_with_two(files):
    assert qulab.run(["lift", "sideways", "--repr", "closure", "--in", files["t0"]]) == qulab.EXIT_INPUT
    assert qulab.run([]) == qulab.EXIT_INPUT


def test_unknown_morphism_in_composition_is_an_instance_failure(tmp_path):
    path = tmp_path / "ghost.json"
    path.write_text(json.dumps({
        "objects": [{"id": "X", "carrier": ["a"]}],
        "morphisms": [{"id": "1_X", "dom": "X", "cod": "X", "map": [0]}],
        "composition": [["1_X", "ghost", "1_X"]],
    }), encoding="utf-8")
    assert qulab.run(["validate", "--in", str(path)]) == qulab.EXIT_INPUT
