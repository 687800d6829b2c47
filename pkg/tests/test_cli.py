import json
from pathlib import Path

import pytest

from quditstab import cli

DATA = Path(__file__).parent / "data" / "cli"
CASES = json.loads((DATA / "cases.json").read_text())


@pytest.fixture
def in_data(monkeypatch):
    monkeypatch.chdir(DATA)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, in_data, capsys):
    code, out, err = run(CASES[name], capsys)
    assert code == 0, err
    assert out == (DATA / f"{name}.out.json").read_text()


def test_output_file(in_data, capsys, tmp_path):
    target = tmp_path / "out.json"
    assert cli.main(["expand", "x2z2_d4.json", "-o", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == (DATA / "expand_x2z2.out.json").read_text()


def test_worked_example_values(in_data, capsys):
    _, out, _ = run(["expand", "x2z2_d4.json"], capsys)
    doc = json.loads(out)
    assert doc["labels"] == [[0], [2]]
    assert doc["exponents"] == [0, 0]
    assert doc["normalization"] == 0.7071067811865476
    assert '"normalization": 0.7071067811865476,\n' in out


REEMIT = {
    "clifford": lambda obj, odd: cli.clifford_doc(obj, odd),
    "pauli": lambda obj, odd: cli.pauli_doc(obj, odd),
    "stabilizer": lambda obj, odd: cli.stabilizer_doc(obj, odd),
    "gate_sequence": lambda obj, odd: cli.sequence_doc(obj),
    "expansion": lambda obj, odd: cli.expansion_doc(obj),
}


def _object_files():
    names = [p.name for p in DATA.glob("*.json") if p.name != "cases.json"]
    out = []
    for name in sorted(names):
        try:
            doc = json.loads((DATA / name).read_text())
        except json.JSONDecodeError:
            continue
        if name.startswith(("bad_", "even_odd")):
            continue
        if doc.get("kind") in REEMIT and doc.get("d", 0) <= 64 and (doc.get("n") or 0) <= 4:
            out.append(name)
    return out


@pytest.mark.parametrize("name", _object_files())
def test_round_trip(name):
    text = (DATA / name).read_text()
    doc = json.loads(text)
    odd = "g" in doc or "b" in doc
    kind, obj = cli.parse(doc, set(REEMIT), odd)
    again = cli.emit(REEMIT[kind](obj, odd))
    assert again == cli.emit(doc)
    if name.endswith(".out.json"):
        assert again == text


def test_emit_layout():
    doc = {"schema_version": "1", "kind": "pauli", "d": 3, "n": 1, "delta": 2, "a": [1, 2]}
    assert cli.emit(doc) == (
        '{\n  "schema_version": "1",\n  "kind": "pauli",\n  "d": 3,\n  "n": 1,\n'
        '  "a": [1,2],\n  "delta": 2\n}\n'
    )


@pytest.mark.parametrize("argv, code, kind", [
    (["validate", "bad_phase_state.json"], 3, "PhaseConditionViolation"),
    (["validate", "noncommuting.json"], 3, "NonCommuting"),
    (["expand", "bad_phase_state.json"], 3, "PhaseConditionViolation"),
    (["validate", "bad_residue.json"], 2, "ParseError"),
    (["validate", "big_modulus.json"], 2, "ParseError"),
    (["validate", "not_json.json"], 2, "ParseError"),
    (["validate", "missing.json"], 2, "ParseError"),
    (["snf", "x2z2_d4.json"], 2, "ParseError"),
    (["simulate", "big_pauli.json"], 4, "DimensionCap"),
    (["validate", "--odd-form", "even_odd_form.json"], 3, "EvenDimension"),
])
def test_errors(argv, code, kind, in_data, capsys):
    got, out, err = run(argv, capsys)
    assert got == code
    assert out == ""
    report = json.loads(err)
    assert report["type"] == kind
    assert set(report) == {"error", "type", "message"}


def test_force_cap(in_data, capsys):
    code, _, err = run(["simulate", "pauli_d3.json", "--force-cap", "2"], capsys)
    assert code == 4
    assert json.loads(err)["error"] == "CapExceeded"
    code, out, _ = run(["simulate", "pauli_d3.json", "--force-cap", "3"], capsys)
    assert code == 0
    assert json.loads(out)["shape"] == [3, 3]


def test_raw_and_generic_exclusive(in_data, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["expand", "x2z2_d4.json", "--raw", "--generic"])
    assert exc.value.code == 2


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in cli.COMMANDS:
        assert name in out


@pytest.mark.parametrize("name", sorted(cli.COMMANDS))
def test_command_help(name, capsys):
    with pytest.raises(SystemExit):
        cli.main([name, "--help"])
    assert "usage" in capsys.readouterr().out
