import io
import json

import pytest

from qdescent.cli import (
    ParseError,
    bundled_example,
    main,
    parse_problem,
    run,
    serialize_problem,
    verdict_json,
)
from qdescent.descent import decide
from qdescent.qarith import QQ, PolyquadraticField

BUNDLED = ["ex243", "ex60", "ex80", "ex80_endos", "ex336"]


def test_bundled_round_trip():
    for name in BUNDLED:
        text = bundled_example(name)
        problem = parse_problem(text)
        assert serialize_problem(problem) == text, name


def test_parse_basics():
    p = parse_problem(bundled_example("ex243"))
    assert p.command.name == "decide"
    assert p.field == QQ
    assert p.gamma.sign.ram.is_trivial()
    p60 = parse_problem(bundled_example("ex60"))
    assert p60.command.name == "decide-with-endos"
    assert p60.command.L == QQ
    assert p60.field == PolyquadraticField([5, -3])


def test_parse_errors():
    base = "class.pbar = ()\nclass.sign = ram{}\nalgebra = symbol(-1,3)\nfield = Q\ncommand = decide\n"
    with pytest.raises(ParseError):
        parse_problem(base.replace("ram{}", "ram{2}"))  # odd ramification set
    with pytest.raises(ParseError):
        parse_problem(base.replace("field = Q", "field = Q(sqrt 4)"))
    with pytest.raises(ParseError):
        parse_problem(base.replace("command = decide", "command = frobnicate"))
    with pytest.raises(ParseError):
        parse_problem(base.replace("algebra = symbol(-1,3)", "algebra = (-1,3)"))
    with pytest.raises(ParseError):
        parse_problem("class.sign = ram{}\nalgebra = symbol(-1,3)\nfield = Q\ncommand = decide\n")
    with pytest.raises(ParseError):
        parse_problem(base.replace("field = Q", "field = Q(sqrt 2, sqrt 3, sqrt 6)"))


def test_auto_reduction_warning():
    base = ("class.pbar = (5,2)(-4,3)\nclass.sign = ram{2,5}\n"
            "algebra = symbol(-1,3)\nfield = Q\ncommand = decide\n")
    p = parse_problem(base)
    assert any("reduced to squarefree" in w for w in p.warnings)
    pairs = sorted((t.value, d.value) for t, d in p.gamma.pbar.pairs)
    assert (-1, 3) in pairs


def test_exit_codes_match_verdicts():
    expected = {"ex243": 0, "ex60": 0, "ex80": 0, "ex80_endos": 1, "ex336": 1}
    for name, code in expected.items():
        out = io.StringIO()
        problem = parse_problem(bundled_example(name))
        assert run(problem, out=out) == code, name


def test_exit_code_undecided_without_certificate():
    text = bundled_example("ex80")
    head = text.split("\ncertificate")[0] + "\n"
    problem = parse_problem(head)
    out = io.StringIO()
    assert run(problem, out=out) == 2
    assert "ExtensionExistenceQuestion" in out.getvalue()


def test_main_and_flags(tmp_path, capsys):
    assert main(["@ex243"]) == 0
    capsys.readouterr()
    assert main(["@ex336", "--json"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "not-defined"
    assert payload["exit_code"] == 1
    path = tmp_path / "bad.problem"
    path.write_text("class.sign = ram{2}\n")
    assert main([str(path)]) == 3
    capsys.readouterr()
    assert main(["--list-examples"]) == 0
    names = capsys.readouterr().out.split()
    assert "@ex243" in names and "@ex80" in names


def test_json_schema_stable():
    problem = parse_problem(bundled_example("ex243"))
    verdict = decide(problem.gamma, problem.algebra, problem.field)
    first = json.dumps(verdict_json(problem, verdict), sort_keys=True)
    verdict2 = decide(problem.gamma, problem.algebra, problem.field)
    second = json.dumps(verdict_json(problem, verdict2), sort_keys=True)
    assert first == second
    payload = json.loads(first)
    assert set(payload) == {"command", "field", "verdict", "exit_code", "witness",
                            "case_log", "obligations", "certificates", "warnings"}
    assert payload["witness"]["shape"] == "C2"
    assert payload["witness"]["delta"]["pbar"] == [[-3, 6]]


def test_json_golden_ex243(capsys):
    assert main(["@ex243", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    golden = {
        "shape": "C2",
        "params": {"t": -3, "b": 6},
        "certificate": None,
        "verification": "recomputed-closed-form",
        "delta": {"pbar": [[-3, 6]], "sign": "ram{}"},
    }
    assert payload["witness"] == golden


def test_kp_and_minimal_fields_and_decompose(capsys):
    base = ("class.pbar = (-3,11)\nclass.sign = ram{2,3}\n"
            "algebra = symbol(-1,3)\nfield = Q(sqrt -3)\ncommand = kp\n")
    p = parse_problem(base)
    assert run(p, json_out=True) == 0
    assert json.loads(capsys.readouterr().out)["kp"] == "Q(sqrt -3)"

    p2 = parse_problem(base.replace("command = kp", "command = minimal-fields"))
    assert run(p2, json_out=True) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["minimum"] == "Q(sqrt -3)"

    p3 = parse_problem(base.replace("command = kp", "command = decompose"))
    assert run(p3, json_out=True) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pbar"] == [] and payload["sign"] == "ram{}"


def test_trace_output(capsys):
    assert main(["@ex336", "--trace"]) == 1
    out = capsys.readouterr().out
    assert "alpha = 2" in out
    assert "candidate" in out


def test_verify_witness_flag(capsys):
    assert main(["@ex243", "--verify-witness"]) == 0
    assert "verified-bruteforce" in capsys.readouterr().out
