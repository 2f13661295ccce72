import json

import jsonschema
import pytest
from click.testing import CliRunner

from relsimp.errors import ForgettingImpossibleError, NotSimplifiableError, UniverseError, VerificationError
from relsimp.logic.semantics import answer_sets, answer_sets_projected, se_models
from relsimp.logic.syntax import load_program, parse_program
from relsimp.main import SCHEMAS, CliConfig, cli, defaults, exit_code
from relsimp.sample_programs import sample_programs_path

P1 = str(sample_programs_path / "p1.lp")
P2 = str(sample_programs_path / "p2.lp")
P3 = str(sample_programs_path / "p3.lp")
Q1 = str(sample_programs_path / "q1.lp")
Q2 = str(sample_programs_path / "q2.lp")
TRUE3 = str(sample_programs_path / "true3.qbf")


@pytest.fixture
def runner():
    return CliRunner()


def test_check_simplifiable(runner):
    result = runner.invoke(cli, ["check", P1, "--remove", "b,c", "--relative-to", "a,b,d"])
    assert result.exit_code == 0
    assert "spectrum: relativized strong simplification" in result.output
    assert "delta s1: holds" in result.output
    assert "omega: not satisfied" in result.output
    assert "verdict: simplifiable" in result.output


def test_check_not_simplifiable(runner):
    result = runner.invoke(cli, ["check", P2, "--remove", "b,c"])
    assert result.exit_code == 1
    assert "spectrum: strong simplification" in result.output
    assert "verdict: not simplifiable" in result.output


def test_check_json(runner):
    result = runner.invoke(cli, ["check", P3, "--remove", "p,q", "--relative-to", "a,b", "--json"])
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["relativeTo"] == ["a", "b"]
    assert report["omega"]["satisfied"]


def test_unknown_atom_is_config_error(runner):
    result = runner.invoke(cli, ["check", P1, "--remove", "x"])
    assert result.exit_code == 2
    assert "relsimp: error[config]:" in result.output


def test_parse_error(runner, tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("a :- b\n")
    result = runner.invoke(cli, ["answer-sets", str(bad)])
    assert result.exit_code == 2
    assert "relsimp: error[parse]:" in result.output


def test_answer_sets(runner):
    result = runner.invoke(cli, ["answer-sets", P2])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["{a, c}", "{b, c}"]

    result = runner.invoke(cli, ["answer-sets", P2, "--json"])
    assert json.loads(result.output) == {"answerSets": [["a", "c"], ["b", "c"]]}


def test_se_models_json(runner):
    result = runner.invoke(cli, ["se-models", Q2, "--json"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["alphabet"] == ["a"]
    assert len(report["pairs"]) == 2


def test_ab_se_models(runner):
    result = runner.invoke(cli, ["ab-se-models", P1, "--remove", "b,c", "--relative-to", "a,b,d", "--json"])
    assert result.exit_code == 0
    assert len(json.loads(result.output)["pairs"]) == 6


def test_simplify_to_file(runner, tmp_path):
    out = tmp_path / "q.lp"
    result = runner.invoke(
        cli, ["simplify", P1, "--remove", "b,c", "--relative-to", "a,b,d", "-o", str(out), "--simplify-output"]
    )
    assert result.exit_code == 0
    text = out.read_text()
    assert text.startswith("% relsimp: remove=b,c relative-to=a,b,d\n")
    assert "% verification: se-models ok" in text
    assert se_models(parse_program(text)).pairs == se_models(load_program(Q1)).pairs


def test_simplify_refused(runner):
    result = runner.invoke(cli, ["simplify", P2, "--remove", "b,c"])
    assert result.exit_code == 1
    assert "relsimp: error[not-simplifiable]:" in result.output


def test_forget(runner):
    result = runner.invoke(cli, ["forget", P1, "--remove", "b,c", "--relative-to", "a,d"])
    assert result.exit_code == 0
    assert se_models(parse_program(result.output)).pairs == se_models(load_program(Q1)).pairs


def test_forget_impossible(runner):
    result = runner.invoke(cli, ["forget", P3, "--remove", "p,q", "--relative-to", "a,b"])
    assert result.exit_code == 1
    assert "relsimp: error[omega]:" in result.output


def test_verify_pass(runner):
    result = runner.invoke(
        cli, ["verify", P1, Q1, "--remove", "b,c", "--relative-to", "a,b,d", "--max-rules", "1", "--max-body", "1"]
    )
    assert result.exit_code == 0
    assert "semantic: pass" in result.output
    assert "operational: pass" in result.output
    assert "verdict source: semantic" in result.output


def test_verify_counterexample(runner, tmp_path):
    candidate = tmp_path / "a.lp"
    candidate.write_text("a.\n")
    result = runner.invoke(cli, ["verify", P1, str(candidate), "--remove", "b,c", "--max-rules", "1", "--json"])
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["operationalPass"] is False
    assert report["verdictSource"] == "operational"
    assert report["counterexample"]["asQ"] == [["a"]]


def test_verify_rejects_zero_rules(runner):
    result = runner.invoke(cli, ["verify", P1, Q1, "--max-rules", "0"])
    assert result.exit_code == 2


def test_equiv(runner, tmp_path):
    choice = tmp_path / "choice.lp"
    choice.write_text("a :- not b.\nb :- not a.\n")
    disjunction = tmp_path / "disjunction.lp"
    disjunction.write_text("a | b.\n")

    result = runner.invoke(cli, ["equiv", str(choice), str(disjunction), "--relative-to", ""])
    assert result.exit_code == 0
    assert result.output.strip() == "relative to {}: equivalent"

    result = runner.invoke(cli, ["equiv", str(choice), str(disjunction)])
    assert result.exit_code == 1
    assert result.output.strip() == "relative to {a, b}: not equivalent"


def test_equiv_with_removal_verifies(runner):
    result = runner.invoke(
        cli, ["equiv", P2, Q2, "--remove", "b,c", "--relative-to", "a,c", "--max-rules", "1", "--max-body", "1"]
    )
    assert result.exit_code == 0
    assert "semantic: pass" in result.output


def test_qbf_gen(runner, tmp_path):
    result = runner.invoke(cli, ["qbf-gen", TRUE3, "-o", str(tmp_path)])
    assert result.exit_code == 0
    assert (tmp_path / "true3.remove").read_text() == "v,v_neg,w,w_neg,s\n"
    p = load_program(tmp_path / "true3.p.lp")
    q = load_program(tmp_path / "true3.q.lp")
    assert answer_sets_projected(p, q.universe) == answer_sets(q)


def test_check_batch(runner, tmp_path):
    programs = tmp_path / "programs"
    programs.mkdir()
    (programs / "p1.lp").write_text(open(P1).read())
    (programs / "p3.lp").write_text(open(P3).read())
    result = runner.invoke(cli, ["check", str(programs), "--cache", str(tmp_path / "cache"), "--json"])
    assert result.exit_code == 0
    rows = json.loads(result.output)
    assert [row["simplifiable"] for row in rows] == [True, True]

    (programs / "zbad.lp").write_text("a :-\n")
    result = runner.invoke(cli, ["check", str(programs), "--cache", str(tmp_path / "cache")])
    assert result.exit_code == 2
    assert "error" in result.output


@pytest.mark.parametrize(
    "report, field", [("verification", "semanticPass"), ("batch", "errorKind"), ("simplification", "relativeTo")]
)
def test_schema(runner, report, field):
    result = runner.invoke(cli, ["schema", report])
    assert result.exit_code == 0
    assert field in json.loads(result.output)["properties"]


def test_defaults():
    config = CliConfig(command="check")
    assert defaults(config, "abc") == (frozenset(), frozenset("abc"))
    config = CliConfig(command="check", remove=["a"], relative_to=[])
    assert defaults(config, "abc") == (frozenset("a"), frozenset())


def test_unknown_command():
    with pytest.raises(ValueError):
        CliConfig(command="nope")


@pytest.mark.parametrize(
    "error, code",
    [
        (VerificationError("x"), 3),
        (NotSimplifiableError("x"), 1),
        (ForgettingImpossibleError("x"), 1),
        (UniverseError("x"), 2),
    ],
)
def test_exit_codes(error, code):
    assert exit_code(error) == code


def test_undecodable_file_is_parse_error(runner, tmp_path):
    path = tmp_path / "latin1.lp"
    path.write_bytes(b"a :- \xff.\n")
    result = runner.invoke(cli, ["check", str(path)])
    assert result.exit_code == 2
    assert "relsimp: error[parse]:" in result.output
    assert "invalid UTF-8" in result.output


def test_simplify_json(runner):
    result = runner.invoke(cli, ["simplify", P1, "--remove", "b,c", "--relative-to", "a,b,d", "--json"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["remove"] == ["b", "c"]
    assert report["relativeTo"] == ["a", "b", "d"]
    assert report["pruned"] is False
    assert se_models(parse_program(report["program"])).pairs == se_models(load_program(Q1)).pairs


REPORTS = [
    (["se-models", Q2, "--json"], "se-models"),
    (["se-models", P2, "--relative-to", "a", "--json"], "se-models"),
    (["check", P1, "--remove", "b,c", "--relative-to", "a,b,d", "--json"], "simplifiability"),
    (["check", P3, "--remove", "p,q", "--relative-to", "a,b", "--json"], "simplifiability"),
    (["check", P2, "--remove", "b,c", "--json"], "simplifiability"),
    (["simplify", P1, "--remove", "b,c", "--relative-to", "a,b,d", "--json"], "simplification"),
    (["verify", P1, Q1, "--remove", "b,c", "--relative-to", "a,b,d", "--max-rules", "1", "--json"], "verification"),
    (["verify", P1, Q2, "--remove", "b,c", "--max-rules", "1", "--json"], "verification"),
]


@pytest.mark.parametrize("args, report", REPORTS)
def test_json_reports_match_schema(runner, args, report):
    first = runner.invoke(cli, args)
    assert first.exit_code in (0, 1)
    jsonschema.validate(json.loads(first.output), json.loads(SCHEMAS[report].schema_json()))
    assert runner.invoke(cli, args).output == first.output


def test_batch_rows_match_schema(runner, tmp_path):
    programs = tmp_path / "programs"
    programs.mkdir()
    (programs / "p1.lp").write_text(open(P1).read())
    (programs / "bad.lp").write_text("a :-\n")
    args = ["check", str(programs), "--remove", "a", "--json"]
    result = runner.invoke(cli, args)
    rows = json.loads(result.output)
    assert [row["errorKind"] for row in rows] == ["parse", None]
    schema = json.loads(SCHEMAS["batch"].schema_json())
    for row in rows:
        jsonschema.validate(row, schema)
    assert runner.invoke(cli, args).output == result.output
