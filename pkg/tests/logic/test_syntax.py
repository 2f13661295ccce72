import pytest

from relsimp.errors import ProgramSyntaxError, UniverseError
from relsimp.logic.syntax import (
    Program,
    Rule,
    format_program,
    is_a_separated,
    load_program,
    parse_atom_list,
    parse_program,
    project,
)


def test_parse_p1(p1):
    assert p1.universe == ("a", "b", "c", "d")
    assert set(p1.rules) == {
        Rule(head=["a"], pos=["b", "c"]),
        Rule(head=["c"], pos=["d"]),
        Rule(head=["b"]),
    }


def test_parse_literal_kinds():
    p = parse_program("a | b :- c, not d, not not e.")
    (r,) = p.rules
    assert r.head == {"a", "b"}
    assert r.pos == {"c"}
    assert r.neg == {"d"}
    assert r.dneg == {"e"}
    assert p.universe == ("a", "b", "c", "d", "e")


def test_parse_constraint_and_empty_bodies():
    p = parse_program(":- a, not b.\nc :- .\n:- .")
    assert Rule(pos=["a"], neg=["b"]) in p.rules
    assert Rule(head=["c"]) in p.rules
    assert Rule() in p.rules


def test_atom_starting_with_not():
    p = parse_program("nothing :- not notable.")
    (r,) = p.rules
    assert r.head == {"nothing"}
    assert r.neg == {"notable"}


def test_universe_directive_keeps_unused_atoms():
    p = parse_program("#universe a, b, z.\na :- b.")
    assert p.universe == ("a", "b", "z")
    assert p.occurring == {"a", "b"}


def test_declared_universe_comes_first():
    p = parse_program("b :- a.", declared_universe=["c"])
    assert p.universe == ("c", "b", "a")


def test_strict_rejects_undeclared_atoms():
    with pytest.raises(ProgramSyntaxError) as e:
        parse_program("#universe a.\na :- b.", strict=True)
    assert "b" in e.value.message
    assert e.value.line == 2


def test_strict_accepts_declared_atoms():
    p = parse_program("a :- b.", declared_universe=["a", "b"], strict=True)
    assert p.universe == ("a", "b")


@pytest.mark.parametrize(
    "text",
    [
        "a :- b",
        "a :- not.",
        "a b.",
        "a :- not not not b.",
        "not :- a.",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(ProgramSyntaxError):
        parse_program(text)


def test_syntax_error_position():
    with pytest.raises(ProgramSyntaxError) as e:
        parse_program("a.\nb :- c d.\n", source="x.lp")
    assert e.value.line == 2
    assert str(e.value).startswith("x.lp:2:")


@pytest.mark.parametrize("text", ["a | a.", "a :- b, b.", "a :- not b, not b.", "a :- not not b, not not b."])
def test_duplicate_literals_rejected(text):
    with pytest.raises(ProgramSyntaxError):
        parse_program(text)


def test_same_atom_in_different_body_parts_allowed():
    (r,) = parse_program("a :- b, not b.").rules
    assert r.pos == {"b"} and r.neg == {"b"}


def test_comments_and_duplicate_rules():
    p = parse_program("% header\na :- b. % trailing\na :- b.\n")
    assert len(p) == 1


def test_format_round_trip(p1):
    p = parse_program("#universe z.\na | b :- c, not d, not not e.\n:- a.\nf.")
    assert parse_program(format_program(p)) == p
    assert parse_program(format_program(p1)) == p1


def test_format_header_and_empty_rule():
    p = Program(universe=[], rules=[Rule()])
    assert format_program(p, header=["note"]) == "% note\n:- .\n"


def test_rule_str():
    assert str(Rule(head=["b", "a"], pos=["c"], neg=["d"], dneg=["e"])) == "a | b :- c, not d, not not e."
    assert str(Rule(pos=["a"])) == ":- a."
    assert str(Rule(head=["a"])) == "a."


def test_program_rejects_unknown_atoms():
    with pytest.raises(UniverseError):
        Program(universe=["a"], rules=[Rule(head=["b"])])
    with pytest.raises(UniverseError):
        Program(universe=["a", "a"])


def test_program_equality_ignores_order():
    r1, r2 = Rule(head=["a"]), Rule(head=["b"])
    assert Program(universe=["a", "b"], rules=[r1, r2]) == Program(universe=["b", "a"], rules=[r2, r1])


def test_with_universe_and_union(q1, q2):
    assert q2.with_universe(["d", "a"]).universe == ("a", "d")
    merged = q1.union(q2)
    assert merged.universe == ("a", "d")
    assert set(merged.rules) == set(q1.rules) | set(q2.rules)


def test_project_p1(p1):
    projected = project(p1, ["b", "c"])
    assert projected.universe == ("a", "d")
    assert set(projected.rules) == {Rule(head=["a"])}


def test_project_drops_negated_and_keeps_double_negation():
    p = parse_program("a :- not b. c :- not not b, a. b :- a.")
    projected = project(p, ["b"])
    assert set(projected.rules) == {Rule(head=["c"], pos=["a"])}


def test_project_nothing_is_identity(p2):
    assert project(p2, []) == p2


def test_project_unknown_atom(p1):
    with pytest.raises(UniverseError):
        project(p1, ["x"])


def test_is_a_separated():
    r = parse_program("a :- not a. b :- c.")
    assert is_a_separated(r, ["b", "c"])
    assert not is_a_separated(r, ["b"])
    assert is_a_separated(parse_program(""), ["a"])


def test_parse_atom_list():
    assert parse_atom_list(None) is None
    assert parse_atom_list("") == []
    assert parse_atom_list("b, c") == ["b", "c"]


def test_load_program_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "latin1.lp"
    path.write_bytes(b"a :- b.\nc :- \xff.\n")
    with pytest.raises(ProgramSyntaxError) as e:
        load_program(path)
    assert (e.value.line, e.value.col) == (2, 6)
    assert "invalid UTF-8" in str(e.value)
    assert str(path) in str(e.value)
