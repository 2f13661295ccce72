import json

import pytest

from relsimp.config import override_settings
from relsimp.errors import UniverseError
from relsimp.logic.semantics import (
    SEInterpretation,
    SEModelSet,
    answer_sets,
    answer_sets_projected,
    is_model,
    reduct,
    rel_se_models,
    rel_se_witnesses,
    se_models,
    se_models_restricted,
)
from relsimp.logic.syntax import Program, Rule, parse_program

P1_SE = ["bcad", "bca", "ba", "b", "bca/bcad", "ba/bca", "b/ba", "ba/bcad", "b/bcad", "b/bca"]
P1_SE_ABD = ["bcad", "ba", "b", "ba/bcad", "b/bcad", "b/ba"]


def pairs(*specs):
    return SEModelSet.from_strings((), specs).pairs


@pytest.mark.parametrize("i, expected", [("b", True), ("", False), ("ba", True), ("bc", False), ("bd", False)])
def test_is_model(p1, i, expected):
    assert is_model(i, p1) is expected


def test_is_model_unknown_atom(p1):
    with pytest.raises(UniverseError):
        is_model("x", p1)


def test_reduct():
    p = parse_program("a :- not b.")
    assert set(reduct(p, []).rules) == {Rule(head=["a"])}
    assert set(reduct(p, ["b"]).rules) == set()

    q2 = parse_program("a :- not not a.")
    assert set(reduct(q2, ["a"]).rules) == {Rule(head=["a"])}
    assert set(reduct(q2, []).rules) == set()


def test_reduct_of_positive_program(p1):
    assert reduct(p1, ["a", "b"]) == p1


def test_answer_sets(p1, p2):
    assert answer_sets(p1) == {frozenset("b")}
    assert answer_sets(p2) == {frozenset("ac"), frozenset("bc")}
    assert answer_sets(parse_program(":- not s.")) == frozenset()


def test_answer_sets_disjunction_is_minimal():
    assert answer_sets(parse_program("a | b.")) == {frozenset("a"), frozenset("b")}


def test_answer_sets_double_negation():
    assert answer_sets(parse_program("a :- not not a.")) == {frozenset(), frozenset("a")}


def test_answer_sets_projected(p2):
    assert answer_sets_projected(p2, ["a"]) == {frozenset("a"), frozenset()}


def test_se_models_p1(p1):
    assert se_models(p1).pairs == pairs(*P1_SE)
    assert len(se_models(p1)) == 10


def test_se_models_empty_program():
    p = Program(universe=["a"])
    assert se_models(p).pairs == pairs("", "/a", "a")


def test_se_models_double_negation(q2):
    assert se_models(q2).pairs == pairs("", "a")


def test_se_models_canonical_order(p1):
    assert [str(s) for s in se_models(p1)][:3] == ["<{b},{b}>", "<{b},{a, b}>", "<{a, b},{a, b}>"]


def test_rel_se_models_p1(p1):
    models = rel_se_models(p1, "abd")
    assert models.pairs == pairs(*P1_SE_ABD)
    assert models.relativizer == frozenset("abd")


def test_rel_se_models_full_context_is_se(p1):
    assert rel_se_models(p1, p1.universe) == se_models(p1)


@pytest.mark.parametrize("text", ["a :- b, c. c :- d. b.", "a :- not b. b :- not a. c.", "a | b. c :- not a."])
def test_rel_se_models_empty_context_are_answer_sets(text):
    p = parse_program(text)
    assert rel_se_models(p, []).pairs == {SEInterpretation(y, y) for y in answer_sets(p)}


def test_rel_se_witnesses(p1):
    witnesses = rel_se_witnesses(p1, "abd")
    assert witnesses[SEInterpretation("b", "abcd")] == frozenset("b")
    assert witnesses[SEInterpretation("ab", "abcd")] <= frozenset("abcd")
    assert set(witnesses) == {s for s in rel_se_models(p1, "abd") if not s.total}


def test_se_models_restricted(q1, p1):
    assert se_models_restricted(q1, "ad", "ad").pairs == se_models(q1).pairs
    assert se_models_restricted(p1, p1.universe, p1.universe) == se_models(p1)
    assert se_models_restricted(p1, [], "abd").pairs == set()
    assert se_models_restricted(Program(universe=["a"]), [], []).pairs == pairs("")


def test_se_interpretation_requires_subset():
    with pytest.raises(ValueError):
        SEInterpretation("ab", "a")


def test_model_set_helpers(p1):
    models = se_models(p1)
    assert models.is_total_closed()
    assert models.totals() == {frozenset("b"), frozenset("ab"), frozenset("abc"), frozenset("abcd")}
    assert models.restrict("ab").pairs == pairs("b", "ab", "b/ab")
    assert SEInterpretation("b", "ab") in models


def test_model_set_report(q1):
    report = json.loads(se_models(q1).to_report().json())
    assert report["alphabet"] == ["a", "d"]
    assert report["relativizer"] is None
    assert {"here": [], "there": ["a", "d"]} in report["pairs"]


def test_universe_cap():
    p = Program(universe=[f"x{i}" for i in range(5)])
    with override_settings(max_universe=4):
        with pytest.raises(UniverseError):
            se_models(p)
