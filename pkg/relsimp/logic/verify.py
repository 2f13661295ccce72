"""Operational verification over enumerated A-separated context programs.

A context program R over B is A-separated when every rule lives either
inside ``B - A`` or inside ``B & A``. Enumeration is bounded by
:class:`ContextBounds`; the proof-shaped family (facts, guard rules with
auxiliary atoms, implication cliques) is added on top of the bounded space.

The auxiliary atom ``f`` is a kept atom and ``eps`` is removed together
with A. Both exist only for the duration of a check. A guard
``eps :- y, not eps.`` has the answer sets of the constraint ``:- y.``, a
legal context over A, and is restricted to the kept atoms as that
constraint would be.
"""

import logging
from itertools import combinations, product
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import attr
from pydantic import Field
from tqdm import tqdm

from relsimp.config import get_settings
from relsimp.errors import EnumerationLimitError, UniverseError
from relsimp.logic.relativized import RelCtx, ab_se_models
from relsimp.logic.semantics import (
    Evaluator,
    Interpretation,
    satisfies,
    satisfies_reduct,
    se_models_restricted,
)
from relsimp.logic.syntax import Program, Rule, project
from relsimp.reports import Report

logger = logging.getLogger(__name__)

AUX_KEPT = "f"
AUX_REMOVED = "eps"


def _at_least_one(instance, attribute, value):
    if value < 1:
        raise ValueError(f"{attribute.name} must be at least 1, got {value}")


def _non_negative(instance, attribute, value):
    if value < 0:
        raise ValueError(f"{attribute.name} must not be negative, got {value}")


@attr.frozen
class ContextBounds:
    max_rules: int = attr.field(default=2, validator=_at_least_one)
    max_body_literals: int = attr.field(default=2, validator=_non_negative)
    max_head_atoms: int = attr.field(default=2, validator=_non_negative)
    allow_double_negation: bool = True
    include_proof_witness_family: bool = True


class Counterexample(Report):
    context: str
    as_p: List[List[str]] = Field(..., alias="asP")
    as_q: List[List[str]] = Field(..., alias="asQ")


class VerificationReport(Report):
    semantic_pass: bool = Field(..., alias="semanticPass")
    operational_pass: bool = Field(..., alias="operationalPass")
    counterexample: Optional[Counterexample] = None
    contexts_checked: int = Field(0, alias="contextsChecked")
    verdict_source: str = Field(..., alias="verdictSource")

    @property
    def passed(self) -> bool:
        return self.semantic_pass and self.operational_pass


def aux_atoms(avoid: Iterable[str]) -> Tuple[str, str]:
    """Fresh names for the kept and the removed auxiliary atom."""
    taken = set(avoid)

    def fresh(base):
        name, i = base, 0
        while name in taken:
            i += 1
            name = f"{base}_{i}"
        taken.add(name)
        return name

    return fresh(AUX_KEPT), fresh(AUX_REMOVED)


def group_rules(group: Sequence[str], bounds: ContextBounds) -> List[Rule]:
    """All rules over ``group`` within ``bounds``, without the empty rule and tautologies."""
    kinds = (0, 1, 2) if bounds.allow_double_negation else (0, 1)
    rules = []
    for h in range(min(bounds.max_head_atoms, len(group)) + 1):
        for head in combinations(group, h):
            for k in range(min(bounds.max_body_literals, len(group)) + 1):
                for atoms in combinations(group, k):
                    for assignment in product(kinds, repeat=k):
                        if not head and not atoms:
                            continue
                        parts = ([], [], [])
                        for name, kind in zip(atoms, assignment):
                            parts[kind].append(name)
                        if set(head) & set(parts[0]):
                            continue
                        rules.append(Rule(head=head, pos=parts[0], neg=parts[1], dneg=parts[2]))
    return rules


def _split(b: Sequence[str], a: Iterable[str]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    a = frozenset(a)
    b = tuple(dict.fromkeys(b))
    return tuple(x for x in b if x not in a), tuple(x for x in b if x in a)


def _bounded_rules(b: Sequence[str], a: Iterable[str], bounds: ContextBounds) -> List[Rule]:
    outside, inside = _split(b, a)
    return group_rules(outside, bounds) + group_rules(inside, bounds)


def _powerset(atoms: Sequence[str]) -> Iterator[Tuple[str, ...]]:
    for k in range(len(atoms) + 1):
        yield from combinations(atoms, k)


def _facts(atoms: Iterable[str]) -> List[Rule]:
    return [Rule(head=[x]) for x in atoms]


def proof_family(b: Sequence[str], a: Iterable[str], aux: Tuple[str, str]) -> Iterator[List[Rule]]:
    """The context shapes that separate non-simplifiable programs from candidates.

    For T within B and X within T: facts T; facts T with guards; facts X with
    guards and ``y :- not y.`` for each y in T - X; facts X with the clique
    ``y1 :- y2.`` over the kept part of T - X, with and without guards. Guards
    are ``f :- y, not f.`` for kept y outside T and ``eps :- y, not eps.`` for
    removed y outside T.
    """
    a = frozenset(a)
    b = tuple(dict.fromkeys(b))
    f, eps = aux
    for t in _powerset(b):
        guards = [
            Rule(head=[eps], pos=[y], neg=[eps]) if y in a else Rule(head=[f], pos=[y], neg=[f])
            for y in b
            if y not in t
        ]
        yield _facts(t)
        yield _facts(t) + guards
        for x in _powerset(t):
            rest = [y for y in t if y not in x]
            yield _facts(x) + guards + [Rule(head=[y], neg=[y]) for y in rest]
            kept = [y for y in rest if y not in a]
            clique = [Rule(head=[y1], pos=[y2]) for y1 in kept for y2 in kept if y1 != y2]
            yield _facts(x) + clique
            yield _facts(x) + guards + clique


def count_contexts(b: Sequence[str], a: Iterable[str], bounds: ContextBounds) -> int:
    """Upper estimate of the number of contexts :func:`enumerate_contexts` yields."""
    n = len(_bounded_rules(b, a, bounds))
    total = sum(comb(n, k) for k in range(min(bounds.max_rules, n) + 1))
    if bounds.include_proof_witness_family:
        size = len(set(b))
        # per T: two programs, plus three per subset X of T
        total += sum(comb(size, t) * (2 + 3 * 2 ** t) for t in range(size + 1))
    return total


def _check_limit(count: int):
    limit = get_settings().context_limit
    if count > limit:
        raise EnumerationLimitError(
            f"about {count} context programs to enumerate, above the configured limit of {limit}"
        )


def enumerate_contexts(
    b: Sequence[str], a: Iterable[str], bounds: ContextBounds = ContextBounds(), avoid: Iterable[str] = ()
) -> Iterator[Program]:
    """Yield every A-separated program over ``b`` within ``bounds``, each once.

    The bounded space comes first (by number of rules, then rule order),
    followed by the proof family. Yielded programs share one universe: ``b``
    plus, when the proof family is on, the auxiliary atoms chosen to avoid
    ``avoid``.
    """
    a = frozenset(a)
    b = tuple(dict.fromkeys(b))
    _check_limit(count_contexts(b, a, bounds))
    universe = b
    aux = None
    if bounds.include_proof_witness_family:
        aux = aux_atoms(set(avoid) | set(b))
        universe = b + aux

    seen = set()
    rules = _bounded_rules(b, a, bounds)
    for k in range(min(bounds.max_rules, len(rules)) + 1):
        for chosen in combinations(rules, k):
            key = frozenset(chosen)
            if key not in seen:
                seen.add(key)
                yield Program(universe=universe, rules=chosen)
    if aux is not None:
        for chosen in proof_family(b, a, aux):
            key = frozenset(chosen)
            if key not in seen:
                seen.add(key)
                yield Program(universe=universe, rules=chosen)


class ContextSolver:
    """Answer sets of ``base`` joined with many small context programs.

    Models and reduct models of ``base`` are computed once; a context only
    filters them. The ``auxiliary`` atoms extend the universe of ``base``
    beyond the universe cap.
    """

    def __init__(self, base: Program, auxiliary: Sequence[str] = ()):
        auxiliary = tuple(auxiliary)
        self.evaluator = Evaluator(base.universe + auxiliary, base.rules, auxiliary=len(auxiliary))

    def answer_sets(self, context: Iterable[Rule]) -> FrozenSet[Interpretation]:
        ev = self.evaluator
        rules = ev.compile_rules(context)
        found = []
        for y in ev.models():
            if not satisfies(rules, y):
                continue
            if any(x != y and satisfies_reduct(rules, x, y) for x in ev.reduct_models(y)):
                continue
            found.append(ev.names(y))
        return frozenset(found)


def _listing(sets: Iterable[Interpretation]) -> List[List[str]]:
    return sorted(sorted(s) for s in sets)


def _kept_part(r: Program, removed: FrozenSet[str], eps: str) -> Program:
    """``R`` restricted to the kept atoms, reading each ``eps`` guard as ``:- y.``"""
    rules = [Rule(pos=rule.pos) if rule.head == {eps} else rule for rule in r.rules]
    return project(Program(universe=r.universe, rules=rules), removed & set(r.universe))


def _operational(
    p: Program, q: Program, ctx: RelCtx, bounds: ContextBounds, prog_bar: bool
) -> Tuple[Optional[Counterexample], int]:
    f, eps = aux_atoms(set(p.universe) | set(q.universe))
    kept = frozenset(ctx.kept) | {f}
    removed = ctx.remove | {eps}
    solver_p = ContextSolver(p, (f, eps))
    solver_q = ContextSolver(q, (f,))

    b = p.ordered(ctx.context)
    total = count_contexts(b, ctx.remove, bounds)
    logger.info("checking up to %d context programs over %s", total, b)
    contexts = enumerate_contexts(b, ctx.remove, bounds, avoid=set(p.universe) | set(q.universe))
    if prog_bar:
        iterator = tqdm(contexts, total=total)
    else:
        iterator = contexts

    checked = 0
    for r in iterator:
        checked += 1
        r_kept = _kept_part(r, removed, eps)
        as_p = frozenset(i & kept for i in solver_p.answer_sets(r.rules))
        as_q = solver_q.answer_sets(r_kept.rules)
        if as_p != as_q:
            logger.debug("counterexample after %d contexts: %s", checked, [str(x) for x in r.rules])
            return (
                Counterexample(
                    context=" ".join(str(x) for x in r.rules),
                    as_p=_listing(as_p),
                    as_q=_listing(as_q),
                ),
                checked,
            )
    return None, checked


def _report(semantic: bool, counterexample: Optional[Counterexample], checked: int) -> VerificationReport:
    if counterexample is None and semantic:
        logger.warning("operational check passed on %d bounded contexts; this is advisory", checked)
    return VerificationReport(
        semantic_pass=semantic,
        operational_pass=counterexample is None,
        counterexample=counterexample,
        contexts_checked=checked,
        verdict_source="operational" if counterexample is not None else "semantic",
    )


def check_simplification(
    p: Program, q: Program, ctx: RelCtx, bounds: ContextBounds = ContextBounds(), prog_bar: bool = False
) -> VerificationReport:
    """Check that ``q`` is an A-simplification of ``p`` relative to B.

    Semantically: the A-B-SE-models of ``p`` equal the SE-models of ``q``
    relative to ``B - A``. Operationally: for every enumerated A-separated R
    over B, the answer sets of ``p`` with R, projected away from A, are those
    of ``q`` with R restricted to the kept atoms.
    """
    stray = set(q.universe) & ctx.remove
    if stray:
        raise UniverseError(f"simplified program uses removed atoms: {sorted(stray)}")
    q = Program(universe=ctx.kept, rules=()).union(q)
    semantic = ab_se_models(p, ctx) == se_models_restricted(q, ctx.kept, ctx.residual_context)
    counterexample, checked = _operational(p, q, ctx, bounds, prog_bar)
    return _report(semantic, counterexample, checked)


def check_forgetting(
    p: Program,
    q: Program,
    a: Iterable[str],
    s: Iterable[str],
    bounds: ContextBounds = ContextBounds(),
    prog_bar: bool = False,
) -> VerificationReport:
    """Check that answer sets are preserved when adding any enumerated R over ``s``.

    Programs over ``s`` never mention forgotten atoms, so this is the
    simplification check relative to ``s``.
    """
    ctx = RelCtx.relativized_persistence(p.universe, a, s)
    return check_simplification(p, q, ctx, bounds, prog_bar)


def check_projection_stability(
    p: Program, ctx: RelCtx, bounds: ContextBounds = ContextBounds()
) -> Optional[Tuple[Program, Program]]:
    """First pair of contexts with equal kept parts but different projected answer sets.

    Any program with an A-simplification relative to B has none.
    """
    f, eps = aux_atoms(p.universe)
    kept = frozenset(ctx.kept) | {f}
    removed = ctx.remove | {eps}
    solver = ContextSolver(p, (f, eps))
    first: Dict[FrozenSet[Rule], Tuple[Program, FrozenSet[Interpretation]]] = {}
    for r in enumerate_contexts(p.ordered(ctx.context), ctx.remove, bounds, avoid=p.universe):
        key = frozenset(_kept_part(r, removed, eps).rules)
        projected = frozenset(i & kept for i in solver.answer_sets(r.rules))
        if key not in first:
            first[key] = (r, projected)
        elif first[key][1] != projected:
            return first[key][0], r
    return None
