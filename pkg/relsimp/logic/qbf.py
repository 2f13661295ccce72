"""Quantified Boolean formulas of the shape forall U exists V forall W (DNF of 3-literal terms).

A formula is reduced to a pair of programs ``(P, Q)`` and a removal set A
such that the answer sets of P projected away from A are those of Q exactly
when the formula is true. Instances are read and written in a small line
format::

    forall u1 u2;
    exists v1;
    forall w1;
    term u1 v1 w1;
    term -u1 -v1 -w1;
"""

import logging
import random
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, FrozenSet, Iterable, Iterator, Tuple

import attr
from arpeggio import EOF, NoMatch, ParserPython, PTNodeVisitor, ZeroOrMore, visit_parse_tree
from arpeggio import Optional as Opt
from arpeggio import RegExMatch as _

from relsimp.errors import ProgramSyntaxError
from relsimp.logic.syntax import ATOM_PATTERN, Program, Rule, comment, read_source

logger = logging.getLogger(__name__)

Literal = Tuple[str, bool]
Term = Tuple[Literal, Literal, Literal]


def _term(literals: Iterable[Iterable]) -> Term:
    return tuple((str(name), bool(positive)) for name, positive in literals)


def _terms(terms: Iterable[Iterable]) -> Tuple[Term, ...]:
    return tuple(_term(t) for t in terms)


@attr.frozen
class QbfInstance:
    u: Tuple[str, ...] = attr.field(converter=tuple)
    v: Tuple[str, ...] = attr.field(converter=tuple)
    w: Tuple[str, ...] = attr.field(converter=tuple)
    terms: Tuple[Term, ...] = attr.field(converter=_terms, factory=tuple)

    def __attrs_post_init__(self):
        names = self.u + self.v + self.w
        if len(set(names)) != len(names):
            raise ValueError(f"quantifier blocks must be disjoint: {list(names)}")
        for term in self.terms:
            if len(term) != 3:
                raise ValueError(f"term {term} does not have exactly 3 literals")
            for name, _positive in term:
                if name not in names:
                    raise ValueError(f"term variable {name!r} is not quantified")

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.u + self.v + self.w


def _holds(phi: QbfInstance, assignment: Dict[str, bool]) -> bool:
    return any(all(assignment[name] == positive for name, positive in term) for term in phi.terms)


def _assignments(names: Tuple[str, ...]) -> Iterator[Dict[str, bool]]:
    for values in product((False, True), repeat=len(names)):
        yield dict(zip(names, values))


def qbf_eval(phi: QbfInstance) -> bool:
    """Brute-force truth value of ``forall U exists V forall W phi``."""
    return all(
        any(
            all(_holds(phi, {**gu, **gv, **gw}) for gw in _assignments(phi.w))
            for gv in _assignments(phi.v)
        )
        for gu in _assignments(phi.u)
    )


def _fresh(base: str, taken: set) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}_{i}"
    taken.add(name)
    return name


def qbf_reduce(phi: QbfInstance) -> Tuple[Program, Program, FrozenSet[str]]:
    """Build ``(P, Q, A)`` with ``AS(P)`` projected away from A equal to ``AS(Q)`` iff ``phi`` is true.

    P guesses every variable against its complement copy, saturates W once
    ``s`` is derived, derives ``s`` from every term and requires ``s``. Q
    only guesses U.
    """
    taken = set(phi.variables)
    copy = {x: _fresh(f"{x}_neg", taken) for x in phi.variables}
    s = _fresh("s", taken)

    def lit(name, positive):
        return name if positive else copy[name]

    rules = [Rule(head=[x, copy[x]]) for x in phi.variables]
    for w in phi.w:
        rules += [Rule(head=[w], pos=[s]), Rule(head=[copy[w]], pos=[s]), Rule(head=[s], pos=[w, copy[w]])]
    rules += [Rule(head=[s], pos=[lit(name, positive) for name, positive in t]) for t in phi.terms]
    rules.append(Rule(neg=[s]))

    universe = []
    for block in (phi.u, phi.v, phi.w):
        universe += list(block) + [copy[x] for x in block]
    p = Program(universe=universe + [s], rules=rules)
    q_universe = list(phi.u) + [copy[x] for x in phi.u]
    q = Program(universe=q_universe, rules=[Rule(head=[x, copy[x]]) for x in phi.u])
    a = frozenset(p.universe) - frozenset(q_universe)
    logger.debug("reduced QBF with %d terms to %d rules over %d atoms", len(phi.terms), len(p), len(universe) + 1)
    return p, q, a


## instance file format


def qbf_atom():
    return _(ATOM_PATTERN)


def negation():
    return _(r"-")


def qbf_literal():
    return Opt(negation), qbf_atom


def universal():
    return "forall", ZeroOrMore(qbf_atom), ";"


def existential():
    return "exists", ZeroOrMore(qbf_atom), ";"


def term():
    return "term", qbf_literal, qbf_literal, qbf_literal, ";"


def qbf():
    return universal, existential, universal, ZeroOrMore(term), EOF


_qbf_parser = ParserPython(qbf, comment)

_NEG = object()


class _Block(tuple):
    pass


class QbfVisitor(PTNodeVisitor):
    def visit_qbf_atom(self, node, children):
        return str(node.value)

    def visit_negation(self, node, children):
        return _NEG

    def visit_qbf_literal(self, node, children):
        name = next(c for c in children if isinstance(c, str))
        return (name, _NEG not in children)

    def _block(self, children):
        return _Block(c for c in children if isinstance(c, str))

    def visit_universal(self, node, children):
        return self._block(children)

    def visit_existential(self, node, children):
        return self._block(children)

    def visit_term(self, node, children):
        return tuple(c for c in children if isinstance(c, tuple))

    def visit_qbf(self, node, children):
        blocks = [c for c in children if isinstance(c, _Block)]
        terms = [c for c in children if isinstance(c, tuple) and not isinstance(c, _Block)]
        return blocks, terms


def parse_qbf(text: str, source: str = "") -> QbfInstance:
    try:
        tree = _qbf_parser.parse(text)
    except NoMatch as e:
        line, col = _qbf_parser.pos_to_linecol(e.position)
        raise ProgramSyntaxError("malformed QBF instance", line, col, source) from None
    (u, v, w), terms = visit_parse_tree(tree, QbfVisitor())
    try:
        return QbfInstance(u=u, v=v, w=w, terms=terms)
    except ValueError as e:
        raise ProgramSyntaxError(str(e), 0, 0, source) from None


def load_qbf(path) -> QbfInstance:
    return parse_qbf(read_source(path), source=str(path))


def format_qbf(phi: QbfInstance) -> str:
    def block(keyword, names):
        return " ".join([keyword, *names]) + ";"

    lines = [block("forall", phi.u), block("exists", phi.v), block("forall", phi.w)]
    for t in phi.terms:
        lines.append("term " + " ".join(name if positive else f"-{name}" for name, positive in t) + ";")
    return "\n".join(lines) + "\n"


## generators


def random_qbf(rng: random.Random, max_block: int = 2, max_terms: int = 4) -> QbfInstance:
    u = [f"u{i}" for i in range(1, rng.randint(1, max_block) + 1)]
    v = [f"v{i}" for i in range(1, rng.randint(1, max_block) + 1)]
    w = [f"w{i}" for i in range(1, rng.randint(1, max_block) + 1)]
    names = u + v + w
    terms = [
        [(rng.choice(names), rng.random() < 0.5) for _ in range(3)]
        for _ in range(rng.randint(0, max_terms))
    ]
    return QbfInstance(u=u, v=v, w=w, terms=terms)


def all_small_qbfs(max_terms: int = 2) -> Iterator[QbfInstance]:
    """Every instance over one variable per block with at most ``max_terms`` distinct terms."""
    literals = [(x, positive) for x in ("u", "v", "w") for positive in (True, False)]
    terms = list(combinations_with_replacement(literals, 3))
    for k in range(max_terms + 1):
        for chosen in combinations(terms, k):
            yield QbfInstance(u=["u"], v=["v"], w=["w"], terms=chosen)
