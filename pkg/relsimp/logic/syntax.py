"""Extended logic programs: representation, parsing, printing and projection.

A rule has the shape ``H :- B+, not B-, not not B--`` where the head ``H`` is
a disjunction of atoms (empty for a constraint). Programs are parsed with an
Arpeggio PEG grammar:

    program   := (directive | rule)*
    directive := "#universe" atom ("," atom)* "."
    rule      := head "." | head ":-" body "." | ":-" body "."
    head      := atom ("|" atom)*
    body      := literal ("," literal)*
    literal   := atom | "not" atom | "not" "not" atom

Bodies may also be empty (``a :- .``, ``:- .``) so that the always-false
constraint can be written down. ``%`` starts a line comment.
"""

import logging
from pathlib import Path
from typing import FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import attr
from arpeggio import EOF, NoMatch, ParserPython, PTNodeVisitor, ZeroOrMore, visit_parse_tree
from arpeggio import Optional as Opt
from arpeggio import RegExMatch as _

from relsimp.errors import ProgramSyntaxError, UniverseError

logger = logging.getLogger(__name__)

ATOM_PATTERN = r"[a-zA-Z_][a-zA-Z0-9_]*"


@attr.frozen
class Atom:
    index: int
    name: str


def _atom_set(atoms: Iterable[str]) -> FrozenSet[str]:
    return frozenset(atoms)


@attr.frozen
class Rule:
    """``head :- pos, not neg, not not dneg``; all parts are sets of atom names."""

    head: FrozenSet[str] = attr.field(factory=frozenset, converter=_atom_set)
    pos: FrozenSet[str] = attr.field(factory=frozenset, converter=_atom_set)
    neg: FrozenSet[str] = attr.field(factory=frozenset, converter=_atom_set)
    dneg: FrozenSet[str] = attr.field(factory=frozenset, converter=_atom_set)

    @property
    def atoms(self) -> FrozenSet[str]:
        return self.head | self.pos | self.neg | self.dneg

    @property
    def body_size(self) -> int:
        return len(self.pos) + len(self.neg) + len(self.dneg)

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and self.body_size == 0

    def sort_key(self) -> Tuple:
        return (
            self.body_size,
            len(self.head),
            sorted(self.head),
            sorted(self.pos),
            sorted(self.neg),
            sorted(self.dneg),
        )

    def __str__(self):
        head = " | ".join(sorted(self.head))
        body = (
            sorted(self.pos)
            + [f"not {a}" for a in sorted(self.neg)]
            + [f"not not {a}" for a in sorted(self.dneg)]
        )
        if not body:
            return f"{head}." if head else ":- ."
        sep = " :- " if head else ":- "
        return f"{head}{sep}{', '.join(body)}."


def _dedupe_rules(rules: Iterable[Rule]) -> Tuple[Rule, ...]:
    return tuple(dict.fromkeys(rules))


@attr.frozen
class Program:
    """A finite rule set over an ordered universe.

    Equality ignores rule order and universe order. The universe order fixes
    the bit encoding of interpretations and therefore every canonical order.
    """

    universe: Tuple[str, ...] = attr.field(converter=tuple, eq=frozenset)
    rules: Tuple[Rule, ...] = attr.field(converter=_dedupe_rules, eq=frozenset, factory=tuple)

    def __attrs_post_init__(self):
        if len(set(self.universe)) != len(self.universe):
            raise UniverseError(f"duplicate atoms in universe {list(self.universe)}")
        known = set(self.universe)
        for rule in self.rules:
            missing = rule.atoms - known
            if missing:
                raise UniverseError(
                    f"rule '{rule}' uses atoms outside the universe: {sorted(missing)}"
                )

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], universe: Sequence[str] = ()) -> "Program":
        """Build a program whose universe is ``universe`` followed by any further occurring atoms."""
        rules = list(rules)
        order = list(dict.fromkeys(universe))
        seen = set(order)
        for rule in rules:
            for name in sorted(rule.atoms - seen):
                order.append(name)
                seen.add(name)
        return cls(universe=order, rules=rules)

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        return tuple(Atom(i, name) for i, name in enumerate(self.universe))

    @property
    def occurring(self) -> FrozenSet[str]:
        return frozenset().union(*(r.atoms for r in self.rules))

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self):
        return format_program(self)

    def with_universe(self, atoms: Iterable[str]) -> "Program":
        """The same rules over the universe extended by ``atoms`` (appended in the given order)."""
        known = set(self.universe)
        extra = [a for a in dict.fromkeys(atoms) if a not in known]
        if not extra:
            return self
        return Program(universe=self.universe + tuple(extra), rules=self.rules)

    def union(self, other: "Program") -> "Program":
        merged = self.with_universe(other.universe)
        return Program(universe=merged.universe, rules=self.rules + other.rules)

    def check_atoms(self, atoms: Iterable[str], what: str = "atom set") -> FrozenSet[str]:
        atoms = frozenset(atoms)
        missing = atoms - set(self.universe)
        if missing:
            raise UniverseError(f"{what} contains atoms outside the universe: {sorted(missing)}")
        return atoms

    def ordered(self, atoms: Iterable[str]) -> Tuple[str, ...]:
        """``atoms`` listed in universe order."""
        atoms = set(atoms)
        return tuple(a for a in self.universe if a in atoms)


## grammar


def comment():
    return _(r"%.*")


def atom():
    return _(r"(?!not\b)" + ATOM_PATTERN)


def naf():
    return _(r"not\b")


def literal():
    return Opt(naf), Opt(naf), atom


def body():
    return literal, ZeroOrMore(",", literal)


def head():
    return atom, ZeroOrMore("|", atom)


def directive():
    return "#universe", Opt(atom, ZeroOrMore(",", atom)), "."


def constraint():
    return ":-", Opt(body), "."


def rule():
    return head, Opt(":-", Opt(body)), "."


def statement():
    return [directive, constraint, rule]


def program():
    return ZeroOrMore(statement), EOF


_parser = ParserPython(program, comment)


class _Token(NamedTuple):
    name: str
    position: int


class _Literal(NamedTuple):
    depth: int
    token: _Token


class _Head(NamedTuple):
    tokens: Tuple[_Token, ...]


class _Body(NamedTuple):
    literals: Tuple[_Literal, ...]


class _Directive(NamedTuple):
    tokens: Tuple[_Token, ...]


_NAF = object()


class ProgramVisitor(PTNodeVisitor):
    def __init__(self, parser, source="", **kwargs):
        super().__init__(**kwargs)
        self.parser = parser
        self.source = source

    def error(self, message, position):
        line, col = self.parser.pos_to_linecol(position)
        return ProgramSyntaxError(message, line, col, self.source)

    def visit_atom(self, node, children):
        return _Token(str(node.value), node.position)

    def visit_naf(self, node, children):
        return _NAF

    def visit_literal(self, node, children):
        depth = sum(1 for c in children if c is _NAF)
        token = next(c for c in children if isinstance(c, _Token))
        return _Literal(depth, token)

    def visit_head(self, node, children):
        return _Head(tuple(c for c in children if isinstance(c, _Token)))

    def visit_body(self, node, children):
        return _Body(tuple(c for c in children if isinstance(c, _Literal)))

    def visit_directive(self, node, children):
        return _Directive(tuple(c for c in children if isinstance(c, _Token)))

    def visit_constraint(self, node, children):
        return self._make_rule(node, _Head(()), children)

    def visit_rule(self, node, children):
        head = next(c for c in children if isinstance(c, _Head))
        return self._make_rule(node, head, children)

    def visit_program(self, node, children):
        return [c for c in children if isinstance(c, (_Directive, tuple))]

    def _make_rule(self, node, head, children):
        body = next((c for c in children if isinstance(c, _Body)), _Body(()))
        head_names = [t.name for t in head.tokens]
        for token in head.tokens:
            if head_names.count(token.name) > 1:
                raise self.error(f"atom '{token.name}' repeated in rule head", token.position)
        parts = ([], [], [])
        for lit in body.literals:
            part = parts[lit.depth]
            if lit.token.name in part:
                raise self.error(f"literal on '{lit.token.name}' repeated in rule body", lit.token.position)
            part.append(lit.token.name)
        new_rule = Rule(head=head_names, pos=parts[0], neg=parts[1], dneg=parts[2])
        tokens = list(head.tokens) + [lit.token for lit in body.literals]
        return (new_rule, tokens)


def parse_program(
    text: str,
    declared_universe: Optional[Iterable[str]] = None,
    strict: bool = False,
    source: str = "",
) -> Program:
    """Parse program text.

    Args:
        text: program in the grammar of this module
        declared_universe: atoms to include in the universe even if unused
        strict: reject rule atoms that neither ``declared_universe`` nor a
            ``#universe`` directive declares
        source: name used in error messages (usually the file path)

    Returns:
        Program: universe is the declared atoms followed by the occurring atoms
        in order of first occurrence; rule order is preserved, duplicates dropped
    """
    try:
        tree = _parser.parse(text)
    except NoMatch as e:
        line, col = _parser.pos_to_linecol(e.position)
        raise ProgramSyntaxError(_expected(e), line, col, source) from None
    statements = visit_parse_tree(tree, ProgramVisitor(_parser, source=source))

    declared = list(dict.fromkeys(declared_universe or ()))
    for stmt in statements:
        if isinstance(stmt, _Directive):
            declared.extend(t.name for t in stmt.tokens if t.name not in declared)

    order = list(declared)
    seen = set(order)
    rules = []
    for stmt in statements:
        if isinstance(stmt, _Directive):
            continue
        new_rule, tokens = stmt
        for token in tokens:
            if token.name in seen:
                continue
            if strict:
                line, col = _parser.pos_to_linecol(token.position)
                raise ProgramSyntaxError(
                    f"atom '{token.name}' outside the declared universe", line, col, source
                )
            order.append(token.name)
            seen.add(token.name)
        rules.append(new_rule)
    p = Program(universe=order, rules=rules)
    logger.debug("parsed %d rules over %d atoms from %s", len(p), len(order), source or "<text>")
    return p


def _expected(e: NoMatch) -> str:
    names = sorted({getattr(r, "name", str(r)) for r in e.rules})
    return "expected " + " or ".join(names)


def read_source(path) -> str:
    """File contents as UTF-8; undecodable bytes are a parse error at their position."""
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        data = e.object
        line = data.count(b"\n", 0, e.start) + 1
        col = e.start - data.rfind(b"\n", 0, e.start)
        raise ProgramSyntaxError(f"invalid UTF-8 ({e.reason})", line, col, str(path)) from None


def load_program(path, declared_universe: Optional[Iterable[str]] = None, strict: bool = False) -> Program:
    return parse_program(read_source(path), declared_universe, strict, source=str(path))


def format_program(p: Program, header: Sequence[str] = ()) -> str:
    """Print ``p``; the output parses back to an equal program.

    A ``#universe`` directive is emitted whenever the universe is non-empty so
    that unused atoms survive the round trip.
    """
    lines = [f"% {h}" for h in header]
    if p.universe:
        lines.append(f"#universe {', '.join(p.universe)}.")
    lines.extend(str(r) for r in p.rules)
    return "\n".join(lines) + "\n" if lines else ""


def project(p: Program, a: Iterable[str]) -> Program:
    """Syntactic projection removing the atoms ``a``.

    Rules whose head or negative body meets ``a`` are dropped; the remaining
    rules lose the atoms of ``a`` from their positive and doubly negated body.
    """
    a = p.check_atoms(a, "projected set")
    rules = [
        Rule(head=r.head, pos=r.pos - a, neg=r.neg, dneg=r.dneg - a)
        for r in p.rules
        if not (r.head & a or r.neg & a)
    ]
    return Program(universe=[x for x in p.universe if x not in a], rules=rules)


def is_a_separated(r: Program, a: Iterable[str]) -> bool:
    """True iff every rule of ``r`` lives entirely inside ``a`` or entirely outside it."""
    a = frozenset(a)
    return all(rule.atoms <= a or not (rule.atoms & a) for rule in r.rules)


def parse_atom_list(text: Optional[str]) -> Optional[List[str]]:
    """``"b,c"`` -> ``["b", "c"]``; ``""`` -> ``[]``; ``None`` stays ``None``."""
    if text is None:
        return None
    return [name.strip() for name in text.split(",") if name.strip()]
