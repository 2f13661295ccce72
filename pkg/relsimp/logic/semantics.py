"""Models, reducts, answer sets and SE-models by exhaustive enumeration.

Interpretations are handled internally as bitmasks over the program universe
(see :mod:`relsimp.logic.bits`); everything returned to callers uses atom
names. Pairs are always produced Y-major: ``there`` ascending by encoding,
then ``here`` ascending.
"""

import logging
from collections import OrderedDict
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import attr

from relsimp.config import get_settings
from relsimp.errors import UniverseError
from relsimp.logic.bits import (
    full_mask,
    is_subset,
    mask_of,
    names_of,
    proper_submasks_desc,
    submasks,
)
from relsimp.logic.syntax import Program, Rule
from relsimp.reports import Report

logger = logging.getLogger(__name__)

Interpretation = FrozenSet[str]

# (head, pos, neg, dneg) masks of one rule
CompiledRule = Tuple[int, int, int, int]


def _interpretation(atoms: Iterable[str]) -> Interpretation:
    return frozenset(atoms)


@attr.frozen
class SEInterpretation:
    here: Interpretation = attr.field(converter=_interpretation)
    there: Interpretation = attr.field(converter=_interpretation)

    def __attrs_post_init__(self):
        if not self.here <= self.there:
            raise ValueError(f"here {sorted(self.here)} is not a subset of there {sorted(self.there)}")

    @property
    def total(self) -> bool:
        return self.here == self.there

    def __str__(self):
        return f"<{format_interpretation(self.here)},{format_interpretation(self.there)}>"


def format_interpretation(i: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(i)) + "}"


class PairModel(Report):
    here: List[str]
    there: List[str]

    @classmethod
    def from_pair(cls, pair: SEInterpretation) -> "PairModel":
        return cls(here=sorted(pair.here), there=sorted(pair.there))


class SEModelSetReport(Report):
    alphabet: List[str]
    relativizer: Optional[List[str]]
    pairs: List[PairModel]


@attr.frozen
class SEModelSet:
    """A set of SE-interpretations over ``alphabet``.

    ``relativizer`` is the context set B when the pairs are B-SE-models, in
    which case every non-total pair has ``here`` strictly inside
    ``there & relativizer``. Equality compares the pairs and the alphabet as
    sets; the relativizer is descriptive only.
    """

    alphabet: Tuple[str, ...] = attr.field(converter=tuple, eq=frozenset)
    pairs: FrozenSet[SEInterpretation] = attr.field(converter=frozenset)
    relativizer: Optional[FrozenSet[str]] = attr.field(
        default=None, converter=attr.converters.optional(frozenset), eq=False
    )

    @classmethod
    def from_strings(cls, alphabet: Sequence[str], specs: Iterable[str], relativizer=None) -> "SEModelSet":
        """Pairs written ``"here/there"`` with one-letter atoms; ``"ab"`` is ``"ab/ab"``."""
        pairs = []
        for spec in specs:
            here, _, there = spec.partition("/")
            pairs.append(SEInterpretation(here, there if _ else here))
        return cls(alphabet=alphabet, pairs=pairs, relativizer=relativizer)

    def restrict(self, alphabet: Iterable[str]) -> "SEModelSet":
        """The pairs whose ``there`` lies within ``alphabet``."""
        keep = frozenset(alphabet)
        return SEModelSet(
            alphabet=[a for a in self.alphabet if a in keep],
            pairs=[s for s in self.pairs if s.there <= keep],
            relativizer=None if self.relativizer is None else self.relativizer & keep,
        )

    def __iter__(self) -> Iterator[SEInterpretation]:
        index = {a: i for i, a in enumerate(self.alphabet)}
        return iter(
            sorted(self.pairs, key=lambda s: (mask_of(s.there, index), mask_of(s.here, index)))
        )

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def totals(self) -> FrozenSet[Interpretation]:
        return frozenset(s.there for s in self.pairs if s.total)

    def is_total_closed(self) -> bool:
        totals = self.totals()
        return all(s.there in totals for s in self.pairs)

    def same_pairs(self, other: "SEModelSet") -> bool:
        return self.pairs == other.pairs

    def to_report(self) -> SEModelSetReport:
        return SEModelSetReport(
            alphabet=sorted(self.alphabet),
            relativizer=None if self.relativizer is None else sorted(self.relativizer),
            pairs=[PairModel.from_pair(s) for s in self],
        )

    def __str__(self):
        return "\n".join(str(s) for s in self)


@attr.define(eq=False)
class RelativizedTable:
    """B-SE-models of a program in mask form.

    ``heres`` maps each total ``there`` to the ascending tuple of its ``here``
    components (the total one last); ``witnesses`` maps each non-total pair
    to the first X' found for it.
    """

    b: int
    heres: "OrderedDict[int, Tuple[int, ...]]"
    witnesses: Dict[Tuple[int, int], int]

    def pairs(self) -> Iterator[Tuple[int, int]]:
        for y, xs in self.heres.items():
            for x in xs:
                yield x, y

    def contains(self, x: int, y: int) -> bool:
        xs = self.heres.get(y)
        return xs is not None and x in xs


class Evaluator:
    """Mask-level evaluation of one program over a fixed universe order."""

    def __init__(self, universe: Sequence[str], rules: Iterable[Rule], auxiliary: int = 0):
        """``auxiliary`` trailing atoms of ``universe`` are not counted against the cap."""
        limit = get_settings().max_universe
        if len(universe) - auxiliary > limit:
            raise UniverseError(
                f"universe has {len(universe) - auxiliary} atoms, above the configured cap of {limit}"
            )
        self.universe = tuple(universe)
        self.index = {name: i for i, name in enumerate(self.universe)}
        self.full = full_mask(len(self.universe))
        self.rules = self.compile_rules(rules)
        self._reduct_models: Dict[int, Tuple[int, ...]] = {}
        self._models: Optional[Tuple[int, ...]] = None
        self._tables: Dict[int, RelativizedTable] = {}

    def compile_rules(self, rules: Iterable[Rule]) -> Tuple[CompiledRule, ...]:
        return tuple(
            (self.mask(r.head), self.mask(r.pos), self.mask(r.neg), self.mask(r.dneg))
            for r in rules
        )

    def mask(self, names: Iterable[str]) -> int:
        try:
            return mask_of(names, self.index)
        except KeyError as e:
            raise UniverseError(f"atom {e.args[0]!r} is not in the universe") from None

    def names(self, mask: int) -> Interpretation:
        return names_of(mask, self.universe)

    def pair(self, x: int, y: int) -> SEInterpretation:
        return SEInterpretation(self.names(x), self.names(y))

    def model_set(self, pairs: Iterable[Tuple[int, int]], relativizer: Optional[int] = None) -> SEModelSet:
        return SEModelSet(
            alphabet=self.universe,
            pairs=[self.pair(x, y) for x, y in pairs],
            relativizer=None if relativizer is None else self.names(relativizer),
        )

    def models(self) -> Tuple[int, ...]:
        if self._models is None:
            self._models = tuple(y for y in range(self.full + 1) if satisfies(self.rules, y))
        return self._models

    def reduct_models(self, y: int) -> Tuple[int, ...]:
        """All X within ``y`` that are models of the reduct w.r.t. ``y``, ascending."""
        xs = self._reduct_models.get(y)
        if xs is None:
            xs = tuple(x for x in submasks(y) if satisfies_reduct(self.rules, x, y))
            self._reduct_models[y] = xs
        return xs

    def answer_sets(self) -> List[int]:
        found = []
        for y in self.models():
            if not any(satisfies_reduct(self.rules, x, y) for x in proper_submasks_desc(y)):
                found.append(y)
        return found

    def relativized(self, b: int) -> RelativizedTable:
        """The B-SE-models for the context mask ``b``."""
        table = self._tables.get(b)
        if table is not None:
            return table
        heres: "OrderedDict[int, Tuple[int, ...]]" = OrderedDict()
        witnesses = {}
        for y in self.models():
            yb = y & b
            xs = self.reduct_models(y)
            if any(x != y and x & b == yb for x in xs):
                continue
            first: Dict[int, int] = {}
            for x in xs:
                xb = x & b
                if xb != yb and xb not in first:
                    first[xb] = x
            heres[y] = tuple(sorted(first)) + (y,)
            for xb, witness in first.items():
                witnesses[(xb, y)] = witness
        table = RelativizedTable(b=b, heres=heres, witnesses=witnesses)
        logger.debug(
            "relativized SE-models for B=%s: %d totals, %d pairs",
            sorted(self.names(b)),
            len(heres),
            sum(len(xs) for xs in heres.values()),
        )
        self._tables[b] = table
        return table


def satisfies(rules: Sequence[CompiledRule], i: int) -> bool:
    for h, p, n, d in rules:
        if not ((h | n) & i) and is_subset(p | d, i):
            return False
    return True


def satisfies_reduct(rules: Sequence[CompiledRule], x: int, y: int) -> bool:
    """Whether ``x`` is a model of the reduct of ``rules`` w.r.t. ``y``."""
    for h, p, n, d in rules:
        if n & y or not is_subset(d, y):
            continue
        if is_subset(p, x) and not h & x:
            return False
    return True


@lru_cache(maxsize=512)
def _evaluator(universe: Tuple[str, ...], rules: Tuple[Rule, ...]) -> Evaluator:
    return Evaluator(universe, rules)


def compile_program(p: Program) -> Evaluator:
    """Cached :class:`Evaluator` for ``p`` (keyed on universe order and rule order)."""
    return _evaluator(p.universe, p.rules)


def is_model(i: Iterable[str], p: Program) -> bool:
    ev = compile_program(p)
    return satisfies(ev.rules, ev.mask(i))


def reduct(p: Program, i: Iterable[str]) -> Program:
    """The positive program ``{H(r) :- B+(r)}`` of rules not blocked by ``i``."""
    i = p.check_atoms(i, "interpretation")
    return Program(
        universe=p.universe,
        rules=[Rule(head=r.head, pos=r.pos) for r in p.rules if not (r.neg & i) and r.dneg <= i],
    )


def answer_sets(p: Program) -> FrozenSet[Interpretation]:
    ev = compile_program(p)
    return frozenset(ev.names(y) for y in ev.answer_sets())


def answer_sets_projected(p: Program, keep: Iterable[str]) -> FrozenSet[Interpretation]:
    keep = frozenset(keep)
    return frozenset(i & keep for i in answer_sets(p))


def se_models(p: Program) -> SEModelSet:
    ev = compile_program(p)
    return ev.model_set(ev.relativized(ev.full).pairs())


def rel_se_models(p: Program, b: Iterable[str]) -> SEModelSet:
    """The B-SE-models of ``p``.

    Totals are the models Y of ``p`` with no Y' strictly inside Y that agrees
    with Y on B and satisfies the reduct w.r.t. Y. Non-totals are the pairs
    ``<X,Y>`` with X strictly inside ``Y & B`` for which some X' within Y,
    with ``X' & B == X``, satisfies that reduct.
    """
    ev = compile_program(p)
    bm = ev.mask(b)
    return ev.model_set(ev.relativized(bm).pairs(), relativizer=bm)


def rel_se_witnesses(p: Program, b: Iterable[str]) -> Dict[SEInterpretation, Interpretation]:
    """The X' recorded for each non-total B-SE-model (first in canonical order)."""
    ev = compile_program(p)
    table = ev.relativized(ev.mask(b))
    return {ev.pair(x, y): ev.names(w) for (x, y), w in table.witnesses.items()}


def se_models_restricted(p: Program, a1: Iterable[str], a2: Iterable[str]) -> SEModelSet:
    """B-SE-models for ``B = a2`` whose ``there`` lies within ``a1``."""
    ev = compile_program(p)
    m1 = ev.mask(a1)
    m2 = ev.mask(a2)
    pairs = [(x, y) for x, y in ev.relativized(m2).pairs() if is_subset(y, m1)]
    return SEModelSet(
        alphabet=p.ordered(a1),
        pairs=[ev.pair(x, y) for x, y in pairs],
        relativizer=ev.names(m2),
    )
