"""Relativized simplifiability: A-B-SE-models, the Delta conditions and criterion Omega.

Throughout, ``A`` is the set of atoms to remove and ``B`` the vocabulary of
the context programs. A program is B-relativized A-simplifiable iff the three
Delta conditions hold and criterion Omega is not satisfied.
"""

import logging
from collections import OrderedDict
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import attr
from pydantic import Field

from relsimp.errors import UniverseError
from relsimp.logic.bits import is_subset, submasks
from relsimp.logic.semantics import (
    Evaluator,
    Interpretation,
    PairModel,
    RelativizedTable,
    SEModelSet,
    compile_program,
    rel_se_models,
)
from relsimp.logic.syntax import Program
from relsimp.reports import Report

logger = logging.getLogger(__name__)


@attr.frozen
class RelCtx:
    """Universe ``U``, removal set ``A`` and context vocabulary ``B``."""

    universe: Tuple[str, ...] = attr.field(converter=tuple, eq=frozenset)
    remove: FrozenSet[str] = attr.field(converter=frozenset, factory=frozenset)
    context: FrozenSet[str] = attr.field(converter=frozenset, factory=frozenset)

    def __attrs_post_init__(self):
        known = set(self.universe)
        for what, atoms in (("remove", self.remove), ("context", self.context)):
            if not atoms <= known:
                raise UniverseError(
                    f"{what} set contains atoms outside the universe: {sorted(atoms - known)}"
                )

    @classmethod
    def for_program(
        cls, p: Program, remove: Iterable[str] = (), context: Optional[Iterable[str]] = None
    ) -> "RelCtx":
        """Context over ``p``'s universe; ``context`` defaults to the whole universe."""
        return cls(p.universe, remove, p.universe if context is None else context)

    @classmethod
    def equivalence(cls, universe: Sequence[str]) -> "RelCtx":
        return cls(universe, (), ())

    @classmethod
    def strong_equivalence(cls, universe: Sequence[str]) -> "RelCtx":
        return cls(universe, (), universe)

    @classmethod
    def relativized_equivalence(cls, universe: Sequence[str], context: Iterable[str]) -> "RelCtx":
        return cls(universe, (), context)

    @classmethod
    def strong_simplification(cls, universe: Sequence[str], remove: Iterable[str]) -> "RelCtx":
        return cls(universe, remove, universe)

    @classmethod
    def strong_persistence(cls, universe: Sequence[str], remove: Iterable[str]) -> "RelCtx":
        remove = frozenset(remove)
        return cls(universe, remove, [x for x in universe if x not in remove])

    @classmethod
    def relativized_persistence(
        cls, universe: Sequence[str], remove: Iterable[str], s: Iterable[str]
    ) -> "RelCtx":
        remove, s = frozenset(remove), frozenset(s)
        if remove & s:
            raise UniverseError(f"context set overlaps the removed atoms: {sorted(remove & s)}")
        return cls(universe, remove, s)

    @classmethod
    def faithful_abstraction(cls, universe: Sequence[str], remove: Iterable[str]) -> "RelCtx":
        return cls(universe, remove, ())

    @property
    def kept(self) -> Tuple[str, ...]:
        """The atoms outside ``A``, in universe order."""
        return tuple(x for x in self.universe if x not in self.remove)

    @property
    def residual_context(self) -> FrozenSet[str]:
        """``B`` without ``A``: the relativizer on the simplified side."""
        return self.context - self.remove

    def spectrum_row(self) -> str:
        universe = frozenset(self.universe)
        kept = universe - self.remove
        if not self.remove:
            if not self.context:
                return "equivalence"
            if self.context == universe:
                return "strong equivalence"
            return "relativized strong equivalence"
        if self.context == universe:
            return "strong simplification"
        if not self.context:
            return "faithful abstraction"
        if self.context == kept:
            return "strong persistence"
        if self.context <= kept:
            return "relativized strong persistence"
        return "relativized strong simplification"


@attr.frozen
class RYFamily:
    """For a fixed Y over the kept atoms: one entry per A' within A such that
    ``<Y+A', Y+A'>`` is a total B-SE-model, holding the here-components of that
    total model with ``A`` removed."""

    y: Interpretation = attr.field(converter=frozenset)
    members: Tuple[Tuple[Interpretation, FrozenSet[Interpretation]], ...] = attr.field(
        converter=tuple, factory=tuple
    )

    @property
    def empty(self) -> bool:
        return not self.members

    def sets(self) -> Tuple[FrozenSet[Interpretation], ...]:
        return tuple(dict.fromkeys(heres for _, heres in self.members))

    def least(self) -> Optional[FrozenSet[Interpretation]]:
        sets = self.sets()
        for candidate in sets:
            if all(candidate <= other for other in sets):
                return candidate
        return None

    def has_least(self) -> bool:
        return self.least() is not None

    def intersection(self) -> FrozenSet[Interpretation]:
        """Intersection of all entries; the empty family yields the empty set."""
        sets = self.sets()
        if not sets:
            return frozenset()
        return frozenset.intersection(*sets)

    def to_lists(self) -> List[List[List[str]]]:
        return [sorted(sorted(x) for x in heres) for heres in self.sets()]


class DeltaCondition(Report):
    holds: bool
    witness: Optional[PairModel] = None


class DeltaReport(Report):
    s1: DeltaCondition
    s2: DeltaCondition
    s3: DeltaCondition
    notes: List[str] = []

    @property
    def holds(self) -> bool:
        return self.s1.holds and self.s2.holds and self.s3.holds


class OmegaReport(Report):
    satisfied: bool
    witness_y: Optional[List[str]] = Field(None, alias="witnessY")
    family: Optional[List[List[List[str]]]] = None
    witness_count: int = Field(0, alias="witnessCount")


class SimplifiabilityReport(Report):
    remove: List[str]
    relative_to: List[str] = Field(..., alias="relativeTo")
    spectrum: str
    delta: DeltaReport
    omega: OmegaReport
    simplifiable: bool
    notes: List[str] = []


def _masks(p: Program, ctx: RelCtx) -> Tuple[Evaluator, int, int, int]:
    p.check_atoms(ctx.remove, "remove set")
    p.check_atoms(ctx.context, "context set")
    ev = compile_program(p)
    a = ev.mask(ctx.remove)
    return ev, a, ev.mask(ctx.context), ev.full & ~a


def _project_table(table: RelativizedTable, keep: int) -> "OrderedDict[int, List[Tuple[int, FrozenSet[int]]]]":
    """Group total B-SE-models by their projection; each entry carries its projected here-set."""
    groups: "OrderedDict[int, List[Tuple[int, FrozenSet[int]]]]" = OrderedDict()
    for y, xs in table.heres.items():
        groups.setdefault(y & keep, []).append((y, frozenset(x & keep for x in xs)))
    return OrderedDict(sorted(groups.items()))


def _ab_se_pairs(table: RelativizedTable, keep: int) -> List[Tuple[int, int]]:
    groups = _project_table(table, keep)
    pairs = set()
    for y, xs in table.heres.items():
        py = y & keep
        pairs.add((py, py))
        for x in xs[:-1]:
            px = x & keep
            if all(px in heres for _, heres in groups[py]):
                pairs.add((px, py))
    return sorted(pairs, key=lambda xy: (xy[1], xy[0]))


def ab_se_models(p: Program, ctx: RelCtx) -> SEModelSet:
    """Projections onto the kept atoms of all total B-SE-models, plus those of
    non-total B-SE-models whose projected here-part is matched under every
    total B-SE-model with the same projection."""
    ev, a, b, keep = _masks(p, ctx)
    pairs = _ab_se_pairs(ev.relativized(b), keep)
    return SEModelSet(
        alphabet=ctx.kept,
        pairs=[ev.pair(x, y) for x, y in pairs],
        relativizer=ctx.residual_context,
    )


def _witness(ev: Evaluator, xy: Optional[Tuple[int, int]]) -> DeltaCondition:
    if xy is None:
        return DeltaCondition(holds=True)
    return DeltaCondition(holds=False, witness=PairModel.from_pair(ev.pair(*xy)))


def check_delta(p: Program, ctx: RelCtx) -> DeltaReport:
    """Evaluate the three Delta conditions.

    s1: every total B-SE-model contains ``A & B``.
    s2: a plain SE-model ``<X,Y>`` whose ``Y`` is a total B-SE-model and which
        agrees with ``Y`` outside ``A`` is total.
    s3: adding ``Y & A & B`` to the here-part of a B-SE-model gives a B-SE-model.
    """
    ev, a, b, keep = _masks(p, ctx)
    table = ev.relativized(b)
    ab = a & b

    s1 = next(((y, y) for y in table.heres if not is_subset(ab, y)), None)

    def s2_violation(pairs):
        return next(
            ((x, y) for x, y in pairs if x != y and y in table.heres and x & keep == y & keep),
            None,
        )

    s2 = s2_violation(ev.relativized(ev.full).pairs())
    s3 = next(((x, y) for x, y in table.pairs() if not table.contains(x | (y & ab), y)), None)

    notes = []
    if (s2 is None) != (s2_violation(table.pairs()) is None):
        notes.append("s2 differs when evaluated over the B-SE-models instead of the SE-models")
    report = DeltaReport(s1=_witness(ev, s1), s2=_witness(ev, s2), s3=_witness(ev, s3), notes=notes)
    logger.debug("delta for A=%s B=%s: %s", sorted(ctx.remove), sorted(ctx.context), report)
    return report


def _family(ev: Evaluator, table: RelativizedTable, a: int, keep: int, y: int) -> RYFamily:
    members = []
    for ap in submasks(a):
        xs = table.heres.get(y | ap)
        if xs is not None:
            members.append((ev.names(ap), frozenset(ev.names(x & keep) for x in xs)))
    return RYFamily(y=ev.names(y), members=members)


def ry_family(p: Program, ctx: RelCtx, y: Iterable[str]) -> RYFamily:
    ev, a, b, keep = _masks(p, ctx)
    ym = ev.mask(y)
    if ym & a:
        raise UniverseError(f"Y must not contain removed atoms: {sorted(ev.names(ym & a))}")
    return _family(ev, ev.relativized(b), a, keep, ym)


def _omega_witnesses(p: Program, ctx: RelCtx) -> List[RYFamily]:
    ev, a, b, keep = _masks(p, ctx)
    table = ev.relativized(b)
    found = []
    for y in submasks(keep):
        family = _family(ev, table, a, keep, y)
        if not family.empty and not family.has_least():
            found.append(family)
    return found


def check_omega(p: Program, ctx: RelCtx) -> Tuple[bool, Optional[RYFamily]]:
    """Whether some Y has a non-empty family without a least entry.

    The witness is the canonically least such Y together with its family.
    """
    found = _omega_witnesses(p, ctx)
    return bool(found), (found[0] if found else None)


def omega_report(p: Program, ctx: RelCtx) -> OmegaReport:
    found = _omega_witnesses(p, ctx)
    if not found:
        return OmegaReport(satisfied=False)
    first = found[0]
    return OmegaReport(
        satisfied=True,
        witness_y=p.ordered(first.y),
        family=first.to_lists(),
        witness_count=len(found),
    )


def check_omega_via_abse(p: Program, ctx: RelCtx) -> bool:
    """Criterion Omega decided through realizing models of the A-B-SE-models.

    Omega fails exactly when every slice ``{X | <X,Y> in SE^B_A}`` of the
    A-B-SE-models is realized by a single total B-SE-model above Y. A Y
    without total extension contributes nothing.

    Each slice is the meet of the family ``R^Y``, so this is the least-entry
    test of ``check_omega`` read off the A-B-SE-models rather than a separate
    decision procedure. The equation relating the A-B-SE-models to the
    family members holds for every program and decides nothing by itself.
    """
    ev, a, b, keep = _masks(p, ctx)
    table = ev.relativized(b)
    groups = _project_table(table, keep)
    slices: Dict[int, set] = {}
    for x, y in _ab_se_pairs(table, keep):
        slices.setdefault(y, set()).add(x)
    for py, heres in slices.items():
        if not any(entry == heres for _, entry in groups[py]):
            logger.debug("A-B-SE slice at %s has no realizing total model", sorted(ev.names(py)))
            return True
    return False


def is_simplifiable(p: Program, ctx: RelCtx) -> SimplifiabilityReport:
    delta = check_delta(p, ctx)
    omega = omega_report(p, ctx)
    notes = []
    if ctx.remove <= ctx.context:
        notes.append("A is contained in B: the Delta conditions alone decide")
    verdict = delta.holds and not omega.satisfied
    logger.info(
        "A=%s B=%s (%s): %s",
        sorted(ctx.remove),
        sorted(ctx.context),
        ctx.spectrum_row(),
        "simplifiable" if verdict else "not simplifiable",
    )
    return SimplifiabilityReport(
        remove=p.ordered(ctx.remove),
        relative_to=p.ordered(ctx.context),
        spectrum=ctx.spectrum_row(),
        delta=delta,
        omega=omega,
        simplifiable=verdict,
        notes=notes,
    )


def check_relativized_equivalence(p1: Program, p2: Program, b: Iterable[str]) -> bool:
    """Whether ``p1`` and ``p2`` have the same B-SE-models.

    Both programs are first brought to the union of their universes.
    """
    q1 = p1.with_universe(p2.universe)
    q2 = p2.with_universe(q1.universe)
    return rel_se_models(q1, b) == rel_se_models(q2, b)


def family_models(p: Program, ctx: RelCtx) -> SEModelSet:
    """The pairs ``<X,Y>`` over the kept atoms with X in the intersection of the family of Y.

    Each Y with a non-empty family contributes; Y itself is always among its
    own pairs. This is the target SE-model set of forgetting ``A`` relative to ``B``.
    """
    ev, a, b, keep = _masks(p, ctx)
    table = ev.relativized(b)
    pairs = []
    for y in submasks(keep):
        family = _family(ev, table, a, keep, y)
        for here in family.intersection():
            pairs.append(ev.pair(ev.mask(here), y))
    return SEModelSet(alphabet=ctx.kept, pairs=pairs, relativizer=ctx.residual_context)
