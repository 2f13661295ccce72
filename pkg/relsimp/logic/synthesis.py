"""Program construction from SE-model sets, forgetting and simplification."""

import logging
from typing import Iterable, List, Sequence

from relsimp.errors import ForgettingImpossibleError, NotSimplifiableError, VerificationError
from relsimp.logic.bits import full_mask, mask_of, names_of, submasks
from relsimp.logic.relativized import (
    RelCtx,
    ab_se_models,
    check_omega,
    family_models,
    is_simplifiable,
)
from relsimp.logic.semantics import SEModelSet, se_models, se_models_restricted
from relsimp.logic.syntax import Program, Rule, project

logger = logging.getLogger(__name__)


def canonical_program(target: SEModelSet, alphabet: Sequence[str]) -> Program:
    """Build an extended program over ``alphabet`` whose SE-models are exactly ``target``.

    Every total interpretation Y missing from ``target`` is excluded by
    ``:- Y, not (V - Y).``; every missing ``<X,Y>`` below a present total is
    excluded by ``(Y - X) :- X, not (V - Y), not not (Y - X).``. Only ``Y - X``
    is double negated: the atoms of X already occur positively, and ``not not``
    over all of Y gives the same SE-models.

    Raises:
        ValueError: ``target`` is not total-closed or leaves ``alphabet``
        VerificationError: the constructed program does not reproduce ``target``
    """
    alphabet = tuple(alphabet)
    index = {a: i for i, a in enumerate(alphabet)}
    if not target.is_total_closed():
        raise ValueError("target SE-model set is not closed under totals")
    outside = {a for s in target.pairs for a in s.there} - set(alphabet)
    if outside:
        raise ValueError(f"target uses atoms outside the alphabet: {sorted(outside)}")

    present = {(mask_of(s.here, index), mask_of(s.there, index)) for s in target.pairs}
    full = full_mask(len(alphabet))
    rules: List[Rule] = []
    for y in range(full + 1):
        there = names_of(y, alphabet)
        rest = names_of(full & ~y, alphabet)
        if (y, y) not in present:
            rules.append(Rule(pos=there, neg=rest))
            continue
        for x in submasks(y):
            if x != y and (x, y) not in present:
                missing = names_of(y & ~x, alphabet)
                rules.append(Rule(head=missing, pos=names_of(x, alphabet), neg=rest, dneg=missing))

    q = Program(universe=alphabet, rules=rules)
    if se_models(q).pairs != target.pairs:
        raise VerificationError("constructed program does not reproduce the target SE-models")
    logger.debug("canonical program: %d rules for %d target pairs", len(rules), len(target))
    return q


def forget_rss(p: Program, ctx: RelCtx) -> Program:
    """Forget ``ctx.remove`` from ``p`` relative to the context vocabulary ``ctx.context``.

    The result lives over the kept atoms and its SE-models relativized to
    ``B - A`` are :func:`family_models` of ``p``. When Omega is satisfied the
    result is still returned, with a warning, since it cannot preserve
    answer sets under every context.

    Raises:
        VerificationError: the result misses its relativized SE-model contract
    """
    satisfied, witness = check_omega(p, ctx)
    if satisfied:
        logger.warning(
            "Omega holds at Y=%s; forgetting %s is not answer-set preserving",
            sorted(witness.y),
            sorted(ctx.remove),
        )
    target = family_models(p, ctx)
    q = canonical_program(target, ctx.kept)
    if se_models_restricted(q, ctx.kept, ctx.residual_context) != target:
        raise VerificationError(
            "forgetting result does not have the target SE-models relative to "
            f"{sorted(ctx.residual_context)}"
        )
    return q


def simplify(p: Program, ctx: RelCtx) -> Program:
    """Project away ``A & B``, then forget ``A - B`` relative to ``B - A``.

    Raises:
        NotSimplifiableError: the Delta conditions fail or Omega holds; the
            exception carries the report with the witness
        VerificationError: the output does not match the A-B-SE-models of ``p``
    """
    report = is_simplifiable(p, ctx)
    if not report.simplifiable:
        failing = [name for name in ("s1", "s2", "s3") if not getattr(report.delta, name).holds]
        reason = f"delta {', '.join(failing)} fails" if failing else f"Omega holds at Y={report.omega.witness_y}"
        raise NotSimplifiableError(
            f"not simplifiable removing {sorted(ctx.remove)} relative to {sorted(ctx.context)}: {reason}",
            report,
        )
    projected = ctx.remove & ctx.context
    p1 = project(p, projected)
    inner = RelCtx(p1.universe, ctx.remove - ctx.context, ctx.residual_context)
    q = forget_rss(p1, inner)
    if ab_se_models(p, ctx) != se_models_restricted(q, ctx.kept, ctx.residual_context):
        raise VerificationError("simplified program does not match the A-B-SE-models of the input")
    logger.info(
        "simplified %d rules to %d (projected %s, forgot %s)",
        len(p),
        len(q),
        sorted(projected),
        sorted(inner.remove),
    )
    return q


def forget_rsp(p: Program, a: Iterable[str], s: Iterable[str]) -> Program:
    """Forget ``a`` so that answer sets are preserved under every context over ``s``.

    Raises:
        ForgettingImpossibleError: Omega holds for ``a`` relative to ``s``
    """
    ctx = RelCtx.relativized_persistence(p.universe, a, s)
    satisfied, witness = check_omega(p, ctx)
    if satisfied:
        raise ForgettingImpossibleError(
            f"cannot forget {sorted(ctx.remove)} relative to {sorted(ctx.context)}: "
            f"Y={sorted(witness.y)} has no least entry in its family",
            witness,
        )
    return forget_rss(p, ctx)


def prune_rules(q: Program) -> Program:
    """Greedily drop rules, in order, whenever the SE-models stay the same."""
    reference = se_models(q)
    rules = list(q.rules)
    i = 0
    while i < len(rules):
        candidate = Program(universe=q.universe, rules=rules[:i] + rules[i + 1:])
        if se_models(candidate) == reference:
            rules = list(candidate.rules)
        else:
            i += 1
    return Program(universe=q.universe, rules=rules)


def simplification_header(ctx: RelCtx, verified: bool) -> List[str]:
    def names(atoms):
        return ",".join(x for x in ctx.universe if x in atoms) or "(none)"

    return [
        f"relsimp: remove={names(ctx.remove)} relative-to={names(ctx.context)}",
        f"projected: {names(ctx.remove & ctx.context)}",
        f"forgotten: {names(ctx.remove - ctx.context)}",
        f"verification: {'se-models ok' if verified else 'not verified'}",
    ]
