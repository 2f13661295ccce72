r"""Command line front end.

The removal set A (``--remove``) and the context vocabulary B
(``--relative-to``) select a row of the simplification spectrum:

\b
    A empty,  B empty        equivalence
    A empty,  B = universe   strong equivalence
    A empty,  B otherwise    relativized strong equivalence
    A given,  B = universe   strong simplification (default B)
    A given,  B = not A      strong persistence (SP-forgetting)
    A given,  B within not A relativized strong persistence
    A given,  B empty        faithful abstraction
    A given,  B otherwise    relativized strong simplification

Exit codes: 0 positive verdict, 1 negative verdict, 2 usage, parse or
configuration error, 3 internal verification failure.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

import click
from pydantic import BaseModel, Field, validator

from relsimp.batch import BatchRow, check_files, verdict_counts
from relsimp.config import get_settings
from relsimp.errors import (
    ForgettingImpossibleError,
    NotSimplifiableError,
    RelsimpError,
    VerificationError,
)
from relsimp.logic.qbf import load_qbf, qbf_eval, qbf_reduce
from relsimp.logic.relativized import (
    RelCtx,
    SimplifiabilityReport,
    ab_se_models,
    check_relativized_equivalence,
    is_simplifiable,
)
from relsimp.logic.semantics import SEModelSetReport, answer_sets, rel_se_models, se_models
from relsimp.logic.synthesis import forget_rsp, prune_rules, simplification_header, simplify
from relsimp.logic.syntax import Program, format_program, load_program, parse_atom_list
from relsimp.logic.verify import ContextBounds, VerificationReport, check_simplification
from relsimp.reports import Report

logger = logging.getLogger(__name__)

ERROR_PREFIX = "relsimp: error"

COMMANDS = (
    "answer-sets",
    "se-models",
    "ab-se-models",
    "check",
    "simplify",
    "verify",
    "forget",
    "equiv",
    "qbf-gen",
)


class SimplificationReport(Report):
    """Result of ``simplify --json``; ``program`` is the printed program text."""

    remove: List[str]
    relative_to: List[str] = Field(alias="relativeTo")
    universe: List[str]
    rules: int
    pruned: bool
    program: str


SCHEMAS = {
    "se-models": SEModelSetReport,
    "simplification": SimplificationReport,
    "simplifiability": SimplifiabilityReport,
    "verification": VerificationReport,
    "batch": BatchRow,
}


class CliConfig(BaseModel):
    command: str
    input_paths: List[Path] = Field(default_factory=list, alias="inputPaths")
    remove: Optional[List[str]] = None
    relative_to: Optional[List[str]] = Field(None, alias="relativeTo")
    max_rules: int = 2
    max_body: int = 2
    proof_witnesses: bool = True
    json_output: bool = Field(False, alias="json")
    output_path: Optional[Path] = Field(None, alias="outputPath")
    simplify_output: bool = False
    cache_dir: Optional[Path] = None
    prog_bar: bool = False

    class Config:
        allow_population_by_field_name = True

    @validator("command")
    def check_command(cls, v):
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}")
        return v

    @property
    def bounds(self) -> ContextBounds:
        return ContextBounds(
            max_rules=self.max_rules,
            max_body_literals=self.max_body,
            include_proof_witness_family=self.proof_witnesses,
        )


def defaults(config: CliConfig, universe: Iterable[str]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """A defaults to the empty set, B to the whole universe."""
    universe = tuple(universe)
    remove = frozenset(config.remove or ())
    relative_to = frozenset(universe if config.relative_to is None else config.relative_to)
    return remove, relative_to


def _context(config: CliConfig, p: Program) -> RelCtx:
    remove, relative_to = defaults(config, p.universe)
    return RelCtx(p.universe, remove, relative_to)


def _ordered_sets(p: Program, sets: Iterable[FrozenSet[str]]) -> List[List[str]]:
    index = {a: i for i, a in enumerate(p.universe)}
    return [p.ordered(s) for s in sorted(sets, key=lambda s: sum(1 << index[a] for a in s))]


def _braces(atoms: Iterable[str]) -> str:
    return "{" + ", ".join(atoms) + "}"


def _write(config: CliConfig, text: str):
    if config.output_path is None:
        click.echo(text, nl=False)
    else:
        config.output_path.write_text(text, encoding="utf-8")
        logger.info("wrote %s", config.output_path)


def _print_simplifiability(report: SimplifiabilityReport):
    click.echo(f"remove: {_braces(report.remove)}")
    click.echo(f"relative to: {_braces(report.relative_to)}")
    click.echo(f"spectrum: {report.spectrum}")
    for name in ("s1", "s2", "s3"):
        condition = getattr(report.delta, name)
        witness = "" if condition.holds else f" (witness <{_braces(condition.witness.here)},{_braces(condition.witness.there)}>)"
        click.echo(f"delta {name}: {'holds' if condition.holds else 'fails'}{witness}")
    if report.omega.satisfied:
        click.echo(f"omega: satisfied at Y={_braces(report.omega.witness_y)} ({report.omega.witness_count} witnesses)")
    else:
        click.echo("omega: not satisfied")
    for note in report.delta.notes + report.notes:
        click.echo(f"note: {note}")
    click.echo(f"verdict: {'simplifiable' if report.simplifiable else 'not simplifiable'}")


def _print_verification(report: VerificationReport):
    click.echo(f"semantic: {'pass' if report.semantic_pass else 'fail'}")
    click.echo(
        f"operational: {'pass' if report.operational_pass else 'fail'} "
        f"({report.contexts_checked} contexts)"
    )
    if report.counterexample is not None:
        cx = report.counterexample
        click.echo(f"counterexample context: {cx.context or '(empty program)'}")
        click.echo("  answer sets with P: " + " ".join(_braces(s) for s in cx.as_p))
        click.echo("  answer sets with Q: " + " ".join(_braces(s) for s in cx.as_q))
    click.echo(f"verdict source: {report.verdict_source}")


def _answer_sets(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    found = _ordered_sets(p, answer_sets(p))
    if config.json_output:
        click.echo(json.dumps({"answerSets": found}))
    else:
        for s in found:
            click.echo(_braces(s))
    return 0


def _se_models(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    models = se_models(p) if config.relative_to is None else rel_se_models(p, config.relative_to)
    click.echo(models.to_report().json(by_alias=True) if config.json_output else str(models))
    return 0


def _ab_se_models(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    models = ab_se_models(p, _context(config, p))
    click.echo(models.to_report().json(by_alias=True) if config.json_output else str(models))
    return 0


def _check(config: CliConfig) -> int:
    paths = config.input_paths
    if len(paths) == 1 and not paths[0].is_dir():
        p = load_program(paths[0])
        report = is_simplifiable(p, _context(config, p))
        if config.json_output:
            click.echo(report.json(by_alias=True))
        else:
            _print_simplifiability(report)
        return 0 if report.simplifiable else 1

    rows, df = check_files(
        paths, config.remove, config.relative_to, cache_dir=config.cache_dir, prog_bar=config.prog_bar
    )
    if config.json_output:
        click.echo(json.dumps([row.dict(by_alias=True) for row in rows]))
    else:
        click.echo(df.to_string(index=False))
        click.echo(verdict_counts(df).to_string())
    if any(row.error for row in rows):
        return 2
    return 0 if all(row.simplifiable for row in rows) else 1


def _simplify(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    ctx = _context(config, p)
    q = simplify(p, ctx)
    if config.simplify_output:
        q = prune_rules(q)
    text = format_program(q, header=simplification_header(ctx, verified=True))
    if not config.json_output:
        _write(config, text)
        return 0
    if config.output_path is not None:
        _write(config, text)
    report = SimplificationReport(
        remove=p.ordered(ctx.remove),
        relative_to=p.ordered(ctx.context),
        universe=list(q.universe),
        rules=len(q),
        pruned=config.simplify_output,
        program=text,
    )
    click.echo(report.json(by_alias=True))
    return 0


def _verify(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    q = load_program(config.input_paths[1])
    report = check_simplification(p, q, _context(config, p), config.bounds, prog_bar=config.prog_bar)
    if config.json_output:
        click.echo(report.json(by_alias=True))
    else:
        _print_verification(report)
    return 0 if report.passed else 1


def _forget(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    remove = frozenset(config.remove or ())
    if config.relative_to is None:
        s = [x for x in p.universe if x not in remove]
    else:
        s = config.relative_to
    q = forget_rsp(p, remove, s)
    if config.simplify_output:
        q = prune_rules(q)
    ctx = RelCtx.relativized_persistence(p.universe, remove, s)
    _write(config, format_program(q, header=simplification_header(ctx, verified=True)))
    return 0


def _equiv(config: CliConfig) -> int:
    p = load_program(config.input_paths[0])
    q = load_program(config.input_paths[1])
    if config.remove:
        return _verify(config)
    merged = p.union(q)
    _, relative_to = defaults(config, merged.universe)
    equivalent = check_relativized_equivalence(p, q, relative_to)
    if config.json_output:
        click.echo(json.dumps({"equivalent": equivalent, "relativeTo": merged.ordered(relative_to)}))
    else:
        click.echo(f"relative to {_braces(merged.ordered(relative_to))}: {'equivalent' if equivalent else 'not equivalent'}")
    return 0 if equivalent else 1


def _qbf_gen(config: CliConfig) -> int:
    path = config.input_paths[0]
    phi = load_qbf(path)
    p, q, a = qbf_reduce(phi)
    out_dir = config.output_path or path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = path.stem
    written = {
        out_dir / f"{stem}.p.lp": format_program(p),
        out_dir / f"{stem}.q.lp": format_program(q),
        out_dir / f"{stem}.remove": ",".join(p.ordered(a)) + "\n",
    }
    for target, text in written.items():
        target.write_text(text, encoding="utf-8")
        click.echo(str(target))
    logger.info("%s evaluates to %s", path, qbf_eval(phi))
    return 0


HANDLERS: Dict[str, Callable[[CliConfig], int]] = {
    "answer-sets": _answer_sets,
    "se-models": _se_models,
    "ab-se-models": _ab_se_models,
    "check": _check,
    "simplify": _simplify,
    "verify": _verify,
    "forget": _forget,
    "equiv": _equiv,
    "qbf-gen": _qbf_gen,
}


def exit_code(error: RelsimpError) -> int:
    if isinstance(error, VerificationError):
        return 3
    if isinstance(error, (NotSimplifiableError, ForgettingImpossibleError)):
        return 1
    return 2


def run(config: CliConfig) -> int:
    """Dispatch ``config.command``; returns the exit code."""
    try:
        return HANDLERS[config.command](config)
    except RelsimpError as e:
        click.echo(f"{ERROR_PREFIX}[{e.kind}]: {e}", err=True)
        if isinstance(e, NotSimplifiableError) and e.report is not None and config.json_output:
            click.echo(e.report.json(by_alias=True))
        return exit_code(e)


## click


def _atoms(ctx, param, value):
    return parse_atom_list(value)


def remove_option(f):
    return click.option("--remove", callback=_atoms, help="Comma separated atoms to remove (A).")(f)


def relative_to_option(f):
    return click.option(
        "--relative-to",
        callback=_atoms,
        help="Comma separated context vocabulary (B); defaults to the whole universe, '' for none.",
    )(f)


def json_option(f):
    return click.option("--json", "json_output", is_flag=True, help="Print JSON reports.")(f)


def bounds_options(f):
    f = click.option("--max-rules", default=2, type=click.IntRange(min=1), show_default=True, help="Rules per enumerated context.")(f)
    f = click.option("--max-body", default=2, type=click.IntRange(min=0), show_default=True, help="Body literals per context rule.")(f)
    f = click.option(
        "--no-proof-witnesses", "no_proof_witnesses", is_flag=True, help="Skip the proof-shaped contexts."
    )(f)
    return click.option("--prog-bar", is_flag=True, help="Show progress.")(f)


def _finish(**kwargs):
    no_proof = kwargs.pop("no_proof_witnesses", False)
    config = CliConfig(proof_witnesses=not no_proof, **kwargs)
    sys.exit(run(config))


existing = click.Path(exists=True, path_type=Path)


@click.group(help=__doc__)
@click.option("-v", "--verbose", count=True, help="INFO logging; repeat for DEBUG.")
def cli(verbose):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("relsimp").setLevel(level)


@cli.command("answer-sets")
@click.argument("program", type=existing)
@json_option
def answer_sets_command(program, json_output):
    """Print the answer sets of PROGRAM."""
    _finish(command="answer-sets", input_paths=[program], json_output=json_output)


@cli.command("se-models")
@click.argument("program", type=existing)
@relative_to_option
@json_option
def se_models_command(program, relative_to, json_output):
    """Print the SE-models of PROGRAM, relativized when --relative-to is given."""
    _finish(command="se-models", input_paths=[program], relative_to=relative_to, json_output=json_output)


@cli.command("ab-se-models")
@click.argument("program", type=existing)
@remove_option
@relative_to_option
@json_option
def ab_se_models_command(program, remove, relative_to, json_output):
    """Print the SE-models of PROGRAM projected away from A relative to B."""
    _finish(
        command="ab-se-models",
        input_paths=[program],
        remove=remove,
        relative_to=relative_to,
        json_output=json_output,
    )


@cli.command("check")
@click.argument("programs", type=existing, nargs=-1, required=True)
@remove_option
@relative_to_option
@json_option
@click.option("--cache", "cache_dir", type=click.Path(path_type=Path), help="Memoize batch results here.")
@click.option("--prog-bar", is_flag=True, help="Show progress.")
def check_command(programs, remove, relative_to, json_output, cache_dir, prog_bar):
    """Decide whether PROGRAMS are simplifiable; directories run in batch mode."""
    _finish(
        command="check",
        input_paths=list(programs),
        remove=remove,
        relative_to=relative_to,
        json_output=json_output,
        cache_dir=cache_dir if cache_dir is not None else get_settings().cache_dir,
        prog_bar=prog_bar,
    )


@cli.command("simplify")
@click.argument("program", type=existing)
@remove_option
@relative_to_option
@click.option("-o", "--output", "output_path", type=click.Path(path_type=Path), help="Write the program here.")
@click.option("--simplify-output", is_flag=True, help="Drop rules that do not change the SE-models.")
@json_option
def simplify_command(program, remove, relative_to, output_path, simplify_output, json_output):
    """Project and forget A from PROGRAM relative to B."""
    _finish(
        command="simplify",
        input_paths=[program],
        remove=remove,
        relative_to=relative_to,
        output_path=output_path,
        simplify_output=simplify_output,
        json_output=json_output,
    )


@cli.command("verify")
@click.argument("program", type=existing)
@click.argument("candidate", type=existing)
@remove_option
@relative_to_option
@bounds_options
@json_option
def verify_command(program, candidate, remove, relative_to, max_rules, max_body, no_proof_witnesses, prog_bar, json_output):
    """Check that CANDIDATE simplifies PROGRAM, semantically and on enumerated contexts."""
    _finish(
        command="verify",
        input_paths=[program, candidate],
        remove=remove,
        relative_to=relative_to,
        max_rules=max_rules,
        max_body=max_body,
        no_proof_witnesses=no_proof_witnesses,
        prog_bar=prog_bar,
        json_output=json_output,
    )


@cli.command("forget")
@click.argument("program", type=existing)
@remove_option
@relative_to_option
@click.option("-o", "--output", "output_path", type=click.Path(path_type=Path), help="Write the program here.")
@click.option("--simplify-output", is_flag=True, help="Drop rules that do not change the SE-models.")
def forget_command(program, remove, relative_to, output_path, simplify_output):
    """Forget A from PROGRAM preserving answer sets under contexts over B (default: the rest)."""
    _finish(
        command="forget",
        input_paths=[program],
        remove=remove,
        relative_to=relative_to,
        output_path=output_path,
        simplify_output=simplify_output,
    )


@cli.command("equiv")
@click.argument("program", type=existing)
@click.argument("other", type=existing)
@remove_option
@relative_to_option
@bounds_options
@json_option
def equiv_command(program, other, remove, relative_to, max_rules, max_body, no_proof_witnesses, prog_bar, json_output):
    """Relativized strong equivalence, or the simplification check when --remove is given."""
    _finish(
        command="equiv",
        input_paths=[program, other],
        remove=remove,
        relative_to=relative_to,
        max_rules=max_rules,
        max_body=max_body,
        no_proof_witnesses=no_proof_witnesses,
        prog_bar=prog_bar,
        json_output=json_output,
    )


@cli.command("qbf-gen")
@click.argument("instance", type=existing)
@click.option("-o", "--output", "output_path", type=click.Path(file_okay=False, path_type=Path), help="Output directory.")
def qbf_gen_command(instance, output_path):
    """Write the program pair and removal set reducing INSTANCE."""
    _finish(command="qbf-gen", input_paths=[instance], output_path=output_path)


@cli.command("schema")
@click.argument("report", type=click.Choice(sorted(SCHEMAS)))
def schema_command(report):
    """Print the JSON schema of a report."""
    click.echo(SCHEMAS[report].schema_json(indent=2))


if __name__ == "__main__":
    cli()
