"""Simplifiability checks over many program files.

Each file is analyzed on its own. Results can be memoized in a
``diskcache.Cache`` keyed by the file content and the options, and are
aggregated in a pandas table.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import diskcache as dc
import pandas as pd
from pydantic import Field
from tqdm import tqdm

from relsimp.errors import RelsimpError
from relsimp.logic.relativized import RelCtx, is_simplifiable
from relsimp.logic.syntax import parse_program, read_source
from relsimp.reports import Report

logger = logging.getLogger(__name__)

PROGRAM_SUFFIXES = (".lp",)


class BatchRow(Report):
    path: str
    atoms: int = 0
    rules: int = 0
    spectrum: Optional[str] = None
    delta: Optional[bool] = None
    omega: Optional[bool] = None
    simplifiable: Optional[bool] = None
    error: Optional[str] = None
    error_kind: Optional[str] = Field(None, alias="errorKind")


def collect_paths(paths: Iterable[Path]) -> List[Path]:
    """Files as given; directories contribute their ``*.lp`` files, sorted."""
    found = []
    for path in map(Path, paths):
        if path.is_dir():
            found.extend(sorted(p for p in path.rglob("*") if p.suffix in PROGRAM_SUFFIXES))
        else:
            found.append(path)
    return found


def cache_key(text: str, remove: Optional[Sequence[str]], relative_to: Optional[Sequence[str]]) -> str:
    options = json.dumps({"remove": remove, "relative_to": relative_to}, sort_keys=True)
    return hashlib.sha256((options + "\n" + text).encode("utf-8")).hexdigest()


def _error_row(path: Path, e: RelsimpError) -> BatchRow:
    logger.info("%s: %s", path, e)
    return BatchRow(path=str(path), error=str(e), error_kind=e.kind)


def check_file(
    path: Path,
    remove: Optional[Sequence[str]],
    relative_to: Optional[Sequence[str]],
    text: Optional[str] = None,
) -> BatchRow:
    try:
        if text is None:
            text = read_source(path)
        p = parse_program(text, source=str(path))
        ctx = RelCtx.for_program(p, remove or (), relative_to)
        report = is_simplifiable(p, ctx)
    except RelsimpError as e:
        return _error_row(path, e)
    return BatchRow(
        path=str(path),
        atoms=len(p.universe),
        rules=len(p),
        spectrum=report.spectrum,
        delta=report.delta.holds,
        omega=report.omega.satisfied,
        simplifiable=report.simplifiable,
    )


def check_files(
    paths: Iterable[Path],
    remove: Optional[Sequence[str]] = None,
    relative_to: Optional[Sequence[str]] = None,
    cache_dir: Optional[Path] = None,
    prog_bar: bool = False,
) -> Tuple[List[BatchRow], pd.DataFrame]:
    """Check every program file; returns the rows and their summary table."""
    files = collect_paths(paths)
    cache = dc.Cache(str(cache_dir)) if cache_dir is not None else None
    if prog_bar:
        iterator = tqdm(files)
    else:
        iterator = files

    rows = []
    try:
        for path in iterator:
            try:
                text = read_source(path)
            except RelsimpError as e:
                rows.append(_error_row(path, e))
                continue
            key = cache_key(text, remove, relative_to)
            cached = cache.get(key) if cache is not None else None
            if cached is not None:
                row = BatchRow(**cached)
                row.path = str(path)
            else:
                row = check_file(path, remove, relative_to, text)
                if cache is not None:
                    cache[key] = row.dict()
            rows.append(row)
    finally:
        if cache is not None:
            cache.close()
    return rows, summarize(rows)


def summarize(rows: List[BatchRow]) -> pd.DataFrame:
    columns = list(BatchRow.__fields__)
    df = pd.DataFrame([row.dict() for row in rows], columns=columns)
    return df.drop(columns=["error_kind"])


def verdict_counts(df: pd.DataFrame) -> pd.Series:
    """Number of files per outcome: simplifiable, not simplifiable, error."""
    outcome = df["simplifiable"].map({True: "simplifiable", False: "not simplifiable"})
    return outcome.fillna("error").value_counts().sort_index()
