from pathlib import Path

import pytest

from relsimp.batch import cache_key, check_file, check_files, collect_paths, verdict_counts
from relsimp.sample_programs import sample_programs_path


@pytest.fixture
def program_dir(tmp_path):
    root = tmp_path / "programs"
    (root / "nested").mkdir(parents=True)
    for name in ("p1.lp", "p2.lp"):
        (root / name).write_text((sample_programs_path / name).read_text())
    (root / "nested" / "bad.lp").write_text("a :- not.\n")
    (root / "notes.txt").write_text("not a program\n")
    return root


def test_collect_paths(program_dir):
    found = collect_paths([program_dir])
    assert [p.name for p in found] == ["bad.lp", "p1.lp", "p2.lp"]
    assert collect_paths([program_dir / "notes.txt"]) == [program_dir / "notes.txt"]


def test_cache_key_depends_on_options():
    assert cache_key("a.", ["a"], None) == cache_key("a.", ["a"], None)
    assert cache_key("a.", ["a"], None) != cache_key("a.", ["a"], [])
    assert cache_key("a.", None, None) != cache_key("b.", None, None)


def test_check_file(program_dir):
    row = check_file(program_dir / "p1.lp", ["b", "c"], ["a", "b", "d"])
    assert row.atoms == 4
    assert row.rules == 3
    assert row.simplifiable
    assert row.spectrum == "relativized strong simplification"
    assert row.error is None


def test_check_file_error(program_dir):
    row = check_file(program_dir / "nested" / "bad.lp", None, None)
    assert row.simplifiable is None
    assert row.error_kind == "parse"
    assert "bad.lp" in row.error


def test_check_file_unknown_atom(program_dir):
    row = check_file(program_dir / "p2.lp", ["d"], None)
    assert row.error_kind == "config"


def test_check_files_summary(program_dir):
    rows, df = check_files([program_dir], remove=["b", "c"])
    assert len(rows) == 3
    assert list(df["simplifiable"]) == [None, False, False]
    assert "error_kind" not in df.columns
    counts = verdict_counts(df)
    assert counts["not simplifiable"] == 2
    assert counts["error"] == 1


def test_check_files_uses_cache(program_dir, tmp_path, monkeypatch):
    cache_dir = tmp_path / "cache"
    first, _ = check_files([program_dir / "p1.lp"], ["b", "c"], ["a", "b", "d"], cache_dir=cache_dir)

    def fail(*args):
        raise AssertionError("cache miss")

    monkeypatch.setattr("relsimp.batch.check_file", fail)
    second, _ = check_files([program_dir / "p1.lp"], ["b", "c"], ["a", "b", "d"], cache_dir=cache_dir)
    assert second == first


def test_check_files_keeps_going_after_undecodable_file(program_dir, tmp_path):
    (program_dir / "latin1.lp").write_bytes(b"a :- \xff.\n")
    rows, df = check_files([program_dir], ["b", "c"], cache_dir=tmp_path / "cache")
    assert [Path(row.path).name for row in rows] == ["latin1.lp", "bad.lp", "p1.lp", "p2.lp"]
    assert rows[0].error_kind == "parse"
    assert "invalid UTF-8" in rows[0].error
    assert list(df["simplifiable"]) == [None, None, False, False]


def test_check_file_undecodable(program_dir):
    path = program_dir / "latin1.lp"
    path.write_bytes(b"\xff")
    assert check_file(path, None, None).error_kind == "parse"
