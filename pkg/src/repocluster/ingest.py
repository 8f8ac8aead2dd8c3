"""Parse sharded commit->project pair files into streams of commit groups.

Pair files are UTF-8 text, one `HASH;REPO_NAME` pair per line, sorted
ascending by hash. A corpus directory holds files `c2p.0` .. `c2p.31`,
sharded by the top 5 bits of the first hash byte. Files ending in `.gz`
are transparently decompressed.
"""

from __future__ import annotations

import gzip
import os
from typing import IO, Iterable, Iterator, NamedTuple

from .model import (
    CommitGroup,
    Interner,
    ValidationError,
    validate_commit_hash,
    validate_repo_name,
)

N_SHARDS = 32


class ParseError(ValueError):
    """Malformed pair-file input; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"{line_no}: "
        super().__init__(where + message)
        self.line_no = line_no
        self.path = path


class SortViolationError(ParseError):
    """Pair stream was not sorted ascending by commit hash."""


class PairRecord(NamedTuple):
    commit: str
    project: str


def parse_pair_line(line: str, line_no: int | None = None) -> PairRecord:
    """Split `HASH;REPO_NAME` on the first ';' and validate both sides."""
    commit, sep, project = line.partition(";")
    if not sep:
        raise ParseError(f"expected 'HASH;REPO_NAME', got {line!r}", line_no)
    try:
        validate_commit_hash(commit)
        validate_repo_name(project)
    except ValidationError as exc:
        raise ParseError(str(exc), line_no) from exc
    return PairRecord(commit, project)


def shard_index(commit: str) -> int:
    """Shard of a commit: the top 5 bits of the first hash byte (0..31)."""
    return int(commit[:2], 16) >> 3


def open_text(path: str | os.PathLike) -> IO[str]:
    """Open a pair/map file for reading, decompressing `.gz` by extension."""
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def iter_pair_records(path: str | os.PathLike) -> Iterator[PairRecord]:
    """Parse one pair file, validating every line."""
    with open_text(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                yield parse_pair_line(line, line_no)
            except ParseError as exc:
                raise ParseError(str(exc.args[0]), line_no, str(path)) from None


def group_by_commit(records: Iterable[PairRecord], interner: Interner) -> Iterator[CommitGroup]:
    """Group a hash-sorted pair stream into one CommitGroup per distinct commit.

    Projects are interned, sorted and deduplicated. Raises SortViolationError
    if the stream is out of order.
    """
    current: str | None = None
    members: set[int] = set()
    position = 0
    for position, (commit, project) in enumerate(records, start=1):
        if current is None or commit != current:
            if current is not None:
                if commit < current:
                    raise SortViolationError(
                        f"commit {commit} after {current}", line_no=position
                    )
                yield CommitGroup(current, tuple(sorted(members)))
            current = commit
            members = set()
        members.add(interner.intern(project))
    if current is not None:
        yield CommitGroup(current, tuple(sorted(members)))


def corpus_files(input_path: str | os.PathLike) -> list[str]:
    """Resolve a corpus argument to an ordered list of pair files.

    A directory must contain files named `c2p.N` (optionally `.gz`); they are
    returned in shard order. A plain file is returned as a singleton list.
    """
    if os.path.isdir(input_path):
        found: dict[int, str] = {}
        for entry in os.listdir(input_path):
            base = entry[:-3] if entry.endswith(".gz") else entry
            if base.startswith("c2p."):
                suffix = base[len("c2p."):]
                if suffix.isdigit() and int(suffix) < N_SHARDS:
                    found[int(suffix)] = os.path.join(input_path, entry)
        if not found:
            raise FileNotFoundError(f"no c2p.N pair files in {input_path}")
        return [found[i] for i in sorted(found)]
    if not os.path.exists(input_path):
        raise FileNotFoundError(str(input_path))
    return [str(input_path)]


def read_commit_groups(
    paths: Iterable[str | os.PathLike], interner: Interner
) -> Iterator[CommitGroup]:
    """Stream commit groups from pair files, one file after another."""
    for path in paths:
        yield from group_by_commit(iter_pair_records(path), interner)
