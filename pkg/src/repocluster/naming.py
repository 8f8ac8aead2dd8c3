"""Cluster representative names and the final map file formats."""

from __future__ import annotations

import gzip
import os
from typing import IO, Iterable, Iterator

from .ingest import ParseError, open_text
from .model import Clustering, Interner


def transform_name(name: str) -> str:
    """Output-format name: drop a leading 'github.com/', then '_' for the first '/'."""
    if name.startswith("github.com/"):
        name = name[len("github.com/"):]
    return name.replace("/", "_", 1)


def cluster_name(members: Iterable[str]) -> str:
    """Representative of a cluster: shortest member name, ties broken bytewise."""
    members = list(members)
    if not members:
        raise ValueError("cannot name an empty cluster")
    return min(members, key=lambda n: (len(n), n.encode("utf-8")))


def _open_out(path: str | os.PathLike) -> IO[str]:
    if str(path).endswith(".gz"):
        return gzip.open(path, "wt", encoding="utf-8")
    return open(path, "w", encoding="utf-8")


def _write_sorted_pairs(pairs: Iterator[tuple[str, str]], out_path: str | os.PathLike) -> int:
    lines = sorted(f"{left};{right}\n" for left, right in pairs)
    with _open_out(out_path) as fh:
        fh.writelines(lines)
    return len(lines)


def write_raw_map(clustering: Clustering, interner: Interner, out_path: str) -> int:
    """Intermediate map: untransformed `REPO;REPRESENTATIVE` per project.

    The representative is the shortest-name member of the project's cluster.
    Returns the number of lines written.
    """
    rep_name = _representatives(clustering, interner)
    pairs = (
        (interner.resolve(p), rep_name[clustering.assignment[p]])
        for p in range(clustering.universe_size)
    )
    return _write_sorted_pairs(pairs, out_path)


def write_map(clustering: Clustering, interner: Interner, out_path: str) -> int:
    """Final map: `TRANSFORMED_PROJECT;TRANSFORMED_CLUSTER_NAME`, sorted.

    One line per project in the universe. Returns the line count.
    """
    rep_name = _representatives(clustering, interner)
    pairs = (
        (
            transform_name(interner.resolve(p)),
            transform_name(rep_name[clustering.assignment[p]]),
        )
        for p in range(clustering.universe_size)
    )
    return _write_sorted_pairs(pairs, out_path)


def _representatives(clustering: Clustering, interner: Interner) -> dict[int, str]:
    return {
        rep: cluster_name(interner.resolve(p) for p in members)
        for rep, members in clustering.clusters().items()
    }


def name_raw_map(raw: dict[str, str]) -> dict[str, str]:
    """Re-label an arbitrary `repo -> representative` map by the naming rule.

    Groups rows by their current representative, picks the shortest member
    name per group, and transforms both columns to the output format.
    """
    members_of: dict[str, list[str]] = {}
    for repo, rep in raw.items():
        members_of.setdefault(rep, []).append(repo)
    best = {rep: cluster_name(members) for rep, members in members_of.items()}
    return {
        transform_name(repo): transform_name(best[rep]) for repo, rep in raw.items()
    }


def write_fork_map(upm: dict[str, str], out_path: str) -> int:
    """`REPO;ULTIMATE_PARENT` per forked repo, sorted; gzip if path ends in .gz."""
    return _write_sorted_pairs(iter(sorted(upm.items())), out_path)


def read_pair_map(path: str) -> dict[str, str]:
    """Read any two-column `LEFT;RIGHT` map file (map, fork map, gold)."""
    out: dict[str, str] = {}
    with open_text(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            left, sep, right = line.partition(";")
            if not sep or not left or not right:
                raise ParseError(f"expected 'LEFT;RIGHT', got {line!r}", line_no, path)
            out[left] = right
    return out


def write_pair_map(mapping: dict[str, str], out_path: str) -> int:
    return _write_sorted_pairs(iter(mapping.items()), out_path)
