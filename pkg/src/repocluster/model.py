"""Core domain types: name/hash validation, the string<->id interner, clusterings."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field


class ValidationError(ValueError):
    """Raised when an input value violates a domain invariant."""


_HEX = set("0123456789abcdef")


def validate_repo_name(name: str) -> str:
    """Check forge-style repo path such as 'github.com/owner/name'.

    Returns the name unchanged; raises ValidationError on empty names or
    names containing whitespace, ';' or newlines (all of which would break
    the line-oriented interchange formats).
    """
    if not name:
        raise ValidationError("empty repo name")
    if ";" in name:
        raise ValidationError(f"repo name contains ';': {name!r}")
    for ch in name:
        if ch.isspace():
            raise ValidationError(f"repo name contains whitespace: {name!r}")
    return name


def validate_commit_hash(commit: str) -> str:
    """Check a 40-char lowercase hex SHA1; returns it unchanged."""
    if len(commit) != 40:
        raise ValidationError(f"commit hash must be 40 chars, got {len(commit)}: {commit!r}")
    if not _HEX.issuperset(commit):
        raise ValidationError(f"commit hash is not lowercase hex: {commit!r}")
    return commit


class Interner:
    """Bijective repo-name <-> dense-id map.

    Ids are assigned in first-seen order starting at 0, so identical inputs
    always produce identical ids. Reads are lock-free; writes are serialized.
    """

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def intern(self, name: str) -> int:
        existing = self._ids.get(name)
        if existing is not None:
            return existing
        validate_repo_name(name)
        with self._lock:
            existing = self._ids.get(name)
            if existing is not None:
                return existing
            new_id = len(self._names)
            self._names.append(name)
            self._ids[name] = new_id
            return new_id

    def lookup(self, name: str) -> int | None:
        """Id of an already-interned name, or None."""
        return self._ids.get(name)

    def resolve(self, project_id: int) -> str:
        if 0 <= project_id < len(self._names):
            return self._names[project_id]
        raise KeyError(f"unknown project id {project_id}")

    def names(self) -> list[str]:
        return list(self._names)


@dataclass(frozen=True)
class CommitGroup:
    """One commit hash plus the sorted, deduplicated ids of projects containing it."""

    commit: str
    projects: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.projects:
            raise ValidationError(f"commit group {self.commit} has no projects")
        if any(b <= a for a, b in zip(self.projects, self.projects[1:])):
            raise ValidationError(f"commit group {self.commit} projects not sorted/unique")


def make_commit_group(commit: str, project_ids) -> CommitGroup:
    """CommitGroup from an arbitrary iterable of ids (sorts and dedups)."""
    return CommitGroup(commit, tuple(sorted(set(project_ids))))


@dataclass(eq=False)
class Clustering:
    """Total assignment of every project id in [0, universe_size) to a cluster.

    Cluster ids are canonical: each cluster is labeled by its smallest member
    id, giving a stable label independent of construction order.
    """

    assignment: list[int]
    universe_size: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.universe_size < 0:
            self.universe_size = len(self.assignment)
        if len(self.assignment) != self.universe_size:
            raise ValidationError("clustering assignment not total over universe")

    @classmethod
    def from_labels(cls, labels) -> "Clustering":
        """Build from arbitrary hashable per-node labels, canonicalizing to min member."""
        labels = list(labels)
        smallest: dict[object, int] = {}
        for node, lab in enumerate(labels):
            if lab not in smallest:
                smallest[lab] = node
        return cls([smallest[lab] for lab in labels])

    def canonicalize(self) -> "Clustering":
        return Clustering.from_labels(self.assignment)

    def clusters(self) -> dict[int, list[int]]:
        """Map canonical cluster id -> sorted member list."""
        out: dict[int, list[int]] = {}
        for node, rep in enumerate(self.assignment):
            out.setdefault(rep, []).append(node)
        return out

    def n_clusters(self) -> int:
        return len(set(self.assignment))

    def largest_cluster_size(self) -> int:
        if not self.assignment:
            return 0
        counts: dict[int, int] = {}
        for rep in self.assignment:
            counts[rep] = counts.get(rep, 0) + 1
        return max(counts.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return (
            self.canonicalize().assignment == other.canonicalize().assignment
        )
