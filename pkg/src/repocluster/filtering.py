"""Drop problematic projects and mega-commits before clustering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .model import CommitGroup, validate_repo_name

DEFAULT_MAX_COMMIT_SPAN = 1000


@dataclass(frozen=True)
class FilterConfig:
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN
    bad_projects: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.max_commit_span < 2:
            raise ValueError("max_commit_span must be >= 2")


@dataclass
class FilterStats:
    dropped_span_commits: int = 0
    dropped_empty_commits: int = 0
    removed_project_occurrences: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


def load_bad_projects(path: str) -> frozenset[str]:
    """One repo name per line; blank lines and '#' comments ignored."""
    names: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                names.add(validate_repo_name(line))
    return frozenset(names)


def filter_bad_projects(
    groups: Iterable[CommitGroup],
    bad_ids: frozenset[int],
    stats: FilterStats | None = None,
) -> Iterator[CommitGroup]:
    """Remove listed projects from every group; drop groups left empty.

    Groups shrinking to a single member are kept: they still witness that
    the surviving project exists.
    """
    if not bad_ids:
        yield from groups
        return
    for group in groups:
        kept = tuple(p for p in group.projects if p not in bad_ids)
        if len(kept) == len(group.projects):
            yield group
            continue
        if stats is not None:
            stats.removed_project_occurrences += len(group.projects) - len(kept)
        if kept:
            yield CommitGroup(group.commit, kept)
        elif stats is not None:
            stats.dropped_empty_commits += 1


def filter_commit_span(
    groups: Iterable[CommitGroup],
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN,
    stats: FilterStats | None = None,
) -> Iterator[CommitGroup]:
    """Drop every group touching more than max_commit_span projects."""
    for group in groups:
        if len(group.projects) > max_commit_span:
            if stats is not None:
                stats.dropped_span_commits += 1
        else:
            yield group


def apply_filters(
    groups: Iterable[CommitGroup],
    cfg: FilterConfig,
    bad_ids: frozenset[int],
    stats: FilterStats | None = None,
) -> Iterator[CommitGroup]:
    """Bad-project removal first, then the span filter.

    Removing a bad project can rescue a commit hovering at the span limit.
    """
    return filter_commit_span(
        filter_bad_projects(groups, bad_ids, stats), cfg.max_commit_span, stats
    )
