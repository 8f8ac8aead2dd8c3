"""Clustering quality: fork-gold split rates, cross-clustering splits, ARI."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence


def gold_groups_from_forks(upm: Mapping[str, str]) -> dict[str, set[str]]:
    """Gold grouping from an ultimate-parent map: each parent plus its forks.

    Only groups of size >= 2 are informative and kept.
    """
    groups: dict[str, set[str]] = {}
    for repo, parent in upm.items():
        groups.setdefault(parent, {parent}).add(repo)
    return {p: g for p, g in groups.items() if len(g) >= 2}


@dataclass
class GroupRow:
    group: str
    member_count: int
    in_largest_predicted: int
    split: bool


@dataclass
class EvalReport:
    rows: list[GroupRow] = field(default_factory=list)
    total_groups: int = 0
    split_groups: int = 0
    total_repos: int = 0
    split_repo_count: int = 0          # repos outside their group's largest predicted cluster
    missing: int = 0                   # gold members absent from the predicted universe

    @property
    def group_split_rate(self) -> float:
        return self.split_groups / self.total_groups if self.total_groups else 0.0

    @property
    def repo_split_rate(self) -> float:
        return self.split_repo_count / self.total_repos if self.total_repos else 0.0

    def to_lines(self) -> list[str]:
        """Machine-readable rows: `group;size;largest;split`, largest groups first."""
        rows = sorted(self.rows, key=lambda r: (-r.member_count, r.group))
        return [
            f"{r.group};{r.member_count};{r.in_largest_predicted};{int(r.split)}"
            for r in rows
        ]

    def to_table(self) -> str:
        lines = ["members  in-largest  split  group"]
        for r in sorted(self.rows, key=lambda r: (-r.member_count, r.group)):
            if r.split:
                lines.append(
                    f"{r.member_count:7d}  {r.in_largest_predicted:10d}  {'yes' if r.split else 'no':5s}  {r.group}"
                )
        lines.append(
            f"split groups: {self.split_groups}/{self.total_groups}"
            f" ({self.group_split_rate:.2%})"
        )
        lines.append(
            f"split repos:  {self.split_repo_count}/{self.total_repos}"
            f" ({self.repo_split_rate:.2%}), missing from prediction: {self.missing}"
        )
        return "\n".join(lines)


def split_report(
    gold: Mapping[str, set[str]], predicted: Mapping[str, str]
) -> EvalReport:
    """Per-gold-group split statistics against a predicted repo->cluster map.

    A group is split when its members land in two or more predicted clusters.
    Members absent from the prediction are dropped and counted as missing.
    """
    if not gold:
        raise ValueError("empty gold grouping")
    report = EvalReport()
    for parent, members in gold.items():
        counts: dict[str, int] = {}
        missing = 0
        for member in members:
            cluster = predicted.get(member)
            if cluster is None:
                missing += 1
            else:
                counts[cluster] = counts.get(cluster, 0) + 1
        report.missing += missing
        if not counts:
            continue
        size = sum(counts.values())
        largest = max(counts.values())
        split = len(counts) >= 2
        report.rows.append(GroupRow(parent, size, largest, split))
        report.total_groups += 1
        report.total_repos += size
        if split:
            report.split_groups += 1
            report.split_repo_count += size - largest
    return report


def cross_split_rate(
    reference: Mapping[str, str], candidate: Mapping[str, str]
) -> tuple[int, int, float]:
    """How many reference groups the candidate clustering splits.

    Restricted to repos present in both maps; directional, so callers run it
    both ways. Returns (split_groups, total_groups, rate).
    """
    common = reference.keys() & candidate.keys()
    if not common:
        raise ValueError("clusterings share no repositories")
    groups: dict[str, set[str]] = {}
    for repo in common:
        groups.setdefault(reference[repo], set()).add(candidate[repo])
    split = sum(1 for cands in groups.values() if len(cands) >= 2)
    total = len(groups)
    return split, total, split / total


def adjusted_rand_index(a: Sequence, b: Sequence) -> float:
    """Chance-corrected pair-counting agreement between two label sequences."""
    if len(a) != len(b):
        raise ValueError(f"label sequences differ in length: {len(a)} != {len(b)}")
    contingency: dict[tuple, int] = {}
    counts_a: dict = {}
    counts_b: dict = {}
    for la, lb in zip(a, b):
        contingency[(la, lb)] = contingency.get((la, lb), 0) + 1
        counts_a[la] = counts_a.get(la, 0) + 1
        counts_b[lb] = counts_b.get(lb, 0) + 1
    n = len(a)
    sum_cells = sum(comb(c, 2) for c in contingency.values())
    sum_a = sum(comb(c, 2) for c in counts_a.values())
    sum_b = sum(comb(c, 2) for c in counts_b.values())
    pairs = comb(n, 2)
    expected = sum_a * sum_b / pairs if pairs else 0.0
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:
        return 1.0
    return (sum_cells - expected) / (max_index - expected)
