"""Synthetic commit->project corpora with planted ground truth.

Generates sharded pair files plus a gold cluster map and a fork map, with
two optional anomaly classes: backup repositories that pull commits from
many unrelated groups, and mega-commits spanning a large project slice.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .ingest import N_SHARDS, shard_index
from .naming import transform_name, write_pair_map


class ConfigError(ValueError):
    """Inconsistent generator configuration."""


@dataclass(frozen=True)
class SynthConfig:
    n_groups: int = 20
    group_size_min: int = 5
    group_size_max: int = 10
    commits_per_group: int = 20
    n_backup_repos: int = 0
    backup_reach: int = 0
    n_mega_commits: int = 0
    mega_commit_span: int = 2
    fork_fraction: float = 0.0
    share_fraction: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_groups < 1 or self.commits_per_group < 1:
            raise ConfigError("need at least one group and one commit per group")
        if not 2 <= self.group_size_min <= self.group_size_max:
            raise ConfigError("group sizes must satisfy 2 <= min <= max")
        if min(self.n_backup_repos, self.backup_reach, self.n_mega_commits) < 0:
            raise ConfigError("anomaly counts must be >= 0")
        if self.n_backup_repos and self.backup_reach > self.n_groups:
            raise ConfigError("backup_reach exceeds the number of groups")
        if self.n_mega_commits and self.mega_commit_span < 2:
            raise ConfigError("mega_commit_span must be >= 2")
        if not 0.0 <= self.fork_fraction <= 1.0:
            raise ConfigError("fork_fraction must be in [0, 1]")
        if not 0.0 < self.share_fraction <= 1.0:
            raise ConfigError("share_fraction must be in (0, 1]")


@dataclass
class SynthSummary:
    n_projects: int
    n_commits: int
    n_pairs: int
    largest_group: int
    pair_files: list[str]
    gold_path: str
    forks_path: str


def _hash_maker(rng: random.Random):
    seen: set[str] = set()

    def new_hash() -> str:
        while True:
            h = f"{rng.getrandbits(160):040x}"
            if h not in seen:
                seen.add(h)
                return h

    return new_hash


def generate_corpus(cfg: SynthConfig, out_dir: str) -> SynthSummary:
    """Write `c2p.0..31`, `gold.map` and `forks.map` under out_dir.

    Deterministic: the same config (seed included) produces byte-identical
    files.
    """
    cfg.validate()
    rng = random.Random(cfg.seed)
    new_hash = _hash_maker(rng)
    os.makedirs(out_dir, exist_ok=True)

    # Planted groups: a root repo plus clone-style members, all sharing the
    # group's commit pool.
    groups: list[list[str]] = []
    for g in range(cfg.n_groups):
        size = rng.randint(cfg.group_size_min, cfg.group_size_max)
        root = f"github.com/org{g}/proj{g}"
        members = [root] + [
            f"github.com/user{g}x{j}/proj{g}" for j in range(1, size)
        ]
        groups.append(members)
    backups = [f"github.com/backup{i}/store" for i in range(cfg.n_backup_repos)]
    universe = [name for members in groups for name in members] + backups

    records: list[tuple[str, str]] = []
    group_commits: list[list[str]] = []
    for members in groups:
        commits = [new_hash() for _ in range(cfg.commits_per_group)]
        group_commits.append(commits)
        root = members[0]
        for commit in commits:
            records.append((commit, root))
            for member in members[1:]:
                if cfg.share_fraction >= 1.0 or rng.random() < cfg.share_fraction:
                    records.append((commit, member))

    # Backup repos pull one commit from each of several unrelated groups.
    for backup in backups:
        for g in rng.sample(range(cfg.n_groups), cfg.backup_reach):
            commit = rng.choice(group_commits[g])
            records.append((commit, backup))

    if cfg.n_mega_commits:
        if cfg.mega_commit_span > len(universe):
            raise ConfigError(
                f"mega_commit_span {cfg.mega_commit_span} exceeds universe {len(universe)}"
            )
        for _ in range(cfg.n_mega_commits):
            commit = new_hash()
            for name in rng.sample(universe, cfg.mega_commit_span):
                records.append((commit, name))

    # Declared forks: a fraction of each group's non-root members, some
    # chained through a sibling fork rather than pointing at the root.
    forks: dict[str, str] = {}
    for members in groups:
        root = members[0]
        candidates = members[1:]
        k = round(cfg.fork_fraction * len(candidates))
        chosen = sorted(rng.sample(candidates, k)) if k else []
        for idx, repo in enumerate(chosen):
            if idx % 3 == 2:
                forks[repo] = chosen[idx - 1]  # chain through the previous fork
            else:
                forks[repo] = root

    records.sort()
    pair_files = [os.path.join(out_dir, f"c2p.{i}") for i in range(N_SHARDS)]
    handles = [open(path, "w", encoding="utf-8") for path in pair_files]
    try:
        for commit, name in records:
            handles[shard_index(commit)].write(f"{commit};{name}\n")
    finally:
        for fh in handles:
            fh.close()

    gold = {
        transform_name(name): transform_name(members[0])
        for members in groups
        for name in members
    }
    for backup in backups:
        gold[transform_name(backup)] = transform_name(backup)
    gold_path = os.path.join(out_dir, "gold.map")
    write_pair_map(gold, gold_path)
    forks_path = os.path.join(out_dir, "forks.map")
    write_pair_map(forks, forks_path)

    n_commits = len({c for c, _ in records})
    return SynthSummary(
        n_projects=len(universe),
        n_commits=n_commits,
        n_pairs=len(records),
        largest_group=max(len(m) for m in groups),
        pair_files=pair_files,
        gold_path=gold_path,
        forks_path=forks_path,
    )
