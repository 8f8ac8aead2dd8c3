"""Orchestration: compose the stages into a one-shot run with a report.

All stage functions stream pair files; nothing holds the commit stream in
memory, so resident size is bounded by the project universe.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import collapse as collapse_mod
from . import components as components_mod
from . import louvain as louvain_mod
from . import naming
from .filtering import DEFAULT_MAX_COMMIT_SPAN, FilterStats, load_bad_projects
from .ingest import (
    SortViolationError,
    corpus_files,
    iter_pair_records,
)
from .model import Clustering, Interner


class PipelineConfigError(ValueError):
    """Invalid pipeline configuration or missing inputs."""


@dataclass
class PipelineConfig:
    input_dir: str = ""
    output_dir: str = ""
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN
    bad_projects: str | None = None
    fork_map: str | None = None
    weight_scheme: str = "unit"
    min_gain: float = 0.0
    skip_collapse: bool = False
    skip_louvain: bool = False
    threads: int = 1

    CONFIG_KEYS = (
        "input_dir", "output_dir", "max_commit_span", "bad_projects",
        "fork_map", "weight_scheme", "min_gain", "skip_collapse",
        "skip_louvain", "threads",
    )

    @classmethod
    def from_file(cls, path: str) -> "PipelineConfig":
        """Flat `key = value` text; '#' starts a comment."""
        cfg = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if not sep or key not in cls.CONFIG_KEYS:
                    raise PipelineConfigError(f"{path}:{line_no}: bad config line {line!r}")
                current = getattr(cfg, key)
                if isinstance(current, bool) or key.startswith("skip_"):
                    setattr(cfg, key, value.lower() in ("1", "true", "yes"))
                elif isinstance(current, int):
                    setattr(cfg, key, int(value))
                elif isinstance(current, float):
                    setattr(cfg, key, float(value))
                else:
                    setattr(cfg, key, value or None)
        return cfg

    def validate(self) -> None:
        if not self.input_dir or not os.path.exists(self.input_dir):
            raise PipelineConfigError(f"input path does not exist: {self.input_dir!r}")
        if not self.output_dir:
            raise PipelineConfigError("output_dir is required")
        if self.threads < 1:
            raise PipelineConfigError("threads must be >= 1")
        if self.weight_scheme not in collapse_mod.WEIGHT_SCHEMES:
            raise PipelineConfigError(f"unknown weight scheme {self.weight_scheme!r}")
        for path in (self.bad_projects, self.fork_map):
            if path is not None and not os.path.exists(path):
                raise PipelineConfigError(f"referenced file does not exist: {path}")


def iter_name_groups(path: str) -> Iterator[tuple[str, list[str]]]:
    """Group one validated pair file by commit, keeping first-seen name order."""
    current: str | None = None
    members: dict[str, None] = {}
    for commit, project in iter_pair_records(path):
        if commit != current:
            if current is not None:
                if commit < current:
                    raise SortViolationError(f"commit {commit} after {current}", path=path)
                yield current, list(members)
            current = commit
            members = {}
        members[project] = None
    if current is not None:
        yield current, list(members)


def iter_filtered_name_groups(
    path: str,
    bad_names: frozenset[str] = frozenset(),
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN,
    stats: FilterStats | None = None,
) -> Iterator[tuple[str, list[str]]]:
    """Name groups with bad projects removed, then the span filter applied."""
    for commit, names in iter_name_groups(path):
        if bad_names:
            kept = [n for n in names if n not in bad_names]
            if stats is not None:
                stats.removed_project_occurrences += len(names) - len(kept)
            if not kept:
                if stats is not None:
                    stats.dropped_empty_commits += 1
                continue
            names = kept
        if len(names) > max_commit_span:
            if stats is not None:
                stats.dropped_span_commits += 1
            continue
        yield commit, names


@dataclass
class UniverseStats:
    commits_seen: int = 0
    commits_kept: int = 0
    pairs_kept: int = 0
    links: int = 0


def build_universe(
    files: Iterable[str],
    bad_names: frozenset[str],
    max_commit_span: int,
    filter_stats: FilterStats,
) -> tuple[Interner, UniverseStats]:
    """Pass 1: validate, filter and intern every surviving project name.

    Id assignment order is first appearance in the filtered stream, which is
    exactly what later passes (and the standalone stage subcommands) see.
    """
    interner = Interner()
    stats = UniverseStats()
    for path in files:
        for _, names in iter_filtered_name_groups(
            path, bad_names, max_commit_span, filter_stats
        ):
            stats.commits_kept += 1
            stats.pairs_kept += len(names)
            stats.links += len(names) - 1
            for name in names:
                interner.intern(name)
    stats.commits_seen = (
        stats.commits_kept
        + filter_stats.dropped_span_commits
        + filter_stats.dropped_empty_commits
    )
    return interner, stats


def compute_components(
    files: list[str],
    interner: Interner,
    bad_names: frozenset[str] = frozenset(),
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN,
    threads: int = 1,
) -> Clustering:
    """Pass 2: per-shard union-find, merged in shard order.

    The interner is frozen here (every surviving name was interned in pass 1),
    so shards may run concurrently without affecting ids or output.
    """
    universe = len(interner)

    def shard_components(path: str) -> Clustering:
        ds = components_mod.DisjointSet(universe)
        for _, names in iter_filtered_name_groups(path, bad_names, max_commit_span):
            if len(names) < 2:
                continue
            ids = sorted(interner.intern(n) for n in names)
            hub = ids[0]
            for other in ids[1:]:
                ds.union(hub, other)
        return ds.to_clustering()

    if threads > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shard_results = list(pool.map(shard_components, files))
    else:
        shard_results = [shard_components(path) for path in files]
    return components_mod.merge_shard_components(shard_results)


def build_hyperedges(
    files: Iterable[str],
    interner: Interner,
    upm: dict[str, str],
    bad_names: frozenset[str] = frozenset(),
    max_commit_span: int = DEFAULT_MAX_COMMIT_SPAN,
) -> list[collapse_mod.Hyperedge]:
    """Pass 3: ultimate-parent substitution plus hyperedge deduplication.

    Runs sequentially: substitution may intern parent names that never
    occurred in the corpus, and id order must stay deterministic.
    """
    counts: dict[tuple[int, ...], int] = {}
    root_id: dict[str, int] = {}
    for path in files:
        for _, names in iter_filtered_name_groups(path, bad_names, max_commit_span):
            members = set()
            for name in names:
                rid = root_id.get(name)
                if rid is None:
                    rid = root_id[name] = interner.intern(
                        collapse_mod.ultimate_parent(upm, name)
                    )
                members.add(rid)
            if len(members) < 2:
                continue
            key = tuple(sorted(members))
            counts[key] = counts.get(key, 0) + 1
    return [collapse_mod.Hyperedge(k, counts[k]) for k in sorted(counts)]


def communities_clustering(
    interner: Interner,
    upm: dict[str, str],
    hyperedges: list[collapse_mod.Hyperedge],
    weight_scheme: str,
    min_gain: float,
) -> Clustering:
    """Louvain over the collapsed graph, lifted back to the full universe.

    Every project inherits the community of its ultimate parent; parents
    (and projects) outside any hyperedge end up as singletons.
    """
    universe = len(interner)
    graph = collapse_mod.hyperedges_to_weighted_graph(
        hyperedges, universe, weight_scheme
    )
    if graph.total_weight > 0:
        labels = louvain_mod.louvain(graph, min_gain=min_gain).labels
    else:
        labels = list(range(universe))
    lifted: list[tuple[str, int]] = []
    for pid in range(universe):
        root = collapse_mod.ultimate_parent(upm, interner.resolve(pid))
        rid = interner.intern(root)
        # Tag community vs. singleton labels so they can never collide.
        if rid < len(labels):
            lifted.append(("c", labels[rid]))
        else:
            lifted.append(("s", rid))
    return Clustering.from_labels(lifted)


def write_atomic(write_fn, out_path: str) -> int:
    """Write through a `.partial` temp name, renaming only on success."""
    partial = out_path + ".partial"
    count = write_fn(partial)
    os.replace(partial, out_path)
    return count


@dataclass
class RunReport:
    values: dict[str, object] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"{key}={value}" for key, value in self.values.items()]
        lines += [f"time_{stage}={seconds:.3f}" for stage, seconds in self.timings.items()]
        return "\n".join(lines) + "\n"

    def to_human(self) -> str:
        lines = ["pipeline run report", "-------------------"]
        for key, value in self.values.items():
            lines.append(f"  {key:32s} {value}")
        for stage, seconds in self.timings.items():
            lines.append(f"  {'time_' + stage:32s} {seconds:.3f}s")
        return "\n".join(lines)


def run_pipeline(cfg: PipelineConfig) -> RunReport:
    """Execute ingest -> filter -> components -> collapse -> louvain -> naming.

    Writes `components.map` (raw checkpoint), `final.map`, optionally
    `ultimate_parents.map`, plus `report.txt`, all under cfg.output_dir.
    """
    cfg.validate()
    files = corpus_files(cfg.input_dir)
    os.makedirs(cfg.output_dir, exist_ok=True)
    bad_names = (
        load_bad_projects(cfg.bad_projects) if cfg.bad_projects else frozenset()
    )
    report = RunReport()
    filter_stats = FilterStats()
    t0 = time.monotonic()

    interner, stats = build_universe(
        files, bad_names, cfg.max_commit_span, filter_stats
    )
    report.timings["ingest"] = time.monotonic() - t0
    report.values["projects"] = len(interner)
    report.values["commits_seen"] = stats.commits_seen
    report.values["commits_kept"] = stats.commits_kept
    report.values["pairs_kept"] = stats.pairs_kept
    report.values["links"] = stats.links
    report.values.update(filter_stats.as_dict())

    t1 = time.monotonic()
    raw = compute_components(
        files, interner, bad_names, cfg.max_commit_span, cfg.threads
    )
    report.timings["components"] = time.monotonic() - t1
    report.values["clusters_before_louvain"] = raw.n_clusters()
    report.values["largest_cluster_before_louvain"] = raw.largest_cluster_size()
    write_atomic(
        lambda p: naming.write_raw_map(raw, interner, p),
        os.path.join(cfg.output_dir, "components.map"),
    )

    if cfg.skip_louvain:
        final = raw
        report.values["louvain"] = "skipped"
    else:
        t2 = time.monotonic()
        upm: dict[str, str] = {}
        if cfg.fork_map and not cfg.skip_collapse:
            upm = collapse_mod.build_ultimate_map(
                collapse_mod.load_fork_map(cfg.fork_map)
            )
            write_atomic(
                lambda p: naming.write_fork_map(upm, p),
                os.path.join(cfg.output_dir, "ultimate_parents.map"),
            )
        hyperedges = build_hyperedges(
            files, interner, upm, bad_names, cfg.max_commit_span
        )
        report.timings["collapse"] = time.monotonic() - t2
        report.values["hyperedges"] = len(hyperedges)

        t3 = time.monotonic()
        final = communities_clustering(
            interner, upm, hyperedges, cfg.weight_scheme, cfg.min_gain
        )
        report.timings["louvain"] = time.monotonic() - t3

    report.values["clusters_after_louvain"] = final.n_clusters()
    report.values["largest_cluster_after_louvain"] = final.largest_cluster_size()

    t4 = time.monotonic()
    write_atomic(
        lambda p: naming.write_map(final, interner, p),
        os.path.join(cfg.output_dir, "final.map"),
    )
    report.timings["naming"] = time.monotonic() - t4
    report.timings["total"] = time.monotonic() - t0
    with open(os.path.join(cfg.output_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(report.to_text())
    return report
