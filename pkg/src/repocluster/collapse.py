"""Shrink the graph before community detection.

Two reductions: substitute every project by its ultimate fork parent, and
merge all commits touching the same project set into one weighted hyperedge.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .ingest import ParseError, open_text
from .model import CommitGroup, Interner, ValidationError, validate_repo_name

WEIGHT_SCHEMES = ("unit", "count")


def load_fork_map(path: str) -> dict[str, str]:
    """Read `REPO;PARENT` lines into a declared-parent map."""
    forks: dict[str, str] = {}
    with open_text(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            repo, sep, parent = line.partition(";")
            if not sep:
                raise ParseError(f"expected 'REPO;PARENT', got {line!r}", line_no, path)
            try:
                validate_repo_name(repo)
                validate_repo_name(parent)
            except ValidationError as exc:
                raise ParseError(str(exc), line_no, path) from None
            if repo == parent:
                raise ParseError(f"repo is its own parent: {repo}", line_no, path)
            forks[repo] = parent
    return forks


def build_ultimate_map(forks: dict[str, str]) -> dict[str, str]:
    """Follow parent chains to their terminus; memoized, linear in map size.

    Cycles (possible in dirty fork data) are broken by mapping every member
    to the lexicographically smallest name on the cycle.
    """
    root: dict[str, str] = {}
    for start in forks:
        if start in root:
            continue
        chain: list[str] = []
        seen_at: dict[str, int] = {}
        node = start
        while node in forks and node not in root and node not in seen_at:
            seen_at[node] = len(chain)
            chain.append(node)
            node = forks[node]
        if node in root:
            terminus = root[node]
        elif node in seen_at:
            cycle = chain[seen_at[node]:]
            terminus = min(cycle)
        else:
            terminus = node
        for member in chain:
            root[member] = terminus
    return root


def ultimate_parent(upm: dict[str, str], name: str) -> str:
    """Root of a repo: itself when it is not a fork."""
    return upm.get(name, name)


def substitute_parents(
    groups: Iterable[CommitGroup], upm: dict[str, str], interner: Interner
) -> Iterator[CommitGroup]:
    """Replace each member by its ultimate parent, collapsing duplicates.

    Groups collapsing to a single member are kept; they still witness the
    parent project.
    """
    if not upm:
        yield from groups
        return
    cache: dict[int, int] = {}
    for group in groups:
        members = set()
        for pid in group.projects:
            mapped = cache.get(pid)
            if mapped is None:
                name = interner.resolve(pid)
                mapped = cache[pid] = interner.intern(ultimate_parent(upm, name))
            members.add(mapped)
        yield CommitGroup(group.commit, tuple(sorted(members)))


class Hyperedge(NamedTuple):
    projects: tuple[int, ...]
    multiplicity: int


def dedup_hyperedges(groups: Iterable[CommitGroup]) -> list[Hyperedge]:
    """Merge commits with identical project sets; drop single-project groups.

    Returned in sorted project-tuple order for deterministic downstream use.
    """
    counts: dict[tuple[int, ...], int] = {}
    for group in groups:
        if len(group.projects) < 2:
            continue
        counts[group.projects] = counts.get(group.projects, 0) + 1
    return [Hyperedge(projects, counts[projects]) for projects in sorted(counts)]


class WeightedGraph:
    """Undirected weighted adjacency over dense node ids; self-loops allowed.

    degree(i) counts a self-loop twice; total_weight m counts each edge
    (including self-loops) once, so 2m == sum of degrees.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.adj: list[dict[int, float]] = [dict() for _ in range(n)]
        self._m = 0.0

    def add_edge(self, a: int, b: int, weight: float) -> None:
        if weight <= 0:
            raise ValueError(f"edge weight must be positive, got {weight}")
        self.adj[a][b] = self.adj[a].get(b, 0.0) + weight
        if a != b:
            self.adj[b][a] = self.adj[b].get(a, 0.0) + weight
        self._m += weight

    @property
    def total_weight(self) -> float:
        return self._m

    def degree(self, i: int) -> float:
        return sum(self.adj[i].values()) + self.adj[i].get(i, 0.0)

    def self_loop(self, i: int) -> float:
        return self.adj[i].get(i, 0.0)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as (a, b, w) with a <= b."""
        for a in range(self.n):
            for b, w in self.adj[a].items():
                if a <= b:
                    yield a, b, w


def hyperedges_to_weighted_graph(
    edges: Iterable[Hyperedge], n_nodes: int, scheme: str = "unit"
) -> WeightedGraph:
    """Star-expand hyperedges into a weighted graph.

    Under `unit` each hyperedge contributes weight 1 per link regardless of
    how many commits it stands for; under `count` it contributes its
    multiplicity. Contributions to the same node pair sum.
    """
    if scheme not in WEIGHT_SCHEMES:
        raise ValueError(f"unknown weight scheme {scheme!r}")
    g = WeightedGraph(n_nodes)
    for projects, multiplicity in edges:
        w = 1.0 if scheme == "unit" else float(multiplicity)
        hub = projects[0]
        for other in projects[1:]:
            g.add_edge(hub, other, w)
    return g
