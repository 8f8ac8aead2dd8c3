"""Connected components over the project graph induced by shared commits."""

from __future__ import annotations

from typing import Iterable

from .model import Clustering, CommitGroup


class DisjointSet:
    """Union-find with union by rank and path compression over ids [0, n)."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, x: int) -> int:
        parent = self.parent
        if not 0 <= x < len(parent):
            raise IndexError(f"project id {x} out of range [0, {len(parent)})")
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra

    def to_clustering(self) -> Clustering:
        """Partition with clusters labeled by their smallest member id."""
        labels = [self.find(i) for i in range(len(self.parent))]
        return Clustering.from_labels(labels)


def hyperedge_to_links(group: CommitGroup) -> list[tuple[int, int]]:
    """Star expansion: links from the smallest member to each other member.

    Single-project commits produce no links.
    """
    p = group.projects
    if len(p) < 2:
        return []
    hub = p[0]  # projects are sorted, so p[0] is the minimum id
    return [(hub, other) for other in p[1:]]


def connected_components(groups: Iterable[CommitGroup], universe_size: int) -> Clustering:
    """Components of the star-expanded commit-sharing graph.

    Links are consumed streaming; memory stays proportional to the universe,
    not the number of commits.
    """
    ds = DisjointSet(universe_size)
    add_groups(ds, groups)
    return ds.to_clustering()


def add_groups(ds: DisjointSet, groups: Iterable[CommitGroup]) -> int:
    """Union each group's star links into an existing DisjointSet; returns link count."""
    links = 0
    for group in groups:
        p = group.projects
        if len(p) < 2:
            continue
        hub = p[0]
        for other in p[1:]:
            ds.union(hub, other)
        links += len(p) - 1
    return links


def merge_shard_components(shard_results: list[Clustering]) -> Clustering:
    """Combine per-shard clusterings into components of the union of all shards.

    Each shard cluster is folded in by unioning its smallest member with every
    other member.
    """
    if not shard_results:
        raise ValueError("no shard results to merge")
    universe = shard_results[0].universe_size
    for i, shard in enumerate(shard_results):
        if shard.universe_size != universe:
            raise ValueError(
                f"shard {i} universe {shard.universe_size} != {universe}"
            )
    ds = DisjointSet(universe)
    for shard in shard_results:
        for rep, members in shard.clusters().items():
            for member in members:
                if member != rep:
                    ds.union(rep, member)
    return ds.to_clustering()
