"""Shared test helpers: independent oracles and small builders."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from repocluster.collapse import WeightedGraph
from repocluster.model import CommitGroup, make_commit_group


def bfs_components(n: int, edges) -> list[int]:
    """Component label per node via plain BFS; the union-find oracle."""
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    label = [-1] * n
    for start in range(n):
        if label[start] != -1:
            continue
        label[start] = start
        queue = [start]
        while queue:
            node = queue.pop()
            for nbr in adj[node]:
                if label[nbr] == -1:
                    label[nbr] = start
                    queue.append(nbr)
    return label


def clique_edges(groups) -> list[tuple[int, int]]:
    """Clique expansion of hyperedges: every member pair."""
    edges = []
    for group in groups:
        members = group.projects if isinstance(group, CommitGroup) else group
        edges.extend(combinations(sorted(members), 2))
    return edges


def partition_sets(labels) -> set[frozenset[int]]:
    """Label-independent view of a partition for equality checks."""
    clusters: dict[object, set[int]] = {}
    for node, lab in enumerate(labels):
        clusters.setdefault(lab, set()).add(node)
    return {frozenset(c) for c in clusters.values()}


def random_hypergraph(rng: random.Random, max_nodes=50, max_edges=200):
    """Random commit groups over a fixed universe; returns (groups, n)."""
    n = rng.randint(2, max_nodes)
    groups = []
    for i in range(rng.randint(0, max_edges)):
        size = rng.randint(1, min(n, 6))
        members = rng.sample(range(n), size)
        groups.append(make_commit_group(f"{rng.getrandbits(160):040x}", members))
    return groups, n


def all_partitions(items: list):
    """Every set partition of items (restricted growth string enumeration)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in all_partitions(rest):
        for i, block in enumerate(smaller):
            yield smaller[:i] + [[first] + block] + smaller[i + 1:]
        yield [[first]] + smaller


def best_partition_modularity(g: WeightedGraph) -> float:
    """Exhaustive modularity optimum over all partitions; oracle for Louvain."""
    from repocluster.louvain import modularity

    best = float("-inf")
    for blocks in all_partitions(list(range(g.n))):
        labels = [0] * g.n
        for i, block in enumerate(blocks):
            for node in block:
                labels[node] = i
        best = max(best, modularity(g, labels))
    return best


def two_triangles_bridge() -> WeightedGraph:
    """Two unit-weight triangles {0,1,2} and {3,4,5} joined by edge (2,3)."""
    g = WeightedGraph(6)
    for a, b in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]:
        g.add_edge(a, b, 1.0)
    return g


def random_weighted_graph(rng: random.Random, max_nodes=8, ensure_edge=True) -> WeightedGraph:
    n = rng.randint(2, max_nodes)
    g = WeightedGraph(n)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.4:
                g.add_edge(a, b, float(rng.randint(1, 3)))
    if ensure_edge and g.total_weight == 0:
        g.add_edge(0, 1, 1.0)
    return g


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
