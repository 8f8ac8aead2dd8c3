"""Deterministic Louvain modularity optimization over a WeightedGraph.

Nodes are visited in ascending id order and gain ties break toward the
smallest community id, so identical inputs always yield identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .collapse import WeightedGraph
from .model import Clustering


class ModularityUndefinedError(ValueError):
    """Modularity is undefined on a graph with no edge weight."""


class Partition:
    """Community assignment plus the running aggregates Louvain needs.

    tot[c] is the summed degree of c's members; internal[c] is the summed
    weight of intra-community edges, self-loops counted once at their weight
    (they enter degrees twice, as everywhere else).
    """

    def __init__(self, g: WeightedGraph, labels: Sequence[int] | None = None) -> None:
        self.g = g
        self.labels = list(labels) if labels is not None else list(range(g.n))
        self.tot: dict[int, float] = {}
        self.internal: dict[int, float] = {}
        self.size: dict[int, int] = {}
        for i in range(g.n):
            c = self.labels[i]
            self.tot[c] = self.tot.get(c, 0.0) + g.degree(i)
            self.internal.setdefault(c, 0.0)
            self.size[c] = self.size.get(c, 0) + 1
        for a, b, w in g.edges():
            if self.labels[a] == self.labels[b]:
                self.internal[self.labels[a]] += w

    def copy(self) -> "Partition":
        return Partition(self.g, self.labels)

    def move(self, node: int, dst: int, k_in_src: float, k_in_dst: float) -> None:
        g = self.g
        src = self.labels[node]
        k = g.degree(node)
        loop = g.self_loop(node)
        self.size[src] -= 1
        if self.size[src] == 0:
            del self.size[src], self.tot[src], self.internal[src]
        else:
            self.tot[src] -= k
            self.internal[src] -= k_in_src + loop
        self.labels[node] = dst
        self.tot[dst] = self.tot.get(dst, 0.0) + k
        self.internal[dst] = self.internal.get(dst, 0.0) + k_in_dst + loop
        self.size[dst] = self.size.get(dst, 0) + 1


def modularity(g: WeightedGraph, labels: Sequence[int]) -> float:
    """Q recomputed from scratch: sum over communities of in/m - (tot/2m)^2."""
    m = g.total_weight
    if m <= 0:
        raise ModularityUndefinedError("graph has no edge weight")
    tot: dict[int, float] = {}
    internal: dict[int, float] = {}
    for i in range(g.n):
        tot[labels[i]] = tot.get(labels[i], 0.0) + g.degree(i)
    for a, b, w in g.edges():
        if labels[a] == labels[b]:
            internal[labels[a]] = internal.get(labels[a], 0.0) + w
    q = 0.0
    for c, t in tot.items():
        q += internal.get(c, 0.0) / m - (t / (2.0 * m)) ** 2
    return q


def local_move_pass(
    g: WeightedGraph,
    p: Partition,
    min_gain: float = 0.0,
    on_move: Callable[[Partition], None] | None = None,
) -> bool:
    """Standard Louvain phase 1; mutates p, returns whether any move happened.

    Sweeps nodes in ascending id order until a full sweep moves nothing.
    Each node takes the move with maximal exact modularity gain; ties break
    toward the smallest community id, and a move must beat staying put by
    strictly more than min_gain. Isolated nodes are skipped.
    """
    m = g.total_weight
    if m <= 0:
        raise ModularityUndefinedError("graph has no edge weight")
    two_m = 2.0 * m
    two_m_sq = 2.0 * m * m
    improved = False
    while True:
        moved_in_sweep = False
        for node in range(g.n):
            k = g.degree(node)
            if k == 0.0:
                continue
            src = p.labels[node]
            # Weight from node to each neighboring community (self-loop excluded).
            k_in: dict[int, float] = {src: 0.0}
            for nbr, w in g.adj[node].items():
                if nbr != node:
                    c = p.labels[nbr]
                    k_in[c] = k_in.get(c, 0.0) + w
            # Gains are compared scaled by 2m^2 (no divisions): for integer
            # edge weights every product below is exact in float arithmetic,
            # so zero-gain moves are never mistaken for improvements.
            tot_src_without = p.tot[src] - k
            stay_score = two_m * k_in[src] - tot_src_without * k
            best_c, best_score = src, stay_score
            for c in sorted(k_in):
                if c == src:
                    continue
                score = two_m * k_in[c] - p.tot[c] * k
                if score > best_score or (score == best_score and c < best_c):
                    best_c, best_score = c, score
            if best_c != src and best_score - stay_score > min_gain * two_m_sq:
                p.move(node, best_c, k_in[src], k_in[best_c])
                moved_in_sweep = True
                improved = True
                if on_move is not None:
                    on_move(p)
        if not moved_in_sweep:
            return improved


def aggregate(g: WeightedGraph, p: Partition) -> tuple[WeightedGraph, dict[int, int]]:
    """Standard Louvain phase 2: one super-node per community.

    Returns the aggregated graph and the community-label -> super-node map
    (labels numbered in ascending order). Intra-community weight becomes a
    self-loop, preserving total weight and the degree convention.
    """
    labels_present = sorted(set(p.labels))
    super_of = {c: i for i, c in enumerate(labels_present)}
    agg = WeightedGraph(len(labels_present))
    for a, b, w in g.edges():
        ca, cb = super_of[p.labels[a]], super_of[p.labels[b]]
        if ca > cb:
            ca, cb = cb, ca
        agg.add_edge(ca, cb, w)
    return agg, super_of


@dataclass
class LouvainResult:
    labels: list[int]                  # node-level community labels
    level_modularity: list[float]      # flattened Q after each level's moves
    final_graph: WeightedGraph         # last (aggregated) level graph
    final_labels: list[int]            # partition of final_graph's nodes

    def clustering(self) -> Clustering:
        return Clustering.from_labels(self.labels)


def louvain(g: WeightedGraph, min_gain: float = 0.0) -> LouvainResult:
    """Iterate (local moves; aggregate) from singletons until no move helps.

    Returns the flattened node-level partition. Deterministic for identical
    input graphs.
    """
    if g.total_weight <= 0:
        raise ModularityUndefinedError("graph has no edge weight")
    node_labels = list(range(g.n))  # original node -> community of current level
    level_graph = g
    level_q: list[float] = []
    while True:
        p = Partition(level_graph)
        improved = local_move_pass(level_graph, p, min_gain=min_gain)
        flat = [p.labels[c] for c in node_labels]
        level_q.append(modularity(g, flat))
        if not improved:
            return LouvainResult(flat, level_q, level_graph, p.labels)
        agg, super_of = aggregate(level_graph, p)
        node_labels = [super_of[p.labels[c]] for c in node_labels]
        level_graph = agg
