import pytest

from conftest import bfs_components, partition_sets, random_hypergraph
from repocluster.collapse import (
    Hyperedge,
    WeightedGraph,
    build_ultimate_map,
    dedup_hyperedges,
    hyperedges_to_weighted_graph,
    load_fork_map,
    substitute_parents,
    ultimate_parent,
)
from repocluster.components import hyperedge_to_links
from repocluster.ingest import ParseError
from repocluster.model import Interner, make_commit_group

H1, H2, H3 = "0" * 40, "1" * 40, "2" * 40


class TestUltimateMap:
    def test_chain(self):
        upm = build_ultimate_map({"A": "B", "B": "C"})
        assert upm == {"A": "C", "B": "C"}

    def test_two_cycle_breaks_to_lexicographic_min(self):
        upm = build_ultimate_map({"A": "B", "B": "A"})
        assert upm == {"A": "A", "B": "A"}

    def test_non_fork_maps_to_itself(self):
        upm = build_ultimate_map({"X": "Y"})
        assert ultimate_parent(upm, "Z") == "Z"

    def test_idempotence(self, rng):
        repos = [f"r/{i}" for i in range(60)]
        forks = {}
        for repo in repos:
            if rng.random() < 0.7:
                parent = rng.choice(repos)
                if parent != repo:
                    forks[repo] = parent
        upm = build_ultimate_map(forks)
        for repo in repos:
            once = ultimate_parent(upm, repo)
            assert ultimate_parent(upm, once) == once

    def test_acyclic_matches_pointer_chasing(self, rng):
        # Build an acyclic forest by only pointing to earlier repos.
        repos = [f"r/{i}" for i in range(80)]
        forks = {}
        for i, repo in enumerate(repos[1:], start=1):
            if rng.random() < 0.8:
                forks[repo] = repos[rng.randrange(i)]
        upm = build_ultimate_map(forks)
        for repo in repos:
            node, seen = repo, set()
            while node in forks and node not in seen:
                seen.add(node)
                node = forks[node]
            assert ultimate_parent(upm, repo) == node

    def test_self_parent_rejected_on_load(self, tmp_path):
        path = tmp_path / "forks.map"
        path.write_text("a/b;a/b\n")
        with pytest.raises(ParseError):
            load_fork_map(str(path))

    def test_load_fork_map(self, tmp_path):
        path = tmp_path / "forks.map"
        path.write_text("a/b;c/d\ne/f;c/d\n")
        assert load_fork_map(str(path)) == {"a/b": "c/d", "e/f": "c/d"}


class TestSubstitute:
    def _setup(self):
        interner = Interner()
        for name in ["fork1", "fork2", "Q"]:
            interner.intern(name)
        return interner

    def test_total_collapse(self):
        interner = self._setup()
        upm = {"fork1": "P", "fork2": "P"}
        out = list(substitute_parents([make_commit_group(H1, [0, 1])], upm, interner))
        assert len(out[0].projects) == 1
        assert interner.resolve(out[0].projects[0]) == "P"

    def test_partial_substitution(self):
        interner = self._setup()
        upm = {"fork1": "P"}
        out = list(substitute_parents([make_commit_group(H1, [0, 2])], upm, interner))
        assert {interner.resolve(p) for p in out[0].projects} == {"P", "Q"}

    def test_absent_projects_unchanged(self):
        interner = self._setup()
        group = make_commit_group(H1, [0, 2])
        out = list(substitute_parents([group], {"other": "P"}, interner))
        assert out == [group]


class TestDedup:
    def test_multiplicity_counted(self):
        groups = [
            make_commit_group(H1, [0, 1]),
            make_commit_group(H2, [0, 1]),
            make_commit_group(H3, [0, 2]),
        ]
        assert dedup_hyperedges(groups) == [
            Hyperedge((0, 1), 2),
            Hyperedge((0, 2), 1),
        ]

    def test_singletons_dropped(self):
        assert dedup_hyperedges([make_commit_group(H1, [0])]) == []

    def test_member_order_is_canonical(self):
        a = make_commit_group(H1, [1, 0])
        b = make_commit_group(H2, [0, 1])
        assert dedup_hyperedges([a, b]) == [Hyperedge((0, 1), 2)]

    def test_connectivity_preserved(self, rng):
        for _ in range(30):
            groups, n = random_hypergraph(rng, max_nodes=25, max_edges=40)
            edges = dedup_hyperedges(groups)
            star_before = [
                e for g in groups if len(g.projects) >= 2 for e in hyperedge_to_links(g)
            ]
            star_after = [
                (p[0], other) for p, _ in edges for other in p[1:]
            ]
            assert partition_sets(bfs_components(n, star_before)) == partition_sets(
                bfs_components(n, star_after)
            )


class TestWeightedGraph:
    def test_unit_scheme_ignores_multiplicity(self):
        g = hyperedges_to_weighted_graph([Hyperedge((0, 1, 2), 5)], 3, "unit")
        assert g.adj[0][1] == 1.0
        assert g.adj[0][2] == 1.0
        assert 2 not in g.adj[1]

    def test_count_scheme_uses_multiplicity(self):
        g = hyperedges_to_weighted_graph([Hyperedge((0, 1), 3)], 2, "count")
        assert g.adj[0][1] == 3.0

    def test_contributions_sum(self):
        g = hyperedges_to_weighted_graph(
            [Hyperedge((0, 1), 1), Hyperedge((0, 1, 2), 1)], 3, "unit"
        )
        assert g.adj[0][1] == 2.0
        assert g.adj[0][2] == 1.0

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            hyperedges_to_weighted_graph([], 0, "squared")

    def test_degree_sum_is_twice_total_weight(self, rng):
        for _ in range(20):
            groups, n = random_hypergraph(rng, max_nodes=20, max_edges=30)
            g = hyperedges_to_weighted_graph(dedup_hyperedges(groups), n, "count")
            if g.total_weight == 0:
                continue
            degree_sum = sum(g.degree(i) for i in range(g.n))
            assert degree_sum == pytest.approx(2 * g.total_weight)

    def test_self_loop_degree_convention(self):
        g = WeightedGraph(2)
        g.add_edge(0, 0, 2.0)
        g.add_edge(0, 1, 1.0)
        assert g.degree(0) == 5.0  # self-loop counts twice
        assert g.total_weight == 3.0
        assert sum(g.degree(i) for i in range(2)) == 2 * g.total_weight
