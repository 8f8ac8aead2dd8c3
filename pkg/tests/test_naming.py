import gzip

import pytest

from repocluster.model import Clustering, Interner
from repocluster.naming import (
    cluster_name,
    name_raw_map,
    read_pair_map,
    transform_name,
    write_fork_map,
    write_map,
    write_raw_map,
)


class TestTransformName:
    def test_github_prefix_stripped(self):
        assert transform_name("github.com/miranagha/js") == "miranagha_js"

    def test_only_first_slash_replaced(self):
        assert transform_name("gitlab.com/grp/proj") == "gitlab.com_grp/proj"

    def test_no_separator_passthrough(self):
        assert transform_name("standalone") == "standalone"

    def test_owner_name_shape(self):
        assert transform_name("github.com/owner/name") == "owner_name"


class TestClusterName:
    def test_shortest_wins(self):
        members = {"rh24/parrot-ruby", "grr", "kvignali/arel-lab"}
        assert cluster_name(members) == "grr"

    def test_lexicographic_tie_break(self):
        assert cluster_name({"aa/b", "ab/a"}) == "aa/b"

    def test_singleton(self):
        assert cluster_name({"x"}) == "x"

    def test_permutation_invariant(self):
        members = ["b/b", "a/a", "c", "dd/d"]
        assert cluster_name(members) == cluster_name(list(reversed(members)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cluster_name([])


class TestWriteMap:
    def _interned(self, names):
        interner = Interner()
        for name in names:
            interner.intern(name)
        return interner

    def test_two_member_cluster(self, tmp_path):
        interner = self._interned(["github.com/a/x", "github.com/a/y"])
        clustering = Clustering.from_labels([0, 0])
        out = tmp_path / "map"
        write_map(clustering, interner, str(out))
        assert out.read_text() == "a_x;a_x\na_y;a_x\n"

    def test_singleton_maps_to_itself(self, tmp_path):
        interner = self._interned(["github.com/a/x"])
        out = tmp_path / "map"
        write_map(Clustering.from_labels([0]), interner, str(out))
        assert out.read_text() == "a_x;a_x\n"

    def test_line_count_equals_universe(self, tmp_path):
        names = [f"github.com/o/r{i}" for i in range(20)]
        interner = self._interned(names)
        clustering = Clustering.from_labels([i % 4 for i in range(20)])
        out = tmp_path / "map"
        count = write_map(clustering, interner, str(out))
        assert count == 20
        assert len(out.read_text().splitlines()) == 20

    def test_raw_map_and_name_stage_compose(self, tmp_path):
        names = ["github.com/long-owner/long-name", "github.com/a/b", "github.com/c/d"]
        interner = self._interned(names)
        clustering = Clustering.from_labels([0, 0, 2])
        raw_path = tmp_path / "raw.map"
        final_path = tmp_path / "final.map"
        write_raw_map(clustering, interner, str(raw_path))
        write_map(clustering, interner, str(final_path))
        named = name_raw_map(read_pair_map(str(raw_path)))
        assert named == read_pair_map(str(final_path))


class TestForkMap:
    def test_chain_written_flat(self, tmp_path):
        upm = {"A/a": "C/c", "B/b": "C/c"}
        out = tmp_path / "ghforks"
        write_fork_map(upm, str(out))
        assert out.read_text() == "A/a;C/c\nB/b;C/c\n"

    def test_empty_map(self, tmp_path):
        out = tmp_path / "ghforks"
        write_fork_map({}, str(out))
        assert out.read_text() == ""

    def test_round_trip_gzip(self, tmp_path):
        upm = {f"r/{i}": "root/r" for i in range(10)}
        out = tmp_path / "ghforks.gz"
        write_fork_map(upm, str(out))
        with gzip.open(out, "rt") as fh:
            assert fh.read().count("\n") == 10
        assert read_pair_map(str(out)) == upm
