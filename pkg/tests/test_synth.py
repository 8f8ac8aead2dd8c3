import filecmp
import os

import pytest

from repocluster.evaluation import adjusted_rand_index
from repocluster.filtering import FilterStats
from repocluster.ingest import iter_pair_records
from repocluster.naming import read_pair_map, transform_name
from repocluster.pipeline import build_universe, compute_components
from repocluster.synth import ConfigError, SynthConfig, generate_corpus


def components_map(corpus_dir):
    """Raw components over a corpus, as transformed-name -> cluster-rep-name."""
    files = [os.path.join(corpus_dir, f"c2p.{i}") for i in range(32)]
    interner, _ = build_universe(files, frozenset(), 10**9, FilterStats())
    clustering = compute_components(files, interner, max_commit_span=10**9)
    return {
        transform_name(interner.resolve(p)): clustering.assignment[p]
        for p in range(clustering.universe_size)
    }


class TestGenerateCorpus:
    def test_clean_corpus_components_equal_gold(self, tmp_path):
        cfg = SynthConfig(n_groups=10, seed=42)
        summary = generate_corpus(cfg, str(tmp_path))
        gold = read_pair_map(summary.gold_path)
        predicted = components_map(str(tmp_path))
        assert predicted.keys() == gold.keys()
        keys = sorted(gold)
        ari = adjusted_rand_index([gold[k] for k in keys], [predicted[k] for k in keys])
        assert ari == pytest.approx(1.0)

    def test_backup_repo_bridges_all_groups(self, tmp_path):
        cfg = SynthConfig(n_groups=8, n_backup_repos=1, backup_reach=8, seed=1)
        generate_corpus(cfg, str(tmp_path))
        predicted = components_map(str(tmp_path))
        assert len(set(predicted.values())) == 1

    def test_same_seed_byte_identical(self, tmp_path):
        cfg = SynthConfig(n_groups=6, n_backup_repos=2, backup_reach=3,
                          n_mega_commits=1, mega_commit_span=10,
                          fork_fraction=0.5, seed=99)
        a, b = tmp_path / "a", tmp_path / "b"
        generate_corpus(cfg, str(a))
        generate_corpus(cfg, str(b))
        for name in [f"c2p.{i}" for i in range(32)] + ["gold.map", "forks.map"]:
            assert filecmp.cmp(a / name, b / name, shallow=False), name

    def test_generated_hashes_parse(self, tmp_path):
        cfg = SynthConfig(n_groups=4, seed=3)
        summary = generate_corpus(cfg, str(tmp_path))
        parsed = 0
        for path in summary.pair_files:
            parsed += sum(1 for _ in iter_pair_records(path))
        assert parsed == summary.n_pairs

    def test_fork_map_points_into_groups(self, tmp_path):
        cfg = SynthConfig(n_groups=5, fork_fraction=1.0, seed=8)
        summary = generate_corpus(cfg, str(tmp_path))
        forks = read_pair_map(summary.forks_path)
        assert forks  # every non-root member is declared a fork
        for repo, parent in forks.items():
            assert repo != parent

    def test_span_exceeding_universe_rejected(self, tmp_path):
        cfg = SynthConfig(n_groups=2, group_size_min=2, group_size_max=2,
                          n_mega_commits=1, mega_commit_span=1000, seed=0)
        with pytest.raises(ConfigError):
            generate_corpus(cfg, str(tmp_path))

    def test_bad_config_rejected(self):
        with pytest.raises(ConfigError):
            SynthConfig(fork_fraction=1.5).validate()
        with pytest.raises(ConfigError):
            SynthConfig(group_size_min=1).validate()
