"""Command-line entry point: stage subcommands plus the one-shot pipeline."""

from __future__ import annotations

import argparse
import os
import sys

from . import collapse as collapse_mod
from . import evaluation, naming, pipeline, synth
from .filtering import DEFAULT_MAX_COMMIT_SPAN, FilterStats, load_bad_projects
from .ingest import corpus_files, iter_pair_records, shard_index
from .pipeline import PipelineConfig, PipelineConfigError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _add_filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--max-commit-span", type=int, default=DEFAULT_MAX_COMMIT_SPAN,
        help="drop commits touching more than this many projects",
    )
    p.add_argument(
        "--bad-projects", metavar="FILE", default=None,
        help="file listing problematic repos to remove, one per line",
    )


def _bad_names(args) -> frozenset[str]:
    return load_bad_projects(args.bad_projects) if args.bad_projects else frozenset()


def cmd_ingest_check(args) -> int:
    files = corpus_files(args.input)
    pairs = commits = 0
    projects: set[str] = set()
    for path in files:
        base = os.path.basename(path)
        base = base[:-3] if base.endswith(".gz") else base
        expect_shard = int(base.split(".")[1]) if base.startswith("c2p.") else None
        last = None
        for commit, project in iter_pair_records(path):
            if expect_shard is not None and shard_index(commit) != expect_shard:
                raise ValueError(
                    f"{path}: commit {commit} belongs in shard {shard_index(commit)}"
                )
            pairs += 1
            projects.add(project)
            if commit != last:
                commits += 1
                last = commit
    print(f"files={len(files)} pairs={pairs} commits={commits} projects={len(projects)}")
    return EXIT_OK


def cmd_filter(args) -> int:
    files = corpus_files(args.input)
    os.makedirs(args.output, exist_ok=True)
    bad = _bad_names(args)
    stats = FilterStats()
    for path in files:
        out_path = os.path.join(args.output, os.path.basename(path))
        if out_path.endswith(".gz"):
            out_path = out_path[:-3]
        with open(out_path, "w", encoding="utf-8") as fh:
            for commit, names in pipeline.iter_filtered_name_groups(
                path, bad, args.max_commit_span, stats
            ):
                fh.writelines(f"{commit};{name}\n" for name in names)
    print(
        f"dropped_span_commits={stats.dropped_span_commits} "
        f"dropped_empty_commits={stats.dropped_empty_commits} "
        f"removed_project_occurrences={stats.removed_project_occurrences}"
    )
    return EXIT_OK


def cmd_components(args) -> int:
    files = corpus_files(args.input)
    bad = _bad_names(args)
    interner, _ = pipeline.build_universe(
        files, bad, args.max_commit_span, FilterStats()
    )
    clustering = pipeline.compute_components(
        files, interner, bad, args.max_commit_span, args.threads
    )
    lines = pipeline.write_atomic(
        lambda p: naming.write_raw_map(clustering, interner, p), args.output
    )
    print(f"projects={lines} clusters={clustering.n_clusters()}")
    return EXIT_OK


def cmd_name(args) -> int:
    raw = naming.read_pair_map(args.input)
    named = naming.name_raw_map(raw)
    lines = pipeline.write_atomic(
        lambda p: naming.write_pair_map(named, p), args.output
    )
    print(f"lines={lines}")
    return EXIT_OK


def cmd_collapse(args) -> int:
    forks = collapse_mod.load_fork_map(args.forks)
    upm = collapse_mod.build_ultimate_map(forks)
    lines = pipeline.write_atomic(
        lambda p: naming.write_fork_map(upm, p), args.output
    )
    print(f"forks={len(forks)} lines={lines}")
    return EXIT_OK


def cmd_louvain(args) -> int:
    files = corpus_files(args.input)
    bad = _bad_names(args)
    upm = naming.read_pair_map(args.ultimate_parents) if args.ultimate_parents else {}
    interner, _ = pipeline.build_universe(
        files, bad, args.max_commit_span, FilterStats()
    )
    hyperedges = pipeline.build_hyperedges(
        files, interner, upm, bad, args.max_commit_span
    )
    clustering = pipeline.communities_clustering(
        interner, upm, hyperedges, args.weight_scheme, args.min_gain
    )
    pipeline.write_atomic(
        lambda p: naming.write_raw_map(clustering, interner, p), args.output
    )
    print(
        f"projects={clustering.universe_size} hyperedges={len(hyperedges)} "
        f"clusters={clustering.n_clusters()} "
        f"largest={clustering.largest_cluster_size()}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.reference and args.candidate:
        reference = naming.read_pair_map(args.reference)
        candidate = naming.read_pair_map(args.candidate)
        split, total, rate = evaluation.cross_split_rate(reference, candidate)
        print(f"split_groups={split} total_groups={total} rate={rate:.4f}")
        return EXIT_OK
    if not (args.gold and args.predicted):
        raise ValueError("eval needs --gold and --predicted, or --reference and --candidate")
    upm = collapse_mod.build_ultimate_map(naming.read_pair_map(args.gold))
    gold = evaluation.gold_groups_from_forks(upm)
    gold = {
        naming.transform_name(parent): {naming.transform_name(m) for m in members}
        for parent, members in gold.items()
    }
    predicted = naming.read_pair_map(args.predicted)
    report = evaluation.split_report(gold, predicted)
    print(report.to_table())
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write("\n".join(report.to_lines()) + "\n")
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = synth.SynthConfig(
        n_groups=args.groups,
        group_size_min=args.group_size_min,
        group_size_max=args.group_size_max,
        commits_per_group=args.commits_per_group,
        n_backup_repos=args.backup_repos,
        backup_reach=args.backup_reach,
        n_mega_commits=args.mega_commits,
        mega_commit_span=args.mega_commit_span,
        fork_fraction=args.fork_fraction,
        share_fraction=args.share_fraction,
        seed=args.seed,
    )
    summary = synth.generate_corpus(cfg, args.output)
    print(
        f"projects={summary.n_projects} commits={summary.n_commits} "
        f"pairs={summary.n_pairs} largest_group={summary.largest_group}"
    )
    return EXIT_OK


def cmd_pipeline(args) -> int:
    if args.config:
        cfg = PipelineConfig.from_file(args.config)
    else:
        cfg = PipelineConfig()
    # Flags beat the config file, which beats defaults.
    overrides = {
        "input_dir": args.input,
        "output_dir": args.output,
        "max_commit_span": args.max_commit_span_opt,
        "bad_projects": args.bad_projects,
        "fork_map": args.fork_map,
        "weight_scheme": args.weight_scheme,
        "min_gain": args.min_gain,
        "threads": args.threads,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if args.skip_collapse:
        cfg.skip_collapse = True
    if args.skip_louvain:
        cfg.skip_louvain = True
    report = pipeline.run_pipeline(cfg)
    print(report.to_human())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repocluster",
        description="Group git repositories into related-project clusters by shared commits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate pair files and print corpus counts")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("filter", help="write filtered copies of the pair files")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    _add_filter_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("components", help="connected components -> raw cluster map")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threads", type=int, default=1)
    _add_filter_flags(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("name", help="apply the naming rule and output transform to a raw map")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_name)

    p = sub.add_parser("collapse", help="fork map -> ultimate parent map")
    p.add_argument("--forks", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("louvain", help="community detection -> raw cluster map")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--ultimate-parents", default=None)
    p.add_argument("--weight-scheme", choices=collapse_mod.WEIGHT_SCHEMES, default="unit")
    p.add_argument("--min-gain", type=float, default=0.0)
    _add_filter_flags(p)
    p.set_defaults(func=cmd_louvain)

    p = sub.add_parser("eval", help="split-rate evaluation of a predicted map")
    p.add_argument("--gold", help="fork/ultimate-parent gold file")
    p.add_argument("--predicted", help="predicted cluster map")
    p.add_argument("--report", help="write machine-readable rows here")
    p.add_argument("--reference", help="cross mode: reference cluster map")
    p.add_argument("--candidate", help="cross mode: candidate cluster map")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic corpus with planted truth")
    p.add_argument("--output", required=True)
    p.add_argument("--groups", type=int, default=20)
    p.add_argument("--group-size-min", type=int, default=5)
    p.add_argument("--group-size-max", type=int, default=10)
    p.add_argument("--commits-per-group", type=int, default=20)
    p.add_argument("--backup-repos", type=int, default=0)
    p.add_argument("--backup-reach", type=int, default=0)
    p.add_argument("--mega-commits", type=int, default=0)
    p.add_argument("--mega-commit-span", type=int, default=2)
    p.add_argument("--fork-fraction", type=float, default=0.0)
    p.add_argument("--share-fraction", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="run all stages and write a report")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--input", default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--max-commit-span", dest="max_commit_span_opt", type=int, default=None)
    p.add_argument("--bad-projects", default=None)
    p.add_argument("--fork-map", default=None)
    p.add_argument("--weight-scheme", choices=collapse_mod.WEIGHT_SCHEMES, default=None)
    p.add_argument("--min-gain", type=float, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--skip-collapse", action="store_true")
    p.add_argument("--skip-louvain", action="store_true")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PipelineConfigError, synth.ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except KeyboardInterrupt:
        raise
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit code 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
