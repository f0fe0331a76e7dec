"""Command-line pipeline: one subcommand per stage, wired through files.

Stages communicate via the persisted formats under the config's work_dir,
so expensive intermediates (walk corpora, pair counts) can be reused
across confidence measures and window sizes.  A single YAML config plus
the seeds it carries determine every output byte.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import (ConfigError, base_settings, config_dict, experiment_grid,
                     load_config, override_seed)
from .confidence import co_matrix, load_confidence, save_confidence, sppmi_matrix
from .datasets import (IngestFormat, binarize, filter_min_interactions, ingest,
                       load_dataset, load_interactions, save_dataset,
                       save_interactions, sparsify, split)
from .evaluation import evaluate, run_experiment, write_report_json, write_report_tsv
from .factorization import AlsConfig, als_fit, load_model, save_model
from .graph import build_graph
from .pairs import load_stats, sample_pairs, save_stats
from .recommend import load_recommendations, recommend_topk, save_recommendations
from .synthetic import generate_synthetic
from .walks import WalkConfig, generate_walks, load_walks, save_walks


def _work(cfg):
    d = Path(cfg.work_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _source_pairs(cfg):
    "Binarized, filtered key pairs from the configured data source."
    data = cfg.data
    if data.synthetic is not None:
        syn = data.synthetic
        pairs = generate_synthetic(
            n_users=syn.users, n_items=syn.items, n_groups=syn.groups,
            bulk_degree=syn.bulk_degree, heavy_degree=syn.heavy_degree,
            heavy_fraction=syn.heavy_fraction,
            p_in=syn.p_in, p_out=syn.p_out, seed=syn.seed,
        )
    elif data.interactions is not None:
        fmt = IngestFormat(
            delimiter=data.delimiter, user_col=data.user_col, item_col=data.item_col,
            value_col=data.value_col, timestamp_col=data.timestamp_col,
            header=data.header,
        )
        with open(data.interactions, "r", encoding="utf-8") as f:
            pairs = binarize(ingest(f, fmt))
    else:
        raise ConfigError("data.interactions or data.synthetic is required")
    return filter_min_interactions(pairs, data.min_count)


def _dataset_from_config(cfg):
    return split(_source_pairs(cfg), cfg.split.ratios, cfg.split.seed)


def cmd_ingest(cfg):
    pairs = _source_pairs(cfg)
    out = _work(cfg) / "interactions.tsv"
    save_interactions(pairs, out)
    print(f"ingest: {len(pairs)} interactions -> {out}")


def cmd_split(cfg):
    pairs = load_interactions(_work(cfg) / "interactions.tsv")
    ds = split(pairs, cfg.split.ratios, cfg.split.seed)
    if cfg.sparsify.keep_fraction < 1.0:
        ds.train = sparsify(ds.train, cfg.sparsify.keep_fraction, cfg.sparsify.seed)
    out = _work(cfg) / "dataset"
    save_dataset(ds, out)
    print(f"split: {len(ds.train)}/{len(ds.valid)}/{len(ds.test)} "
          f"train/valid/test over {ds.n_users} users x {ds.n_items} items -> {out}")


def cmd_walk(cfg, workers):
    ds = load_dataset(_work(cfg) / "dataset")
    g = build_graph(ds.train, ds.n_users, ds.n_items)
    corpus = generate_walks(
        g, WalkConfig(cfg.walk.beta, cfg.walk.gamma, cfg.walk.seed), workers
    )
    out = _work(cfg) / "walks.txt"
    save_walks(corpus, out)
    print(f"walk: {len(corpus.walks)} walks of {cfg.walk.gamma} vertices -> {out}")


def cmd_pairs(cfg, workers):
    corpus = load_walks(_work(cfg) / "walks.txt")
    stats = sample_pairs(corpus, cfg.pairs.sigma, workers)
    out = _work(cfg) / "pair_stats.tsv"
    save_stats(stats, out)
    print(f"pairs: {stats.total} pair occurrences, "
          f"{stats.pair_count.nnz} distinct -> {out}")


def cmd_confidence(cfg):
    stats = load_stats(_work(cfg) / "pair_stats.tsv")
    if cfg.confidence.measure == "co":
        conf = co_matrix(stats)
    else:
        conf = sppmi_matrix(stats, cfg.confidence.shift_k)
    out = _work(cfg) / "confidence.tsv"
    save_confidence(conf, out)
    print(f"confidence: {conf.matrix.nnz} entries ({conf.measure}) -> {out}")


def cmd_train(cfg):
    conf = load_confidence(_work(cfg) / "confidence.tsv")
    als_cfg = AlsConfig(cfg.als.factors, cfg.als.lam, cfg.als.sweeps,
                        cfg.als.seed, cfg.als.init_scale)
    model = als_fit(conf, als_cfg)
    out = _work(cfg) / "model.npz"
    save_model(model, als_cfg, out)
    print(f"train: {cfg.als.sweeps} sweeps, "
          f"final objective {model.loss_trace[-1]:.6g} -> {out}")


def cmd_recommend(cfg):
    model, _ = load_model(_work(cfg) / "model.npz")
    ds = load_dataset(_work(cfg) / "dataset")
    masks = None
    if cfg.recommend.mask_train:
        masks = {}
        for u, i in ds.train:
            masks.setdefault(u, set()).add(i)
    recs = recommend_topk(model, cfg.recommend.k_items, masks)
    out = _work(cfg) / "recommendations.tsv"
    save_recommendations(recs, out)
    print(f"recommend: top-{cfg.recommend.k_items} lists for {len(recs)} users -> {out}")


def cmd_evaluate(cfg):
    ds = load_dataset(_work(cfg) / "dataset")
    recs = load_recommendations(_work(cfg) / "recommendations.tsv", ds.n_users)
    rep = evaluate(recs, ds.test, cfg.evaluate.cutoffs,
                   config=base_settings(cfg).echo())
    work = _work(cfg)
    write_report_tsv([rep], work / "metrics.tsv")
    write_report_json([rep], work / "metrics.json", resolved_config=config_dict(cfg))
    parts = [f"P@{k}={100 * rep.precision[k]:.3f}% R@{k}={100 * rep.recall[k]:.3f}% "
             f"F1@{k}={100 * rep.f1[k]:.3f}%" for k in rep.cutoffs]
    print("evaluate: " + "  ".join(parts))


def cmd_experiment(cfg, workers):
    ds = _dataset_from_config(cfg)
    rows = run_experiment(ds, base_settings(cfg), experiment_grid(cfg), workers)
    work = _work(cfg)
    write_report_tsv(rows, work / "report.tsv")
    write_report_json(rows, work / "report.json", resolved_config=config_dict(cfg))
    print(f"experiment: {len(rows)} grid cells -> {work / 'report.tsv'}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="walkrec",
        description="Random-walk enriched implicit-feedback recommendation pipeline",
    )
    parser.add_argument("-c", "--config", required=True, help="YAML config file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override every seed in the config")
    parser.add_argument("--workers", type=int, default=None,
                        help="override the worker count")
    sub = parser.add_subparsers(dest="stage", required=True)
    for name, help_text in [
        ("ingest", "parse, binarize, and filter the raw interaction source"),
        ("split", "index and split interactions into train/valid/test"),
        ("walk", "generate the random-walk corpus from the training graph"),
        ("pairs", "extract windowed user-item pair counts from the corpus"),
        ("confidence", "score pair counts into the confidence matrix"),
        ("train", "factorize the confidence matrix with ALS"),
        ("recommend", "write ranked top-K item lists per user"),
        ("evaluate", "score recommendations against the test split"),
        ("experiment", "run the full measure/window/sparsity/seed grid"),
    ]:
        sub.add_parser(name, help=help_text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = override_seed(cfg, args.seed)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers: must be >= 1")
            cfg = replace(cfg, workers=args.workers)
        workers = cfg.workers
        if args.stage == "ingest":
            cmd_ingest(cfg)
        elif args.stage == "split":
            cmd_split(cfg)
        elif args.stage == "walk":
            cmd_walk(cfg, workers)
        elif args.stage == "pairs":
            cmd_pairs(cfg, workers)
        elif args.stage == "confidence":
            cmd_confidence(cfg)
        elif args.stage == "train":
            cmd_train(cfg)
        elif args.stage == "recommend":
            cmd_recommend(cfg)
        elif args.stage == "evaluate":
            cmd_evaluate(cfg)
        elif args.stage == "experiment":
            cmd_experiment(cfg, workers)
        return 0
    except ConfigError as exc:
        print(f"walkrec {args.stage}: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"walkrec {args.stage}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
