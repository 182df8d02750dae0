"""Command-line driver: batch pipeline stages, headless export, and the server.

Subcommands: ingest, cluster, sentiment, run (all three), export, serve.
`run` reads a key=value sections config file; explicit flags win over the
file. Exit code 0 on success, 2 on a diagnosed failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline, store, svg
from .cluster import ClusteringConfig
from .corpus import IngestError, parse_timestamp
from .pipeline import PipelineConfig, PipelineError
from .store import BadQueryError, QueryRequest, StoreError

logger = logging.getLogger("crowdlens")


def _store_args(p):
    p.add_argument("--store", default="store", help="store directory")
    p.add_argument("--dataset", default="dataset", help="dataset id")


def _clustering_args(p):
    p.add_argument("--p", type=int, help="number of random fractions")
    p.add_argument("--k", type=int, help="leaf clusters of the final hierarchy")
    p.add_argument("--k-low", type=int, dest="k_low",
                   help="leaf clusters per fraction (default 2k/p)")
    p.add_argument("--linkage", choices=["minmax", "average"])
    p.add_argument("--seed", type=int, help="clustering RNG seed")
    p.add_argument("--weighting", choices=["tf", "tfidf"])
    p.add_argument("--jobs", type=int, help="parallel steps (default: cores)")


def _sentiment_args(p):
    p.add_argument("--lexicon-pos", help="positive lexicon file")
    p.add_argument("--lexicon-neg", help="negative lexicon file")
    p.add_argument("--sentiment-scope", choices=["global", "per-step"])


def _mode_args(p):
    p.add_argument("--mode", required=True,
                   choices=["search", "similar", "positive", "negative", "posneg"])
    p.add_argument("--q", help="search term (search mode)")
    p.add_argument("--sel-step", type=int, help="selected step (similar mode)")
    p.add_argument("--sel-node", type=int, help="selected node (similar mode)")
    p.add_argument("--window-start", type=int, default=0)
    p.add_argument("--window-len", type=int, default=6)
    p.add_argument("--view", choices=["treemap", "list"], default="treemap")
    p.add_argument("--word-cap", type=int, default=10)
    p.add_argument("--theta", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="crowdlens",
        description="Cluster, score, and explore time-stamped short-text posts.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="read posts, build profile store")
    p_ingest.add_argument("--input", action="append", required=True,
                          help="input glob (NDJSON, .gz ok); repeatable")
    p_ingest.add_argument("--epoch-start", required=True,
                          help="ISO-8601 start of step 0")
    p_ingest.add_argument("--step-hours", type=float, default=24.0)
    p_ingest.add_argument("--step-count", type=int, required=True)
    p_ingest.add_argument("--stoplist", action="append", default=[],
                          help="stoplist file; repeatable")
    p_ingest.add_argument("--obfuscate-labels", action="store_true")
    p_ingest.add_argument("--weighting", choices=["tf", "tfidf"])
    _store_args(p_ingest)

    p_cluster = sub.add_parser("cluster", help="build per-step hierarchies")
    _store_args(p_cluster)
    _clustering_args(p_cluster)

    p_sent = sub.add_parser("sentiment", help="score hierarchies with the lexicon")
    _store_args(p_sent)
    _sentiment_args(p_sent)

    p_run = sub.add_parser("run", help="ingest + cluster + sentiment")
    p_run.add_argument("--config", help="key=value sections config file")
    p_run.add_argument("--input", action="append")
    p_run.add_argument("--epoch-start")
    p_run.add_argument("--step-hours", type=float)
    p_run.add_argument("--step-count", type=int)
    p_run.add_argument("--stoplist", action="append")
    p_run.add_argument("--obfuscate-labels", action="store_true", default=None)
    p_run.add_argument("--theta", type=float)
    _store_args(p_run)
    _clustering_args(p_run)
    _sentiment_args(p_run)

    p_export = sub.add_parser("export", help="write a window scene file")
    _store_args(p_export)
    _mode_args(p_export)
    p_export.add_argument("--format", choices=["json", "svg"], default="json")
    p_export.add_argument("--out", required=True, help="output file path")

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", help="static UI bundle directory")
    _store_args(p_serve)
    return parser


def _apply_overrides(cfg, args):
    """Flags win over the config file."""
    if getattr(args, "input", None):
        cfg.inputs = args.input
    if getattr(args, "epoch_start", None):
        cfg.epoch_start = parse_timestamp(args.epoch_start)
    if getattr(args, "step_hours", None) is not None:
        cfg.step_hours = args.step_hours
    if getattr(args, "step_count", None) is not None:
        cfg.step_count = args.step_count
    if getattr(args, "stoplist", None):
        cfg.stoplists = args.stoplist
    if getattr(args, "store", None):
        cfg.store_dir = args.store
    if getattr(args, "dataset", None):
        cfg.dataset = args.dataset
    if getattr(args, "obfuscate_labels", None) is not None:
        cfg.obfuscate_labels = args.obfuscate_labels
    if getattr(args, "theta", None) is not None:
        cfg.theta = args.theta
    if getattr(args, "lexicon_pos", None):
        cfg.lexicon_pos = args.lexicon_pos
    if getattr(args, "lexicon_neg", None):
        cfg.lexicon_neg = args.lexicon_neg
    if getattr(args, "sentiment_scope", None):
        cfg.sentiment_scope = args.sentiment_scope
    if getattr(args, "jobs", None) is not None:
        cfg.jobs = args.jobs

    cc = cfg.clustering
    updates = {}
    for name in ("p", "k", "k_low", "linkage", "seed", "weighting"):
        value = getattr(args, name, None)
        if value is not None:
            updates[name] = value
    if updates:
        cfg.clustering = ClusteringConfig(
            p=updates.get("p", cc.p),
            k=updates.get("k", cc.k),
            k_low=updates.get("k_low", cc.k_low),
            linkage=updates.get("linkage", cc.linkage),
            seed=updates.get("seed", cc.seed),
            weighting=updates.get("weighting", cc.weighting),
            tags_per_node=cc.tags_per_node,
        )
    return cfg


def _print_report(report):
    print(json.dumps(report, indent=2, sort_keys=True, default=str))


def cmd_ingest(args):
    cfg = _apply_overrides(PipelineConfig(), args)
    _print_report(pipeline.run_ingest(cfg))
    return 0


def cmd_cluster(args):
    cfg = _apply_overrides(PipelineConfig(), args)
    _print_report(pipeline.run_cluster(cfg))
    return 0


def cmd_sentiment(args):
    cfg = _apply_overrides(PipelineConfig(), args)
    _print_report(pipeline.run_sentiment(cfg))
    return 0


def cmd_run(args):
    cfg = pipeline.load_config_file(args.config) if args.config else PipelineConfig()
    cfg = _apply_overrides(cfg, args)
    _print_report(pipeline.run_all(cfg))
    return 0


def cmd_export(args):
    catalog = store.StoreCatalog(args.store)
    view = catalog.view(args.dataset)
    if not view.manifest["stages"].get("sentiment"):
        raise StoreError("store is incomplete: run the pipeline first")
    mode = store.parse_mode(args.mode, args.q, args.sel_step, args.sel_node)
    req = QueryRequest(args.dataset, mode, args.window_start, args.window_len,
                       args.view, args.word_cap, args.theta)
    scenes = store.build_window(view, req)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        # byte-identical to the /window response for the same request
        out.write_bytes(json.dumps(scenes, ensure_ascii=False, allow_nan=False,
                                   separators=(",", ":")).encode("utf-8"))
    else:
        labels = view.manifest["step_labels"]
        window_labels = labels[args.window_start:
                               args.window_start + args.window_len]
        out.write_text(svg.window_svg(scenes, window_labels), encoding="utf-8")
    print(f"wrote {out}")
    return 0


def cmd_serve(args):
    from .service import serve

    serve(args.store, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "cluster": cmd_cluster,
    "sentiment": cmd_sentiment,
    "run": cmd_run,
    "export": cmd_export,
    "serve": cmd_serve,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (PipelineError, StoreError, IngestError, BadQueryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
