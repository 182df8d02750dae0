"""Batch pipeline: ingest -> cluster -> sentiment, writing the dataset store.

Each stage reads its inputs from the store and writes deterministic outputs,
so running stages separately or via run_all produces identical bytes. The run
report (which includes wall-clock times) goes to a separate report.json that
is not part of the reproducible store contract.
"""

import glob
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from . import store
from .cluster import ClusteringConfig, cluster_time_step
from .corpus import TimeStepSpec, ingest_files, load_stoplist, parse_timestamp
from .explore import DEFAULT_THETA
from .sentiment import SentimentLexicon, corpus_stats, score_hierarchy, step_doc_fractions

logger = logging.getLogger("crowdlens")


class PipelineError(Exception):
    """A stage failed; carries the step index when one is implicated."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@dataclass
class PipelineConfig:
    """Everything one reproducible run needs."""

    inputs: list = field(default_factory=list)
    store_dir: str = "store"
    dataset: str = "dataset"
    epoch_start: datetime = datetime(2011, 1, 1, tzinfo=timezone.utc)
    step_hours: float = 24.0
    step_count: int = 1
    stoplists: list = field(default_factory=list)
    clustering: ClusteringConfig = field(default_factory=ClusteringConfig)
    lexicon_pos: str | None = None
    lexicon_neg: str | None = None
    sentiment_scope: str = "global"
    theta: float = DEFAULT_THETA
    obfuscate_labels: bool = False
    jobs: int = 0  # 0 -> one worker per core

    def time_spec(self):
        return TimeStepSpec(self.epoch_start, timedelta(hours=self.step_hours),
                            self.step_count)

    def lexicon(self):
        if self.lexicon_pos and self.lexicon_neg:
            return SentimentLexicon.load(self.lexicon_pos, self.lexicon_neg)
        if self.lexicon_pos or self.lexicon_neg:
            raise PipelineError("both lexicon paths are required, or neither")
        return SentimentLexicon.bundled()

    def ds_dir(self):
        return Path(self.store_dir) / self.dataset

    def worker_count(self):
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)


def load_config_file(path):
    """Parse a key=value sections config file into a PipelineConfig."""
    import configparser

    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise PipelineError(f"config file not readable: {path}")
    cfg = PipelineConfig()
    if parser.has_section("input"):
        sec = parser["input"]
        if "globs" in sec:
            cfg.inputs = [g.strip() for g in sec["globs"].split(",") if g.strip()]
        if "stoplists" in sec:
            cfg.stoplists = [s.strip() for s in sec["stoplists"].split(",")
                             if s.strip()]
    if parser.has_section("steps"):
        sec = parser["steps"]
        if "epoch_start" in sec:
            cfg.epoch_start = parse_timestamp(sec["epoch_start"])
        cfg.step_hours = sec.getfloat("step_hours", cfg.step_hours)
        cfg.step_count = sec.getint("step_count", cfg.step_count)
    if parser.has_section("clustering"):
        sec = parser["clustering"]
        cfg.clustering = ClusteringConfig(
            p=sec.getint("p", 5),
            k=sec.getint("k", 50),
            k_low=sec.getint("k_low", None) if "k_low" in sec else None,
            linkage=sec.get("linkage", "minmax"),
            seed=sec.getint("seed", 0),
            weighting=sec.get("weighting", "tf"),
            tags_per_node=sec.getint("tags_per_node", 10),
        )
    if parser.has_section("sentiment"):
        sec = parser["sentiment"]
        cfg.lexicon_pos = sec.get("lexicon_pos", None)
        cfg.lexicon_neg = sec.get("lexicon_neg", None)
        cfg.sentiment_scope = sec.get("scope", "global")
    if parser.has_section("store"):
        sec = parser["store"]
        cfg.store_dir = sec.get("dir", cfg.store_dir)
        cfg.dataset = sec.get("dataset", cfg.dataset)
        cfg.obfuscate_labels = sec.getboolean("obfuscate_labels", False)
    if parser.has_section("explore"):
        cfg.theta = parser["explore"].getfloat("theta", DEFAULT_THETA)
    return cfg


def _config_echo(cfg):
    cc = cfg.clustering
    return {
        "p": cc.p, "k": cc.k, "k_low": cc.k_low, "linkage": cc.linkage,
        "seed": cc.seed, "weighting": cc.weighting,
        "tags_per_node": cc.tags_per_node,
        "epoch_start": cfg.epoch_start.isoformat(),
        "step_hours": cfg.step_hours, "step_count": cfg.step_count,
        "theta": cfg.theta, "sentiment_scope": cfg.sentiment_scope,
        "lexicon_pos": cfg.lexicon_pos or "bundled",
        "lexicon_neg": cfg.lexicon_neg or "bundled",
        "obfuscate_labels": cfg.obfuscate_labels,
    }


def _step_labels(cfg):
    if cfg.obfuscate_labels:
        return [f"t{i + 1}" for i in range(cfg.step_count)]
    spec = cfg.time_spec()
    return [spec.step_start(i).date().isoformat() for i in range(cfg.step_count)]


def run_ingest(cfg):
    """Stage 1: read posts, build per-step profiles, persist term counts."""
    t0 = time.perf_counter()
    paths = sorted(set(sum((glob.glob(g) for g in cfg.inputs), [])))
    if not paths:
        raise PipelineError("no input files")
    stoplist = load_stoplist(cfg.stoplists) if cfg.stoplists else frozenset()
    steps, report = ingest_files(paths, cfg.time_spec(), stoplist,
                                 weighting=cfg.clustering.weighting)

    ds_dir = cfg.ds_dir()
    ds_dir.mkdir(parents=True, exist_ok=True)
    step_rows = []
    for sc in steps:
        store.write_profiles(ds_dir, sc)
        step_rows.append({
            "step": sc.step_index,
            "users": sc.user_count,
            "tokens": sc.token_total,
            "degenerate": sum(p.degenerate for p in sc.profiles),
        })
    manifest = {
        "dataset": cfg.dataset,
        "step_count": cfg.step_count,
        "step_labels": _step_labels(cfg),
        "config": _config_echo(cfg),
        "counts": {
            "posts_read": report.posts_read,
            "posts_kept": report.posts_kept,
            "posts_out_of_range": report.posts_out_of_range,
            "skipped_by_file": report.skipped_by_file,
            "steps": step_rows,
        },
        "stages": {"ingest": True, "cluster": False, "sentiment": False},
    }
    store.write_manifest(ds_dir, manifest)
    return {"stage": "ingest", "seconds": time.perf_counter() - t0,
            "steps": step_rows,
            "posts_read": report.posts_read,
            "posts_kept": report.posts_kept,
            "posts_out_of_range": report.posts_out_of_range,
            "skipped_by_file": report.skipped_by_file}


def _cluster_one_step(ds_dir, step, clustering):
    from .cluster import ClusterHierarchy

    try:
        t0 = time.perf_counter()
        corpus = store.load_profiles(ds_dir, step, weighting=clustering.weighting)
        active = corpus.active_indices()
        if not active:
            empty = ClusterHierarchy(step, None, {})
            store.write_hierarchy(ds_dir, empty)
            store.write_centroids(ds_dir, empty, corpus.dictionary.terms)
            store.write_assignment(ds_dir, step, [], [])
            return step, 0, time.perf_counter() - t0
        hierarchy = cluster_time_step(corpus, clustering)
        store.write_hierarchy(ds_dir, hierarchy)
        store.write_centroids(ds_dir, hierarchy, corpus.dictionary.terms)
        rows = []
        leaf_ids = []
        for nid in sorted(hierarchy.nodes):
            node = hierarchy.nodes[nid]
            if node.is_leaf:
                rows.extend(node.member_rows)
                leaf_ids.extend([nid] * len(node.member_rows))
        # member rows index the active-profile matrix; translate to profile rows
        active_arr = np.asarray(active)
        store.write_assignment(ds_dir, step, active_arr[rows], leaf_ids)
        return step, hierarchy.leaf_count, time.perf_counter() - t0
    except Exception as exc:
        raise PipelineError(f"clustering step {step} failed: {exc}") from exc


def run_cluster(cfg):
    """Stage 2: hierarchical clustering of every step, written per step."""
    t0 = time.perf_counter()
    ds_dir = cfg.ds_dir()
    manifest = store.read_manifest(ds_dir)
    steps = list(range(manifest["step_count"]))
    rows = []
    workers = min(cfg.worker_count(), max(len(steps), 1))
    if workers > 1 and len(steps) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_cluster_one_step, ds_dir, s,
                                   cfg.clustering) for s in steps]
            for fut in futures:
                rows.append(fut.result())
    else:
        for s in steps:
            rows.append(_cluster_one_step(ds_dir, s, cfg.clustering))
    manifest["config"].update(_config_echo(cfg))
    manifest["stages"]["cluster"] = True
    store.write_manifest(ds_dir, manifest)
    return {"stage": "cluster", "seconds": time.perf_counter() - t0,
            "steps": [{"step": s, "leaves": leaves, "seconds": secs}
                      for s, leaves, secs in sorted(rows)]}


def run_sentiment(cfg):
    """Stage 3: happiness scores for every hierarchy node."""
    t0 = time.perf_counter()
    ds_dir = cfg.ds_dir()
    manifest = store.read_manifest(ds_dir)
    if not manifest["stages"].get("cluster"):
        raise PipelineError("sentiment stage requires the cluster stage")
    lexicon = cfg.lexicon()
    step_count = manifest["step_count"]

    per_step = []
    for step in range(step_count):
        corpus = store.load_profiles(ds_dir, step,
                                     weighting=cfg.clustering.weighting)
        rows, leaf_ids = store.load_assignment(ds_dir, step)
        fractions = (step_doc_fractions(corpus, lexicon, rows)
                     if len(rows) else np.zeros((0, 2)))
        per_step.append((corpus, rows, leaf_ids, fractions))

    stats_global = None
    if cfg.sentiment_scope == "global":
        stacked = np.vstack([f for _, _, _, f in per_step if len(f)])
        if stacked.shape[0] < 2:
            raise PipelineError("global sentiment stats need >= 2 documents")
        stats_global = corpus_stats(stacked)
        manifest["sentiment_stats"] = {
            "mu_p": stats_global.mu_p, "mu_n": stats_global.mu_n,
            "sigma_p": stats_global.sigma_p, "sigma_n": stats_global.sigma_n,
        }
    elif cfg.sentiment_scope != "per-step":
        raise PipelineError(f"unknown sentiment scope: {cfg.sentiment_scope!r}")

    for step, (corpus, rows, leaf_ids, fractions) in enumerate(per_step):
        hierarchy = store.load_hierarchy(ds_dir, step)
        if hierarchy.root is None:
            continue
        stats = stats_global
        if stats is None:
            if fractions.shape[0] < 2:
                raise PipelineError(
                    "per-step sentiment stats need >= 2 documents", step=step)
            stats = corpus_stats(fractions)
        # leaf member rows index the fractions array (assignment row order)
        by_leaf = {}
        for i, leaf in enumerate(leaf_ids):
            by_leaf.setdefault(int(leaf), []).append(i)
        for nid, node in hierarchy.nodes.items():
            if node.is_leaf:
                node.member_rows = by_leaf.get(nid, [])
        score_hierarchy(hierarchy, fractions, stats)
        store.write_hierarchy(ds_dir, hierarchy)
    manifest["config"].update(_config_echo(cfg))
    manifest["stages"]["sentiment"] = True
    store.write_manifest(ds_dir, manifest)
    return {"stage": "sentiment", "seconds": time.perf_counter() - t0,
            "scope": cfg.sentiment_scope}


def run_all(cfg):
    """All three stages; aborts on the first failing stage."""
    t0 = time.perf_counter()
    reports = [run_ingest(cfg), run_cluster(cfg), run_sentiment(cfg)]
    total = time.perf_counter() - t0
    report = {"dataset": cfg.dataset, "seconds": total, "stages": reports}
    report_path = cfg.ds_dir() / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                           encoding="utf-8")
    logger.info("pipeline finished in %.2fs; report at %s", total, report_path)
    return report


__all__ = ["PipelineConfig", "PipelineError", "load_config_file",
           "run_ingest", "run_cluster", "run_sentiment", "run_all"]
