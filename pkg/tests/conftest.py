"""Shared fixtures: a small deterministic post corpus and a processed store."""

import json

import pytest

ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        ACCEPTANCE_RESULTS[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible pass/fail line per acceptance criterion."""
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(ACCEPTANCE_RESULTS):
        outcome = ACCEPTANCE_RESULTS[nodeid]
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")

from crowdlens.cluster import ClusteringConfig
from crowdlens.corpus import parse_timestamp
from crowdlens.pipeline import PipelineConfig, run_all

TOPICS = {
    "storm": (["storm", "flood", "rain", "damage", "wind", "evacuate"],
              ["awful", "terrible", "sad", "worried", "scared"]),
    "festival": (["festival", "music", "dance", "party", "stage", "tickets"],
                 ["great", "happy", "love", "amazing", "fun"]),
    "election": (["election", "vote", "debate", "ballot", "polls", "senate"],
                 ["hope", "fail", "win", "wrong", "proud"]),
}

USERS_PER_TOPIC = 5
STEP_COUNT = 3
EPOCH = "2011-04-01T00:00:00+00:00"


def toy_posts():
    """Deterministic NDJSON lines: 3 topics x 5 users x 3 days x 3 posts."""
    lines = []
    topics = sorted(TOPICS)
    for day in range(STEP_COUNT):
        for t_idx, topic in enumerate(topics):
            words, moods = TOPICS[topic]
            for u in range(USERS_PER_TOPIC):
                user = f"{topic}_user{u}"
                for post in range(3):
                    k = day + u + post
                    text = " ".join([
                        words[k % len(words)],
                        words[(k + 1 + t_idx) % len(words)],
                        words[(k + 2) % len(words)],
                        moods[(u + post + day * t_idx) % len(moods)],
                        f"#{topic}",
                    ])
                    ts = f"2011-04-{day + 1:02d}T{8 + post * 4:02d}:{10 + u:02d}:00Z"
                    lines.append(json.dumps(
                        {"user": user, "ts": ts, "text": text}))
    return lines


@pytest.fixture(scope="session")
def toy_corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "posts.ndjson"
    path.write_text("\n".join(toy_posts()) + "\n", encoding="utf-8")
    return path


def toy_config(corpus_file, store_dir, dataset="toy", seed=1):
    return PipelineConfig(
        inputs=[str(corpus_file)],
        store_dir=str(store_dir),
        dataset=dataset,
        epoch_start=parse_timestamp(EPOCH),
        step_hours=24.0,
        step_count=STEP_COUNT,
        clustering=ClusteringConfig(p=2, k=4, k_low=4, seed=seed),
        jobs=1,
    )


@pytest.fixture(scope="session")
def toy_store(toy_corpus_file, tmp_path_factory):
    """Fully processed store for the toy corpus; shared read-only."""
    store_dir = tmp_path_factory.mktemp("store")
    cfg = toy_config(toy_corpus_file, store_dir)
    run_all(cfg)
    return store_dir
