"""Lexicon-based happiness scoring of profiles and cluster hierarchies.

Each profile document gets the fraction of its tokens that hit the positive
and negative lexicons. Those fractions are z-normalized against corpus means
and standard deviations, and a cluster's score is

    h = (mu_pc - mu_p) / sigma_p - (mu_nc - mu_n) / sigma_n

where mu_pc / mu_nc average the member documents' fractions. Positive h means
happier-than-baseline; a drop in negative-term usage alone raises h.
"""

import logging
from dataclasses import dataclass
from importlib import resources

import numpy as np

logger = logging.getLogger("crowdlens")

SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset
    negative: frozenset

    def __post_init__(self):
        if not self.positive or not self.negative:
            raise ValueError("lexicon term sets must be non-empty")
        if self.positive & self.negative:
            raise ValueError("positive and negative term sets must be disjoint")

    @classmethod
    def load(cls, positive_path, negative_path):
        """Load two plain-text files, one lowercase term per line."""
        return cls(_read_terms(positive_path), _read_terms(negative_path))

    @classmethod
    def bundled(cls):
        """Small demo lexicon shipped with the package."""
        pkg = resources.files("crowdlens.data")
        pos = frozenset(_iter_terms((pkg / "positive.txt").read_text("utf-8")))
        neg = frozenset(_iter_terms((pkg / "negative.txt").read_text("utf-8")))
        return cls(pos, neg)


def _read_terms(path):
    with open(path, encoding="utf-8") as f:
        return frozenset(_iter_terms(f.read()))


def _iter_terms(text):
    for line in text.splitlines():
        term = line.strip().lower()
        if term and not term.startswith("#"):
            yield term


@dataclass(frozen=True)
class DocSentiment:
    pos_frac: float
    neg_frac: float


@dataclass(frozen=True)
class SentimentStats:
    mu_p: float
    mu_n: float
    sigma_p: float
    sigma_n: float


@dataclass(frozen=True)
class ClusterSentiment:
    mu_pc: float
    mu_nc: float
    h: float

    def as_dict(self):
        return {"h": self.h, "mu_pc": self.mu_pc, "mu_nc": self.mu_nc}


def doc_sentiment(tokens, lexicon):
    """Fractions of a document's tokens that are positive / negative terms."""
    if not tokens:
        return DocSentiment(0.0, 0.0)
    pos = sum(1 for t in tokens if t in lexicon.positive)
    neg = sum(1 for t in tokens if t in lexicon.negative)
    return DocSentiment(pos / len(tokens), neg / len(tokens))


def step_doc_fractions(step_corpus, lexicon, indices=None):
    """(n, 2) array of pos/neg fractions for a step's profiles.

    Vectorized equivalent of doc_sentiment over the step's count matrix;
    indices restricts to a subset of profile rows (e.g. non-degenerate ones).
    """
    counts = step_corpus.count_matrix()
    if indices is not None:
        counts = counts[indices]
    terms = step_corpus.dictionary.terms
    pos_mask = np.fromiter((t in lexicon.positive for t in terms), bool,
                           count=len(terms)).astype(np.float64)
    neg_mask = np.fromiter((t in lexicon.negative for t in terms), bool,
                           count=len(terms)).astype(np.float64)
    totals = np.asarray(counts.sum(axis=1)).ravel()
    pos = counts @ pos_mask
    neg = counts @ neg_mask
    safe = np.where(totals > 0, totals, 1.0)
    return np.column_stack([pos / safe, neg / safe])


def corpus_stats(fractions):
    """Population mean/stddev of pos and neg fractions over the scored scope.

    fractions: (n, 2) array or an iterable of DocSentiment, n >= 2. A zero
    standard deviation is floored at 1e-9 with a warning (degenerate corpus).
    """
    arr = _as_array(fractions)
    if arr.shape[0] < 2:
        raise ValueError("sentiment stats need at least 2 documents")
    mu = arr.mean(axis=0)
    sigma = arr.std(axis=0)  # population stddev
    floored = sigma.copy()
    for i, name in enumerate(("positive", "negative")):
        if floored[i] < SIGMA_FLOOR:  # identical docs leave only float noise
            logger.warning("zero %s-fraction variance; flooring sigma at %g",
                           name, SIGMA_FLOOR)
            floored[i] = SIGMA_FLOOR
    return SentimentStats(float(mu[0]), float(mu[1]),
                          float(floored[0]), float(floored[1]))


def cluster_happiness(member_fractions, stats):
    """Happiness index of a cluster from its member documents' fractions."""
    arr = _as_array(member_fractions)
    if arr.shape[0] == 0:
        raise ValueError("cluster has no member documents")
    mu_pc = float(arr[:, 0].mean())
    mu_nc = float(arr[:, 1].mean())
    return ClusterSentiment(mu_pc, mu_nc, happiness(mu_pc, mu_nc, stats))


def happiness(mu_pc, mu_nc, stats):
    return ((mu_pc - stats.mu_p) / stats.sigma_p
            - (mu_nc - stats.mu_n) / stats.sigma_n)


def score_hierarchy(hierarchy, doc_fractions, stats):
    """Attach ClusterSentiment to every node of a hierarchy.

    doc_fractions rows must align with the profile rows the hierarchy's leaves
    were assigned from (leaf nodes carry member_rows). Interior means are
    accumulated bottom-up so one pass covers all nodes.
    """
    arr = _as_array(doc_fractions)
    sums = {}
    by_depth = sorted(hierarchy.nodes, key=lambda i: -_node_depth(hierarchy, i))
    for nid in by_depth:
        node = hierarchy.node(nid)
        if node.is_leaf:
            if node.member_rows is None:
                raise ValueError("hierarchy leaves lack member row annotations")
            rows = node.member_rows
            sums[nid] = arr[rows].sum(axis=0) if len(rows) else np.zeros(2)
        else:
            sums[nid] = np.sum([sums[c] for c in node.children], axis=0)
        if node.size > 0:
            mu_pc = float(sums[nid][0] / node.size)
            mu_nc = float(sums[nid][1] / node.size)
            node.sent = ClusterSentiment(mu_pc, mu_nc,
                                         happiness(mu_pc, mu_nc, stats)).as_dict()
        else:
            node.sent = ClusterSentiment(0.0, 0.0, 0.0).as_dict()
    return hierarchy


def _node_depth(hierarchy, nid):
    d = 0
    node = hierarchy.node(nid)
    while node.parent is not None:
        node = hierarchy.node(node.parent)
        d += 1
    return d


def _as_array(fractions):
    if isinstance(fractions, np.ndarray):
        return fractions.reshape(-1, 2)
    return np.array([[f.pos_frac, f.neg_frac] for f in fractions], dtype=np.float64)


__all__ = [
    "SentimentLexicon", "DocSentiment", "SentimentStats", "ClusterSentiment",
    "doc_sentiment", "step_doc_fractions", "corpus_stats", "cluster_happiness",
    "happiness", "score_hierarchy", "SIGMA_FLOOR",
]
