"""Node scoring, maximal-antichain selection, and navigation time series.

A hierarchy is explored by assigning every node a score (keyword match,
similarity to a selected cluster, or a sentiment transform) and then picking
the maximal antichain: a set of nodes that cuts every root-to-leaf path
exactly once. The recursion walks bottom-up; a node replaces its subtree's
antichain when its own score beats everything below it, or when it and its
whole subtree sit under the noise threshold theta.
"""

from dataclasses import dataclass

from .cluster import cosine

DEFAULT_THETA = 0.2

TOPIC_KINDS = ("search", "similar")
SENTIMENT_KINDS = ("positive", "negative", "posneg")


@dataclass(frozen=True)
class ScoreMode:
    """What to score nodes by; construct via the classmethods."""

    kind: str
    term: str | None = None
    step_index: int | None = None
    node_id: int | None = None

    @classmethod
    def search(cls, term):
        if not term:
            raise ValueError("search term must be non-empty")
        return cls("search", term=term)

    @classmethod
    def similar(cls, step_index, node_id):
        return cls("similar", step_index=step_index, node_id=node_id)

    @classmethod
    def positive(cls):
        return cls("positive")

    @classmethod
    def negative(cls):
        return cls("negative")

    @classmethod
    def posneg(cls):
        return cls("posneg")

    @property
    def is_sentiment(self):
        return self.kind in SENTIMENT_KINDS


def match_score_search(node_term_weight, dataset_max):
    """Ratio of a node's term weight to the dataset-wide maximum (0 if max is 0)."""
    if dataset_max <= 0.0:
        return 0.0
    return node_term_weight / dataset_max


def match_score_similar(centroid, selected_centroid):
    """Cosine similarity between a node's centroid and the selected cluster's."""
    return cosine(centroid, selected_centroid)


def sentiment_score(h, kind):
    """Transform a happiness index for antichain selection.

    positive mode uses h directly, negative mode negates it, and posneg uses
    the absolute value.
    """
    if kind == "positive":
        return h
    if kind == "negative":
        return -h
    if kind == "posneg":
        return abs(h)
    raise ValueError(f"not a sentiment mode: {kind!r}")


@dataclass
class ScoredTree:
    """A hierarchy plus one finite score per node and the noise threshold."""

    hierarchy: object
    scores: dict
    theta: float = DEFAULT_THETA


@dataclass
class Antichain:
    """Maximal antichain node ids with their display scores."""

    node_ids: list
    scores: dict

    def ordered(self):
        return order_antichain(self.node_ids, self.scores)


def find_max_antichain(scored):
    """Best-matching maximal antichain of a scored hierarchy.

    Bottom-up pass; at each node r with subtree-max return value m_v, the
    antichain coarsens to r when r_v > m_v, or when both m_v and r_v fall
    below theta. Otherwise the children's antichains are kept and m_v is
    passed up. Every root-to-leaf path ends up cut exactly once.
    """
    hier = scored.hierarchy
    scores = scored.scores
    theta = scored.theta
    if hier.root is None:
        return Antichain([], {})

    returned = {}
    chains = {}
    # iterative post-order; real hierarchies are shallow but generated test
    # trees can be path-like, so no recursion
    stack = [(hier.root, False)]
    while stack:
        nid, expanded = stack.pop()
        children = hier.children(nid)
        if children and not expanded:
            stack.append((nid, True))
            stack.extend((c, False) for c in children)
            continue
        r_v = scores[nid]
        m_v = -1.0
        for c in children:
            if returned[c] > m_v:
                m_v = returned[c]
        if (r_v > m_v) or (m_v < theta and r_v < theta):
            chains[nid] = [nid]
            returned[nid] = r_v
        else:
            merged = []
            for c in children:
                merged.extend(chains[c])
                del chains[c]
            chains[nid] = merged
            returned[nid] = m_v
    ids = chains[hier.root]
    return Antichain(ids, {i: scores[i] for i in ids})


def order_antichain(node_ids, scores):
    """Node ids sorted by score, non-increasing; ties by ascending node id."""
    return sorted(node_ids, key=lambda i: (-scores[i], i))


@dataclass(frozen=True)
class SeriesPoint:
    """One scented-widget sample: user reach for topic modes, or the day's
    strongest positive and negative happiness magnitudes."""

    step_index: int
    users: int | None = None
    pos: float | None = None
    neg: float | None = None

    def as_dict(self):
        if self.users is not None:
            return {"step": self.step_index, "users": self.users}
        return {"step": self.step_index, "pos": self.pos, "neg": self.neg}


def topic_series_point(scored):
    """Total users over antichain nodes whose score clears theta."""
    antichain = find_max_antichain(scored)
    hier = scored.hierarchy
    return sum(hier.node(i).size for i in antichain.node_ids
               if antichain.scores[i] >= scored.theta)


def sentiment_series_point(h_by_node):
    """Day extremes (max h, max -h), each clamped below at zero."""
    if not h_by_node:
        return 0.0, 0.0
    values = list(h_by_node.values())
    return max(0.0, max(values)), max(0.0, max(-v for v in values))


def scented_series(dataset, mode, theta=None):
    """Per-step SeriesPoints for the scented navigation widget.

    dataset must expose step_count, hierarchy(step), node_scores(step, mode)
    and, for sentiment modes, node_h(step). Topic modes count the users behind
    antichain nodes at or above theta; sentiment modes report the per-day
    maximum positive and negative happiness magnitudes.
    """
    if theta is None:
        theta = DEFAULT_THETA
    points = []
    for step in range(dataset.step_count):
        hier = dataset.hierarchy(step)
        if mode.is_sentiment:
            h = dataset.node_h(step) if hier.root is not None else {}
            pos, neg = sentiment_series_point(h)
            points.append(SeriesPoint(step, pos=pos, neg=neg))
        else:
            if hier.root is None:
                points.append(SeriesPoint(step, users=0))
                continue
            scored = ScoredTree(hier, dataset.node_scores(step, mode), theta)
            points.append(SeriesPoint(step, users=topic_series_point(scored)))
    return points


__all__ = [
    "DEFAULT_THETA", "TOPIC_KINDS", "SENTIMENT_KINDS", "ScoreMode", "ScoredTree",
    "Antichain", "SeriesPoint", "match_score_search", "match_score_similar",
    "sentiment_score", "find_max_antichain", "order_antichain",
    "topic_series_point", "sentiment_series_point", "scented_series",
]
