"""Shared toy data for the demo scripts."""

from crowdlens.cluster import ClusterHierarchy, ClusterNode
from crowdlens.corpus import SparseTermVector


def toy_day():
    """A hand-made scored day: hierarchy, posneg scores, raw happiness."""
    edges = {0: 4, 1: 4, 2: 5, 3: 5, 4: 6, 5: 6, 6: None}
    sizes = {0: 30, 1: 20, 2: 25, 3: 10, 4: 50, 5: 35, 6: 85}
    tag_sets = {
        0: ["storm", "flood", "rain", "wind", "damage"],
        1: ["power", "outage", "dark", "candles"],
        2: ["concert", "band", "encore", "stage"],
        3: ["tickets", "queue", "sold", "out"],
        4: ["storm", "flood", "power", "rain"],
        5: ["concert", "tickets", "band", "stage"],
        6: ["storm", "concert", "flood", "tickets"],
    }
    nodes = {}
    root = None
    for nid, parent in edges.items():
        tags = [(t, 1.0 - 0.1 * i) for i, t in enumerate(tag_sets[nid])]
        nodes[nid] = ClusterNode(nid, parent, [], sizes[nid],
                                 SparseTermVector.empty(), tags=tags)
        if parent is None:
            root = nid
    for nid, parent in edges.items():
        if parent is not None:
            nodes[parent].children.append(nid)
    hier = ClusterHierarchy(0, root, nodes)

    h_by_node = {0: -2.1, 1: -1.2, 2: 1.8, 3: 0.4, 4: -1.8, 5: 1.4, 6: -0.3}
    scores = {n: abs(v) for n, v in h_by_node.items()}  # posneg transform
    return hier, scores, h_by_node
