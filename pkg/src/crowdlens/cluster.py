"""Three-phase scalable agglomerative clustering of user profiles.

Phase 1 randomly partitions a time step's profiles into p fractions and runs
min-max AHC inside each fraction down to k_low leaf clusters, compressing each
into a weighted centroid vector. Phase 2 agglomerates the compressed vectors
into a full binary merge tree using weighted cosine similarity. Phase 3 cuts
that tree at k clusters, re-assigns every original profile to its nearest cut
centroid, and rebuilds sizes/centroids bottom-up to produce the final
hierarchy for the step.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .corpus import SparseTermVector, nominal_fraction_size

logger = logging.getLogger("crowdlens")

LINKAGES = ("minmax", "average")


@dataclass
class ClusteringConfig:
    """Knobs for the three-phase pipeline.

    p: number of random fractions; k: leaf clusters of the final hierarchy;
    k_low: leaf clusters per fraction (defaults to 2k/p). The product
    p * k_low bounds k from above.
    """

    p: int = 5
    k: int = 50
    k_low: int | None = None
    linkage: str = "minmax"
    similarity: str = "cosine"
    seed: int = 0
    weighting: str = "tf"
    tags_per_node: int = 10

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.k_low is None:
            self.k_low = max(1, math.ceil(2 * self.k / self.p))
        if self.k_low < 1:
            raise ValueError("k_low must be >= 1")
        if self.k > self.p * self.k_low:
            raise ValueError("k must not exceed p * k_low")
        if self.linkage not in LINKAGES:
            raise ValueError(f"unknown linkage: {self.linkage!r}")
        if self.similarity != "cosine":
            raise ValueError(f"unknown similarity: {self.similarity!r}")


def cosine(u, v):
    """Cosine similarity of two non-negative sparse vectors, clamped to [0, 1].

    Returns 0.0 if either vector is empty.
    """
    if u.is_empty or v.is_empty:
        return 0.0
    value = u.dot(v) / (u.norm() * v.norm())
    return min(1.0, max(0.0, value))


def weighted_cosine(v_i, w_i, v_j, w_j):
    """Cosine similarity scaled by both cluster weights: w_i * w_j * cos(v_i, v_j)."""
    return w_i * w_j * cosine(v_i, v_j)


@dataclass
class CompressedVector:
    """Centroid of one fraction-level leaf cluster with its size-derived weight."""

    centroid: SparseTermVector
    weight: float
    member_count: int
    fraction_index: int
    members: np.ndarray  # row indices into the step's active-profile matrix

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("weight must be in [0, 1]")
        if self.member_count < 1:
            raise ValueError("member_count must be >= 1")


@dataclass
class Merge:
    """One agglomeration event: slots are min-member representatives."""

    slot_a: int
    slot_b: int
    id_a: int
    id_b: int
    new_id: int
    score: float


@dataclass
class Dendrogram:
    """Full binary merge tree over compressed vectors (leaves 0..m-1)."""

    leaves: list  # CompressedVector per leaf id
    merges: list  # Merge records, in merge order; node ids m..2m-2
    centroid: dict  # node id -> SparseTermVector
    weight: dict  # node id -> float (sum of member weights, capped at 1)

    @property
    def n_leaves(self):
        return len(self.leaves)

    def merge_leaf_sets(self):
        """Per merge, the pair of leaf-index sets joined (for oracle comparison)."""
        members = {i: frozenset([i]) for i in range(self.n_leaves)}
        out = []
        for m in self.merges:
            a, b = members[m.id_a], members[m.id_b]
            out.append((a, b) if min(a) < min(b) else (b, a))
            members[m.new_id] = a | b
        return out


class _PairwiseLinkage:
    """Incremental AHC over a fixed pairwise-similarity matrix.

    Keeps running inter-cluster similarity sums s(A,B) and self-sums s(A,A),
    merging the pair with the highest linkage score. A merged cluster lives in
    the lower of the two slots, so a slot index always equals the smallest
    member index, and score ties are broken by the lexicographically smallest
    (slot_a, slot_b) pair, which keeps merge order fully deterministic.

    minmax score: s(A,B) / (s(A,A) * s(B,B)); average: s(A,B) / (|A| * |B|).
    """

    def __init__(self, sim, linkage):
        m = sim.shape[0]
        self.m = m
        self.linkage = linkage
        self.inter = np.array(sim, dtype=np.float64, copy=True)
        self.self_sums = np.diagonal(sim).astype(np.float64).copy()
        self.sizes = np.ones(m, dtype=np.float64)
        self.alive = np.ones(m, dtype=bool)
        self.best_score = np.full(m, -np.inf)
        self.best_j = np.zeros(m, dtype=np.int64)
        if m > 1:
            self._init_best()

    def _denoms(self):
        base = self.self_sums if self.linkage == "minmax" else self.sizes
        return np.maximum(base, 1e-300)

    def _init_best(self):
        d = self._denoms()
        scores = self.inter / np.outer(d, d)
        np.fill_diagonal(scores, -np.inf)
        self.best_j = np.argmax(scores, axis=1)
        self.best_score = scores[np.arange(self.m), self.best_j]

    def _scores_against(self, i):
        d = self._denoms()
        s = self.inter[i] / (d[i] * d)
        s[~self.alive] = -np.inf
        s[i] = -np.inf
        return s

    def _refresh_row(self, i):
        s = self._scores_against(i)
        j = int(np.argmax(s))
        self.best_score[i] = s[j]
        self.best_j[i] = j

    def _pick(self):
        alive_idx = np.flatnonzero(self.alive)
        scores = self.best_score[alive_idx]
        top = scores.max()
        ties = alive_idx[scores == top]
        pair = None
        for i in ties:
            j = int(self.best_j[i])
            cand = (i, j) if i < j else (j, i)
            if pair is None or cand < pair:
                pair = cand
        return pair[0], pair[1], top

    def merge_once(self):
        """Merge the best pair; returns (slot_a, slot_b, score) with a < b."""
        a, b, score = self._pick()
        inter_ab = self.inter[a, b]
        self.inter[a, :] += self.inter[b, :]
        self.inter[:, a] += self.inter[:, b]
        self.self_sums[a] += self.self_sums[b] + 2.0 * inter_ab
        self.sizes[a] += self.sizes[b]
        self.alive[b] = False

        stale = self.alive & np.isin(self.best_j, (a, b))
        stale[a] = True
        for i in np.flatnonzero(stale):
            self._refresh_row(i)

        # challenge surviving cached bests with the new cluster in slot a
        fresh = self._scores_against(a)
        contenders = self.alive & ~stale
        gt = contenders & (fresh > self.best_score)
        self.best_j[gt] = a
        self.best_score[gt] = fresh[gt]
        eq = contenders & (fresh == self.best_score) & (self.best_j != a)
        for i in np.flatnonzero(eq):
            j = int(self.best_j[i])
            old = (i, j) if i < j else (j, i)
            new = (i, a) if i < a else (a, i)
            if new < old:
                self.best_j[i] = a
        return a, b, float(score)

    def run(self, n_merges):
        return [self.merge_once() for _ in range(n_merges)]


def _row_vector(row):
    """CSR row (1 x V) to a SparseTermVector with sorted ids."""
    coo = row.tocoo()
    if coo.nnz == 0:
        return SparseTermVector.empty()
    order = np.argsort(coo.col, kind="stable")
    return SparseTermVector(coo.col[order].astype(np.int64),
                            coo.data[order].astype(np.float64), validate=False)


def _normalize_rows(mat):
    norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    inv = sparse.diags(1.0 / norms)
    return inv @ mat


def _stack_vectors(vectors, dim):
    indptr = [0]
    indices = []
    data = []
    for v in vectors:
        indices.extend(v.ids.tolist())
        data.extend(v.weights.tolist())
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64),
         np.array(indptr, dtype=np.int64)),
        shape=(len(vectors), dim),
    )


def cluster_fraction(vectors, k_low, nominal_size=None, fraction_index=0,
                     row_indices=None, linkage="minmax"):
    """Phase 1: cluster one fraction's profile vectors into compressed vectors.

    vectors is a CSR matrix of L2-normalized profile rows. Produces
    min(k_low, n) compressed vectors whose weights are member_count divided by
    the step's nominal fraction size (ceil(n_total / p)).
    """
    n = vectors.shape[0]
    if n == 0:
        return []
    if nominal_size is None:
        nominal_size = n
    if row_indices is None:
        row_indices = np.arange(n)
    row_indices = np.asarray(row_indices)

    target = min(k_low, n)
    sim = np.clip((vectors @ vectors.T).toarray(), 0.0, 1.0)
    engine = _PairwiseLinkage(sim, linkage)
    parent = np.arange(n)
    for a, b, _ in engine.run(n - target):
        parent[b] = a

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    cvs = []
    for slot in sorted(groups):
        members = np.array(groups[slot])
        summed = sparse.csr_matrix(vectors[members].sum(axis=0))
        centroid = _row_vector(_normalize_rows(summed))
        cvs.append(CompressedVector(
            centroid=centroid,
            weight=len(members) / nominal_size,
            member_count=len(members),
            fraction_index=fraction_index,
            members=row_indices[members],
        ))
    return cvs


def agglomerate(cvs, linkage="minmax", dim=None):
    """Phase 2: merge compressed vectors into a full binary tree.

    Pairwise similarity is the weighted cosine of the leaf vectors; the merge
    score aggregates those pair values under the configured linkage. Merged
    nodes carry the L2-normalized weighted mean of their member centroids and
    the capped sum of member weights.
    """
    m = len(cvs)
    if m == 0:
        raise ValueError("agglomerate needs at least one compressed vector")
    if dim is None:
        dim = 1 + max((int(cv.centroid.ids[-1]) for cv in cvs if not cv.centroid.is_empty),
                      default=0)
    mat = _stack_vectors([cv.centroid for cv in cvs], dim)
    weights = np.array([cv.weight for cv in cvs])
    cos = np.clip((mat @ mat.T).toarray(), 0.0, 1.0)
    sim = np.outer(weights, weights) * cos

    centroid = {i: cvs[i].centroid for i in range(m)}
    weight = {i: cvs[i].weight for i in range(m)}
    weighted_sum = {i: mat.getrow(i) * cvs[i].weight for i in range(m)}

    engine = _PairwiseLinkage(sim, linkage)
    cur_id = list(range(m))
    merges = []
    for t, (a, b, score) in enumerate(engine.run(m - 1)):
        new_id = m + t
        merges.append(Merge(a, b, cur_id[a], cur_id[b], new_id, score))
        weighted_sum[a] = weighted_sum[a] + weighted_sum[b]
        centroid[new_id] = _row_vector(_normalize_rows(weighted_sum[a]))
        weight[new_id] = min(1.0, weight[cur_id[a]] + weight[cur_id[b]])
        cur_id[a] = new_id
    return Dendrogram(list(cvs), merges, centroid, weight)


@dataclass
class ClusterNode:
    id: int
    parent: int | None
    children: list
    size: int
    centroid: SparseTermVector
    tags: list = field(default_factory=list)
    user_ids: list | None = None  # leaves only; not persisted
    member_rows: list | None = None  # leaves only; profile row indices
    sent: dict | None = None  # filled by the sentiment stage

    @property
    def is_leaf(self):
        return not self.children


@dataclass
class ClusterHierarchy:
    """Rooted tree of clusters for one time step."""

    step_index: int
    root: int | None
    nodes: dict

    def node(self, node_id):
        return self.nodes[node_id]

    def children(self, node_id):
        return self.nodes[node_id].children

    def leaves(self):
        return [n.id for n in self.nodes.values() if n.is_leaf]

    @property
    def leaf_count(self):
        return len(self.leaves())

    @property
    def size(self):
        return self.nodes[self.root].size if self.root is not None else 0

    def validate(self):
        """Structural sanity checks; raises AssertionError on violation."""
        if self.root is None:
            assert not self.nodes
            return
        seen = set()
        stack = [self.root]
        while stack:
            nid = stack.pop()
            assert nid not in seen, "cycle or duplicate id"
            seen.add(nid)
            node = self.nodes[nid]
            for c in node.children:
                assert self.nodes[c].parent == nid
                stack.append(c)
            if node.children:
                assert node.size == sum(self.nodes[c].size for c in node.children)
        assert seen == set(self.nodes), "unreachable nodes"
        assert self.nodes[self.root].parent is None


def cut_and_assign(dendro, k, vectors, user_ids, step_index=0):
    """Phase 3: cut the dendrogram at k clusters and classify all profiles.

    The dendrogram state after (n' - k) merges defines the cut; every profile
    row is assigned to the cut cluster with the highest cosine to its centroid
    (ties to the lower node id). The merge structure above the cut is kept,
    sizes and centroids are recomputed bottom-up from the assignments, and
    empty cut clusters are pruned with their parent chain repaired.
    """
    n_prime = dendro.n_leaves
    n = vectors.shape[0]
    if n == 0:
        raise ValueError("no profiles to assign")
    k_eff = min(k, n_prime)

    cur = {i: i for i in range(n_prime)}  # slot -> dendrogram node id
    n_applied = n_prime - k_eff
    for merge in dendro.merges[:n_applied]:
        cur[merge.slot_a] = merge.new_id
        del cur[merge.slot_b]

    cut_ids = sorted(cur.values())
    leaf_of = {did: i for i, did in enumerate(cut_ids)}

    centroid_mat = _stack_vectors([dendro.centroid[d] for d in cut_ids],
                                  vectors.shape[1])
    sims = (vectors @ centroid_mat.T).toarray()
    assignment = np.argmax(sims, axis=1)

    # tree skeleton: leaves 0..k_eff-1, internal nodes from the remaining merges
    nodes = {}
    for did in cut_ids:
        lid = leaf_of[did]
        nodes[lid] = ClusterNode(lid, None, [], 0, SparseTermVector.empty(),
                                 user_ids=[])
    slot_h = {slot: leaf_of[did] for slot, did in cur.items()}
    next_id = k_eff
    for merge in dendro.merges[n_applied:]:
        ha, hb = slot_h[merge.slot_a], slot_h[merge.slot_b]
        child_ids = sorted((ha, hb))
        nodes[next_id] = ClusterNode(next_id, None, child_ids, 0,
                                     SparseTermVector.empty())
        for c in child_ids:
            nodes[c].parent = next_id
        slot_h[merge.slot_a] = next_id
        del slot_h[merge.slot_b]
        next_id += 1
    root = next_id - 1 if k_eff > 1 else 0

    # populate leaves from the nearest-centroid assignment
    members = {lid: [] for lid in range(k_eff)}
    for row, lid in enumerate(assignment):
        members[int(lid)].append(row)

    dense_sum = {}
    for lid in range(k_eff):
        node = nodes[lid]
        rows = members[lid]
        node.size = len(rows)
        node.user_ids = [user_ids[r] for r in rows]
        node.member_rows = rows
        if rows:
            dense_sum[lid] = np.asarray(vectors[rows].sum(axis=0)).ravel()

    # prune empty leaves bottom-up, splicing single-child parents away
    order = sorted(nodes, key=lambda i: -_depth(nodes, i))
    removed = set()
    for nid in order:
        node = nodes[nid]
        node.children = [c for c in node.children if c not in removed]
        if node.is_leaf and node.size == 0 and nid < k_eff:
            removed.add(nid)
        elif nid >= k_eff and len(node.children) == 0:
            removed.add(nid)
        elif nid >= k_eff and len(node.children) == 1:
            child = nodes[node.children[0]]
            child.parent = node.parent
            if node.parent is not None:
                pc = nodes[node.parent].children
                pc[pc.index(nid)] = child.id
            else:
                root = child.id
            removed.add(nid)
    for nid in removed:
        del nodes[nid]
    if root in removed:
        raise ValueError("all cut clusters ended up empty")
    nodes[root].parent = None

    # recompute sizes and centroids bottom-up from the final assignments
    for nid in sorted(nodes, key=lambda i: -_depth(nodes, i)):
        node = nodes[nid]
        if not node.is_leaf:
            node.size = sum(nodes[c].size for c in node.children)
            acc = None
            for c in node.children:
                acc = dense_sum[c] if acc is None else acc + dense_sum[c]
            dense_sum[nid] = acc
        vec = dense_sum.get(nid)
        if vec is not None:
            norm = float(np.sqrt(np.dot(vec, vec)))
            ids = np.flatnonzero(vec)
            node.centroid = SparseTermVector(
                ids.astype(np.int64), vec[ids] / (norm if norm else 1.0),
                validate=False)

    return ClusterHierarchy(step_index, root, nodes)


def _depth(nodes, nid):
    d = 0
    while nodes[nid].parent is not None:
        nid = nodes[nid].parent
        d += 1
    return d


def cluster_tags(node, dictionary, m=10):
    """Top-m centroid terms by weight, ties broken lexicographically by term."""
    if m < 1:
        raise ValueError("m must be >= 1")
    pairs = [(dictionary.term_of(i), w) for i, w in zip(node.centroid.ids,
                                                        node.centroid.weights)]
    pairs.sort(key=lambda tw: (-tw[1], tw[0]))
    return pairs[:m]


def cluster_step_matrix(vectors, user_ids, config, step_index=0, dictionary=None):
    """Run all three phases on a matrix of normalized profile vectors.

    Deterministic given config.seed: the random fraction assignment is drawn
    from a generator seeded with (seed, step_index). Tags are filled when a
    dictionary is supplied.
    """
    n = vectors.shape[0]
    if n == 0:
        raise ValueError(f"step {step_index} has no usable profiles")
    rng = np.random.default_rng([config.seed, step_index])
    perm = rng.permutation(n)
    fractions = [np.sort(f) for f in np.array_split(perm, config.p)]
    nominal = nominal_fraction_size(n, config.p)

    cvs = []
    for f_idx, rows in enumerate(fractions):
        if len(rows) == 0:
            continue
        cvs.extend(cluster_fraction(vectors[rows], config.k_low, nominal, f_idx,
                                    row_indices=rows, linkage=config.linkage))
    dendro = agglomerate(cvs, linkage=config.linkage, dim=vectors.shape[1])
    hierarchy = cut_and_assign(dendro, min(config.k, len(cvs)), vectors,
                               user_ids, step_index)
    if dictionary is not None:
        for node in hierarchy.nodes.values():
            node.tags = cluster_tags(node, dictionary, config.tags_per_node)
    hierarchy.validate()
    return hierarchy


def cluster_time_step(step_corpus, config):
    """Three-phase clustering of one step's non-degenerate profiles."""
    active = step_corpus.active_indices()
    if not active:
        raise ValueError(f"step {step_corpus.step_index} has no usable profiles")
    X = step_corpus.vector_matrix()[active]
    user_ids = [step_corpus.profiles[i].user_id for i in active]
    return cluster_step_matrix(X, user_ids, config, step_corpus.step_index,
                               step_corpus.dictionary)


__all__ = [
    "ClusteringConfig", "CompressedVector", "Merge", "Dendrogram", "ClusterNode",
    "ClusterHierarchy", "cosine", "weighted_cosine", "cluster_fraction",
    "agglomerate", "cut_and_assign", "cluster_tags", "cluster_step_matrix",
    "cluster_time_step",
]
