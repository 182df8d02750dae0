"""On-disk store of processed datasets and read-side query assembly.

A dataset directory holds one manifest plus, per time step: the raw profile
term counts (npz), the hierarchy (JSON, the external schema), the node
centroids (npz sidecar, used for keyword and similarity scoring), and the
leaf assignment of profile rows (npz). Everything is written deterministically
so a re-run with the same seed is byte-identical.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from . import explore, layout
from .cluster import ClusterHierarchy, ClusterNode
from .corpus import Dictionary, SparseTermVector, StepCorpus, UserProfile
from .explore import DEFAULT_THETA, ScoredTree, ScoreMode, find_max_antichain

logger = logging.getLogger("crowdlens")

MANIFEST = "manifest.json"


class StoreError(Exception):
    """Problem reading or writing the processed-dataset store."""


class UnknownDatasetError(StoreError):
    pass


class MissingStepError(StoreError):
    def __init__(self, step, path):
        super().__init__(f"store is missing step {step}: {path}")
        self.step = step


class BadQueryError(StoreError):
    pass


def _dumps(obj, pretty=False):
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def step_stem(step):
    return f"step_{step:04d}"


def profiles_path(ds_dir, step):
    return Path(ds_dir) / f"{step_stem(step)}.profiles.npz"


def hierarchy_path(ds_dir, step):
    return Path(ds_dir) / f"{step_stem(step)}.hierarchy.json"


def centroids_path(ds_dir, step):
    return Path(ds_dir) / f"{step_stem(step)}.centroids.npz"


def assign_path(ds_dir, step):
    return Path(ds_dir) / f"{step_stem(step)}.assign.npz"


def write_manifest(ds_dir, manifest):
    (Path(ds_dir) / MANIFEST).write_text(_dumps(manifest, pretty=True),
                                         encoding="utf-8")


def read_manifest(ds_dir):
    return json.loads((Path(ds_dir) / MANIFEST).read_text(encoding="utf-8"))


def write_profiles(ds_dir, step_corpus):
    counts = step_corpus.count_matrix().astype(np.float64)
    users = np.array([p.user_id for p in step_corpus.profiles])
    terms = np.array(step_corpus.dictionary.terms)
    np.savez(profiles_path(ds_dir, step_corpus.step_index),
             data=counts.data, indices=counts.indices, indptr=counts.indptr,
             shape=np.array(counts.shape), users=users, terms=terms,
             token_total=np.array([step_corpus.token_total]))


def load_profiles(ds_dir, step, weighting="tf"):
    """Rebuild a StepCorpus (without raw tokens) from stored term counts."""
    path = profiles_path(ds_dir, step)
    if not path.exists():
        raise MissingStepError(step, path)
    z = np.load(path, allow_pickle=False)
    counts = sparse.csr_matrix((z["data"], z["indices"], z["indptr"]),
                               shape=tuple(z["shape"]))
    terms = [str(t) for t in z["terms"]]
    users = [str(u) for u in z["users"]]
    df = np.asarray((counts > 0).sum(axis=0)).ravel().astype(np.int64)
    dictionary = Dictionary(terms, df)
    weighted = counts.copy()
    if weighting == "tfidf":
        n_docs = counts.shape[0]
        idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
        weighted = weighted @ sparse.diags(idf)
    norms = np.sqrt(np.asarray(weighted.multiply(weighted).sum(axis=1)).ravel())
    inv = np.where(norms > 0, 1.0 / np.where(norms > 0, norms, 1.0), 0.0)
    normalized = sparse.diags(inv) @ weighted
    normalized = sparse.csr_matrix(normalized)

    profiles = []
    for i, user in enumerate(users):
        row = normalized.getrow(i).tocoo()
        order = np.argsort(row.col, kind="stable")
        vec = (SparseTermVector(row.col[order].astype(np.int64),
                                row.data[order], validate=False)
               if row.nnz else SparseTermVector.empty())
        profiles.append(UserProfile(user, step, [], vec))
    corpus = StepCorpus(step, profiles, dictionary,
                        token_total=int(z["token_total"][0]))
    corpus._counts = counts  # cache so count_matrix() works without tokens
    return corpus


def write_hierarchy(ds_dir, hierarchy):
    nodes = []
    for nid in sorted(hierarchy.nodes):
        node = hierarchy.nodes[nid]
        nodes.append({
            "id": node.id,
            "parent": node.parent,
            "children": list(node.children),
            "size": node.size,
            "tags": [[t, w] for t, w in node.tags],
            "sent": node.sent,
        })
    doc = {"step": hierarchy.step_index, "root": hierarchy.root, "nodes": nodes}
    hierarchy_path(ds_dir, hierarchy.step_index).write_text(
        _dumps(doc), encoding="utf-8")


def load_hierarchy(ds_dir, step):
    path = hierarchy_path(ds_dir, step)
    if not path.exists():
        raise MissingStepError(step, path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    nodes = {}
    for n in doc["nodes"]:
        nodes[n["id"]] = ClusterNode(
            id=n["id"], parent=n["parent"], children=list(n["children"]),
            size=n["size"], centroid=SparseTermVector.empty(),
            tags=[(t, w) for t, w in n["tags"]], sent=n["sent"])
    return ClusterHierarchy(doc["step"], doc["root"], nodes)


def write_centroids(ds_dir, hierarchy, terms):
    node_ids = sorted(hierarchy.nodes)
    dim = len(terms)
    indptr = [0]
    indices = []
    data = []
    for nid in node_ids:
        vec = hierarchy.nodes[nid].centroid
        indices.extend(vec.ids.tolist())
        data.extend(vec.weights.tolist())
        indptr.append(len(indices))
    np.savez(centroids_path(ds_dir, hierarchy.step_index),
             data=np.array(data), indices=np.array(indices, dtype=np.int64),
             indptr=np.array(indptr, dtype=np.int64),
             shape=np.array([len(node_ids), dim]),
             node_ids=np.array(node_ids, dtype=np.int64),
             terms=np.array(terms))


def write_assignment(ds_dir, step, active_rows, leaf_ids):
    np.savez(assign_path(ds_dir, step),
             rows=np.asarray(active_rows, dtype=np.int64),
             leaf=np.asarray(leaf_ids, dtype=np.int64))


def load_assignment(ds_dir, step):
    path = assign_path(ds_dir, step)
    if not path.exists():
        raise MissingStepError(step, path)
    z = np.load(path, allow_pickle=False)
    return z["rows"], z["leaf"]


def list_datasets(store_dir):
    """Manifests of all readable datasets; corrupted ones are skipped."""
    store_dir = Path(store_dir)
    if not store_dir.exists():
        raise StoreError(f"store directory not readable: {store_dir}")
    manifests = []
    for child in sorted(store_dir.iterdir()):
        if not (child / MANIFEST).exists():
            continue
        try:
            manifests.append(read_manifest(child))
        except (json.JSONDecodeError, OSError) as exc:
            logger.warning("skipping dataset with corrupted manifest %s: %s",
                           child, exc)
    return manifests


@dataclass
class QueryRequest:
    """One exploration query: a mode, a day window, and a presentation."""

    dataset: str
    mode: ScoreMode
    window_start: int = 0
    window_len: int = 6
    view: str = "treemap"
    word_cap: int = 10
    theta: float | None = None

    def validate(self, step_count):
        if self.window_len < 1:
            raise BadQueryError("window_len must be >= 1")
        if not 0 <= self.window_start < step_count:
            raise BadQueryError(
                f"window_start {self.window_start} outside [0, {step_count})")
        if self.window_start + self.window_len > step_count:
            raise BadQueryError("window extends past the last step")
        if self.view not in ("treemap", "list"):
            raise BadQueryError(f"unknown view: {self.view!r}")
        if self.word_cap < 1:
            raise BadQueryError("word_cap must be >= 1")
        if self.theta is not None and self.theta < 0:
            raise BadQueryError("theta must be >= 0")


class DatasetView:
    """Read-side access to one processed dataset, with in-process caches."""

    def __init__(self, ds_dir):
        self.ds_dir = Path(ds_dir)
        self.manifest = read_manifest(self.ds_dir)
        self._hierarchies = {}
        self._centroids = {}
        self._term_max = {}

    @property
    def dataset(self):
        return self.manifest["dataset"]

    @property
    def step_count(self):
        return self.manifest["step_count"]

    @property
    def theta(self):
        return self.manifest["config"].get("theta", DEFAULT_THETA)

    def hierarchy(self, step):
        if not 0 <= step < self.step_count:
            raise BadQueryError(f"step {step} outside [0, {self.step_count})")
        if step not in self._hierarchies:
            self._hierarchies[step] = load_hierarchy(self.ds_dir, step)
        return self._hierarchies[step]

    def centroids(self, step):
        """(node_ids, csr matrix, terms array, row norms) for one step."""
        if step not in self._centroids:
            path = centroids_path(self.ds_dir, step)
            if not path.exists():
                raise MissingStepError(step, path)
            z = np.load(path, allow_pickle=False)
            mat = sparse.csr_matrix((z["data"], z["indices"], z["indptr"]),
                                    shape=tuple(z["shape"]))
            norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
            self._centroids[step] = (z["node_ids"], mat, z["terms"], norms)
        return self._centroids[step]

    def node_h(self, step):
        hier = self.hierarchy(step)
        return {nid: node.sent["h"] for nid, node in hier.nodes.items()
                if node.sent is not None}

    def term_weights(self, step, term):
        """Per-node centroid weight of one term: {node_id: weight}."""
        node_ids, mat, terms, _ = self.centroids(step)
        pos = np.searchsorted(terms, term)
        if pos >= len(terms) or terms[pos] != term:
            return {int(n): 0.0 for n in node_ids}
        col = np.asarray(mat[:, pos].todense()).ravel()
        return {int(n): float(w) for n, w in zip(node_ids, col)}

    def term_max(self, term):
        """Dataset-wide maximum centroid weight of a term (cached)."""
        if term not in self._term_max:
            best = 0.0
            for step in range(self.step_count):
                weights = self.term_weights(step, term)
                if weights:
                    best = max(best, max(weights.values()))
            self._term_max[term] = best
        return self._term_max[term]

    def _similar_scores(self, step, target_step, target_node):
        t_ids, t_mat, t_terms, t_norms = self.centroids(target_step)
        where = np.flatnonzero(t_ids == target_node)
        if len(where) == 0:
            raise UnknownDatasetError(
                f"node {target_node} not found in step {target_step}")
        row = t_mat.getrow(int(where[0])).tocoo()
        target_norm = float(t_norms[int(where[0])])

        node_ids, mat, terms, norms = self.centroids(step)
        w = np.zeros(len(terms))
        if row.nnz and target_norm > 0 and len(terms):
            tokens = t_terms[row.col]
            pos = np.searchsorted(terms, tokens)
            pos_clipped = np.minimum(pos, len(terms) - 1)
            valid = terms[pos_clipped] == tokens
            w[pos_clipped[valid]] = row.data[valid]
        dots = np.asarray(mat @ w).ravel()
        denom = np.where(norms > 0, norms, 1.0) * (target_norm or 1.0)
        sims = np.clip(dots / denom, 0.0, 1.0)
        return {int(n): float(s) for n, s in zip(node_ids, sims)}

    def node_scores(self, step, mode):
        """Per-node score map for one step under a mode (antichain input)."""
        if mode.kind == "search":
            dmax = self.term_max(mode.term)
            weights = self.term_weights(step, mode.term)
            return {n: explore.match_score_search(w, dmax)
                    for n, w in weights.items()}
        if mode.kind == "similar":
            return self._similar_scores(step, mode.step_index, mode.node_id)
        h = self.node_h(step)
        return {n: explore.sentiment_score(v, mode.kind) for n, v in h.items()}

    def node_detail(self, step, node_id, top=50):
        hier = self.hierarchy(step)
        if node_id not in hier.nodes:
            raise UnknownDatasetError(f"node {node_id} not in step {step}")
        node = hier.nodes[node_id]
        node_ids, mat, terms, _ = self.centroids(step)
        where = np.flatnonzero(node_ids == node_id)
        centroid_top = []
        if len(where):
            row = mat.getrow(int(where[0])).tocoo()
            pairs = sorted(((terms[c], float(v)) for c, v in
                            zip(row.col, row.data)), key=lambda p: (-p[1], p[0]))
            centroid_top = [[t, w] for t, w in pairs[:top]]
        return {
            "step": step,
            "node": node_id,
            "parent": node.parent,
            "children": list(node.children),
            "size": node.size,
            "tags": [[t, w] for t, w in node.tags],
            "sent": node.sent,
            "centroid_top": centroid_top,
        }


class StoreCatalog:
    """All datasets under one store directory, opened lazily and cached."""

    def __init__(self, store_dir):
        self.store_dir = Path(store_dir)
        self._views = {}

    def manifests(self):
        return list_datasets(self.store_dir)

    def view(self, dataset):
        if dataset not in self._views:
            ds_dir = self.store_dir / dataset
            if not (ds_dir / MANIFEST).exists():
                raise UnknownDatasetError(f"unknown dataset: {dataset}")
            self._views[dataset] = DatasetView(ds_dir)
        return self._views[dataset]


def parse_mode(kind, q=None, sel_step=None, sel_node=None):
    """Build a ScoreMode from wire parameters, validating requirements."""
    if kind == "search":
        if not q:
            raise BadQueryError("search mode requires the q parameter")
        return ScoreMode.search(q)
    if kind == "similar":
        if sel_step is None or sel_node is None:
            raise BadQueryError("similar mode requires sel_step and sel_node")
        return ScoreMode.similar(int(sel_step), int(sel_node))
    if kind in explore.SENTIMENT_KINDS:
        return ScoreMode(kind)
    raise BadQueryError(f"unknown mode: {kind!r}")


def build_series(view, mode, theta=None):
    """Scented-widget series for a dataset (list of plain dicts)."""
    points = explore.scented_series(view, mode,
                                    theta if theta is not None else view.theta)
    return [p.as_dict() for p in points]


def build_window(view, req):
    """One scene per day of the requested window (treemap or list)."""
    req.validate(view.step_count)
    theta = req.theta if req.theta is not None else view.theta
    days = list(range(req.window_start, req.window_start + req.window_len))

    prepared = []
    for day in days:
        hier = view.hierarchy(day)
        if hier.root is None:
            prepared.append((hier, [], {}, {}))
            continue
        scores = view.node_scores(day, req.mode)
        antichain = find_max_antichain(ScoredTree(hier, scores, theta))
        ordered = antichain.ordered()
        h = view.node_h(day) if req.mode.is_sentiment else {}
        prepared.append((hier, ordered, antichain.scores, h))

    window_max = 0.0
    if req.mode.is_sentiment:
        for _, ordered, _, h in prepared:
            for nid in ordered:
                window_max = max(window_max, abs(h.get(nid, 0.0)))

    scenes = []
    for day, (hier, ordered, scores, h) in zip(days, prepared):
        if hier.root is None:
            empty = {"day": day, "view": req.view, "antichain": [],
                     "theta": theta}
            empty["cells" if req.view == "treemap" else "items"] = []
            scenes.append(empty)
            continue
        colors = layout.node_colors(hier, ordered, req.mode.kind, scores,
                                    h_by_node=h, window_max_abs_h=window_max)
        if req.view == "treemap":
            scenes.append(layout.build_treemap_scene(
                hier, ordered, scores, colors, day, req.word_cap, theta))
        else:
            scenes.append(layout.build_list_scene(
                hier, ordered, scores, colors, day, req.word_cap, theta))
    return scenes


__all__ = [
    "StoreError", "UnknownDatasetError", "MissingStepError", "BadQueryError",
    "QueryRequest", "DatasetView", "StoreCatalog", "write_manifest",
    "read_manifest", "write_profiles", "load_profiles", "write_hierarchy",
    "load_hierarchy", "write_centroids", "write_assignment", "load_assignment",
    "list_datasets", "parse_mode", "build_series", "build_window",
    "profiles_path", "hierarchy_path", "centroids_path", "assign_path",
]
