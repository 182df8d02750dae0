"""Post ingestion, time-step partitioning, user profiles, and sparse term vectors.

Raw posts are newline-delimited JSON objects {"user", "ts", "text"}. Posts are
bucketed into fixed-length time steps; all posts by one user within one step
are concatenated into a single profile document, tokenized, and turned into an
L2-normalized sparse term-count vector over that step's dictionary.
"""

import gzip
import json
import logging
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

logger = logging.getLogger("crowdlens")

_URL_RE = re.compile(r"^(?:[a-z][a-z0-9+.-]*://|www\.)")
_STRIP_EDGES_RE = re.compile(r"^[^\w#@]+|[^\w]+$")
_STRIP_TRAILING_RE = re.compile(r"[^\w]+$")
_HAS_WORD_RE = re.compile(r"\w")


class IngestError(Exception):
    """Raised when an input file cannot be read or parsed at all."""


def tokenize(text, stoplist=frozenset()):
    """Tokenize one post into lowercase content tokens.

    Username mentions (@...) and URL-shaped tokens are dropped, surrounding
    punctuation is stripped (a leading "#" is kept so hashtags survive
    verbatim), and stoplisted tokens are removed. Total function: never
    raises, empty input gives [].
    """
    tokens = []
    for raw in text.split():
        t = raw.lower()
        if t.startswith("#") or t.startswith("@"):
            t = _STRIP_TRAILING_RE.sub("", t)
        else:
            t = _STRIP_EDGES_RE.sub("", t)
        if not t or not _HAS_WORD_RE.search(t):
            continue
        if t.startswith("@"):
            continue
        if _URL_RE.match(t):
            continue
        if t in stoplist:
            continue
        tokens.append(t)
    return tokens


def load_stoplist(paths):
    """Read stoplist files (one lowercase term per line, UTF-8, concatenable)."""
    terms = set()
    for p in paths:
        with open(p, encoding="utf-8") as f:
            for line in f:
                term = line.strip().lower()
                if term:
                    terms.add(term)
    return frozenset(terms)


@dataclass(frozen=True)
class PostRecord:
    user_id: str
    timestamp: datetime
    text: str


@dataclass(frozen=True)
class TimeStepSpec:
    """Contiguous, non-overlapping partition of the timeline into fixed steps."""

    epoch_start: datetime
    step_length: timedelta = timedelta(hours=24)
    step_count: int = 1

    def __post_init__(self):
        if self.step_length <= timedelta(0):
            raise ValueError("step_length must be positive")
        if self.step_count < 1:
            raise ValueError("step_count must be >= 1")

    def step_of(self, ts):
        """Step index for a timestamp, or None if outside the covered range."""
        offset = (ts - self.epoch_start) / self.step_length
        if offset < 0 or offset >= self.step_count:
            return None
        return int(offset)

    def step_start(self, index):
        return self.epoch_start + index * self.step_length


class SparseTermVector:
    """Sorted (term_id, weight) pairs; weights positive and finite."""

    __slots__ = ("ids", "weights")

    def __init__(self, ids, weights, validate=True):
        self.ids = np.asarray(ids, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        if validate:
            if self.ids.shape != self.weights.shape or self.ids.ndim != 1:
                raise ValueError("ids and weights must be parallel 1-d arrays")
            if len(self.ids) > 1 and not np.all(np.diff(self.ids) > 0):
                raise ValueError("term ids must be strictly increasing")
            if len(self.weights) and (
                not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0)
            ):
                raise ValueError("weights must be positive and finite")

    @classmethod
    def empty(cls):
        return cls(np.empty(0, dtype=np.int64), np.empty(0), validate=False)

    @classmethod
    def from_counts(cls, counts):
        """Build from a term_id -> count mapping, dropping non-positive entries."""
        items = sorted((i, c) for i, c in counts.items() if c > 0)
        if not items:
            return cls.empty()
        ids, weights = zip(*items)
        return cls(np.array(ids, dtype=np.int64), np.array(weights, dtype=np.float64),
                   validate=False)

    @property
    def is_empty(self):
        return len(self.ids) == 0

    def __len__(self):
        return len(self.ids)

    def norm(self):
        return float(np.sqrt(np.dot(self.weights, self.weights)))

    def normalized(self):
        """L2-normalized copy; an empty vector stays empty (degenerate)."""
        if self.is_empty:
            return self
        return SparseTermVector(self.ids, self.weights / self.norm(), validate=False)

    def dot(self, other):
        """Dot product over the shared support (symmetric in its arguments)."""
        if self.is_empty or other.is_empty:
            return 0.0
        _, ia, ib = np.intersect1d(self.ids, other.ids,
                                   assume_unique=True, return_indices=True)
        if len(ia) == 0:
            return 0.0
        return float(np.dot(self.weights[ia], other.weights[ib]))

    def top(self, m):
        """Top-m (term_id, weight) pairs by weight, ties broken by lower id."""
        if self.is_empty or m < 1:
            return []
        order = np.lexsort((self.ids, -self.weights))
        take = order[:m]
        return [(int(self.ids[i]), float(self.weights[i])) for i in take]

    def to_pairs(self):
        return [(int(i), float(w)) for i, w in zip(self.ids, self.weights)]

    def __repr__(self):
        return f"SparseTermVector(nnz={len(self.ids)})"


class Dictionary:
    """Dense term <-> id bijection for one time step, with document frequencies."""

    def __init__(self, terms, doc_freq):
        self.terms = list(terms)
        self.doc_freq = np.asarray(doc_freq, dtype=np.int64)
        self._index = {t: i for i, t in enumerate(self.terms)}

    @classmethod
    def build(cls, token_lists):
        """Build over token lists; terms are sorted for determinism."""
        df = Counter()
        for tokens in token_lists:
            df.update(set(tokens))
        terms = sorted(df)
        return cls(terms, [df[t] for t in terms])

    def id_of(self, term):
        return self._index[term]

    def term_of(self, term_id):
        return self.terms[term_id]

    def __contains__(self, term):
        return term in self._index

    def __len__(self):
        return len(self.terms)


def vectorize(tokens, dictionary, weighting="tf", n_docs=None):
    """Turn a token list into an L2-normalized sparse vector.

    Default weighting is the raw term count ("tf"); "tfidf" scales counts by
    a smoothed inverse document frequency computed from the dictionary. An
    empty token list yields the empty (degenerate) vector.
    """
    if not tokens:
        return SparseTermVector.empty()
    counts = Counter(dictionary.id_of(t) for t in tokens)
    vec = SparseTermVector.from_counts(counts)
    if weighting == "tfidf":
        n = n_docs if n_docs is not None else int(dictionary.doc_freq.max(initial=1))
        idf = np.log((1.0 + n) / (1.0 + dictionary.doc_freq[vec.ids])) + 1.0
        vec = SparseTermVector(vec.ids, vec.weights * idf, validate=False)
    elif weighting != "tf":
        raise ValueError(f"unknown weighting: {weighting!r}")
    return vec.normalized()


@dataclass
class UserProfile:
    """One user's concatenated posts inside one time step."""

    user_id: str
    step_index: int
    tokens: list
    vector: SparseTermVector = field(default_factory=SparseTermVector.empty)

    @property
    def degenerate(self):
        """True when every token was stoplisted away (empty vector)."""
        return self.vector.is_empty


@dataclass
class StepCorpus:
    """All profiles of one time step plus the step's dictionary."""

    step_index: int
    profiles: list
    dictionary: Dictionary
    token_total: int = 0
    _counts: object = None  # cached count matrix (set when loaded from disk)

    @property
    def user_count(self):
        return len(self.profiles)

    def active_indices(self):
        """Indices of profiles that can be clustered (non-degenerate)."""
        return [i for i, p in enumerate(self.profiles) if not p.degenerate]

    def count_matrix(self):
        """CSR matrix of raw token counts, one row per profile."""
        from scipy import sparse

        if self._counts is not None:
            return self._counts
        indptr = [0]
        indices = []
        data = []
        for p in self.profiles:
            counts = Counter(self.dictionary.id_of(t) for t in p.tokens)
            for term_id in sorted(counts):
                indices.append(term_id)
                data.append(counts[term_id])
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.array(data, dtype=np.float64),
             np.array(indices, dtype=np.int64),
             np.array(indptr, dtype=np.int64)),
            shape=(len(self.profiles), len(self.dictionary)),
        )

    def vector_matrix(self):
        """CSR matrix of the profiles' normalized vectors (degenerate rows zero)."""
        from scipy import sparse

        indptr = [0]
        indices = []
        data = []
        for p in self.profiles:
            indices.extend(p.vector.ids.tolist())
            data.extend(p.vector.weights.tolist())
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.array(data, dtype=np.float64),
             np.array(indices, dtype=np.int64),
             np.array(indptr, dtype=np.int64)),
            shape=(len(self.profiles), len(self.dictionary)),
        )


@dataclass
class IngestReport:
    """Counters accumulated while reading post files."""

    files: list = field(default_factory=list)
    skipped_by_file: dict = field(default_factory=dict)
    posts_read: int = 0
    posts_kept: int = 0
    posts_out_of_range: int = 0

    def add_file(self, path, skipped):
        self.files.append(str(path))
        self.skipped_by_file[str(path)] = skipped


def parse_timestamp(value):
    """Parse an ISO-8601 timestamp into an aware UTC datetime."""
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def read_posts(path, report=None):
    """Yield PostRecords from one NDJSON file (.gz accepted by extension).

    Malformed records are skipped and counted; an unreadable file raises
    IngestError naming the path.
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    skipped = 0
    try:
        stream = opener(path, "rt", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read input file {path}: {exc}") from exc
    with stream:
        try:
            for line in stream:
                line = line.strip()
                if not line:
                    continue
                if report is not None:
                    report.posts_read += 1
                try:
                    obj = json.loads(line)
                    user = obj["user"]
                    if not isinstance(user, str) or not user:
                        raise ValueError("empty user")
                    ts = parse_timestamp(obj["ts"])
                    text = obj.get("text", "")
                    if not isinstance(text, str):
                        raise ValueError("text not a string")
                except (ValueError, KeyError, TypeError):
                    skipped += 1
                    continue
                yield PostRecord(user, ts, text)
        except (OSError, EOFError, UnicodeDecodeError) as exc:
            raise IngestError(f"cannot read input file {path}: {exc}") from exc
    if report is not None:
        report.add_file(path, skipped)


def build_profiles(posts, spec, stoplist=frozenset(), weighting="tf", report=None):
    """Group posts into per-(user, step) profiles and vectorize them.

    Posts may arrive in any order; within a profile, token order follows post
    timestamp order. Posts outside the covered time range are dropped and
    counted. Returns a list of StepCorpus, one per step in [0, step_count),
    with profiles sorted by user id.
    """
    if report is None:
        report = IngestReport()
    buckets = defaultdict(list)  # (step, user) -> [(ts, arrival, text)]
    arrival = 0
    for post in posts:
        step = spec.step_of(post.timestamp)
        if step is None:
            report.posts_out_of_range += 1
            continue
        report.posts_kept += 1
        buckets[(step, post.user_id)].append((post.timestamp, arrival, post.text))
        arrival += 1

    per_step_tokens = defaultdict(dict)  # step -> user -> tokens
    for (step, user), entries in buckets.items():
        entries.sort(key=lambda e: (e[0], e[1]))
        tokens = []
        for _, _, text in entries:
            tokens.extend(tokenize(text, stoplist))
        per_step_tokens[step][user] = tokens

    steps = []
    for step in range(spec.step_count):
        users = sorted(per_step_tokens.get(step, {}))
        token_lists = [per_step_tokens[step][u] for u in users]
        dictionary = Dictionary.build(token_lists)
        n_docs = len(token_lists)
        profiles = [
            UserProfile(u, step, toks,
                        vectorize(toks, dictionary, weighting=weighting, n_docs=n_docs))
            for u, toks in zip(users, token_lists)
        ]
        total = sum(len(t) for t in token_lists)
        steps.append(StepCorpus(step, profiles, dictionary, token_total=total))
        degenerate = sum(p.degenerate for p in profiles)
        if degenerate:
            logger.info("step %d: %d degenerate profile(s) excluded from clustering",
                        step, degenerate)
    return steps, report


def ingest_files(paths, spec, stoplist=frozenset(), weighting="tf"):
    """Read every input file and build per-step corpora plus an ingest report."""
    paths = [Path(p) for p in paths]
    if not paths:
        raise IngestError("no input files")
    report = IngestReport()

    def stream():
        for p in paths:
            yield from read_posts(p, report)

    steps, report = build_profiles(stream(), spec, stoplist, weighting, report)
    logger.info("ingested %d posts (%d kept, %d out of range, %d skipped) from %d files",
                report.posts_read, report.posts_kept, report.posts_out_of_range,
                sum(report.skipped_by_file.values()), len(paths))
    return steps, report


def ceil_div(a, b):
    return -(-a // b)


def nominal_fraction_size(n, p):
    """Nominal per-fraction document count n/p, rounded up."""
    return ceil_div(n, p) if n > 0 else 1


__all__ = [
    "IngestError", "PostRecord", "TimeStepSpec", "SparseTermVector", "Dictionary",
    "UserProfile", "StepCorpus", "IngestReport", "tokenize", "load_stoplist",
    "vectorize", "read_posts", "build_profiles", "ingest_files", "parse_timestamp",
    "nominal_fraction_size",
]
