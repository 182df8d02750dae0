"""Tokenization, profile building, dictionaries, and sparse vectors."""

import gzip
import json
import math
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from crowdlens.corpus import (Dictionary, IngestError, SparseTermVector,
                              TimeStepSpec, build_profiles, ingest_files,
                              load_stoplist, parse_timestamp, read_posts,
                              tokenize, vectorize)

UTC = timezone.utc


class TestTokenize:
    def test_empty_input(self):
        assert tokenize("") == []

    def test_mentions_and_urls_dropped_hashtags_kept(self):
        assert tokenize("@bob Check http://x.co #dnc2012 rocks") == \
            ["check", "#dnc2012", "rocks"]

    def test_stoplist_absorbs_everything(self):
        assert tokenize("The THE the", {"the"}) == []

    def test_lowercasing_is_unicode_aware(self):
        assert tokenize("GROSSE Straße") == ["grosse", "straße"]

    def test_www_urls_dropped(self):
        assert tokenize("see www.example.com now") == ["see", "now"]

    def test_surrounding_punctuation_stripped(self):
        assert tokenize("wow!! (really) #tag, .end.") == \
            ["wow", "really", "#tag", "end"]

    def test_idempotent_on_own_output(self):
        texts = [
            "@bob Check http://x.co #dnc2012 rocks!!",
            "a-b c.d (e) #f @@ www.x.y z://q",
            "ÉLAN #Hash. 'quoted' don't",
        ]
        for text in texts:
            once = tokenize(text)
            again = tokenize(" ".join(once))
            assert once == again

    def test_bare_punctuation_dropped(self):
        assert tokenize("# @ ! -- ...") == []


class TestTimeStepSpec:
    def test_step_of_boundaries(self):
        spec = TimeStepSpec(datetime(2011, 1, 1, tzinfo=UTC),
                            timedelta(hours=24), 2)
        assert spec.step_of(datetime(2011, 1, 1, tzinfo=UTC)) == 0
        assert spec.step_of(datetime(2011, 1, 2, tzinfo=UTC)) == 1
        assert spec.step_of(datetime(2011, 1, 3, tzinfo=UTC)) is None
        assert spec.step_of(datetime(2010, 12, 31, 23, tzinfo=UTC)) is None

    def test_invalid_specs_rejected(self):
        with pytest.raises(ValueError):
            TimeStepSpec(datetime(2011, 1, 1, tzinfo=UTC), timedelta(0), 1)
        with pytest.raises(ValueError):
            TimeStepSpec(datetime(2011, 1, 1, tzinfo=UTC), timedelta(hours=1), 0)


class TestSparseTermVector:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            SparseTermVector(np.array([3, 1]), np.array([1.0, 1.0]))

    def test_no_nonpositive_weights(self):
        with pytest.raises(ValueError):
            SparseTermVector(np.array([0]), np.array([0.0]))

    def test_from_counts_drops_zeros(self):
        v = SparseTermVector.from_counts({2: 0, 1: 3})
        assert v.to_pairs() == [(1, 3.0)]

    def test_dot_is_bitwise_symmetric(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            ids_u = np.sort(rng.choice(50, size=8, replace=False))
            ids_v = np.sort(rng.choice(50, size=8, replace=False))
            u = SparseTermVector(ids_u, rng.uniform(0.1, 1, 8))
            v = SparseTermVector(ids_v, rng.uniform(0.1, 1, 8))
            assert u.dot(v) == v.dot(u)


class TestVectorize:
    def test_direct_arithmetic(self):
        d = Dictionary(["a", "b"], [1, 1])
        v = vectorize(["a", "a", "b"], d)
        expect = {0: 2 / math.sqrt(5), 1: 1 / math.sqrt(5)}
        assert v.to_pairs() == [(0, pytest.approx(expect[0])),
                                (1, pytest.approx(expect[1]))]

    def test_empty_tokens_degenerate(self):
        d = Dictionary(["a"], [1])
        assert vectorize([], d).is_empty

    def test_single_term_normalizes_to_one(self):
        d = Dictionary(["a"], [1])
        assert vectorize(["a"], d).to_pairs() == [(0, 1.0)]

    def test_norm_invariant(self):
        rng = np.random.default_rng(5)
        terms = [f"w{i}" for i in range(30)]
        d = Dictionary(terms, [1] * 30)
        for _ in range(100):
            tokens = [terms[i] for i in rng.integers(0, 30, size=rng.integers(1, 40))]
            v = vectorize(tokens, d)
            assert abs(v.norm() - 1.0) < 1e-9

    def test_idf_toggle_downweights_common_terms(self):
        # "rare" appears in 1 of 10 docs, "common" in all 10
        d = Dictionary(["common", "rare"], [10, 1])
        tf = vectorize(["common", "rare"], d, weighting="tf", n_docs=10)
        tfidf = vectorize(["common", "rare"], d, weighting="tfidf", n_docs=10)
        ratio_tf = tf.weights[1] / tf.weights[0]
        ratio_tfidf = tfidf.weights[1] / tfidf.weights[0]
        assert ratio_tf == pytest.approx(1.0)
        assert ratio_tfidf > 1.0
        assert abs(tfidf.norm() - 1.0) < 1e-9

    def test_unknown_weighting_rejected(self):
        d = Dictionary(["a"], [1])
        with pytest.raises(ValueError):
            vectorize(["a"], d, weighting="boolean")


class TestDictionary:
    def test_round_trip(self):
        d = Dictionary.build([["b", "a"], ["c", "a"]])
        for i in range(len(d)):
            assert d.id_of(d.term_of(i)) == i

    def test_doc_freq(self):
        d = Dictionary.build([["a", "a", "b"], ["a", "c"]])
        assert d.doc_freq[d.id_of("a")] == 2
        assert d.doc_freq[d.id_of("b")] == 1


def _post(user, ts, text):
    return json.dumps({"user": user, "ts": ts, "text": text})


class TestBuildProfiles:
    def spec(self, steps=3):
        return TimeStepSpec(datetime(2011, 1, 1, tzinfo=UTC),
                            timedelta(hours=24), steps)

    def test_concatenation_in_timestamp_order(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text("\n".join([
            _post("u", "2011-01-01T09:00:00Z", "second post"),
            _post("u", "2011-01-01T03:00:00Z", "first"),
            _post("u", "2011-01-01T21:00:00Z", "third one"),
        ]))
        steps, report = ingest_files([f], self.spec())
        profiles = steps[0].profiles
        assert len(profiles) == 1
        assert profiles[0].tokens == ["first", "second", "post", "third", "one"]

    def test_absent_user_has_no_profile(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text(_post("u", "2011-01-01T00:00:00Z", "hello") + "\n")
        steps, _ = ingest_files([f], self.spec())
        assert steps[2].profiles == []

    def test_two_users_dictionary_union(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text("\n".join([
            _post("u1", "2011-01-01T01:00:00Z", "alpha beta"),
            _post("u2", "2011-01-01T02:00:00Z", "beta gamma"),
        ]))
        steps, _ = ingest_files([f], self.spec())
        sc = steps[0]
        assert len(sc.profiles) == 2
        assert sorted(sc.dictionary.terms) == ["alpha", "beta", "gamma"]

    def test_out_of_range_counted(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text("\n".join([
            _post("u", "2010-12-31T00:00:00Z", "early"),
            _post("u", "2011-01-01T00:00:00Z", "ok"),
        ]))
        steps, report = ingest_files([f], self.spec())
        assert report.posts_out_of_range == 1
        assert report.posts_kept == 1

    def test_malformed_records_skipped_and_counted(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text("\n".join([
            "{not json",
            json.dumps({"user": "", "ts": "2011-01-01T00:00:00Z", "text": "x"}),
            json.dumps({"user": "u", "ts": "not-a-date", "text": "x"}),
            _post("u", "2011-01-01T00:00:00Z", "fine"),
        ]))
        steps, report = ingest_files([f], self.spec())
        assert report.skipped_by_file[str(f)] == 3
        assert steps[0].profiles[0].tokens == ["fine"]

    def test_unreadable_file_raises_with_path(self):
        with pytest.raises(IngestError, match="nope.ndjson"):
            list(read_posts("nope.ndjson"))

    def test_gzip_accepted_by_extension(self, tmp_path):
        f = tmp_path / "p.ndjson.gz"
        with gzip.open(f, "wt", encoding="utf-8") as g:
            g.write(_post("u", "2011-01-01T00:00:00Z", "zipped words") + "\n")
        steps, _ = ingest_files([f], self.spec())
        assert steps[0].profiles[0].tokens == ["zipped", "words"]

    def test_token_count_conservation(self, tmp_path):
        f = tmp_path / "p.ndjson"
        lines = []
        rng = np.random.default_rng(11)
        words = ["aa", "bb", "cc", "dd", "the"]
        for i in range(40):
            u = f"u{rng.integers(0, 6)}"
            day = int(rng.integers(1, 3))
            text = " ".join(words[j] for j in rng.integers(0, 5, size=4))
            lines.append(_post(u, f"2011-01-0{day}T05:00:00Z", text))
        f.write_text("\n".join(lines))
        stop = frozenset({"the"})
        steps, _ = ingest_files([f], self.spec(), stoplist=stop)
        for sc in steps:
            assert sum(len(p.tokens) for p in sc.profiles) == sc.token_total

    def test_degenerate_profiles_flagged(self, tmp_path):
        f = tmp_path / "p.ndjson"
        f.write_text(_post("u", "2011-01-01T00:00:00Z", "the the") + "\n")
        steps, _ = ingest_files([f], self.spec(), stoplist=frozenset({"the"}))
        p = steps[0].profiles[0]
        assert p.degenerate and p.vector.is_empty
        assert steps[0].active_indices() == []

    def test_no_input_files_rejected(self):
        with pytest.raises(IngestError, match="no input files"):
            ingest_files([], self.spec())


class TestStoplist:
    def test_multi_file_concatenation(self, tmp_path):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        a.write_text("the\nand\n")
        b.write_text("le\nla\n\n")
        stop = load_stoplist([a, b])
        assert stop == frozenset({"the", "and", "le", "la"})


def test_parse_timestamp_handles_z_and_offsets():
    t1 = parse_timestamp("2011-01-01T12:00:00Z")
    t2 = parse_timestamp("2011-01-01T14:00:00+02:00")
    assert t1 == t2
    assert t1.tzinfo is not None
