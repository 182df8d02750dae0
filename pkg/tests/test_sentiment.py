"""Happiness-index scoring: document fractions, corpus stats, cluster scores."""

import numpy as np
import pytest

from crowdlens.corpus import Dictionary, StepCorpus, UserProfile, vectorize
from crowdlens.sentiment import (SIGMA_FLOOR, ClusterSentiment, DocSentiment,
                                 SentimentLexicon, SentimentStats,
                                 cluster_happiness, corpus_stats, doc_sentiment,
                                 happiness, score_hierarchy, step_doc_fractions)

LEX = SentimentLexicon(frozenset({"great", "good"}), frozenset({"awful", "bad"}))


class TestLexicon:
    def test_disjointness_enforced(self):
        with pytest.raises(ValueError):
            SentimentLexicon(frozenset({"x"}), frozenset({"x"}))

    def test_non_empty_enforced(self):
        with pytest.raises(ValueError):
            SentimentLexicon(frozenset(), frozenset({"bad"}))

    def test_bundled_lexicon_loads(self):
        lex = SentimentLexicon.bundled()
        assert "happy" in lex.positive and "sad" in lex.negative
        assert not lex.positive & lex.negative

    def test_load_from_files(self, tmp_path):
        p = tmp_path / "pos.txt"
        n = tmp_path / "neg.txt"
        p.write_text("Nice\nfine\n\n")
        n.write_text("gross\n")
        lex = SentimentLexicon.load(p, n)
        assert lex.positive == frozenset({"nice", "fine"})


class TestDocSentiment:
    def test_direct_count(self):
        got = doc_sentiment(["great", "awful", "day", "day"], LEX)
        assert got == DocSentiment(0.25, 0.25)

    def test_no_hits(self):
        assert doc_sentiment(["day", "night"], LEX) == DocSentiment(0.0, 0.0)

    def test_all_positive(self):
        assert doc_sentiment(["great", "good"], LEX) == DocSentiment(1.0, 0.0)

    def test_empty_tokens(self):
        assert doc_sentiment([], LEX) == DocSentiment(0.0, 0.0)


class TestCorpusStats:
    def test_direct_arithmetic_population_sigma(self):
        stats = corpus_stats([DocSentiment(0.1, 0.0), DocSentiment(0.3, 0.0)])
        assert stats.mu_p == pytest.approx(0.2)
        assert stats.sigma_p == pytest.approx(0.1)

    def test_degenerate_variance_floored(self, caplog):
        with caplog.at_level("WARNING", logger="crowdlens"):
            stats = corpus_stats([DocSentiment(0.2, 0.1)] * 3)
        assert stats.sigma_p == SIGMA_FLOOR
        assert stats.sigma_n == SIGMA_FLOOR
        assert "variance" in caplog.text

    def test_single_document_rejected(self):
        with pytest.raises(ValueError):
            corpus_stats([DocSentiment(0.1, 0.1)])


class TestClusterHappiness:
    def test_whole_corpus_is_neutral(self):
        rng = np.random.default_rng(0)
        fracs = rng.uniform(0, 0.5, size=(40, 2))
        stats = corpus_stats(fracs)
        got = cluster_happiness(fracs, stats)
        assert abs(got.h) < 1e-12

    def test_one_sigma_above_gives_one(self):
        stats = SentimentStats(mu_p=0.2, mu_n=0.1, sigma_p=0.05, sigma_n=0.02)
        cs = cluster_happiness(
            np.array([[stats.mu_p + stats.sigma_p, stats.mu_n]]), stats)
        assert cs.h == pytest.approx(1.0, abs=1e-12)

    def test_two_doc_arithmetic(self):
        stats = SentimentStats(mu_p=0.1, mu_n=0.05, sigma_p=0.1, sigma_n=0.05)
        cs = cluster_happiness(np.array([[0.3, 0.0], [0.1, 0.2]]), stats)
        assert cs.mu_pc == pytest.approx(0.2)
        assert cs.mu_nc == pytest.approx(0.1)
        assert cs.h == pytest.approx(0.0, abs=1e-12)

    def test_empty_cluster_rejected(self):
        stats = SentimentStats(0.1, 0.1, 0.1, 0.1)
        with pytest.raises(ValueError):
            cluster_happiness(np.zeros((0, 2)), stats)

    def test_raising_pos_frac_raises_h(self):
        rng = np.random.default_rng(1)
        fracs = rng.uniform(0, 0.5, size=(20, 2))
        stats = corpus_stats(fracs)
        member = fracs[:5].copy()
        before = cluster_happiness(member, stats).h
        member[0, 0] += 0.05
        after = cluster_happiness(member, stats).h
        assert after > before

    def test_dropping_neg_usage_raises_h(self):
        rng = np.random.default_rng(2)
        fracs = rng.uniform(0.1, 0.5, size=(20, 2))
        stats = corpus_stats(fracs)
        member = fracs[:5].copy()
        before = cluster_happiness(member, stats).h
        member[:, 1] -= 0.05  # negative usage drops, positive unchanged
        after = cluster_happiness(member, stats).h
        assert after > before

    def test_invariant_identity(self):
        stats = SentimentStats(0.15, 0.08, 0.04, 0.03)
        cs = cluster_happiness(np.array([[0.3, 0.1], [0.2, 0.05]]), stats)
        assert cs.h == pytest.approx(happiness(cs.mu_pc, cs.mu_nc, stats),
                                     abs=1e-12)


class TestStepDocFractions:
    def test_matches_doc_sentiment(self):
        token_lists = [["great", "day"], ["awful", "awful", "x", "y"],
                       ["plain"], []]
        d = Dictionary.build(token_lists)
        profiles = [UserProfile(f"u{i}", 0, t, vectorize(t, d))
                    for i, t in enumerate(token_lists)]
        sc = StepCorpus(0, profiles, d)
        got = step_doc_fractions(sc, LEX)
        for row, tokens in zip(got, token_lists):
            want = doc_sentiment(tokens, LEX)
            assert row[0] == pytest.approx(want.pos_frac)
            assert row[1] == pytest.approx(want.neg_frac)

    def test_row_subset(self):
        token_lists = [["great"], ["awful"], ["meh"]]
        d = Dictionary.build(token_lists)
        profiles = [UserProfile(f"u{i}", 0, t, vectorize(t, d))
                    for i, t in enumerate(token_lists)]
        sc = StepCorpus(0, profiles, d)
        got = step_doc_fractions(sc, LEX, indices=[2, 0])
        assert got[0].tolist() == [0.0, 0.0]
        assert got[1].tolist() == [1.0, 0.0]


class TestScoreHierarchy:
    def test_bottom_up_means(self):
        from oracles import manual_hierarchy

        hier, _ = manual_hierarchy({0: 2, 1: 2, 2: None}, {}, sizes={0: 2, 1: 2, 2: 4})
        hier.node(0).member_rows = [0, 1]
        hier.node(1).member_rows = [2, 3]
        fracs = np.array([[0.4, 0.0], [0.2, 0.1], [0.0, 0.3], [0.0, 0.0]])
        stats = corpus_stats(fracs)
        score_hierarchy(hier, fracs, stats)
        root = hier.node(2).sent
        assert root["mu_pc"] == pytest.approx(fracs[:, 0].mean())
        assert abs(root["h"]) < 1e-12
        leaf = hier.node(0).sent
        assert leaf["mu_pc"] == pytest.approx(0.3)
