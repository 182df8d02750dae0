"""Walkthrough: the happiness index on documents and clusters.

Documents contribute the fraction of their tokens that are positive or
negative lexicon terms; a cluster's score z-normalizes its mean fractions
against the corpus baseline:

    h = (mu_pc - mu_p) / sigma_p - (mu_nc - mu_n) / sigma_n

so h > 0 reads "happier than baseline" and a drop in negative wording alone
is enough to push h up.
"""

import numpy as np

from crowdlens.sentiment import (SentimentLexicon, cluster_happiness,
                                 corpus_stats, doc_sentiment)

lexicon = SentimentLexicon.bundled()
print(f"bundled demo lexicon: {len(lexicon.positive)} positive / "
      f"{len(lexicon.negative)} negative terms\n")

docs = [
    ["great", "show", "love", "the", "encore"],
    ["awful", "flood", "everything", "lost"],
    ["rain", "again", "boring", "day"],
    ["happy", "birthday", "great", "party", "fun"],
    ["meeting", "agenda", "notes"],
]
for tokens in docs:
    s = doc_sentiment(tokens, lexicon)
    print(f"  pos={s.pos_frac:.2f} neg={s.neg_frac:.2f}  {' '.join(tokens)}")

fractions = np.array([[doc_sentiment(t, lexicon).pos_frac,
                       doc_sentiment(t, lexicon).neg_frac] for t in docs])
stats = corpus_stats(fractions)
print(f"\ncorpus baseline: mu_p={stats.mu_p:.3f} sigma_p={stats.sigma_p:.3f} "
      f"mu_n={stats.mu_n:.3f} sigma_n={stats.sigma_n:.3f}")

# the whole corpus is neutral by construction
whole = cluster_happiness(fractions, stats)
print(f"whole corpus as one cluster: h = {whole.h:+.3f} (exactly neutral)")

happy_cluster = cluster_happiness(fractions[[0, 3]], stats)
sad_cluster = cluster_happiness(fractions[[1, 2]], stats)
print(f"docs 0+3 (parties):          h = {happy_cluster.h:+.3f}")
print(f"docs 1+2 (flood):            h = {sad_cluster.h:+.3f}")

# dropping negative wording raises h even with positives unchanged
calmer = fractions[[1, 2]].copy()
calmer[:, 1] *= 0.5
print(f"flood docs, half the negative terms: "
      f"h = {cluster_happiness(calmer, stats).h:+.3f}")
