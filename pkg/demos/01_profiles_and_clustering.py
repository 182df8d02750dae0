"""Walkthrough: from raw posts to a per-day cluster hierarchy.

Builds a tiny two-topic corpus inline, tokenizes it into user profiles,
and runs the three-phase clustering (random fractions -> weighted
agglomeration of compressed vectors -> cut and nearest-centroid assignment).
"""

import numpy as np

from crowdlens.cluster import ClusteringConfig, cluster_time_step
from crowdlens.corpus import Dictionary, StepCorpus, UserProfile, tokenize, vectorize

rng = np.random.default_rng(42)

# two planted conversations: a storm and a concert
storm_words = ["storm", "flood", "rain", "wind", "damage", "evacuate"]
concert_words = ["concert", "band", "songs", "encore", "tickets", "stage"]

posts = {}
for i in range(20):
    user = f"user{i:02d}"
    words = storm_words if i < 10 else concert_words
    text = " ".join(words[j] for j in rng.integers(0, len(words), size=8))
    posts[user] = text

print("example post:", posts["user00"])
print("tokenized   :", tokenize(posts["user00"]))
print()

# one profile per user for this time step
token_lists = [tokenize(posts[u]) for u in sorted(posts)]
dictionary = Dictionary.build(token_lists)
profiles = [UserProfile(u, 0, toks, vectorize(toks, dictionary))
            for u, toks in zip(sorted(posts), token_lists)]
step = StepCorpus(0, profiles, dictionary, token_total=sum(map(len, token_lists)))
print(f"{step.user_count} profiles over a {len(dictionary)}-term dictionary")

# three phases: p=2 fractions, 3 leaves per fraction, cut at k=2
config = ClusteringConfig(p=2, k=2, k_low=3, seed=0)
hierarchy = cluster_time_step(step, config)

print(f"hierarchy: {hierarchy.leaf_count} leaves, root covers "
      f"{hierarchy.size} users\n")


def show(node_id, indent=0):
    node = hierarchy.node(node_id)
    tags = ", ".join(t for t, _ in node.tags[:4])
    kind = "leaf" if node.is_leaf else "node"
    print(f"{'  ' * indent}{kind} {node_id}: {node.size} users  [{tags}]")
    for child in node.children:
        show(child, indent + 1)


show(hierarchy.root)

print("\nleaf memberships:")
for leaf in sorted(hierarchy.leaves()):
    users = hierarchy.node(leaf).user_ids
    print(f"  leaf {leaf}: {users[:5]}{' ...' if len(users) > 5 else ''}")
