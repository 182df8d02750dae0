"""crowdlens: clustered, sentiment-scored snapshots of short-text crowds.

The pipeline turns time-stamped posts into per-day cluster hierarchies with
happiness scores; the explore/layout layers pick maximal antichains and turn
them into treemap or list scenes; the service exposes everything over HTTP.
"""

__version__ = "0.1.0"

from .cluster import (ClusteringConfig, ClusterHierarchy, ClusterNode,
                      agglomerate, cluster_fraction, cluster_tags,
                      cluster_time_step, cosine, cut_and_assign,
                      weighted_cosine)
from .corpus import (Dictionary, PostRecord, SparseTermVector, StepCorpus,
                     TimeStepSpec, UserProfile, build_profiles, tokenize,
                     vectorize)
from .explore import (Antichain, ScoredTree, ScoreMode, SeriesPoint,
                      find_max_antichain, match_score_search,
                      match_score_similar, order_antichain, scented_series,
                      sentiment_score)
from .layout import (Color, Rect, color_for, layout_hierarchy, list_view,
                     squarify, tag_cloud)
from .sentiment import (ClusterSentiment, DocSentiment, SentimentLexicon,
                        SentimentStats, cluster_happiness, corpus_stats,
                        doc_sentiment)
