"""Emotion-aware reranking of collaborative-filtering movie recommendations."""

from .affect import MovieAffect, UserProfile, movie_mvec, update_uvec, user_uvec
from .corpus import (
    EMOTIONS,
    EmotionClass,
    Record,
    SynonymLexicon,
    balance_corpus,
    parse_wordnet_affect_lists,
    split_corpus,
)
from .emotion import (
    LexiconClassifier,
    MetricsReport,
    classify_text,
    dominant_emotion,
    evaluate_classifier,
    load_precomputed_vectors,
)
from .evaluation import (
    EvalReport,
    evaluate_user,
    hit_rate,
    pick_winner,
    run_experiment,
    split_user_history,
)
from .ingest import (
    DatasetBundle,
    MovieRecord,
    attach_overviews,
    build_bundle,
    load_movies_and_links,
    load_ratings,
)
from .recsys import FactorModel, Hyper, RatingEvent, RecList, predict, top_n_for_user, top_n_from_seed, train
from .rerank import Metric, cosine_sim, default_metrics, euclidean, inner, manhattan, minkowski, pearson_corr, rerank

__version__ = "0.1.0"
