"""Seeded synthetic data: low-rank ratings, emotion-tagged catalogs and on-disk fixtures."""

from pathlib import Path

import numpy as np

from .corpus import EMOTIONS, LEXICON_EMOTIONS, Record, write_corpus
from .emotion import write_vectors
from .ingest import MovieRecord, write_movies_and_links, write_overviews, write_ratings
from .recsys import RATING_MAX, RATING_MIN, RatingEvent

# small stand-in vocabulary per emotion, a few with WordNet-style compounds
VOCAB = {
    "joy": ["cheerful", "delight", "elated", "glad", "happy", "jubilant", "merry", "joyful"],
    "sadness": ["gloomy", "grief", "lonely", "mournful", "sorrow", "tearful", "downhearted", "sad"],
    "hate": ["abhor", "despise", "detest", "loathe", "hatred", "odious", "ill_will", "spite"],
    "anger": ["anger", "furious", "fury", "outrage", "rage", "wrath", "irate", "seething"],
    "disgust": ["gross", "nauseous", "repulsive", "revolting", "sickening", "vile", "yucky", "foul"],
    "surprise": ["amazed", "astonish", "shock", "startle", "stunned", "wonder", "unexpected", "sudden"],
}
FILLER = (
    "a the man woman city family young old story night war love friend secret journey town "
    "house world life police killer doctor team school road island father mother daughter son"
).split()


def rank2_ratings(
    n_users: int = 200,
    n_items: int = 100,
    density: float = 0.2,
    noise: float = 0.1,
    seed: int = 0,
    scale: float = 0.8,
) -> tuple[list[RatingEvent], np.ndarray]:
    """Ratings from ``3.5 + p_u . q_i + noise`` with rank-2 factors ~ N(0, scale^2).

    Each (user, item) pair is observed independently with probability
    ``density``. Returns the events and the noiseless rating matrix.
    """
    rng = np.random.default_rng(seed)
    P = rng.normal(0.0, scale, size=(n_users, 2))
    Q = rng.normal(0.0, scale, size=(n_items, 2))
    truth = np.clip(3.5 + P @ Q.T, RATING_MIN, RATING_MAX)
    observed = rng.random((n_users, n_items)) < density
    noisy = np.clip(truth + rng.normal(0.0, noise, size=truth.shape), RATING_MIN, RATING_MAX)
    events = []
    for u, i in zip(*np.nonzero(observed)):
        events.append(RatingEvent(int(u) + 1, int(i) + 1, float(noisy[u, i]), int(u * 10_000 + i)))
    return events, truth


def dirichlet_mvecs(movie_ids, seed: int = 0, concentration: float = 1.0) -> dict[int, np.ndarray]:
    rng = np.random.default_rng(seed)
    alpha = np.full(len(EMOTIONS), concentration)
    return {int(m): rng.dirichlet(alpha) for m in movie_ids}


def watch_histories(
    n_users: int = 50,
    n_items: int = 120,
    min_events: int = 25,
    max_events: int = 60,
    k: int = 3,
    seed: int = 0,
) -> list[RatingEvent]:
    """Timestamped histories where taste clusters drive which movies get watched.

    Users watch movies preferentially from their latent taste, so a seed
    movie's latent neighbours tend to reappear later in the history.
    """
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n_users, k))
    Q = rng.normal(size=(n_items, k))
    affinity = P @ Q.T
    events = []
    t0 = 1_500_000_000
    for u in range(n_users):
        count = int(rng.integers(min_events, max_events + 1))
        weights = np.exp(affinity[u] - affinity[u].max())
        items = rng.choice(n_items, size=count, replace=False, p=weights / weights.sum())
        times = np.sort(rng.integers(0, 10_000_000, size=count))
        for i, t in zip(items, times):
            rating = float(np.clip(np.round(2 * (3.0 + 0.5 * affinity[u, i])) / 2, RATING_MIN, RATING_MAX))
            events.append(RatingEvent(u + 1, int(i) + 1, rating, t0 + int(t)))
    return sorted(events, key=lambda e: (e.user_id, e.timestamp, e.movie_id))


def overview_text(rng: np.random.Generator, length: int = 30) -> str:
    """Filler prose sprinkled with words from a few random emotion vocabularies."""
    words = list(rng.choice(FILLER, size=length))
    for emotion in rng.choice(list(VOCAB), size=int(rng.integers(1, 4)), replace=False):
        for w in rng.choice(VOCAB[emotion], size=int(rng.integers(1, 5))):
            words.insert(int(rng.integers(0, len(words) + 1)), w.replace("_", " "))
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def write_fixture(directory, n_users: int = 20, n_items: int = 80, seed: int = 0, missing_overviews: int = 3) -> dict:
    """Write a complete input set for the command-line pipeline.

    Produces ``ratings.csv``, ``movies.csv``, ``links.csv``, ``overviews.csv``,
    ``mvecs.csv`` (Dirichlet vectors), ``wordnet/<emotion>.txt`` lists and a
    labeled ``corpus.csv``. Returns a mapping of name to path.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    ratings = watch_histories(n_users, n_items, min_events=15, max_events=40, seed=seed)
    movies = {
        m: MovieRecord(m, f"Movie {m} ({1950 + m % 70})", ("Drama",) if m % 2 else ("Comedy", "Crime"), 1000 + m)
        for m in range(1, n_items + 1)
    }
    gaps = set(int(m) for m in rng.choice(n_items, size=missing_overviews, replace=False) + 1)
    overviews = {
        1000 + m: (movies[m].title, overview_text(rng)) for m in movies if m not in gaps
    }
    paths = {
        "ratings": directory / "ratings.csv",
        "movies": directory / "movies.csv",
        "links": directory / "links.csv",
        "overviews": directory / "overviews.csv",
        "mvecs": directory / "mvecs.csv",
        "wordnet_dir": directory / "wordnet",
        "corpus": directory / "corpus.csv",
    }
    write_ratings(ratings, paths["ratings"])
    write_movies_and_links(movies, paths["movies"], paths["links"])
    write_overviews(overviews, paths["overviews"])
    write_vectors(dirichlet_mvecs(movies, seed=seed + 1), paths["mvecs"])

    paths["wordnet_dir"].mkdir(exist_ok=True)
    for emotion in LEXICON_EMOTIONS:
        words = VOCAB[emotion.label]
        lines = [f"n#{j:08d} {w}" for j, w in enumerate(words)] + [f"a#{len(words):08d} {words[0]}"]
        (paths["wordnet_dir"] / f"{emotion.label}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    records = []
    for emotion in EMOTIONS:
        for _ in range(12):
            if emotion.label in VOCAB:
                cues = rng.choice(VOCAB[emotion.label], size=2)
                text = " ".join([*rng.choice(FILLER, size=6), *cues])
            else:
                text = " ".join(rng.choice(FILLER, size=8))
            records.append(Record(text.replace("_", " "), emotion))
    write_corpus(records, paths["corpus"])
    return paths
