"""Biased matrix factorization trained by SGD, plus top-N list generation.

The model predicts ``mu + b_u + b_i + q_i . p_u``. Top-N lists come either
from latent-space cosine similarity to a seed movie (the default) or from
predicted ratings for a user.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

_log = logging.getLogger(__name__)

RATING_MIN = 0.5
RATING_MAX = 5.0
CHECKPOINT_MAGIC = "affectrec-factor-model"
CHECKPOINT_VERSION = 1


class RatingEvent(NamedTuple):
    user_id: int
    movie_id: int
    rating: float
    timestamp: int


@dataclass(frozen=True)
class Hyper:
    k: int = 50
    learning_rate: float = 0.005
    regularization: float = 0.02
    epochs: int = 20
    seed: int = 0
    init_scale: float = 0.05

    def __post_init__(self):
        for name in ("k", "learning_rate", "epochs", "init_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.regularization < 0:
            raise ValueError("regularization must be non-negative")


@dataclass(frozen=True)
class RecList:
    """Ordered ``(movieId, score)`` pairs tagged with the method that produced them."""

    items: tuple[tuple[int, float], ...]
    origin: str = "recommender"

    def __post_init__(self):
        ids = [m for m, _ in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError("RecList contains duplicate movieIds")

    @property
    def movie_ids(self) -> list[int]:
        return [m for m, _ in self.items]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.items]

    def prefix(self, n: int) -> "RecList":
        return RecList(self.items[:n], self.origin)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass
class FactorModel:
    global_mean: float
    user_ids: np.ndarray
    item_ids: np.ndarray
    user_bias: np.ndarray
    item_bias: np.ndarray
    user_factors: np.ndarray
    item_factors: np.ndarray
    rmse_history: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.user_index = {int(u): i for i, u in enumerate(self.user_ids)}
        self.item_index = {int(m): i for i, m in enumerate(self.item_ids)}
        if self.user_factors.shape[1] != self.item_factors.shape[1]:
            raise ValueError("user and item factors disagree on k")

    @property
    def k(self) -> int:
        return self.item_factors.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FactorModel):
            return NotImplemented
        return (
            self.global_mean == other.global_mean
            and self.rmse_history == other.rmse_history
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("user_ids", "item_ids", "user_bias", "item_bias", "user_factors", "item_factors")
            )
        )


def _rmse(mu, bu, bi, P, Q, u_ix, i_ix, r) -> float:
    pred = mu + bu[u_ix] + bi[i_ix] + np.einsum("ij,ij->i", P[u_ix], Q[i_ix])
    return float(np.sqrt(np.mean((r - pred) ** 2)))


def train(ratings: Sequence[RatingEvent], hyper: Hyper | None = None) -> FactorModel:
    """Fit the biased factor model with plain SGD over shuffled ratings.

    Factors start uniform in ``[-init_scale, init_scale]``; biases start at 0.
    All randomness comes from ``numpy.random.default_rng(hyper.seed)``.
    Training RMSE after each epoch is kept in ``rmse_history``.
    """
    hyper = hyper or Hyper()
    if len(ratings) == 0:
        raise ValueError("cannot train on an empty rating set")
    users = np.array(sorted({int(e.user_id) for e in ratings}), dtype=np.int64)
    items = np.array(sorted({int(e.movie_id) for e in ratings}), dtype=np.int64)
    u_map = {int(u): i for i, u in enumerate(users)}
    i_map = {int(m): i for i, m in enumerate(items)}
    u_ix = np.array([u_map[int(e.user_id)] for e in ratings], dtype=np.int64)
    i_ix = np.array([i_map[int(e.movie_id)] for e in ratings], dtype=np.int64)
    r = np.array([float(e.rating) for e in ratings], dtype=np.float64)

    rng = np.random.default_rng(hyper.seed)
    k, lr, reg = hyper.k, hyper.learning_rate, hyper.regularization
    P = rng.uniform(-hyper.init_scale, hyper.init_scale, size=(len(users), k))
    Q = rng.uniform(-hyper.init_scale, hyper.init_scale, size=(len(items), k))
    bu = np.zeros(len(users))
    bi = np.zeros(len(items))
    mu = float(r.mean())

    history = []
    for epoch in range(hyper.epochs):
        for j in rng.permutation(len(r)):
            u, i = u_ix[j], i_ix[j]
            pu, qi = P[u], Q[i]
            err = r[j] - (mu + bu[u] + bi[i] + pu @ qi)
            bu[u] += lr * (err - reg * bu[u])
            bi[i] += lr * (err - reg * bi[i])
            pu_old = pu.copy()
            pu += lr * (err * qi - reg * pu)
            qi += lr * (err * pu_old - reg * qi)
        history.append(_rmse(mu, bu, bi, P, Q, u_ix, i_ix, r))
        _log.debug("epoch %d train rmse %.6f", epoch + 1, history[-1])
    return FactorModel(mu, users, items, bu, bi, P, Q, history)


def predict(model: FactorModel, user_id, movie_id) -> float:
    """Clamped rating estimate; unknown users or items contribute no bias or factor term."""
    est = model.global_mean
    u = model.user_index.get(int(user_id))
    i = model.item_index.get(int(movie_id))
    if u is not None:
        est += model.user_bias[u]
    if i is not None:
        est += model.item_bias[i]
    if u is not None and i is not None:
        est += float(model.user_factors[u] @ model.item_factors[i])
    return float(min(max(est, RATING_MIN), RATING_MAX))


def _ranked(ids: np.ndarray, scores: np.ndarray, n: int, origin: str) -> RecList:
    # descending score, ascending movieId on ties
    order = np.lexsort((ids, -scores))[:n]
    return RecList(tuple((int(ids[j]), float(scores[j])) for j in order), origin)


def _candidate_mask(model: FactorModel, exclude: Iterable[int]) -> np.ndarray:
    exclude = set(int(m) for m in exclude)
    return np.array([int(m) not in exclude for m in model.item_ids], dtype=bool)


def item_similarities(model: FactorModel, seed_movie_id) -> np.ndarray:
    """Cosine similarity of every item's latent vector to the seed's; zero vectors score 0."""
    s = model.item_index.get(int(seed_movie_id))
    if s is None:
        raise KeyError(f"seed movie {seed_movie_id} is not in the model")
    Q = model.item_factors
    norms = np.linalg.norm(Q, axis=1)
    dots = Q @ Q[s]
    denom = norms * norms[s]
    sims = np.zeros(len(Q))
    np.divide(dots, denom, out=sims, where=denom > 0)
    return sims


def top_n_from_seed(model: FactorModel, seed_movie_id, n: int, exclude: Iterable[int] = ()) -> RecList:
    if n < 1:
        raise ValueError("n must be at least 1")
    sims = item_similarities(model, seed_movie_id)
    mask = _candidate_mask(model, exclude)
    mask[model.item_index[int(seed_movie_id)]] = False
    return _ranked(model.item_ids[mask], sims[mask], n, "recommender")


def top_n_for_user(model: FactorModel, user_id, n: int, exclude: Iterable[int] = ()) -> RecList:
    if n < 1:
        raise ValueError("n must be at least 1")
    u = model.user_index.get(int(user_id))
    if u is None:
        raise KeyError(f"user {user_id} is not in the model")
    est = (
        model.global_mean + model.user_bias[u] + model.item_bias
        + model.item_factors @ model.user_factors[u]
    )
    est = np.clip(est, RATING_MIN, RATING_MAX)
    mask = _candidate_mask(model, exclude)
    return _ranked(model.item_ids[mask], est[mask], n, "recommender")


def save_model(model: FactorModel, path) -> None:
    """Write a text checkpoint that reloads bit-for-bit.

    Layout (CSV, one record per line)::

        affectrec-factor-model,1
        global_mean,<mu>
        k,<k>
        rmse,<epoch-1 rmse>,<epoch-2 rmse>,...
        user,<userId>,<bias>,<f_0>,...,<f_k-1>
        item,<movieId>,<bias>,<f_0>,...,<f_k-1>

    Floats are written with ``repr`` which round-trips exactly.
    """
    f = repr
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([CHECKPOINT_MAGIC, CHECKPOINT_VERSION])
        w.writerow(["global_mean", f(float(model.global_mean))])
        w.writerow(["k", model.k])
        w.writerow(["rmse", *(f(float(x)) for x in model.rmse_history)])
        for kind, ids, bias, factors in (
            ("user", model.user_ids, model.user_bias, model.user_factors),
            ("item", model.item_ids, model.item_bias, model.item_factors),
        ):
            for key, b, vec in zip(ids, bias, factors):
                w.writerow([kind, int(key), f(float(b)), *(f(float(x)) for x in vec)])


def load_model(path) -> FactorModel:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != [CHECKPOINT_MAGIC, str(CHECKPOINT_VERSION)]:
        raise ValueError(f"{path}: not an affectrec model checkpoint")
    header = {row[0]: row[1:] for row in rows[1:4]}
    try:
        mu = float(header["global_mean"][0])
        k = int(header["k"][0])
        history = [float(x) for x in header["rmse"]]
    except (KeyError, IndexError, ValueError):
        raise ValueError(f"{path}: malformed checkpoint header") from None
    tables = {"user": ([], [], []), "item": ([], [], [])}
    for lineno, row in enumerate(rows[4:], start=5):
        if len(row) != k + 3 or row[0] not in tables:
            raise ValueError(f"{path}:{lineno}: malformed factor row")
        ids, bias, factors = tables[row[0]]
        ids.append(int(row[1]))
        bias.append(float(row[2]))
        factors.append([float(x) for x in row[3:]])

    def arrays(kind):
        ids, bias, factors = tables[kind]
        return (
            np.array(ids, dtype=np.int64),
            np.array(bias, dtype=np.float64),
            np.array(factors, dtype=np.float64).reshape(len(ids), k),
        )

    uid, ub, uf = arrays("user")
    iid, ib, qf = arrays("item")
    return FactorModel(mu, uid, iid, ub, ib, uf, qf, history)


def rmse(model: FactorModel, ratings: Iterable[RatingEvent]) -> float:
    errs = [(predict(model, e.user_id, e.movie_id) - e.rating) ** 2 for e in ratings]
    if not errs:
        raise ValueError("no ratings to score")
    return math.sqrt(sum(errs) / len(errs))
