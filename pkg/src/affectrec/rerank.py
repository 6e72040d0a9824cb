"""Distance and similarity measures between emotion vectors, and list reranking."""

import csv
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .recsys import RecList

DEFAULT_MINKOWSKI_P = 3.0


class UndefinedCorrelationError(ValueError):
    pass


def _pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def euclidean(x, y) -> float:
    x, y = _pair(x, y)
    return math.sqrt(float(np.sum((x - y) ** 2)))


def manhattan(x, y) -> float:
    x, y = _pair(x, y)
    return float(np.sum(np.abs(x - y)))


def minkowski(x, y, p: float = DEFAULT_MINKOWSKI_P) -> float:
    if not p > 0:
        raise ValueError(f"Minkowski order must be positive, got {p}")
    x, y = _pair(x, y)
    return float(np.sum(np.abs(x - y) ** p) ** (1.0 / p))


def inner(x, y) -> float:
    x, y = _pair(x, y)
    return float(np.sum(x * y))


def cosine_sim(x, y) -> float:
    x, y = _pair(x, y)
    nx = math.sqrt(inner(x, x))
    ny = math.sqrt(inner(y, y))
    if nx == 0 or ny == 0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return inner(x, y) / (nx * ny)


def pearson_corr(x, y) -> float:
    """Cosine similarity of the two vectors after subtracting each one's own mean."""
    x, y = _pair(x, y)
    xc, yc = x - x.mean(), y - y.mean()
    if _is_constant(x, xc) or _is_constant(y, yc):
        raise UndefinedCorrelationError("correlation is undefined for a constant vector")
    return cosine_sim(xc, yc)


def _is_constant(v, centered) -> bool:
    # tolerance absorbs rounding in the mean of e.g. a uniform 1/7 vector
    return float(np.linalg.norm(centered)) <= 1e-14 * max(1.0, float(np.abs(v).max()))


@dataclass(frozen=True)
class Metric:
    """A named scoring function and the order in which its values rank candidates."""

    name: str
    short: str
    func: Callable[[np.ndarray, np.ndarray], float]
    descending: bool

    def __call__(self, x, y) -> float:
        return self.func(x, y)


EUCLIDEAN = Metric("euclidean", "Euc", euclidean, descending=False)
MANHATTAN = Metric("manhattan", "Mht", manhattan, descending=False)
COSINE = Metric("cosine", "Cos", cosine_sim, descending=True)
PEARSON = Metric("pearson", "Pear", pearson_corr, descending=True)


def minkowski_metric(p: float = DEFAULT_MINKOWSKI_P) -> Metric:
    if not p > 0:
        raise ValueError(f"Minkowski order must be positive, got {p}")
    return Metric("minkowski", "Mki", lambda x, y: minkowski(x, y, p), descending=False)


def default_metrics(minkowski_p: float = DEFAULT_MINKOWSKI_P) -> list[Metric]:
    """The five metrics in declaration order: Euc, Mht, Mki, Cos, Pear."""
    return [EUCLIDEAN, MANHATTAN, minkowski_metric(minkowski_p), COSINE, PEARSON]


def rerank(candidates: RecList, mvecs: Mapping[int, np.ndarray], uvec, metric: Metric) -> RecList:
    """Reorder candidates by closeness of their mvec to ``uvec``.

    Distances sort ascending, similarities descending. The sort is stable, so
    equal scores keep the recommender's order.
    """
    scored = []
    for movie_id, _ in candidates:
        v = mvecs.get(movie_id)
        if v is None:
            raise KeyError(f"movie {movie_id} has no emotion vector")
        scored.append((movie_id, metric(v, uvec)))
    sign = -1.0 if metric.descending else 1.0
    scored.sort(key=lambda pair: sign * pair[1])
    return RecList(tuple(scored), metric.short)


def rerank_all(candidates: RecList, mvecs, uvec, metrics: Sequence[Metric]) -> dict[str, RecList]:
    return {m.short: rerank(candidates, mvecs, uvec, m) for m in metrics}


def write_reclists(lists: Sequence[RecList], path) -> None:
    """Long-format ``rank,movieId,score,metric`` CSV, one block per list."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "movieId", "score", "metric"])
        for rl in lists:
            for rank, (movie_id, score) in enumerate(rl, start=1):
                writer.writerow([rank, movie_id, repr(float(score)), rl.origin])


def read_reclists(path) -> dict[str, RecList]:
    rows: dict[str, list[tuple[int, int, float]]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["rank", "movieId", "score", "metric"]:
            raise ValueError(f"{path}: expected header rank,movieId,score,metric")
        for row in reader:
            if row:
                rows.setdefault(row[3], []).append((int(row[0]), int(row[1]), float(row[2])))
    return {
        origin: RecList(tuple((m, s) for _, m, s in sorted(entries)), origin)
        for origin, entries in rows.items()
    }
