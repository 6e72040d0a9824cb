"""MovieLens ratings/movies/links and TMDb overview loading."""

import csv
import logging
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping

import numpy as np

from .affect import movie_mvec
from .recsys import RATING_MAX, RATING_MIN, RatingEvent

_log = logging.getLogger(__name__)

RATINGS_HEADER = ["userId", "movieId", "rating", "timestamp"]
MOVIES_HEADER = ["movieId", "title", "genres"]
LINKS_HEADER = ["movieId", "imdbId", "tmdbId"]
OVERVIEWS_HEADER = ["tmdbId", "title", "overview"]


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class MovieRecord:
    movie_id: int
    title: str
    genres: tuple[str, ...] = ()
    tmdb_id: int | None = None
    overview: str | None = None


@dataclass(frozen=True)
class Coverage:
    movies: int
    overviews: int
    unmatched_overviews: int = 0


def _open_csv(path, header):
    fh = open(path, encoding="utf-8", newline="")
    reader = csv.reader(fh)
    found = next(reader, None)
    if found is None or [h.strip() for h in found] != header:
        fh.close()
        raise DataError(f"{path}: expected header {','.join(header)}, got {found}")
    return fh, reader


def _int(value: str, path, rowno, name) -> int:
    try:
        return int(value)
    except ValueError:
        raise DataError(f"{path}: row {rowno}: {name} {value!r} is not an integer") from None


def sort_ratings(ratings: Iterable[RatingEvent]) -> list[RatingEvent]:
    return sorted(ratings, key=lambda e: (e.user_id, e.timestamp, e.movie_id))


def load_ratings(path) -> list[RatingEvent]:
    """Parse a ratings CSV, sorted by (userId, timestamp, movieId)."""
    fh, reader = _open_csv(path, RATINGS_HEADER)
    events = []
    with fh:
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DataError(f"{path}: row {rowno}: expected 4 fields, got {len(row)}")
            user = _int(row[0], path, rowno, "userId")
            movie = _int(row[1], path, rowno, "movieId")
            try:
                rating = float(row[2])
            except ValueError:
                raise DataError(f"{path}: row {rowno}: rating {row[2]!r} is not a number") from None
            if not RATING_MIN <= rating <= RATING_MAX:
                raise DataError(f"{path}: row {rowno}: rating {rating} outside [{RATING_MIN}, {RATING_MAX}]")
            ts = _int(row[3], path, rowno, "timestamp")
            if ts < 0:
                raise DataError(f"{path}: row {rowno}: negative timestamp")
            events.append(RatingEvent(user, movie, rating, ts))
    return sort_ratings(events)


def write_ratings(ratings: Iterable[RatingEvent], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RATINGS_HEADER)
        for e in ratings:
            w.writerow([e.user_id, e.movie_id, repr(float(e.rating)), e.timestamp])


def load_movies_and_links(movies_path, links_path) -> dict[int, MovieRecord]:
    movies: dict[int, MovieRecord] = {}
    fh, reader = _open_csv(movies_path, MOVIES_HEADER)
    with fh:
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{movies_path}: row {rowno}: expected 3 fields, got {len(row)}")
            movie_id = _int(row[0], movies_path, rowno, "movieId")
            if movie_id in movies:
                raise DataError(f"{movies_path}: row {rowno}: duplicate movieId {movie_id}")
            genres = tuple(g for g in row[2].split("|") if g)
            movies[movie_id] = MovieRecord(movie_id, row[1], genres)

    seen_tmdb: dict[int, int] = {}
    fh, reader = _open_csv(links_path, LINKS_HEADER)
    with fh:
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{links_path}: row {rowno}: expected 3 fields, got {len(row)}")
            movie_id = _int(row[0], links_path, rowno, "movieId")
            if movie_id not in movies:
                _log.warning("%s: row %d: link for unknown movieId %d skipped", links_path, rowno, movie_id)
                continue
            if not row[2].strip():
                continue
            tmdb_id = _int(row[2], links_path, rowno, "tmdbId")
            if tmdb_id in seen_tmdb:
                _log.warning(
                    "%s: row %d: tmdbId %d already linked to movieId %d; ignored",
                    links_path, rowno, tmdb_id, seen_tmdb[tmdb_id],
                )
                continue
            seen_tmdb[tmdb_id] = movie_id
            movies[movie_id] = replace(movies[movie_id], tmdb_id=tmdb_id)
    return movies


def write_movies_and_links(movies: Mapping[int, MovieRecord], movies_path, links_path) -> None:
    with open(movies_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MOVIES_HEADER)
        for m in sorted(movies.values(), key=lambda m: m.movie_id):
            w.writerow([m.movie_id, m.title, "|".join(m.genres)])
    with open(links_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LINKS_HEADER)
        for m in sorted(movies.values(), key=lambda m: m.movie_id):
            w.writerow([m.movie_id, "", "" if m.tmdb_id is None else m.tmdb_id])


def load_overviews(path) -> dict[int, str]:
    """``{tmdbId: overview}``; a zero-byte file is an empty table, duplicates keep the first row."""
    with open(path, encoding="utf-8", newline="") as fh:
        if not fh.read(1):
            return {}
    overviews: dict[int, str] = {}
    fh, reader = _open_csv(path, OVERVIEWS_HEADER)
    with fh:
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{path}: row {rowno}: expected 3 fields, got {len(row)}")
            tmdb_id = _int(row[0], path, rowno, "tmdbId")
            if tmdb_id in overviews:
                _log.warning("%s: row %d: duplicate tmdbId %d, keeping first", path, rowno, tmdb_id)
                continue
            overviews[tmdb_id] = row[2]
    return overviews


def write_overviews(overviews: Mapping[int, tuple[str, str]], path) -> None:
    """Write ``{tmdbId: (title, overview)}`` as an RFC-4180 CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(OVERVIEWS_HEADER)
        for tmdb_id in sorted(overviews):
            title, text = overviews[tmdb_id]
            w.writerow([tmdb_id, title, text])


def attach_overviews(movies: Mapping[int, MovieRecord], overviews) -> tuple[dict[int, MovieRecord], Coverage]:
    """Join overviews onto movies by tmdbId.

    ``overviews`` is a path or a ``{tmdbId: text}`` mapping. Blank overview
    text counts as missing. Overviews with no matching movie are counted and
    otherwise ignored.
    """
    if not isinstance(overviews, Mapping):
        overviews = load_overviews(overviews)
    out = {}
    matched = set()
    for movie_id, rec in movies.items():
        text = overviews.get(rec.tmdb_id) if rec.tmdb_id is not None else None
        if text is not None and text.strip():
            matched.add(rec.tmdb_id)
            out[movie_id] = replace(rec, overview=text)
        else:
            out[movie_id] = replace(rec, overview=None)
    n_with = sum(1 for r in out.values() if r.overview is not None)
    unmatched = sum(1 for t in overviews if t not in matched)
    return out, Coverage(len(out), n_with, unmatched)


@dataclass
class DatasetBundle:
    movies: dict[int, MovieRecord]
    ratings: list[RatingEvent]
    mvecs: dict[int, np.ndarray]
    dropped_ratings: int = 0
    dropped_mvecs: int = 0

    @property
    def n_users(self) -> int:
        return len({e.user_id for e in self.ratings})

    @property
    def n_overviews(self) -> int:
        return sum(1 for m in self.movies.values() if m.overview is not None)

    def summary_line(self) -> str:
        return (
            f"users={self.n_users} ratings={len(self.ratings)} "
            f"movies={len(self.movies)} overviews={self.n_overviews}"
        )

    def check_integrity(self) -> None:
        for e in self.ratings:
            if e.movie_id not in self.movies:
                raise DataError(f"rating references unknown movie {e.movie_id}")
        for m in self.mvecs:
            if m not in self.movies:
                raise DataError(f"mvec for unknown movie {m}")


def build_bundle(
    ratings: Iterable[RatingEvent],
    movies: Mapping[int, MovieRecord],
    mvec_source: Callable[[str], np.ndarray] | Mapping[int, np.ndarray],
) -> DatasetBundle:
    """Join ratings, movies and emotion vectors into a consistent dataset.

    ``mvec_source`` is either a classifier applied to each movie's overview
    (movies without one get no mvec) or a precomputed ``{movieId: mvec}``
    table. Ratings and mvecs pointing at unknown movies are dropped and
    counted.
    """
    movies = dict(movies)
    kept, dropped = [], 0
    for e in ratings:
        if e.movie_id in movies:
            kept.append(e)
        else:
            dropped += 1
    if dropped:
        _log.info("dropped %d ratings for movies missing from the catalog", dropped)
    if not kept:
        raise DataError("no ratings left after joining with the movie catalog")

    dropped_mvecs = 0
    if isinstance(mvec_source, Mapping):
        mvecs = {}
        for m, v in mvec_source.items():
            if m in movies:
                mvecs[m] = v
            else:
                dropped_mvecs += 1
    else:
        mvecs = {
            m: movie_mvec(rec.overview, mvec_source)
            for m, rec in sorted(movies.items())
            if rec.overview is not None
        }
    return DatasetBundle(movies, sort_ratings(kept), mvecs, dropped, dropped_mvecs)
