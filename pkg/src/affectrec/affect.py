"""Movie emotion vectors (mvec) and user emotion profiles (uvec).

A user's profile is the unweighted mean of the mvecs of the movies they
watched. Movies without an mvec are left out of the mean, and the number
left out is reported to the caller.
"""

import csv
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .corpus import EMOTIONS
from .emotion import as_emotion_vector

UVEC_COLUMNS = ["userId", "watch_count"] + [f"u_{e.label}" for e in EMOTIONS]


@dataclass(frozen=True)
class MovieAffect:
    movie_id: int
    mvec: np.ndarray

    def __post_init__(self):
        v = as_emotion_vector(self.mvec)
        v.setflags(write=False)
        object.__setattr__(self, "mvec", v)


@dataclass(frozen=True)
class UserProfile:
    user_id: int
    uvec: np.ndarray
    watch_count: int

    def __post_init__(self):
        if self.watch_count < 1:
            raise ValueError("a profile needs at least one watched movie")


def movie_mvec(overview: str | None, clf: Callable[[str], np.ndarray]) -> np.ndarray:
    """Emotion vector of a movie overview under ``clf`` (any text -> vector callable)."""
    return as_emotion_vector(clf(overview or ""))


def user_uvec(mvecs: Sequence) -> np.ndarray:
    if len(mvecs) == 0:
        raise ValueError("user profile is undefined without watched movies")
    return np.mean(np.asarray(mvecs, dtype=np.float64), axis=0)


def update_uvec(profile: UserProfile, new_mvec) -> UserProfile:
    n = profile.watch_count
    uvec = (profile.uvec * n + np.asarray(new_mvec, dtype=np.float64)) / (n + 1)
    return UserProfile(profile.user_id, uvec, n + 1)


def profile_from_movies(
    user_id: int, movie_ids: Iterable[int], mvecs: Mapping[int, np.ndarray]
) -> tuple[UserProfile | None, int]:
    """Build a profile from watched movie ids.

    Returns ``(profile, n_excluded)``; the profile is None when no watched
    movie carries an mvec.
    """
    found, excluded = [], 0
    for m in movie_ids:
        v = mvecs.get(m)
        if v is None:
            excluded += 1
        else:
            found.append(v)
    if not found:
        return None, excluded
    return UserProfile(user_id, user_uvec(found), len(found)), excluded


def write_profiles(profiles: Iterable[UserProfile], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(UVEC_COLUMNS)
        for p in sorted(profiles, key=lambda p: p.user_id):
            writer.writerow([p.user_id, p.watch_count, *(repr(float(x)) for x in p.uvec)])


def read_profiles(path) -> dict[int, UserProfile]:
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != UVEC_COLUMNS:
            raise ValueError(f"{path}: expected header {','.join(UVEC_COLUMNS)}")
        for row in reader:
            if row:
                uid = int(row[0])
                out[uid] = UserProfile(uid, np.array([float(x) for x in row[2:]]), int(row[1]))
    return out
