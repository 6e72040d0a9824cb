"""Offline hit-rate evaluation of recommender lists and their emotion reranks.

For each user and split ratio, the user's history is ordered by time and cut
into a profile-building head and a held-out tail. The recommender's top-20
(``Mid``) is generated from the last movie of the head, reranked by every
metric, and each list's top-20/10/5 prefix is scored against the tail.
"""

import csv
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import groupby
from typing import Mapping, Sequence

import numpy as np

from .affect import user_uvec
from .recsys import FactorModel, RatingEvent, RecList, top_n_for_user, top_n_from_seed
from .rerank import Metric, default_metrics, rerank

_log = logging.getLogger(__name__)

MID = "Mid"
DEFAULT_SPLITS = tuple(f"{x}-{100 - x}" for x in range(10, 100, 10))
DEFAULT_N_LIST = (20, 10, 5)
# panel order of the reference report layout
PANEL_ORDER = (20, 5, 10)
WINNER_RULES = ("cell_wins", "mean")


class SkipUser(Exception):
    """Raised when a user cannot be evaluated; the message is the skip reason."""


def parse_split_label(label: str) -> float:
    """``"20-80"`` -> 0.2 (the first number is the training percentage)."""
    try:
        train, test = (int(x) for x in label.split("-"))
    except ValueError:
        raise ValueError(f"split label must look like '20-80', got {label!r}") from None
    if train + test != 100 or not 0 < train < 100:
        raise ValueError(f"split label {label!r} must be two positive percentages summing to 100")
    return train / 100


@dataclass(frozen=True)
class UserSplit:
    user_id: int
    train: tuple[RatingEvent, ...]
    validation: tuple[RatingEvent, ...]
    split_label: str = ""


def split_user_history(events: Sequence[RatingEvent], train_pct: float, split_label: str = "") -> UserSplit:
    """Chronological split: the first ``floor(train_pct * n)`` events (at least one) train."""
    if len(events) < 2:
        raise SkipUser(f"needs at least 2 rating events, has {len(events)}")
    ordered = sorted(events, key=lambda e: (e.timestamp, e.movie_id))
    n_train = max(1, math.floor(train_pct * len(ordered) + 1e-9))
    return UserSplit(ordered[0].user_id, tuple(ordered[:n_train]), tuple(ordered[n_train:]), split_label)


def hit_count(recommended: RecList, validation_ids) -> int:
    return len(set(recommended.movie_ids) & set(validation_ids))


def hit_rate(recommended: RecList, validation_ids) -> float:
    if len(recommended) == 0:
        raise ValueError("hit rate is undefined for an empty list")
    return 100.0 * hit_count(recommended, validation_ids) / len(recommended)


@dataclass
class UserResult:
    user_id: int
    split_label: str
    lists: dict[str, RecList]
    hits: dict[tuple[str, int], int]
    hit_pct: dict[tuple[str, int], float]


def evaluate_user(
    events: Sequence[RatingEvent],
    model: FactorModel,
    mvecs: Mapping[int, np.ndarray],
    split_label: str,
    metrics: Sequence[Metric] | None = None,
    n_list: Sequence[int] = DEFAULT_N_LIST,
    mode: str = "seed",
) -> UserResult:
    """Score one user's Mid list and its reranks at one split.

    Candidates are restricted to movies that have an mvec and are not in the
    user's training slice. Raises :class:`SkipUser` when the user cannot be
    scored.
    """
    metrics = default_metrics() if metrics is None else metrics
    split = split_user_history(events, parse_split_label(split_label), split_label)
    train_ids = [e.movie_id for e in split.train]
    profile_vecs = [mvecs[m] for m in train_ids if m in mvecs]
    if not profile_vecs:
        raise SkipUser("no training movie has an emotion vector")
    uvec = user_uvec(profile_vecs)

    exclude = set(train_ids)
    exclude.update(int(m) for m in model.item_ids if int(m) not in mvecs)
    n_max = max(n_list)
    if mode == "seed":
        seed = split.train[-1].movie_id
        if seed not in model.item_index:
            raise SkipUser(f"seed movie {seed} is not in the model")
        if seed not in mvecs:
            raise SkipUser(f"seed movie {seed} has no emotion vector")
        mid = top_n_from_seed(model, seed, n_max, exclude)
    elif mode == "user":
        if split.user_id not in model.user_index:
            raise SkipUser(f"user {split.user_id} is not in the model")
        mid = top_n_for_user(model, split.user_id, n_max, exclude)
    else:
        raise ValueError(f"unknown recommend mode {mode!r}")
    if len(mid) == 0:
        raise SkipUser("no candidate movies left to recommend")

    lists = {MID: RecList(mid.items, MID)}
    for metric in metrics:
        lists[metric.short] = rerank(mid, mvecs, uvec, metric)

    validation = {e.movie_id for e in split.validation}
    hits, pct = {}, {}
    for method, rl in lists.items():
        for n in n_list:
            head = rl.prefix(n)
            hits[method, n] = hit_count(head, validation)
            pct[method, n] = hit_rate(head, validation)
    return UserResult(split.user_id, split_label, lists, hits, pct)


@dataclass
class EvalReport:
    """Mean hit% per (split label, list length, method), averaged over evaluated users."""

    splits: list[str]
    n_list: list[int]
    methods: list[str]
    cells: dict[tuple[str, int, str], float]
    n_users: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, Counter] = field(default_factory=dict)
    details: list[UserResult] = field(default_factory=list)

    def cell(self, split: str, n: int, method: str) -> float:
        return self.cells[split, n, method]

    def panel(self, n: int) -> np.ndarray:
        return np.array([[self.cells[s, n, m] for m in self.methods] for s in self.splits])

    def _panels(self):
        return [n for n in PANEL_ORDER if n in self.n_list] + [n for n in self.n_list if n not in PANEL_ORDER]

    def to_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, delimiter="\t", lineterminator="\n")
            w.writerow(["Panel", "Split", *self.methods])
            for n in self._panels():
                for s in self.splits:
                    w.writerow([f"Top{n}", s, *(repr(float(self.cells[s, n, m])) for m in self.methods)])

    @classmethod
    def from_tsv(cls, path) -> "EvalReport":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter="\t")
            header = next(reader, None)
            if not header or header[:2] != ["Panel", "Split"]:
                raise ValueError(f"{path}: expected a Panel/Split report header")
            methods = header[2:]
            splits, n_list, cells = [], [], {}
            for row in reader:
                if not row:
                    continue
                n = int(row[0].removeprefix("Top"))
                if n not in n_list:
                    n_list.append(n)
                if row[1] not in splits:
                    splits.append(row[1])
                for m, v in zip(methods, row[2:]):
                    cells[row[1], n, m] = float(v)
        return cls(splits, n_list, methods, cells)

    def to_text(self) -> str:
        width = max(9, *(len(m) + 6 for m in self.methods))
        blocks = []
        for n in self._panels():
            head = f"{'Top' + str(n) + ' Split':<12}" + "".join(f"{m + ' Hit%':>{width}}" for m in self.methods)
            rows = [
                f"{s:<12}" + "".join(f"{self.cells[s, n, m]:>{width}.2f}" for m in self.methods)
                for s in self.splits
            ]
            blocks.append("\n".join([head, *rows]))
        return "\n".join(blocks) + "\n"

    def write_detail(self, path) -> None:
        """Per-user lists in ranked rows with trailing hit% rows, one block per (user, split)."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["userId", "split", "rank", *self.methods])
            for res in sorted(self.details, key=lambda r: (r.user_id, self.splits.index(r.split_label))):
                depth = max(len(res.lists[m]) for m in self.methods)
                for rank in range(depth):
                    ids = [res.lists[m].movie_ids[rank] if rank < len(res.lists[m]) else "" for m in self.methods]
                    w.writerow([res.user_id, res.split_label, rank + 1, *ids])
                for n in self._panels():
                    w.writerow([
                        res.user_id, res.split_label, f"T{n}%",
                        *(repr(res.hit_pct[m, n]) for m in self.methods),
                    ])


def run_experiment(
    ratings: Sequence[RatingEvent],
    model: FactorModel,
    mvecs: Mapping[int, np.ndarray],
    splits: Sequence[str] = DEFAULT_SPLITS,
    metrics: Sequence[Metric] | None = None,
    n_list: Sequence[int] = DEFAULT_N_LIST,
    mode: str = "seed",
    keep_details: bool = False,
) -> EvalReport:
    """Evaluate every user at every split and average hit% per cell.

    Each cell is the plain mean of per-user hit% over the users evaluated at
    that split. Skipped users are excluded from the mean and tallied by reason
    in ``report.skipped``.
    """
    metrics = default_metrics() if metrics is None else list(metrics)
    for s in splits:
        parse_split_label(s)
    methods = [MID] + [m.short for m in metrics]
    by_user = {
        uid: list(evs)
        for uid, evs in groupby(sorted(ratings, key=lambda e: (e.user_id, e.timestamp, e.movie_id)),
                                key=lambda e: e.user_id)
    }

    sums: dict[tuple[str, int, str], float] = defaultdict(float)
    n_users = dict.fromkeys(splits, 0)
    skipped = {s: Counter() for s in splits}
    details = []
    for split in splits:
        for uid in sorted(by_user):
            try:
                res = evaluate_user(by_user[uid], model, mvecs, split, metrics, n_list, mode)
            except SkipUser as exc:
                _log.debug("user %d skipped at %s: %s", uid, split, exc)
                skipped[split][_reason_key(str(exc))] += 1
                continue
            n_users[split] += 1
            for key, value in res.hit_pct.items():
                sums[(split, key[1], key[0])] += value
            if keep_details:
                details.append(res)

    empty = [s for s in splits if n_users[s] == 0]
    if empty:
        raise ValueError(f"no eligible users at split(s) {', '.join(empty)}")
    cells = {
        (s, n, m): sums[s, n, m] / n_users[s]
        for s in splits for n in n_list for m in methods
    }
    for s in splits:
        if sum(skipped[s].values()):
            _log.info("split %s: evaluated %d users, skipped %s", s, n_users[s], dict(skipped[s]))
    return EvalReport(list(splits), list(n_list), methods, cells, n_users, skipped, details)


def _reason_key(message: str) -> str:
    # collapse per-movie messages into one tally bucket
    if message.startswith("seed movie") and "not in the model" in message:
        return "seed not in model"
    if message.startswith("seed movie"):
        return "seed without emotion vector"
    if message.startswith("user"):
        return "user not in model"
    return message.split(",")[0]


def pick_winner(report: EvalReport, rule: str = "cell_wins") -> str:
    """Best-performing metric over the Top10 and Top5 panels.

    Top20 cells are ignored because a rerank never changes the top-20 set.
    ``cell_wins`` gives a point to every metric attaining the highest hit%
    in a (split, N) cell and picks the most points, with the mean hit% and
    then declaration order breaking ties. ``mean`` picks the highest mean
    hit% over those cells, declaration order breaking ties.
    """
    if rule not in WINNER_RULES:
        raise ValueError(f"rule must be one of {WINNER_RULES}, got {rule!r}")
    candidates = [m for m in report.methods if m != MID]
    panels = [n for n in report.n_list if n != 20] or list(report.n_list)
    grid = np.array([
        [report.cells[s, n, m] for m in candidates]
        for n in panels for s in report.splits
    ])
    means = grid.mean(axis=0)
    if rule == "mean":
        return candidates[int(np.argmax(means))]
    wins = (grid == grid.max(axis=1, keepdims=True)).sum(axis=0)
    best = max(range(len(candidates)), key=lambda j: (wins[j], means[j], -j))
    return candidates[best]
