"""Emotion classes, WordNet-Affect synonym lexicons and labeled text corpora."""

import csv
import enum
import math
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np


class EmotionClass(enum.IntEnum):
    """The seven emotion classes, in the canonical index order used by every vector."""

    NEUTRAL = 0
    JOY = 1
    SADNESS = 2
    HATE = 3
    ANGER = 4
    DISGUST = 5
    SURPRISE = 6

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "EmotionClass":
        """Accept an EmotionClass, an index, or a (case-insensitive) name."""
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value))
        text = str(value).strip()
        if text.isdigit():
            return cls(int(text))
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"unknown emotion class {value!r}") from None


EMOTIONS = tuple(EmotionClass)
N_EMOTIONS = len(EMOTIONS)
# neutral has no WordNet-Affect list
LEXICON_EMOTIONS = EMOTIONS[1:]


class CorpusError(ValueError):
    pass


class InsufficientDataError(CorpusError):
    pass


def normalize_term(term: str) -> str:
    return " ".join(term.replace("_", " ").split()).lower()


class SynonymLexicon:
    """Sorted, duplicate-free synonym sets for the six lexicon emotions.

    Neutral always maps to an empty tuple.
    """

    def __init__(self, terms: dict | None = None):
        terms = terms or {}
        self._terms = {}
        for emotion in EMOTIONS:
            raw = terms.get(emotion, ())
            if emotion is EmotionClass.NEUTRAL and raw:
                raise CorpusError("neutral class cannot carry lexicon terms")
            cleaned = {normalize_term(t) for t in raw}
            cleaned.discard("")
            self._terms[emotion] = tuple(sorted(cleaned))

    def terms(self, emotion) -> tuple[str, ...]:
        return self._terms[EmotionClass.parse(emotion)]

    def counts(self) -> dict[EmotionClass, int]:
        return {e: len(self._terms[e]) for e in LEXICON_EMOTIONS}

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if not isinstance(other, SynonymLexicon):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        counts = ", ".join(f"{e.label}={n}" for e, n in self.counts().items())
        return f"SynonymLexicon({counts})"


def parse_wordnet_affect_lists(files: Iterable) -> SynonymLexicon:
    """Build a lexicon from WordNet-Affect emotion files named ``<emotion>.txt``.

    Each non-blank line must hold exactly two whitespace-separated columns,
    a synset id and a synonym; only the synonym is kept.
    """
    terms: dict[EmotionClass, set[str]] = {}
    for path in map(Path, files):
        emotion = EmotionClass.parse(path.stem)
        if emotion is EmotionClass.NEUTRAL:
            raise CorpusError(f"{path}: neutral has no WordNet-Affect list")
        bucket = terms.setdefault(emotion, set())
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                cols = line.split()
                if not cols:
                    continue
                if len(cols) != 2:
                    raise CorpusError(
                        f"{path}:{lineno}: expected 2 columns (synset, term), got {len(cols)}"
                    )
                bucket.add(cols[1])
    return SynonymLexicon(terms)


def load_wordnet_dir(directory) -> SynonymLexicon:
    directory = Path(directory)
    files = [directory / f"{e.label}.txt" for e in LEXICON_EMOTIONS]
    missing = [str(f) for f in files if not f.exists()]
    if missing:
        raise FileNotFoundError(f"missing WordNet-Affect files: {', '.join(missing)}")
    return parse_wordnet_affect_lists(files)


def write_lexicon(lexicon: SynonymLexicon, directory) -> list[Path]:
    """Write one ``<emotion>.csv`` per lexicon emotion with a single ``term`` column."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for emotion in LEXICON_EMOTIONS:
        path = directory / f"{emotion.label}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["term"])
            writer.writerows([t] for t in lexicon.terms(emotion))
        written.append(path)
    return written


def read_lexicon(directory) -> SynonymLexicon:
    directory = Path(directory)
    terms = {}
    for emotion in LEXICON_EMOTIONS:
        path = directory / f"{emotion.label}.csv"
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["term"]:
                raise CorpusError(f"{path}: expected header 'term', got {header}")
            terms[emotion] = [row[0] for row in reader if row]
    return SynonymLexicon(terms)


class Record(NamedTuple):
    text: str
    label: EmotionClass


def read_corpus(path) -> list[Record]:
    """Read a ``text,label`` CSV; labels may be names or indices."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["text", "label"]:
            raise CorpusError(f"{path}: expected header 'text,label', got {header}")
        for rowno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise CorpusError(f"{path}: row {rowno}: expected 2 fields, got {len(row)}")
            try:
                label = EmotionClass.parse(row[1])
            except ValueError as exc:
                raise CorpusError(f"{path}: row {rowno}: {exc}") from None
            records.append(Record(row[0], label))
    return records


def write_corpus(corpus: Iterable[Record], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["text", "label"])
        for rec in corpus:
            writer.writerow([rec.text, EmotionClass.parse(rec.label).label])


def class_histogram(corpus: Iterable[Record]) -> dict[EmotionClass, int]:
    hist = dict.fromkeys(EMOTIONS, 0)
    for rec in corpus:
        hist[EmotionClass.parse(rec.label)] += 1
    return hist


def _indices_by_class(corpus) -> dict[EmotionClass, np.ndarray]:
    groups: dict[EmotionClass, list[int]] = {e: [] for e in EMOTIONS}
    for i, rec in enumerate(corpus):
        groups[EmotionClass.parse(rec.label)].append(i)
    return {e: np.asarray(ix, dtype=np.int64) for e, ix in groups.items()}


def balance_corpus(corpus: list[Record], n_per_class: int, seed: int) -> list[Record]:
    """Subsample every class to exactly ``n_per_class`` records.

    Sampling is uniform without replacement from ``numpy.random.default_rng(seed)``
    (PCG64), visiting classes in canonical order. Kept records retain their
    original relative order.
    """
    groups = _indices_by_class(corpus)
    for emotion, ix in groups.items():
        if len(ix) < n_per_class:
            raise InsufficientDataError(
                f"class {emotion.label!r} has {len(ix)} records, need {n_per_class}"
            )
    rng = np.random.default_rng(seed)
    keep = []
    for emotion in EMOTIONS:
        keep.append(rng.choice(groups[emotion], size=n_per_class, replace=False))
    chosen = np.sort(np.concatenate(keep)) if keep else np.empty(0, dtype=np.int64)
    return [corpus[i] for i in chosen]


def split_corpus(corpus: list[Record], train_frac: float, seed: int):
    """Stratified train/test split; each class puts ``floor(train_frac * size)`` in train."""
    if not corpus:
        raise CorpusError("cannot split an empty corpus")
    if not 0.0 < train_frac < 1.0:
        raise CorpusError(f"train_frac must lie in (0, 1), got {train_frac}")
    rng = np.random.default_rng(seed)
    train_ix, test_ix = [], []
    for emotion, ix in _indices_by_class(corpus).items():
        order = rng.permutation(ix)
        # guard against 0.29 * 100 = 28.999...
        n_train = math.floor(train_frac * len(ix) + 1e-9)
        train_ix.append(order[:n_train])
        test_ix.append(order[n_train:])
    train = [corpus[i] for i in np.sort(np.concatenate(train_ix))]
    test = [corpus[i] for i in np.sort(np.concatenate(test_ix))]
    return train, test
