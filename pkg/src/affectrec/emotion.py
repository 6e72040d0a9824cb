"""Text-to-emotion classification and classifier scoring.

An emotion vector is a length-7 float array in :class:`EmotionClass` order,
non-negative and summing to one. The built-in classifier is a lexicon
counter; vectors produced by any external model can be loaded from CSV.
"""

import csv
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import EMOTIONS, LEXICON_EMOTIONS, N_EMOTIONS, EmotionClass, SynonymLexicon

SUM_TOL = 1e-9
MVEC_COLUMNS = ["movieId"] + [f"m_{e.label}" for e in EMOTIONS]

_TOKEN_RE = re.compile(r"[^\W_]+")


class EmotionVectorError(ValueError):
    pass


def as_emotion_vector(values, *, renormalize: bool = False) -> np.ndarray:
    """Validate ``values`` as an emotion vector and return a float64 copy.

    With ``renormalize`` the vector is rescaled to sum to one (it must still be
    non-negative with a positive total); otherwise the sum must already be one
    within ``SUM_TOL``.
    """
    v = np.array(values, dtype=np.float64)
    if v.shape != (N_EMOTIONS,):
        raise EmotionVectorError(f"expected {N_EMOTIONS} components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise EmotionVectorError("emotion vector has non-finite components")
    if np.any(v < 0):
        raise EmotionVectorError(f"negative component in {v.tolist()}")
    total = v.sum()
    if renormalize:
        if total <= 0:
            raise EmotionVectorError("emotion vector is all zero")
        return v / total
    if abs(total - 1.0) > SUM_TOL:
        raise EmotionVectorError(f"components sum to {total!r}, not 1")
    return v


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


class LexiconClassifier:
    """Count lexicon hits per emotion; neutral receives a constant pseudo-count.

    Single-word terms match tokens, multiword terms match consecutive token
    windows. Every occurrence counts, so repeated words raise their emotion's
    weight. A term listed under several emotions scores for each of them.
    """

    def __init__(self, lexicon: SynonymLexicon, neutral_weight: float = 1.0):
        if not neutral_weight > 0:
            raise ValueError(f"neutral_weight must be positive, got {neutral_weight}")
        self.lexicon = lexicon
        self.neutral_weight = float(neutral_weight)
        self._index: dict[tuple[str, ...], list[int]] = {}
        for emotion in LEXICON_EMOTIONS:
            for term in lexicon.terms(emotion):
                key = tuple(tokenize(term))
                if key:
                    self._index.setdefault(key, []).append(int(emotion))
        self._max_len = max((len(k) for k in self._index), default=1)

    def scores(self, text: str) -> np.ndarray:
        tokens = tokenize(text)
        counts = np.zeros(N_EMOTIONS)
        counts[EmotionClass.NEUTRAL] = self.neutral_weight
        n = len(tokens)
        for i in range(n):
            for width in range(1, min(self._max_len, n - i) + 1):
                hit = self._index.get(tuple(tokens[i:i + width]))
                if hit:
                    for e in hit:
                        counts[e] += 1
        return counts

    def __call__(self, text: str) -> np.ndarray:
        return classify_text(self, text)


def classify_text(clf: LexiconClassifier, text: str) -> np.ndarray:
    counts = clf.scores(text)
    return counts / counts.sum()


def dominant_emotion(v) -> EmotionClass:
    """Index of the largest component; ties go to the lowest index."""
    return EmotionClass(int(np.argmax(np.asarray(v, dtype=np.float64))))


def load_precomputed_vectors(path) -> dict[int, np.ndarray]:
    """Read an mvec CSV into ``{movieId: vector}``; each row is renormalized."""
    vectors: dict[int, np.ndarray] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return vectors
        if [h.strip() for h in header] != MVEC_COLUMNS:
            raise EmotionVectorError(f"{path}: expected header {','.join(MVEC_COLUMNS)}")
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MVEC_COLUMNS):
                raise EmotionVectorError(f"{path}: row {rowno}: expected {len(MVEC_COLUMNS)} fields")
            try:
                movie_id = int(row[0])
                vec = as_emotion_vector([float(x) for x in row[1:]], renormalize=True)
            except ValueError as exc:
                raise EmotionVectorError(f"{path}: row {rowno}: {exc}") from None
            if movie_id in vectors:
                raise EmotionVectorError(f"{path}: row {rowno}: duplicate movieId {movie_id}")
            vectors[movie_id] = vec
    return vectors


def write_vectors(vectors: Mapping[int, np.ndarray], path) -> None:
    """Write an mvec CSV, rows sorted by movieId; floats use shortest round-trip repr."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MVEC_COLUMNS)
        for movie_id in sorted(vectors):
            writer.writerow([movie_id, *(repr(float(x)) for x in vectors[movie_id])])


def round_half_up(x: float, places: int = 2) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(x))).quantize(quantum, rounding=ROUND_HALF_UP))


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass
class MetricsReport:
    """Per-class and averaged classifier quality. Rows of ``confusion`` are gold labels."""

    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    confusion: np.ndarray

    @property
    def total(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.total)

    @property
    def macro_avg(self) -> tuple[float, float, float]:
        return (float(self.precision.mean()), float(self.recall.mean()), float(self.f1.mean()))

    @property
    def weighted_avg(self) -> tuple[float, float, float]:
        w = self.support / self.support.sum()
        return (float(w @ self.precision), float(w @ self.recall), float(w @ self.f1))

    def to_text(self) -> str:
        r = round_half_up
        lines = [f"{'':<14}{'precision':>10}{'recall':>10}{'f1-score':>10}{'support':>10}"]
        for e in EMOTIONS:
            lines.append(
                f"{e.label.capitalize():<14}{r(self.precision[e]):>10.2f}{r(self.recall[e]):>10.2f}"
                f"{r(self.f1[e]):>10.2f}{int(self.support[e]):>10d}"
            )
        lines.append(f"{'Accuracy':<14}{'':>10}{'':>10}{r(self.accuracy):>10.2f}{self.total:>10d}")
        for name, avg in (("Macro avg", self.macro_avg), ("Weighted avg", self.weighted_avg)):
            p, rc, f = avg
            lines.append(f"{name:<14}{r(p):>10.2f}{r(rc):>10.2f}{r(f):>10.2f}{self.total:>10d}")
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["class", "precision", "recall", "f1", "support"])
            for e in EMOTIONS:
                writer.writerow([
                    e.label, repr(float(self.precision[e])), repr(float(self.recall[e])),
                    repr(float(self.f1[e])), int(self.support[e]),
                ])


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=np.float64)
    np.divide(num, den, out=out, where=den > 0)
    return out


def evaluate_classifier(predicted: Sequence, gold: Sequence) -> MetricsReport:
    """Precision, recall and f1 per class from a 7x7 confusion matrix.

    Any ratio with a zero denominator is reported as 0.
    """
    if len(predicted) != len(gold):
        raise ValueError(f"length mismatch: {len(predicted)} predicted vs {len(gold)} gold")
    if not gold:
        raise ValueError("no records to evaluate")
    pred_ix = np.array([EmotionClass.parse(p) for p in predicted], dtype=np.int64)
    gold_ix = np.array([EmotionClass.parse(g) for g in gold], dtype=np.int64)
    confusion = np.zeros((N_EMOTIONS, N_EMOTIONS), dtype=np.int64)
    np.add.at(confusion, (gold_ix, pred_ix), 1)

    tp = np.diag(confusion).astype(np.float64)
    support = confusion.sum(axis=1)
    predicted_count = confusion.sum(axis=0)
    precision = _safe_div(tp, predicted_count)
    recall = _safe_div(tp, support)
    f1 = _safe_div(2 * precision * recall, precision + recall)
    return MetricsReport(precision, recall, f1, support, confusion)


def classify_corpus(clf: LexiconClassifier, texts: Iterable[str]) -> list[EmotionClass]:
    return [dominant_emotion(classify_text(clf, t)) for t in texts]


def read_label_file(path) -> list[EmotionClass]:
    """Read a single-column ``label`` CSV of predicted classes."""
    with open(Path(path), encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["label"]:
            raise ValueError(f"{path}: expected header 'label', got {header}")
        return [EmotionClass.parse(row[0]) for row in reader if row]
