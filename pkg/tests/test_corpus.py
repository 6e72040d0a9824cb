import numpy as np
import pytest

from affectrec.corpus import (
    EMOTIONS,
    CorpusError,
    EmotionClass,
    InsufficientDataError,
    Record,
    SynonymLexicon,
    balance_corpus,
    class_histogram,
    load_wordnet_dir,
    parse_wordnet_affect_lists,
    read_corpus,
    read_lexicon,
    split_corpus,
    write_corpus,
    write_lexicon,
)


def test_emotion_order_is_canonical():
    assert [e.label for e in EMOTIONS] == [
        "neutral", "joy", "sadness", "hate", "anger", "disgust", "surprise"
    ]
    assert [int(e) for e in EMOTIONS] == list(range(7))


@pytest.mark.parametrize("value", ["hate", "HATE", " Hate ", 3, "3", EmotionClass.HATE])
def test_emotion_parse(value):
    assert EmotionClass.parse(value) is EmotionClass.HATE


def test_emotion_parse_rejects_unknown():
    with pytest.raises(ValueError):
        EmotionClass.parse("fear")


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_parse_dedupes_and_sorts(tmp_path):
    anger = _write(tmp_path, "anger.txt", "a#1 abhor\na#2 abhor\na#3 detest\n")
    lex = parse_wordnet_affect_lists([anger])
    assert lex.terms("anger") == ("abhor", "detest")


def test_parse_empty_file(tmp_path):
    lex = parse_wordnet_affect_lists([_write(tmp_path, "joy.txt", "")])
    assert lex.terms("joy") == ()
    assert lex.terms("neutral") == ()


def test_parse_normalizes_terms(tmp_path):
    path = _write(tmp_path, "hate.txt", "n#1 Ill_Will\nn#2 SPITE\n\n")
    assert parse_wordnet_affect_lists([path]).terms("hate") == ("ill will", "spite")


def test_parse_reports_file_and_line(tmp_path):
    path = _write(tmp_path, "sadness.txt", "n#1 grief\nn#2 sorrow woe\n")
    with pytest.raises(CorpusError, match=r"sadness\.txt:2"):
        parse_wordnet_affect_lists([path])


def test_parse_rejects_neutral_file(tmp_path):
    with pytest.raises(CorpusError):
        parse_wordnet_affect_lists([_write(tmp_path, "neutral.txt", "n#1 calm\n")])


def test_load_wordnet_dir_requires_all_six(tmp_path):
    _write(tmp_path, "joy.txt", "a#1 glad\n")
    with pytest.raises(FileNotFoundError):
        load_wordnet_dir(tmp_path)


def test_lexicon_csv_round_trip(tmp_path):
    lex = SynonymLexicon({EmotionClass.JOY: ["glad", "happy", "jolly good"], EmotionClass.ANGER: ["rage"]})
    paths = write_lexicon(lex, tmp_path)
    assert len(paths) == 6
    assert (tmp_path / "joy.csv").read_bytes() == b"term\nglad\nhappy\njolly good\n"
    assert read_lexicon(tmp_path) == lex
    # writing what was read is a fixed point
    write_lexicon(read_lexicon(tmp_path), tmp_path / "again")
    assert read_lexicon(tmp_path / "again") == lex


def test_neutral_lexicon_rejected():
    with pytest.raises(CorpusError):
        SynonymLexicon({EmotionClass.NEUTRAL: ["calm"]})


def _synthetic_corpus(sizes, seed=0):
    rng = np.random.default_rng(seed)
    records = []
    for emotion, n in zip(EMOTIONS, sizes):
        records.extend(Record(f"{emotion.label} text {i} {rng.integers(1e9)}", emotion) for i in range(n))
    order = rng.permutation(len(records))
    return [records[i] for i in order]


def test_balance_histogram_is_flat():
    corpus = _synthetic_corpus([30, 50, 40, 31, 60, 45, 33])
    out = balance_corpus(corpus, 30, seed=4)
    assert set(class_histogram(out).values()) == {30}
    assert set(out) <= set(corpus)


def test_balance_smallest_class_passes_intact():
    corpus = _synthetic_corpus([30, 50, 40, 31, 60, 45, 33])
    out = balance_corpus(corpus, 30, seed=1)
    neutral_in = {r for r in corpus if r.label == EmotionClass.NEUTRAL}
    assert {r for r in out if r.label == EmotionClass.NEUTRAL} == neutral_in


def test_balance_is_deterministic():
    corpus = _synthetic_corpus([20] * 7)
    assert balance_corpus(corpus, 10, 7) == balance_corpus(corpus, 10, 7)
    assert balance_corpus(corpus, 10, 7) != balance_corpus(corpus, 10, 8)


def test_balance_insufficient_names_class():
    corpus = _synthetic_corpus([20, 20, 20, 5, 20, 20, 20])
    with pytest.raises(InsufficientDataError, match="hate"):
        balance_corpus(corpus, 10, 0)


def test_split_two_records():
    corpus = [Record("a", EmotionClass.JOY), Record("b", EmotionClass.JOY)]
    train, test = split_corpus(corpus, 0.5, seed=0)
    assert len(train) == 1 and len(test) == 1


def test_split_set_algebra_on_random_corpus():
    rng = np.random.default_rng(42)
    corpus = [Record(f"t{i}", EMOTIONS[rng.integers(7)]) for i in range(100)]
    train, test = split_corpus(corpus, 0.7, seed=3)
    # membership oracle
    train_set, test_set = set(train), set(test)
    assert train_set.isdisjoint(test_set)
    assert train_set | test_set == set(corpus)
    hist, h_train = class_histogram(corpus), class_histogram(train)
    for e in EMOTIONS:
        assert h_train[e] == int(np.floor(0.7 * hist[e] + 1e-9))


def test_split_rejects_bad_input():
    with pytest.raises(CorpusError):
        split_corpus([], 0.8, 0)
    with pytest.raises(CorpusError):
        split_corpus([Record("a", EmotionClass.JOY)], 1.0, 0)


def test_corpus_csv_quoting_round_trip(tmp_path):
    records = [
        Record('he said "no", then left', EmotionClass.ANGER),
        Record("line one\nline two", EmotionClass.SADNESS),
        Record("plain", EmotionClass.NEUTRAL),
    ]
    path = tmp_path / "c.csv"
    write_corpus(records, path)
    assert path.read_bytes().startswith(b"text,label\n")
    assert read_corpus(path) == records


def test_corpus_csv_bad_label(tmp_path):
    path = _write(tmp_path, "c.csv", "text,label\nhello,fear\n")
    with pytest.raises(CorpusError, match="row 2"):
        read_corpus(path)
