import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affectrec.corpus import EMOTIONS, EmotionClass, SynonymLexicon
from affectrec.emotion import (
    EmotionVectorError,
    LexiconClassifier,
    as_emotion_vector,
    classify_text,
    dominant_emotion,
    evaluate_classifier,
    f1_score,
    load_precomputed_vectors,
    round_half_up,
    tokenize,
    write_vectors,
)

LEXICON = SynonymLexicon({
    EmotionClass.JOY: ["glad", "happy", "walking on air"],
    EmotionClass.SADNESS: ["grief", "sorrow"],
    EmotionClass.HATE: ["detest", "ill_will"],
    EmotionClass.ANGER: ["abhor", "rage", "fury"],
    EmotionClass.DISGUST: ["vile"],
    EmotionClass.SURPRISE: ["shock", "wonder"],
})
SINGLE_WORD = SynonymLexicon({
    EmotionClass.JOY: ["glad", "happy"],
    EmotionClass.ANGER: ["abhor", "rage"],
    EmotionClass.SURPRISE: ["shock"],
})

GODFATHER_BALANCED = [0.0840931, 0.059261046, 0.08991193, 0.23262443, 0.20177138, 0.19720455, 0.13513364]
GODFATHER_UNBALANCED = [0.04276474, 0.16501102, 0.076094896, 0.4305178, 0.1993026, 0.053966276, 0.03234269]


def test_tokenize():
    assert tokenize("Don't STOP-me, now!! x_y 42") == ["don", "t", "stop", "me", "now", "x", "y", "42"]


def test_empty_text_is_pure_neutral():
    v = classify_text(LexiconClassifier(LEXICON), "")
    assert v.tolist() == [1, 0, 0, 0, 0, 0, 0]


def test_repeated_term_counts_twice():
    v = classify_text(LexiconClassifier(LEXICON), "abhor abhor")
    np.testing.assert_allclose(v, [1 / 3, 0, 0, 0, 2 / 3, 0, 0], rtol=0, atol=1e-15)


def test_twenty_token_text_matches_hand_count():
    text = (
        "The glad girl felt grief and sorrow , then rage and fury turned to shock ; "
        "happy endings are vile yet happy"
    )
    tokens = text.split()
    assert len([t for t in tokens if t.isalpha()]) == 20
    # hand count: joy glad,happy,happy=3; sadness grief,sorrow=2; anger rage,fury=2;
    # surprise shock=1; disgust vile=1; neutral alpha=1
    expected = np.array([1, 3, 2, 0, 2, 1, 1]) / 10
    np.testing.assert_allclose(classify_text(LexiconClassifier(LEXICON), text), expected, atol=1e-15)


def test_multiword_terms_match_windows():
    clf = LexiconClassifier(LEXICON, neutral_weight=2.0)
    v = classify_text(clf, "Out of ILL-WILL he was walking on air")
    np.testing.assert_allclose(v, np.array([2, 1, 0, 1, 0, 0, 0]) / 4, atol=1e-15)


def test_neutral_weight_must_be_positive():
    with pytest.raises(ValueError):
        LexiconClassifier(LEXICON, neutral_weight=0)


@settings(max_examples=300, deadline=None)
@given(st.text())
def test_classify_is_on_simplex(text):
    v = classify_text(LexiconClassifier(LEXICON, 0.5), text)
    assert np.all(v >= 0)
    assert abs(v.sum() - 1) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["glad", "happy", "abhor", "rage", "shock", "the", "man", "x9"]), max_size=30),
       st.randoms(use_true_random=False))
def test_classify_ignores_token_order(words, rnd):
    clf = LexiconClassifier(SINGLE_WORD)
    shuffled = list(words)
    rnd.shuffle(shuffled)
    np.testing.assert_array_equal(classify_text(clf, " ".join(words)), classify_text(clf, " ".join(shuffled)))


@pytest.mark.parametrize("vec", [GODFATHER_BALANCED, GODFATHER_UNBALANCED])
def test_godfather_is_hate_dominant(vec):
    assert dominant_emotion(vec) is EmotionClass.HATE


def test_dominant_tie_goes_to_lowest_index():
    assert dominant_emotion(np.full(7, 1 / 7)) is EmotionClass.NEUTRAL
    assert dominant_emotion([0, 0.5, 0, 0, 0.5, 0, 0]) is EmotionClass.JOY


def test_as_emotion_vector_checks():
    with pytest.raises(EmotionVectorError):
        as_emotion_vector([0.5, 0.5])
    with pytest.raises(EmotionVectorError):
        as_emotion_vector([1.1, -0.1, 0, 0, 0, 0, 0])
    with pytest.raises(EmotionVectorError):
        as_emotion_vector([0.5] * 7)
    np.testing.assert_allclose(as_emotion_vector([1] * 7, renormalize=True), np.full(7, 1 / 7))


HEADER = "movieId,m_neutral,m_joy,m_sadness,m_hate,m_anger,m_disgust,m_surprise\n"


def test_load_slevin_row_renormalizes(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "44665,0.204775,0.075458,0.127180,0.171851,0.112534,0.166984,0.141217\n")
    vecs = load_precomputed_vectors(path)
    raw = np.array([0.204775, 0.075458, 0.127180, 0.171851, 0.112534, 0.166984, 0.141217])
    assert abs(raw.sum() - 0.999999) < 1e-12
    np.testing.assert_allclose(vecs[44665], raw / raw.sum(), rtol=1e-15)
    assert abs(vecs[44665].sum() - 1) <= 1e-9


def test_load_three_rows_each_sum_to_one(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "1,1,2,3,4,5,6,7\n2,0,0,0,0,0,0,3\n3,0.1,0.1,0.1,0.1,0.1,0.1,0.3\n")
    vecs = load_precomputed_vectors(path)
    assert sorted(vecs) == [1, 2, 3]
    for v in vecs.values():
        assert abs(sum(float(x) for x in v) - 1) <= 1e-9
    np.testing.assert_allclose(vecs[1], np.arange(1, 8) / 28)


def test_load_rejects_negative_with_row(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "1,0.2,0.2,0.2,0.2,0.2,0.1,0.0\n2,0.6,0.1,0.1,0.1,0.1,0.1,-0.1\n")
    with pytest.raises(EmotionVectorError, match="row 3"):
        load_precomputed_vectors(path)


def test_load_rejects_duplicate(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "1,1,0,0,0,0,0,0\n1,0,1,0,0,0,0,0\n")
    with pytest.raises(EmotionVectorError, match="duplicate"):
        load_precomputed_vectors(path)


def test_vectors_round_trip_exactly(tmp_path):
    rng = np.random.default_rng(0)
    vecs = {int(m): rng.dirichlet(np.ones(7)) for m in rng.choice(1000, 20, replace=False)}
    path = tmp_path / "m.csv"
    write_vectors(vecs, path)
    back = load_precomputed_vectors(path)
    for m, v in vecs.items():
        np.testing.assert_allclose(back[m], v, rtol=0, atol=1e-15)


def test_round_half_up():
    assert round_half_up(0.125) == 0.13
    assert round_half_up(0.5837) == 0.58
    assert round_half_up(0.555) == 0.56


def test_f1_formula_on_neutral_row():
    assert f1_score(0.47, 0.77) == pytest.approx(2 * 0.47 * 0.77 / 1.24)
    assert abs(f1_score(0.47, 0.77) - 0.584) < 1e-3
    assert f1_score(0, 0) == 0


def test_rounded_inputs_leave_room_for_059():
    # 0.47/0.77 are themselves rounded; the unrounded pair can reach past 0.585
    lo, hi = f1_score(0.465, 0.765), f1_score(0.475, 0.775)
    assert lo < 0.585 <= hi
    assert round_half_up(hi, 2) == 0.59


def test_perfect_predictions():
    labels = [e for e in EMOTIONS for _ in range(3)]
    rep = evaluate_classifier(labels, labels)
    assert np.all(rep.precision == 1) and np.all(rep.recall == 1) and np.all(rep.f1 == 1)
    assert rep.accuracy == 1
    np.testing.assert_array_equal(rep.confusion, 3 * np.eye(7, dtype=int))


def _brute_force(pred, gold):
    out = {}
    for c in range(7):
        tp = sum(1 for p, g in zip(pred, gold) if p == c and g == c)
        fp = sum(1 for p, g in zip(pred, gold) if p == c and g != c)
        fn = sum(1 for p, g in zip(pred, gold) if p != c and g == c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        out[c] = (prec, rec, f1, tp + fn)
    return out


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_metrics_match_tabulation(seed):
    rng = np.random.default_rng(seed)
    gold = rng.integers(0, 7, 30).tolist()
    pred = [g if rng.random() < 0.5 else int(rng.integers(0, 7)) for g in gold]
    rep = evaluate_classifier(pred, gold)
    oracle = _brute_force(pred, gold)
    for c in range(7):
        p, r, f, s = oracle[c]
        assert rep.precision[c] == pytest.approx(p)
        assert rep.recall[c] == pytest.approx(r)
        assert rep.f1[c] == pytest.approx(f)
        assert rep.support[c] == s
    assert rep.accuracy == pytest.approx(sum(p == g for p, g in zip(pred, gold)) / 30)
    assert rep.accuracy == np.trace(rep.confusion) / rep.total
    np.testing.assert_array_equal(rep.confusion.sum(axis=1), rep.support)
    assert rep.total == 30
    supports = np.array([oracle[c][3] for c in range(7)])
    f1s = np.array([oracle[c][2] for c in range(7)])
    assert rep.macro_avg[2] == pytest.approx(f1s.mean())
    assert rep.weighted_avg[2] == pytest.approx((f1s * supports).sum() / supports.sum())


def test_metrics_length_mismatch():
    with pytest.raises(ValueError):
        evaluate_classifier([0, 1], [0])


def test_report_outputs(tmp_path):
    rep = evaluate_classifier(["joy", "joy", "anger", "neutral"], ["joy", "anger", "anger", "neutral"])
    text = rep.to_text()
    assert "Macro avg" in text and "Weighted avg" in text and "Accuracy" in text
    rep.to_csv(tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "class,precision,recall,f1,support"
    assert len(lines) == 8
