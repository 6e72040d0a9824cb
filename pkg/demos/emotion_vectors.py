"""
Emotion vectors from plot text
==============================

A small synonym lexicon turns a movie overview into a seven-way emotion
vector. A viewer's profile is the mean of the vectors of what they watched.
"""

import numpy as np

from affectrec import EMOTIONS, EmotionClass, LexiconClassifier, SynonymLexicon
from affectrec.affect import UserProfile, update_uvec, user_uvec
from affectrec.emotion import classify_text, dominant_emotion

np.set_printoptions(precision=3, suppress=True)

lexicon = SynonymLexicon({
    EmotionClass.JOY: ["cheerful", "delight", "happy"],
    EmotionClass.SADNESS: ["grief", "lonely", "sorrow"],
    EmotionClass.HATE: ["despise", "loathe", "ill will"],
    EmotionClass.ANGER: ["fury", "rage", "revenge"],
    EmotionClass.DISGUST: ["repulsive", "sickening"],
    EmotionClass.SURPRISE: ["astonish", "sudden", "unexpected"],
})
clf = LexiconClassifier(lexicon)

overviews = {
    "crime saga": "An aging patriarch hands his empire to a son who comes to despise "
                  "and loathe the rivals; ill will turns to fury and revenge.",
    "family comedy": "A cheerful family finds delight in a happy, unexpected road trip.",
    "war drama": "Lonely soldiers carry their grief and sorrow through a sudden winter.",
    "blank": "",
}

# neutral gets a pseudo-count of one, so a text with no cue words is pure neutral
for title, text in overviews.items():
    v = classify_text(clf, text)
    print(f"{title:14s} {v}  -> {dominant_emotion(v).label}")

# the profile is the unweighted mean of the movie vectors
vecs = [classify_text(clf, t) for t in overviews.values()]
u = user_uvec(vecs)
print("\nprofile", u, "sum", u.sum())

# watching one more movie folds it in without revisiting the history
profile = UserProfile(1, u, len(vecs))
extra = classify_text(clf, "A repulsive, sickening twist.")
profile = update_uvec(profile, extra)
print("after one more", profile.uvec, "watched", profile.watch_count)
print("batch mean    ", user_uvec(vecs + [extra]))

print("\ncomponents:", ", ".join(e.label for e in EMOTIONS))
