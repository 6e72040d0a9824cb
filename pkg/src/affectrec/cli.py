"""Command-line pipeline: lexicon -> corpus -> mvecs -> model -> lists -> report.

Settings come from built-in defaults, then a ``key = value`` config file
(``--config`` or ``$AFFECTREC_CONFIG``), then command-line flags of the same
name; later sources win.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import emotion, evaluation, ingest, recsys
from .affect import profile_from_movies
from .recsys import Hyper
from .rerank import default_metrics, read_reclists, rerank, write_reclists

_log = logging.getLogger("affectrec")

CONFIG_ENV = "AFFECTREC_CONFIG"
# per-module offsets added to the single ``seed`` setting
SEED_OFFSETS = {"balance": 11, "split": 12, "train": 31}

PATH_KEYS = (
    "ratings", "movies", "links", "overviews", "wordnet_dir", "lexicon_dir",
    "mvecs", "corpus", "model", "recs", "predictions", "replay",
)
DEFAULTS = {
    **dict.fromkeys(PATH_KEYS),
    "out": "out",
    "seed": 0,
    "k": 50,
    "lr": 0.005,
    "reg": 0.02,
    "epochs": 20,
    "alpha": 1.0,
    "minkowski_p": 3.0,
    "n_per_class": None,
    "train_frac": 0.8,
    "splits": ",".join(evaluation.DEFAULT_SPLITS),
    "n_list": "20,10,5",
    "mode": "seed",
    "n": 20,
    "user": None,
    "movie": None,
    "detail": False,
}
TYPES = {
    "seed": int, "k": int, "epochs": int, "n": int, "n_per_class": int, "user": int, "movie": int,
    "lr": float, "reg": float, "alpha": float, "minkowski_p": float, "train_frac": float,
}


class ConfigError(ValueError):
    pass


def _coerce(key, value):
    if value is None:
        return None
    if key == "detail":
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text not in ("1", "0", "true", "false", "yes", "no"):
            raise ConfigError(f"detail must be a boolean, got {value!r}")
        return text in ("1", "true", "yes")
    conv = TYPES.get(key)
    if conv is None:
        return str(value)
    try:
        return conv(value)
    except ValueError:
        raise ConfigError(f"{key} expects {conv.__name__}, got {value!r}") from None


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys read as underscores."""
    settings = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            settings[key] = _coerce(key, value)
    return settings


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    config_path = args.config or os.environ.get(CONFIG_ENV)
    if config_path:
        settings.update(read_config(config_path))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and not (key == "detail" and value is False):
            settings[key] = _coerce(key, value)
    _validate_ranges(settings)
    return settings


def _validate_ranges(s):
    for key in ("k", "epochs", "n"):
        if s[key] < 1:
            raise ConfigError(f"{key} must be at least 1")
    for key in ("lr", "alpha", "minkowski_p"):
        if not s[key] > 0:
            raise ConfigError(f"{key} must be positive")
    if s["reg"] < 0:
        raise ConfigError("reg must be non-negative")
    if not 0 < s["train_frac"] < 1:
        raise ConfigError("train_frac must lie in (0, 1)")
    if s["mode"] not in ("seed", "user"):
        raise ConfigError("mode must be 'seed' or 'user'")


def _require(s, *keys):
    missing = [k for k in keys if not s.get(k)]
    if missing:
        raise ConfigError("missing setting(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    for k in keys:
        if k in PATH_KEYS and not Path(s[k]).exists():
            raise FileNotFoundError(f"{k}: {s[k]} does not exist")


def _out(s) -> Path:
    out = Path(s["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _hyper(s) -> Hyper:
    return Hyper(
        k=s["k"], learning_rate=s["lr"], regularization=s["reg"], epochs=s["epochs"],
        seed=s["seed"] + SEED_OFFSETS["train"],
    )


def _int_list(text) -> list[int]:
    return [int(x) for x in str(text).split(",") if x.strip()]


def _str_list(text) -> list[str]:
    return [x.strip() for x in str(text).split(",") if x.strip()]


def cmd_build_lexicon(s):
    _require(s, "wordnet_dir")
    lexicon = corpus_mod.load_wordnet_dir(s["wordnet_dir"])
    corpus_mod.write_lexicon(lexicon, _out(s) / "lexicon")
    for emotion_class, count in lexicon.counts().items():
        print(f"{emotion_class.label}\t{count}")


def cmd_prep_corpus(s):
    _require(s, "corpus")
    records = corpus_mod.read_corpus(s["corpus"])
    hist = corpus_mod.class_histogram(records)
    n = s["n_per_class"] if s["n_per_class"] is not None else min(hist.values())
    balanced = corpus_mod.balance_corpus(records, n, s["seed"] + SEED_OFFSETS["balance"])
    train, test = corpus_mod.split_corpus(balanced, s["train_frac"], s["seed"] + SEED_OFFSETS["split"])
    out = _out(s)
    corpus_mod.write_corpus(train, out / "corpus_train.csv")
    corpus_mod.write_corpus(test, out / "corpus_test.csv")
    print(f"balanced={len(balanced)} per_class={n} train={len(train)} test={len(test)}")


def cmd_classify(s):
    _require(s, "movies", "links", "overviews", "lexicon_dir")
    clf = emotion.LexiconClassifier(corpus_mod.read_lexicon(s["lexicon_dir"]), s["alpha"])
    movies = ingest.load_movies_and_links(s["movies"], s["links"])
    movies, coverage = ingest.attach_overviews(movies, s["overviews"])
    vectors = {
        m: emotion.classify_text(clf, rec.overview)
        for m, rec in sorted(movies.items()) if rec.overview is not None
    }
    emotion.write_vectors(vectors, _out(s) / "mvecs.csv")
    print(f"movies={coverage.movies} overviews={coverage.overviews} unmatched={coverage.unmatched_overviews}")


def cmd_eval_classifier(s):
    _require(s, "corpus")
    records = corpus_mod.read_corpus(s["corpus"])
    gold = [r.label for r in records]
    if s["predictions"]:
        _require(s, "predictions")
        predicted = emotion.read_label_file(s["predictions"])
    else:
        _require(s, "lexicon_dir")
        clf = emotion.LexiconClassifier(corpus_mod.read_lexicon(s["lexicon_dir"]), s["alpha"])
        predicted = emotion.classify_corpus(clf, (r.text for r in records))
    report = emotion.evaluate_classifier(predicted, gold)
    out = _out(s)
    text = report.to_text()
    report.to_csv(out / "classifier_metrics.csv")
    (out / "classifier_metrics.txt").write_text(text, encoding="utf-8")
    print(text, end="")


def cmd_train(s):
    _require(s, "ratings")
    ratings = ingest.load_ratings(s["ratings"])
    model = recsys.train(ratings, _hyper(s))
    recsys.save_model(model, _out(s) / "model.csv")
    print(f"users={len(model.user_ids)} items={len(model.item_ids)} k={model.k} train_rmse={model.rmse_history[-1]:.6f}")


def _user_history(s):
    _require(s, "ratings")
    events = [e for e in ingest.load_ratings(s["ratings"]) if e.user_id == s["user"]]
    if not events:
        raise ConfigError(f"user {s['user']} has no ratings")
    return events


def cmd_recommend(s):
    _require(s, "model")
    model = recsys.load_model(s["model"])
    exclude = set()
    if s["user"] is not None and s["ratings"]:
        history = _user_history(s)
        exclude = {e.movie_id for e in history}
    if s["mode"] == "seed":
        seed = s["movie"]
        if seed is None:
            if s["user"] is None:
                raise ConfigError("seed mode needs --movie or --user with --ratings")
            seed = _user_history(s)[-1].movie_id
        recs = recsys.top_n_from_seed(model, seed, s["n"], exclude)
    else:
        if s["user"] is None:
            raise ConfigError("user mode needs --user")
        recs = recsys.top_n_for_user(model, s["user"], s["n"], exclude)
    write_reclists([recs], _out(s) / "recs.csv")
    for rank, (movie_id, score) in enumerate(recs, start=1):
        print(f"{rank}\t{movie_id}\t{score:.6f}")


def cmd_rerank(s):
    _require(s, "recs", "mvecs", "ratings")
    if s["user"] is None:
        raise ConfigError("rerank needs --user to build the emotion profile")
    lists = read_reclists(s["recs"])
    if len(lists) != 1:
        raise ConfigError(f"{s['recs']}: expected a single recommendation list, found {len(lists)}")
    (candidates,) = lists.values()
    mvecs = emotion.load_precomputed_vectors(s["mvecs"])
    profile, excluded = profile_from_movies(s["user"], (e.movie_id for e in _user_history(s)), mvecs)
    if profile is None:
        raise ConfigError(f"user {s['user']} has no watched movie with an emotion vector")
    kept = recsys.RecList(tuple(item for item in candidates if item[0] in mvecs), candidates.origin)
    if len(kept) < len(candidates):
        _log.warning("dropped %d candidates without emotion vectors", len(candidates) - len(kept))
    reranked = [rerank(kept, mvecs, profile.uvec, m) for m in default_metrics(s["minkowski_p"])]
    write_reclists(reranked, _out(s) / "rerank.csv")
    print(f"user={s['user']} watch_count={profile.watch_count} excluded={excluded} candidates={len(kept)}")


def cmd_evaluate(s):
    if s["replay"]:
        _require(s, "replay")
        report = evaluation.EvalReport.from_tsv(s["replay"])
        print(report.to_text(), end="")
        print(f"winner: {evaluation.pick_winner(report)}")
        return
    _require(s, "ratings", "movies", "links", "mvecs")
    if s["model"]:
        _require(s, "model")
    movies = ingest.load_movies_and_links(s["movies"], s["links"])
    if s["overviews"]:
        _require(s, "overviews")
        movies, _ = ingest.attach_overviews(movies, s["overviews"])
    bundle = ingest.build_bundle(
        ingest.load_ratings(s["ratings"]), movies, emotion.load_precomputed_vectors(s["mvecs"])
    )
    model = recsys.load_model(s["model"]) if s["model"] else recsys.train(bundle.ratings, _hyper(s))
    report = evaluation.run_experiment(
        bundle.ratings, model, bundle.mvecs,
        splits=_str_list(s["splits"]),
        metrics=default_metrics(s["minkowski_p"]),
        n_list=_int_list(s["n_list"]),
        mode=s["mode"],
        keep_details=s["detail"],
    )
    winner = evaluation.pick_winner(report)
    out = _out(s)
    text = report.to_text()
    report.to_tsv(out / "report.tsv")
    (out / "report.txt").write_text(text, encoding="utf-8")
    if s["detail"]:
        report.write_detail(out / "detail.csv")
    print(bundle.summary_line())
    print(text, end="")
    print(f"winner: {winner}")


COMMANDS = {
    "build-lexicon": (cmd_build_lexicon, "extract emotion synonym lists from WordNet-Affect files"),
    "prep-corpus": (cmd_prep_corpus, "balance and split a labeled text corpus"),
    "classify": (cmd_classify, "compute movie emotion vectors from overviews"),
    "eval-classifier": (cmd_eval_classifier, "score emotion predictions against gold labels"),
    "train": (cmd_train, "train the factor model on ratings"),
    "recommend": (cmd_recommend, "top-N list from a seed movie or for a user"),
    "rerank": (cmd_rerank, "rerank a list against a user's emotion profile"),
    "evaluate": (cmd_evaluate, "run the split/hit-rate experiment and pick a winning metric"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"key = value settings file (default: ${CONFIG_ENV})")
    common.add_argument("--detail", action="store_true", default=None, help="also write per-user detail")
    common.add_argument("-v", "--verbose", action="store_true")
    for key in DEFAULTS:
        if key == "detail":
            continue
        common.add_argument("--" + key.replace("_", "-"), dest=key, default=None)

    parser = argparse.ArgumentParser(prog="affectrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        settings = resolve_settings(args)
        COMMANDS[args.command][0](settings)
    except (ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"affectrec {args.command}: error: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
