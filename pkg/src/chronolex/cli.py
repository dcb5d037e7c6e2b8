"""Command-line entry points: build a store, serve it, or query it directly.

``query`` prints tab-separated rows on stdout, one per series point, with the
same values the REST endpoints return: ``label<TAB>value`` for single-curve
results, ``label<TAB>curve<TAB>value`` for multi-curve ones, and
``word<TAB>score`` for neighbor rankings.
"""

from __future__ import annotations

import argparse
import logging
import sys

from chronolex.emotion import zscale_series
from chronolex.errors import ChronolexError, EmptyCorpus, UnknownCorpus, UnknownWord
from chronolex.pipeline import BuildError, PipelineConfig, run_build
from chronolex.store import ModelStore

logger = logging.getLogger("chronolex")

_CONFIG_FLAGS = {
    "manifest": str,
    "seed_lexicon": str,
    "store": str,
    "window": int,
    "min_count": int,
    "d": int,
    "alpha": float,
    "p": float,
    "svd_seed": int,
    "top_k": int,
    "context_k": int,
    "min_seed_sim": float,
    "strip_pattern": str,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronolex")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="run the full pipeline into a store file")
    build.add_argument("--config", help="JSON config file; flags override its values")
    build.add_argument("--workers", type=int, default=1, help="parallel slice builds")
    for name, typ in _CONFIG_FLAGS.items():
        build.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, default=None)

    serve = sub.add_parser("serve", help="serve a store over HTTP")
    serve.add_argument("--store", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--ui-dir", default=None, help="static directory for the explorer UI")

    query = sub.add_parser("query", help="print series values for one word or pair")
    query.add_argument("--store", required=True)
    query.add_argument("--corpus", default=None, help="corpus id (optional for single-corpus stores)")
    qsub = query.add_subparsers(dest="subcommand", required=True)

    q_sim = qsub.add_parser("similarity")
    q_sim.add_argument("word1")
    q_sim.add_argument("word2")
    q_emo = qsub.add_parser("emotion")
    q_emo.add_argument("word")
    q_emo.add_argument("--scale", choices=["raw", "zscored"], default="raw")
    q_freq = qsub.add_parser("frequency")
    q_freq.add_argument("word")
    q_ctx = qsub.add_parser("context")
    q_ctx.add_argument("word")
    q_ctx.add_argument("--k", type=int, default=None)
    q_nbr = qsub.add_parser("neighbors")
    q_nbr.add_argument("word")
    q_nbr.add_argument("--k", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "build":
        logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
        return _cmd_build(args)
    if args.command == "serve":
        logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
        return _cmd_serve(args)
    logging.basicConfig(level=logging.WARNING, format="%(message)s", stream=sys.stderr)
    return _cmd_query(args)


def _cmd_build(args: argparse.Namespace) -> int:
    try:
        config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
        for name in _CONFIG_FLAGS:
            value = getattr(args, name)
            if value is not None:
                setattr(config, name, value)
        run_build(config, workers=args.workers)
    except BuildError as exc:
        print(f"build failed at {exc}", file=sys.stderr)
        return 2 if isinstance(exc.cause, EmptyCorpus) else 1
    except (ValueError, OSError) as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from chronolex.service import create_app

    try:
        store = ModelStore.load(args.store)
    except (OSError, ValueError) as exc:
        print(f"cannot load store: {exc}", file=sys.stderr)
        return 2
    app = create_app(store, static_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


class _AmbiguousCorpus(Exception):
    pass


def _pick_corpus(store: ModelStore, requested: str | None) -> str:
    corpora = store.corpora()
    if requested is not None:
        if requested not in corpora:
            raise UnknownCorpus(requested)
        return requested
    if len(corpora) == 1:
        return corpora[0]
    raise _AmbiguousCorpus(
        "store holds no corpus" if not corpora else f"pass --corpus, one of {corpora}"
    )


def query_rows(store: ModelStore, corpus: str, subcommand: str, args: argparse.Namespace) -> list[tuple]:
    """Rows for one query; values match the REST endpoints exactly."""
    if subcommand == "similarity":
        w1 = store.normalize_query(corpus, args.word1)
        w2 = store.normalize_query(corpus, args.word2)
        series = store.similarity_on_the_fly(corpus, w1, w2)
        return [(slc.label_year, value) for slc, value in series]
    if subcommand == "emotion":
        w = store.normalize_query(corpus, args.word)
        series = store.emotion_series(corpus, w)
        labels = [slc.label_year for slc, _ in series]
        dims = {
            "valence": [vad.valence for _, vad in series],
            "arousal": [vad.arousal for _, vad in series],
            "dominance": [vad.dominance for _, vad in series],
        }
        if args.scale == "zscored":
            dims = {name: (zscale_series(vals) if vals else []) for name, vals in dims.items()}
        return [
            (label, name, value)
            for name, vals in dims.items()
            for label, value in zip(labels, vals)
        ]
    if subcommand == "frequency":
        w = store.normalize_query(corpus, args.word)
        return [(slc.label_year, value) for slc, value in store.frequency_series(corpus, w)]
    if subcommand == "context":
        w = store.normalize_query(corpus, args.word)
        limit = args.k if args.k is not None else store.params(corpus).get("context_k")
        by_context: dict[str, list[tuple[int, float]]] = {}
        for slc, ranked in store.context_series(corpus, w, limit):
            for context_word, score in ranked:
                by_context.setdefault(context_word, []).append((slc.label_year, score))
        return [
            (label, name, value)
            for name, pairs in sorted(by_context.items())
            for label, value in pairs
        ]
    if subcommand == "neighbors":
        w = store.normalize_query(corpus, args.word)
        limit = args.k if args.k is not None else store.params(corpus).get("top_k")
        return list(store.get_reference_words(corpus, w, limit))
    raise ValueError(f"unknown query subcommand {subcommand!r}")


def _cmd_query(args: argparse.Namespace) -> int:
    try:
        store = ModelStore.load(args.store)
    except (OSError, ValueError) as exc:
        print(f"cannot load store: {exc}", file=sys.stderr)
        return 2
    try:
        corpus = _pick_corpus(store, args.corpus)
        rows = query_rows(store, corpus, args.subcommand, args)
    except UnknownWord as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (UnknownCorpus, _AmbiguousCorpus) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ChronolexError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for row in rows:
        print("\t".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
