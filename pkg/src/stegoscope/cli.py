"""Command-line surface: extract, fit-lda, train, eval, experiment, ablate,
import-vectors, significance.

Exit codes: 0 success, 1 usage error, 2 data error. Every run echoes its
resolved configuration so reports are self-describing.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import content, focus, fusion, harness, stats
from .corpus import CorpusError, load_corpus, load_tag_lexicon
from .habit import extract_habit
from .psychology import extract_psychology, load_sentiment_lexicon

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

log = logging.getLogger("stegoscope")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="stegoscope")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("extract", help="write per-document features as JSONL")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicons", help="directory with lexicon TSVs (default: bundled)")
    p.add_argument("--out", required=True)
    p.add_argument("--topics", type=int, default=2)
    p.add_argument("--iterations", type=int, default=focus.DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fit-lda", help="fit a topic model and save it")
    p.add_argument("--corpus", required=True)
    p.add_argument("--topics", type=int, default=2)
    p.add_argument("--iterations", type=int, default=focus.DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="run one seeded pipeline pass and save a checkpoint")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("eval", help="evaluate a saved checkpoint on a corpus")
    p.add_argument("--config", required=True)
    p.add_argument("--model", required=True)

    p = sub.add_parser("experiment", help="run the repeated ratio-controlled protocol")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="directory for report.json (default: print)")
    p.add_argument("--seed", type=int)
    p.add_argument("--fleet", action="store_true", help="loop users and aggregate")
    p.add_argument("--jobs", type=int, default=1, help="reserved; runs are sequential")

    p = sub.add_parser("ablate", help="run an ablation arm comparison")
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=["user", "fusion"], required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("import-vectors", help="validate an external vector file")
    p.add_argument("--vectors", required=True)
    p.add_argument("--corpus", help="check id coverage against this corpus")

    p = sub.add_parser("significance", help="compare two experiment reports")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    return parser


def _load_lexicons(directory: str | None):
    if directory is None:
        return None, None
    d = Path(directory)

    def opt(name):
        path = d / name
        return path if path.exists() else None

    tag_lex = load_tag_lexicon(opt("tags_words.tsv"), opt("tags_suffixes.tsv"))
    sent_lex = load_sentiment_lexicon(
        opt("sentiment.tsv"), opt("intensifiers.tsv"),
        opt("negations.txt"), opt("emoticons.tsv"),
    )
    return tag_lex, sent_lex


def _cmd_extract(args) -> int:
    tag_lex, sent_lex = _load_lexicons(args.lexicons)
    docs = load_corpus(args.corpus, tag_lex)
    covers = [d for d in docs if d.label == "cover"] or docs
    lda_conf = harness.LdaConfig(topics=args.topics, iterations=args.iterations)
    fitted = harness.fit_extractors(covers, lda_conf, args.seed, sent_lex)
    with open(args.out, "w", encoding="utf-8") as fh:
        for doc in docs:
            h = extract_habit(doc)
            p = extract_psychology(doc, fitted.lexicon)
            f = focus.extract_focus(
                doc, fitted.lda, fitted.word_vocab,
                infer_iterations=lda_conf.infer_iterations, seed=args.seed,
            )
            fh.write(json.dumps({
                "id": doc.id, "user": doc.user_id, "label": doc.label,
                "habit": dict(zip(
                    [fname for fname in h.__dataclass_fields__], h.as_list()
                )),
                "psychology": {"emotion": p.emotion, "subjectivity": p.subjectivity,
                               "exaggeration": p.exaggeration},
                "focus": {"topic_dist": list(f.topic_dist), "link_count": f.link_count,
                          "link_ratio": f.link_ratio, "oov_ratio": f.oov_ratio},
            }, sort_keys=True) + "\n")
    log.info("wrote features for %d documents to %s", len(docs), args.out)
    return EXIT_OK


def _cmd_fit_lda(args) -> int:
    docs = load_corpus(args.corpus)
    model = focus.fit_lda(docs, k=args.topics, iterations=args.iterations, seed=args.seed)
    focus.save_lda(model, args.out)
    log.info("saved %d-topic model over %d words to %s",
             model.k, len(model.vocab), args.out)
    return EXIT_OK


def _resolved(config: harness.ExperimentConfig) -> str:
    return json.dumps(harness.config_dict(config), sort_keys=True)


def _cmd_train(args) -> int:
    config = harness.load_config(args.config)
    if args.seed is not None:
        config.base_seed = args.seed
    print(f"resolved config: {_resolved(config)}")
    covers, stegos = harness.load_experiment_docs(config)
    seed = config.base_seed + 1
    spec = harness.DatasetSpec(ratio=config.dataset.ratio, seed=seed)
    splits = harness.build_ratio_dataset(covers, stegos, spec)
    train_covers = [d for d in splits.train if d.label == "cover"]
    fitted = harness.fit_extractors(train_covers, config.lda, seed)
    provider = config.embedding.build()
    train_x, train_y = harness.featurize(splits.train, fitted, provider, config, seed)
    val_x, val_y = harness.featurize(splits.val, fitted, provider, config, seed)
    tconf = config.train
    tconf.seed = seed
    params = fusion.train(train_x, train_y, val_x, val_y, tconf,
                          log_path=Path(args.out).with_suffix(".log.jsonl"))
    fusion.save_params(params, args.out)
    print(f"saved checkpoint to {args.out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = harness.load_config(args.config)
    print(f"resolved config: {_resolved(config)}")
    params = fusion.load_params(args.model)
    covers, stegos = harness.load_experiment_docs(config)
    seed = config.base_seed + 1
    spec = harness.DatasetSpec(ratio=config.dataset.ratio, seed=seed)
    splits = harness.build_ratio_dataset(covers, stegos, spec)
    train_covers = [d for d in splits.train if d.label == "cover"]
    fitted = harness.fit_extractors(train_covers, config.lda, seed)
    provider = config.embedding.build()
    test_x, test_y = harness.featurize(splits.test, fitted, provider, config, seed)
    p = fusion.forward_batch(params, test_x)
    confusion = stats.Confusion.from_predictions(
        [bool(x >= 0.5) for x in p], [bool(y) for y in test_y]
    )
    acc, f1 = stats.acc_f1(confusion)
    print(json.dumps({"acc": acc, "f1": f1, "confusion": confusion.__dict__},
                     sort_keys=True))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = harness.load_config(args.config)
    if args.seed is not None:
        config.base_seed = args.seed
    print(f"resolved config: {_resolved(config)}")
    covers, stegos = harness.load_experiment_docs(config)
    runner = harness.run_fleet if args.fleet else harness.run_experiment
    report = runner(covers, stegos, config)
    text = harness.report_json(report)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(text, encoding="utf-8")
        print(f"wrote {out_dir / 'report.json'}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_ablate(args) -> int:
    config = harness.load_config(args.config)
    if args.seed is not None:
        config.base_seed = args.seed
    print(f"resolved config: {_resolved(config)}")
    covers, stegos = harness.load_experiment_docs(config)
    if args.mode == "user":
        arms = {
            "content_only": _with(config, use_user_features=False),
            "user_plus_content": _with(config, use_user_features=True),
        }
    else:
        arms = {
            "concat": _with(config, fusion_mode="concat"),
            "attention": _with(config, fusion_mode="literal"),
        }
    report = {
        name: harness.run_experiment(covers, stegos, arm)
        for name, arm in arms.items()
    }
    for name, arm_report in report.items():
        print(f"{name}: acc {arm_report['mean_acc']:.4f} +- {arm_report['std_acc']:.4f}, "
              f"f1 {arm_report['mean_f1']:.4f} +- {arm_report['std_f1']:.4f}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"ablation_{args.mode}.json").write_text(
            harness.report_json(report), encoding="utf-8"
        )
    return EXIT_OK


def _with(config: harness.ExperimentConfig, use_user_features=None, fusion_mode=None):
    import copy

    out = copy.deepcopy(config)
    if use_user_features is not None:
        out.use_user_features = use_user_features
    if fusion_mode is not None:
        out.train.fusion_mode = fusion_mode
    return out


def _cmd_import_vectors(args) -> int:
    store = content.load_vectors(args.vectors)
    info = {"dim": store.dim, "count": len(store.vectors)}
    if args.corpus:
        docs = load_corpus(args.corpus)
        missing = [d.id for d in docs if d.id not in store.vectors]
        info["missing_ids"] = missing
        if missing:
            print(json.dumps(info, sort_keys=True))
            raise CorpusError(f"{len(missing)} corpus ids missing from vector file")
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK


def _cmd_significance(args) -> int:
    def metric_samples(path):
        report = json.loads(Path(path).read_text(encoding="utf-8"))
        repeats = report.get("repeats")
        if repeats is None:
            raise CorpusError(f"{path}: no per-repeat metrics in report")
        return [r["acc"] for r in repeats], [r["f1"] for r in repeats]

    acc_a, f1_a = metric_samples(args.a)
    acc_b, f1_b = metric_samples(args.b)
    result = {}
    for name, xs, ys in (("acc", acc_a, acc_b), ("f1", f1_a, f1_b)):
        t_stat, t_p = stats.welch_t(xs, ys)
        u_stat, u_p = stats.mann_whitney_u(xs, ys)
        result[name] = {
            "welch_t": {"t": t_stat, "p": t_p},
            "mann_whitney": {"u": u_stat, "p": u_p},
        }
    print(json.dumps(result, indent=2, sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "fit-lda": _cmd_fit_lda,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "experiment": _cmd_experiment,
    "ablate": _cmd_ablate,
    "import-vectors": _cmd_import_vectors,
    "significance": _cmd_significance,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("STEGOSCOPE_LOG", "INFO").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (FileNotFoundError,) as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (CorpusError, content.VectorStoreError, harness.DatasetError,
            ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
