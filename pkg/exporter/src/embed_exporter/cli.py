"""Command line: embed-exporter export --corpus F --model NAME --pooling mean --out F."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .exporter import DEFAULT_BATCH_SIZE, DEFAULT_MODEL, ExportJob, export

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="embed-exporter")
    sub = parser.add_subparsers(dest="command")
    p = sub.add_parser("export", help="embed a corpus and write a UPV1 vector file")
    p.add_argument("--corpus", required=True, help="JSONL corpus path")
    p.add_argument("--model", default=DEFAULT_MODEL, help="model name or local path")
    p.add_argument("--pooling", choices=["mean", "cls"], default="mean")
    p.add_argument("--out", required=True, help="output UPV1 path")
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("EMBED_EXPORTER_LOG", "INFO").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    job_kwargs = dict(
        corpus_path=args.corpus, out_path=args.out,
        model_name=args.model, pooling=args.pooling, batch_size=args.batch_size,
    )
    try:
        job = ExportJob(**job_kwargs)
        count = export(job)
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"exported {count} vectors to {args.out}")
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
