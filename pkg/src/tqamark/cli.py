"""Command-line entry point: validate, score, render, query, stats, import, serve.

Exit codes: 0 success, 1 domain failure (bad markup, unknown names, stale
versions), 2 environment failure (missing files, unreadable config, occupied
ports).  Diagnostics and error messages go to stderr; results to stdout.
"""

from __future__ import annotations

import argparse
import socket
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus as corpus_store
from .config import AssessmentConfig, resolve_config
from .dialect import parse
from .document import DocumentMeta
from .errors import ENVIRONMENT_ERRORS, MarkupSyntaxError, TqaError
from .rendering import Mode, default_stylesheet, render
from .scoring import (
    RoundingMode,
    encode_report,
    format_tqi,
    points_to_json,
    round_half_up_2dp,
    score,
)
from .taxonomy import Severity


def _read_tqm(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_doc(path, config: AssessmentConfig):
    """Parse a .tqm file; the document id is the file stem."""
    path = Path(path)
    meta = DocumentMeta(doc_id=path.stem or "untitled")
    return parse(_read_tqm(path), config.taxonomy, meta=meta)


def _format_2dp(value: Fraction) -> str:
    hundredths = int(round_half_up_2dp(value) * 100)
    return "%d.%02d" % divmod(hundredths, 100)


def _cmd_validate(args, config: AssessmentConfig) -> int:
    _load_doc(args.file, config)
    return 0


def _cmd_score(args, config: AssessmentConfig) -> int:
    doc = _load_doc(args.file, config)
    mode = config.rounding_mode if args.mode is None else RoundingMode.from_str(args.mode)
    report = score(doc, config.taxonomy, config.weights, config.scale(args.scale), mode)
    if args.json:
        print(encode_report(report))
        return 0
    print("document: %s" % report.doc_id)
    print("words: %d" % report.word_count)
    print("error points: %s" % points_to_json(report.total_error_points))
    print("TQI: %s" % format_tqi(report))
    print("grade: %s" % report.grade)
    print("scale: %s" % report.scale)
    if report.breakdown:
        print("breakdown:")
        for entry in report.breakdown:
            print(
                "  %s %s x%d = %s"
                % (
                    entry.category_id,
                    entry.severity.value,
                    entry.count,
                    points_to_json(entry.points),
                )
            )
    return 0


def _cmd_render(args, config: AssessmentConfig) -> int:
    doc = _load_doc(args.file, config)
    representation = config.representation(args.representation)
    mode = representation.mode if args.mode is None else Mode(args.mode)
    output = render(doc, config.taxonomy, representation, mode=mode)
    if args.out is None:
        sys.stdout.write(output)
        if not output.endswith("\n"):
            sys.stdout.write("\n")
        return 0
    out_path = Path(args.out)
    out_path.write_text(output, encoding="utf-8")
    if mode is Mode.HTML:
        (out_path.parent / "stylesheet.css").write_text(default_stylesheet(), encoding="utf-8")
    return 0


def _cmd_query(args, config: AssessmentConfig) -> int:
    corpus = corpus_store.open_corpus(args.corpus)
    q = corpus_store.Query(
        category_id=args.category,
        severity=None if args.severity is None else Severity.from_str(args.severity),
        contains_word=args.word,
        cohort=args.cohort,
        doc_id=args.doc,
    )
    for hit in corpus_store.query(corpus, q):
        print(
            "%s\t%d:%d\t%s\t%s\t%s"
            % (hit.doc_id, hit.start, hit.end, hit.category_id, hit.severity.value, hit.span_text)
        )
    return 0


def _cmd_stats(args, config: AssessmentConfig) -> int:
    corpus = corpus_store.open_corpus(args.corpus)
    report = corpus_store.stats(corpus, cohort=args.cohort, weights=config.weights)
    print("documents: %d" % report.document_count)
    print("annotations: %d" % report.annotation_count)
    for (category_id, severity), count in sorted(
        report.counts.items(), key=lambda kv: (kv[0][0], kv[0][1].rank)
    ):
        print("%s %s: %d" % (category_id, severity.value, count))
    if report.mean_tqi is not None:
        print("mean TQI: %s" % _format_2dp(report.mean_tqi))
        print("min TQI: %s" % _format_2dp(report.min_tqi))
        print("max TQI: %s" % _format_2dp(report.max_tqi))
    return 0


def _cmd_import(args, config: AssessmentConfig) -> int:
    corpus = corpus_store.open_corpus(args.corpus)
    _, doc_ids = corpus_store.import_segments(corpus, args.file)
    print("imported %d documents" % len(doc_ids))
    return 0


def _cmd_init(args, config: AssessmentConfig) -> int:
    corpus = corpus_store.init_corpus(args.corpus, config.taxonomy, name=args.name)
    print("initialized corpus %s at %s" % (corpus.name, corpus.root))
    return 0


def _cmd_serve(args, config: AssessmentConfig) -> int:
    from .service import create_app  # deferred: uvicorn/fastapi are slow imports

    import uvicorn

    app = create_app(args.corpus, config=config, ui_dir=args.ui)
    # probe the port up front so an occupied port is an exit-2 error,
    # not a log line from the server loop
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.bind((args.host, args.port))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqamark",
        description="Assess translation quality from inline mistake markup.",
    )
    parser.add_argument("--config", help="assessment config file (JSON)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .tqm file; diagnostics to stderr")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("score", help="score a .tqm file")
    p.add_argument("file")
    p.add_argument("--scale", help="grade scale name (default: first configured)")
    p.add_argument("--mode", help="rounding mode: exact-2dp or truncate-error-percentage")
    p.add_argument("--json", action="store_true", help="print the canonical JSON report")
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("render", help="render a .tqm file under a representation")
    p.add_argument("file")
    p.add_argument("--representation", required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], help="override output mode")
    p.add_argument("--out", help="write output here (html also writes stylesheet.css)")
    p.set_defaults(handler=_cmd_render)

    p = sub.add_parser("query", help="search annotations in a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--category")
    p.add_argument("--severity")
    p.add_argument("--word", help="whole word to find inside annotated spans")
    p.add_argument("--cohort")
    p.add_argument("--doc")
    p.set_defaults(handler=_cmd_query)

    p = sub.add_parser("stats", help="aggregate counts and TQI over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--cohort")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("import", help="import source/target segment pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("file")
    p.set_defaults(handler=_cmd_import)

    p = sub.add_parser("init", help="create an empty corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--name")
    p.set_defaults(handler=_cmd_init)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="directory of built UI assets to serve at /")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args.config)
        return args.handler(args, config)
    except MarkupSyntaxError as exc:
        for diagnostic in exc.diagnostics:
            print(
                "%d\t%s\t%s" % (diagnostic.offset, diagnostic.kind.value, diagnostic.message),
                file=sys.stderr,
            )
        return 1
    except ENVIRONMENT_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except TqaError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
