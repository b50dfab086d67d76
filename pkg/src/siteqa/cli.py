"""Command line interface: index-text, index-kg, ask, serve, eval, train.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import SiteQaConfig, default_data_dir, load_config
from .corpus import CorpusError
from .data import SiteData, build_kg_data, build_text_data, load_data, save_data
from .kgstore import ENRICHMENT_ROLES, NTriplesError
from .ranker import save_weights, train_weights
from .report import evaluate, read_eval_file, write_report
from .service import VALID_KB

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siteqa",
                                     description="question-answering search over a website corpus")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file overriding defaults")

    p = sub.add_parser("index-text", help="split a JSONL corpus and build the BM25 index")
    p.add_argument("corpus", help="corpus file, one JSON object per line (id/title/body/url)")
    p.add_argument("--out", required=True, help="data directory to write")
    p.add_argument("--min-chars", type=int, default=None)
    p.add_argument("--max-chars", type=int, default=None)
    p.add_argument("--k1", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    add_common(p)

    p = sub.add_parser("index-kg", help="parse N-Triples and build the knowledge graph")
    p.add_argument("graph", help="N-Triples file")
    p.add_argument("--out", required=True, help="data directory to write")
    p.add_argument("--labels", help="comma-separated label predicate IRIs")
    p.add_argument("--enrich", action="append", default=[], metavar="ROLE=IRI",
                   help=f"enrichment predicate for a role; roles: {', '.join(ENRICHMENT_ROLES)}")
    add_common(p)

    p = sub.add_parser("ask", help="answer a single question")
    p.add_argument("question")
    p.add_argument("--data", default=None, help="data directory (default: $SITEQA_DATA)")
    p.add_argument("--kb", default="kg,text", help="branches to use, e.g. kg,text")
    p.add_argument("--k", type=int, default=None, help="paragraphs to retrieve")
    p.add_argument("--json", action="store_true", help="print the raw answer bundle")
    add_common(p)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--data", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    add_common(p)

    p = sub.add_parser("eval", help="measure branch and answer accuracy on a gold file")
    p.add_argument("gold", help="JSONL file of {question, branch?, answer?} records")
    p.add_argument("--data", default=None)
    p.add_argument("--report", default=None, help="directory for results.csv and figures")
    add_common(p)

    p = sub.add_parser("train", help="fit ranking weights on (question, gold_query) pairs")
    p.add_argument("pairs", help="JSONL file of {question, gold_query} records")
    p.add_argument("--data", default=None)
    p.add_argument("--out", default=None, help="weights file to write (default: data dir)")
    add_common(p)

    return parser


def _config_from(args: argparse.Namespace) -> SiteQaConfig:
    return load_config(getattr(args, "config", None))


def _data_dir(args: argparse.Namespace) -> str:
    directory = getattr(args, "data", None) or default_data_dir()
    if not directory:
        raise ValueError("no data directory: pass --data or set SITEQA_DATA")
    return directory


def _cmd_index_text(args: argparse.Namespace) -> int:
    config = _config_from(args)
    for name in ("min_chars", "max_chars", "k1", "b"):
        value = getattr(args, name)
        if value is not None:
            setattr(config, name, value)
    data = build_text_data(args.corpus, config)
    save_data(data, args.out)
    print(f"indexed {len(data.documents)} documents, {len(data.paragraphs)} paragraphs -> {args.out}")
    return EXIT_OK


def _cmd_index_kg(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.labels:
        config.label_predicates = [iri.strip() for iri in args.labels.split(",") if iri.strip()]
    for spec in args.enrich:
        role, sep, iri = spec.partition("=")
        if not sep or role not in ENRICHMENT_ROLES or not iri:
            raise ValueError(f"bad --enrich value {spec!r}; expected ROLE=IRI")
        config.enrichment_props[role] = iri
    graph = build_kg_data(args.graph, config)
    save_data(SiteData(graph=graph, config=config), args.out)
    print(f"indexed {len(graph.triples)} triples, {len(graph.labels)} label phrases -> {args.out}")
    return EXIT_OK


def _parse_kb(raw: str) -> tuple[str, ...]:
    tokens = tuple(part.strip() for part in raw.split(",") if part.strip())
    if not tokens:
        raise ValueError("kb must name at least one branch")
    for token in tokens:
        if token not in VALID_KB:
            raise ValueError(f"unknown kb token: {token!r}")
    return tokens


def _print_bundle(bundle_json: dict) -> None:
    print(f"branch: {bundle_json['branch']}   confidence: {bundle_json['confidence']:.3f}   "
          f"presentation: {bundle_json['presentation']}")
    if bundle_json["interpretation"]:
        print(f"interpretation: {bundle_json['interpretation']}")
    for answer in bundle_json["answers"]:
        if answer["type"] == "entity":
            label = answer.get("label")
            shown = f"{label}  ({answer['value']})" if label else answer["value"]
            print(f"  - {shown}")
            enrichment = answer.get("enrichment", {})
            for key in ("description", "homepage", "sitelink"):
                if key in enrichment:
                    print(f"      {key}: {enrichment[key]}")
        else:
            print(f"  - \"{answer['value']}\"")
            source = answer.get("source")
            if source:
                print(f"      source: {source['deep_link']}")
    if not bundle_json["answers"]:
        print("  no confident answer")
    if bundle_json["low_confidence"]:
        print(f"  ({len(bundle_json['low_confidence'])} low-confidence candidate(s); "
              f"use --json to inspect)")


def _cmd_ask(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.k is not None:
        config.k = args.k
    kb = _parse_kb(args.kb)
    if not args.question.strip():
        raise ValueError("question must be non-empty")
    data = load_data(_data_dir(args), config)
    bundle = data.pipeline().answer(args.question, kb=kb).to_json()
    if args.json:
        print(json.dumps(bundle, ensure_ascii=False, indent=2))
    else:
        _print_bundle(bundle)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _config_from(args)
    data = load_data(_data_dir(args), config)
    app = create_app(data)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    config = _config_from(args)
    data = load_data(_data_dir(args), config)
    records = read_eval_file(args.gold)
    summary = evaluate(records, data.pipeline())
    print(f"questions: {len(summary.rows)}")
    if summary.branch_accuracy is not None:
        print(f"branch accuracy: {summary.branch_accuracy:.3f}")
    if summary.answer_accuracy is not None:
        print(f"answer accuracy: {summary.answer_accuracy:.3f}")
    if args.report:
        created = write_report(summary, args.report)
        for path in created:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_train(args: argparse.Namespace) -> int:
    import os

    config = _config_from(args)
    directory = _data_dir(args)
    data = load_data(directory, config)
    if data.graph is None:
        raise ValueError("training needs a knowledge graph in the data directory")
    weights = train_weights(args.pairs, data.graph, initial=config.weights)
    out = args.out or os.path.join(directory, "weights.json")
    save_weights(weights, out)
    print(f"trained weights -> {out}: w={list(weights.w)} bias={weights.bias}")
    return EXIT_OK


_COMMANDS = {
    "index-text": _cmd_index_text,
    "index-kg": _cmd_index_kg,
    "ask": _cmd_ask,
    "serve": _cmd_serve,
    "eval": _cmd_eval,
    "train": _cmd_train,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CorpusError, NTriplesError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
