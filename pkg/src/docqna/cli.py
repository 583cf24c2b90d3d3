"""Command line interface: ``serve``, ``index``, and ``query`` subcommands."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .chunking import ChunkParams
from .embedding import EmbeddingProviderConfig
from .engine import DocQAEngine
from .errors import DocQAError, InvalidParams
from .qa import QAConfig
from .service import ServiceConfig, run_server

logger = logging.getLogger(__name__)


def _port(value: str) -> int:
    try:
        port = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid port: {value!r}") from exc
    if not 1 <= port <= 65535:
        raise argparse.ArgumentTypeError(f"port must be in [1, 65535], got {port}")
    return port


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docqna",
        description="Document question answering over a plain-text corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = argparse.ArgumentParser(add_help=False)
    ingest.add_argument("--chunk-size", type=int, default=1000,
                        help="maximum chunk length in characters (default 1000)")
    ingest.add_argument("--overlap", type=int, default=200,
                        help="characters shared between consecutive chunks (default 200)")
    ingest.add_argument("--dim", type=int, default=256,
                        help="embedding dimension (default 256)")
    ingest.add_argument("--provider", choices=["local", "remote"], default="local",
                        help="embedding provider (default local)")
    ingest.add_argument("--embed-endpoint", default=None,
                        help="remote embedding endpoint URL "
                             "(or set DOCQNA_EMBED_ENDPOINT)")

    answering = argparse.ArgumentParser(add_help=False)
    answering.add_argument("--top-k", type=int, default=4,
                           help="chunks retrieved per query (default 4)")
    answering.add_argument("--answerer", choices=["extractive", "generative"],
                           default="extractive",
                           help="answer synthesis mode (default extractive)")
    answering.add_argument("--generator-endpoint", default=None,
                           help="generative answerer endpoint URL")

    serve = sub.add_parser("serve", parents=[ingest, answering],
                           help="start the HTTP service")
    serve.add_argument("--data-dir", default="data", help="corpus directory (default data)")
    serve.add_argument("--host", default="0.0.0.0", help="bind address (default 0.0.0.0)")
    serve.add_argument("--port", type=_port, default=8095, help="TCP port (default 8095)")
    serve.add_argument("--index", default=None, help="serve from a prebuilt index file")
    serve.add_argument("--cors-origin", default="*",
                       help="Access-Control-Allow-Origin value (default *)")
    serve.set_defaults(func=cmd_serve)

    index = sub.add_parser("index", parents=[ingest],
                           help="build an index file from a corpus directory")
    index.add_argument("--data-dir", default="data", help="corpus directory (default data)")
    index.add_argument("--out", default=None,
                       help="output path (default index.bin beside the data directory)")
    index.set_defaults(func=cmd_index)

    query = sub.add_parser("query", parents=[ingest, answering],
                           help="answer one query offline")
    query.add_argument("query", help="the question to answer")
    source = query.add_mutually_exclusive_group()
    source.add_argument("--index", default=None, help="prebuilt index file to search")
    source.add_argument("--data-dir", default=None,
                        help="corpus directory to index on the fly (default data)")
    query.set_defaults(func=cmd_query)

    return parser


def _check_chunk_flags(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    try:
        ChunkParams(chunk_size=args.chunk_size, overlap=args.overlap)
    except InvalidParams as exc:
        parser.error(str(exc))


def _engine_from_args(args: argparse.Namespace) -> DocQAEngine:
    return DocQAEngine(
        chunk_size=args.chunk_size,
        overlap=args.overlap,
        dim=args.dim,
        top_k=getattr(args, "top_k", 4),
        context_budget=max(6000, args.chunk_size),
        answerer=getattr(args, "answerer", "extractive"),
        provider=args.provider,
        embed_endpoint=args.embed_endpoint,
        generator_endpoint=getattr(args, "generator_endpoint", None),
    )


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = ServiceConfig(
        host=args.host,
        port=args.port,
        data_dir=args.data_dir,
        index_path=args.index,
        chunk_params=ChunkParams(chunk_size=args.chunk_size, overlap=args.overlap),
        qa_config=QAConfig(
            top_k=args.top_k,
            context_budget=max(6000, args.chunk_size),
            answerer=args.answerer,
            generator_endpoint=args.generator_endpoint,
        ),
        provider=EmbeddingProviderConfig(
            kind=args.provider,
            dim=args.dim,
            endpoint_url=args.embed_endpoint or None,
        ) if args.provider == "remote" else EmbeddingProviderConfig(dim=args.dim),
        cors_allow_origin=args.cors_origin,
    )
    run_server(cfg)
    return 0


def cmd_index(args: argparse.Namespace) -> int:
    engine = _engine_from_args(args).fit(args.data_dir)
    out = Path(args.out) if args.out else Path(args.data_dir).parent / "index.bin"
    engine.save_index(out)
    print(f"indexed {len(engine.documents_)} documents into "
          f"{len(engine.chunks_)} chunks -> {out}")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    if args.index:
        engine = DocQAEngine.from_index(
            args.index,
            top_k=args.top_k,
            answerer=args.answerer,
            generator_endpoint=args.generator_endpoint,
        )
    else:
        engine = _engine_from_args(args).fit(args.data_dir or "data")

    result = engine.answer(args.query)
    print(result.answer)
    print()
    print(f"{'rank':>4}  {'score':>7}  {'chunk':>5}  {'span':<16}  doc")
    for rank, sc in enumerate(result.supporting, start=1):
        span = f"[{sc.chunk.start},{sc.chunk.end})"
        print(f"{rank:>4}  {sc.score:>7.4f}  {sc.chunk.chunk_id:>5}  {span:<16}  {sc.chunk.doc_id}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "chunk_size"):
        _check_chunk_flags(parser, args)
    logging.basicConfig(
        level=logging.INFO if args.command == "serve" else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except DocQAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
