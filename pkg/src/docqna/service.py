"""REST backend exposing the QA chain at ``POST /docqna``.

Wire contract, kept deliberately rigid for client compatibility:

* The request body is parsed as JSON no matter what Content-Type says.
* Success: HTTP 200 whose body is the answer string verbatim — plain text
  (``text/plain; charset=utf-8``), never JSON-wrapped.
* Every request-level failure (unparseable body, missing or non-string
  ``"query"``, internal error) yields HTTP 200 with the fixed JSON body
  ``{"Status": "Failure --- some error occurred"}`` — byte-exact, including
  the triple dash. The service never returns 5xx for such failures.
* ``OPTIONS /docqna`` answers 204 with the CORS preflight headers;
  ``GET /docqna`` answers 405; unknown paths answer 404.
* Every response carries ``Access-Control-Allow-Origin``.

Built on the stdlib threading HTTP server: no framework defaults can drift
under the contract, and shutdown waits for in-flight requests (capped at 10
seconds).
"""

from __future__ import annotations

import json
import logging
import signal
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .chunking import ChunkParams, chunk_corpus
from .corpus import load_corpus
from .embedding import EmbeddingProviderConfig
from .errors import InvalidParams
from .index import VectorIndex, build_index, load_index
from .qa import QAConfig, qa_chain

logger = logging.getLogger(__name__)

ROUTE = "/docqna"
FAILURE_BODY = '{"Status": "Failure --- some error occurred"}'
ALLOWED_METHODS = "POST, OPTIONS"
ALLOWED_HEADERS = "Content-Type"
SHUTDOWN_GRACE_SECONDS = 10.0


@dataclass(frozen=True)
class ServiceConfig:
    """Everything needed to bring the service up."""

    host: str = "0.0.0.0"
    port: int = 8095
    data_dir: str = "data"
    index_path: str | None = None
    chunk_params: ChunkParams = field(default_factory=ChunkParams)
    qa_config: QAConfig = field(default_factory=QAConfig)
    provider: EmbeddingProviderConfig = field(default_factory=EmbeddingProviderConfig)
    cors_allow_origin: str = "*"

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise InvalidParams(f"port must be in [1, 65535], got {self.port}")
        if self.qa_config.context_budget < self.chunk_params.chunk_size:
            raise InvalidParams(
                f"context_budget ({self.qa_config.context_budget}) must be >= "
                f"chunk_size ({self.chunk_params.chunk_size})"
            )


@dataclass
class ServiceState:
    """The immutable pieces every request handler works against."""

    index: VectorIndex
    qa_config: QAConfig = field(default_factory=QAConfig)
    provider: EmbeddingProviderConfig = field(default_factory=EmbeddingProviderConfig)
    cors_allow_origin: str = "*"


def build_state(cfg: ServiceConfig) -> ServiceState:
    """Run the startup indexing path: load a saved index or build one fresh."""
    if cfg.index_path:
        index = load_index(cfg.index_path)
        logger.info(
            "loaded index %s: %d chunks, dim=%d, provider=%s",
            cfg.index_path, len(index), index.dim, index.provider_kind,
        )
    else:
        docs = load_corpus(cfg.data_dir)
        chunks = chunk_corpus(docs, cfg.chunk_params)
        index = build_index(chunks, cfg.provider, cfg.chunk_params)
        logger.info(
            "indexed %d documents into %d chunks (dim=%d, provider=%s)",
            len(docs), len(chunks), index.dim, index.provider_kind,
        )
    return ServiceState(
        index=index,
        qa_config=cfg.qa_config,
        provider=cfg.provider,
        cors_allow_origin=cfg.cors_allow_origin,
    )


class _DocQNAHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    timeout = 30

    server: "DocQAServer"  # narrowed for attribute access

    # -- response plumbing ---------------------------------------------------

    def _respond(self, status: int, body: bytes | None = None,
                 content_type: str | None = None,
                 extra_headers: dict[str, str] | None = None) -> None:
        self.send_response(status)
        self.send_header("Access-Control-Allow-Origin", self.server.state.cors_allow_origin)
        for name, value in (extra_headers or {}).items():
            self.send_header(name, value)
        if status != 204:
            self.send_header("Content-Type", content_type or "text/plain; charset=utf-8")
            self.send_header("Content-Length", str(len(body or b"")))
        self.send_header("Connection", "close")
        self.end_headers()
        if body and status != 204:
            self.wfile.write(body)

    def _log_request(self, outcome: str, status: int, started: float) -> None:
        logger.info(
            "%s %s -> %d %s %.1fms",
            self.command, self.path, status, outcome,
            (time.perf_counter() - started) * 1000.0,
        )

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        logger.debug("%s - %s", self.address_string(), format % args)

    # -- routes ----------------------------------------------------------------

    def do_POST(self) -> None:
        started = time.perf_counter()
        if self.path != ROUTE:
            self._respond(404, b"Not Found")
            self._log_request("not_found", 404, started)
            return
        try:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length > 0 else b""
            payload = json.loads(raw.decode("utf-8"))
            query = payload["query"]
            if not isinstance(query, str):
                raise InvalidParams("query must be a JSON string")
            state = self.server.state
            result = qa_chain(query, state.index, state.qa_config, state.provider)
            body = result.answer.encode("utf-8")
            content_type = "text/plain; charset=utf-8"
            outcome = "ok"
        except Exception as exc:
            body = FAILURE_BODY.encode("utf-8")
            content_type = "application/json"
            outcome = f"failure ({type(exc).__name__})"
        self._respond(200, body, content_type=content_type)
        self._log_request(outcome, 200, started)

    def do_OPTIONS(self) -> None:
        started = time.perf_counter()
        if self.path != ROUTE:
            self._respond(404, b"Not Found")
            self._log_request("not_found", 404, started)
            return
        self._respond(204, extra_headers={
            "Access-Control-Allow-Methods": ALLOWED_METHODS,
            "Access-Control-Allow-Headers": ALLOWED_HEADERS,
        })
        self._log_request("preflight", 204, started)

    def _method_not_allowed(self) -> None:
        started = time.perf_counter()
        if self.path != ROUTE:
            self._respond(404, b"Not Found")
            self._log_request("not_found", 404, started)
            return
        self._respond(405, b"Method Not Allowed", extra_headers={"Allow": ALLOWED_METHODS})
        self._log_request("method_not_allowed", 405, started)

    do_GET = _method_not_allowed
    do_HEAD = _method_not_allowed
    do_PUT = _method_not_allowed
    do_DELETE = _method_not_allowed
    do_PATCH = _method_not_allowed


class DocQAServer(ThreadingHTTPServer):
    """Threading HTTP server that can drain in-flight requests on stop."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: tuple[str, int], state: ServiceState):
        super().__init__(address, _DocQNAHandler)
        self.state = state
        self._inflight = 0
        self._idle = threading.Condition()

    @contextmanager
    def _track(self):
        with self._idle:
            self._inflight += 1
        try:
            yield
        finally:
            with self._idle:
                self._inflight -= 1
                self._idle.notify_all()

    def process_request_thread(self, request, client_address) -> None:
        with self._track():
            super().process_request_thread(request, client_address)

    def wait_idle(self, timeout: float) -> bool:
        """Block until no request is in flight, or the timeout elapses."""
        deadline = time.monotonic() + timeout
        with self._idle:
            while self._inflight > 0:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return False
                self._idle.wait(remaining)
        return True

    def stop(self, grace: float = SHUTDOWN_GRACE_SECONDS) -> None:
        """Stop accepting connections, drain in-flight requests, close."""
        self.shutdown()
        if not self.wait_idle(grace):
            logger.warning("shutdown grace of %.0fs elapsed with requests in flight", grace)
        self.server_close()


def serve_in_background(state: ServiceState, host: str = "127.0.0.1",
                        port: int = 0) -> DocQAServer:
    """Start a server on ``host:port`` (0 picks an ephemeral port).

    Returns once the socket is bound and the serving thread is running;
    call ``.stop()`` on the returned server to tear it down.
    """
    server = DocQAServer((host, port), state)
    thread = threading.Thread(target=server.serve_forever, name="docqna-server", daemon=True)
    thread.start()
    return server


def run_server(cfg: ServiceConfig, stop_event: threading.Event | None = None) -> None:
    """Bring the service up and serve until SIGINT/SIGTERM.

    Startup aborts (by raising) when the corpus is empty, the index file is
    corrupt, or the port cannot be bound; shutdown completes in-flight
    requests, capped at 10 seconds. ``stop_event`` lets embedders and tests
    request shutdown without a signal.
    """
    state = build_state(cfg)
    server = DocQAServer((cfg.host, cfg.port), state)
    logger.info("listening on %s:%d", cfg.host, server.server_port)

    stop_requested = stop_event if stop_event is not None else threading.Event()

    def _request_stop(signum, frame) -> None:
        logger.info("received signal %d, shutting down", signum)
        stop_requested.set()

    previous = {}
    if threading.current_thread() is threading.main_thread():
        previous = {
            sig: signal.signal(sig, _request_stop)
            for sig in (signal.SIGINT, signal.SIGTERM)
        }
    serve_thread = threading.Thread(target=server.serve_forever, name="docqna-server")
    serve_thread.start()
    try:
        stop_requested.wait()
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
        serve_thread.join()
        for sig, handler in previous.items():
            signal.signal(sig, handler)
        logger.info("shutdown complete")
