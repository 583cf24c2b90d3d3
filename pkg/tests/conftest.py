import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from docqna import Chunk

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"


def make_chunk(chunk_id: int, text: str, doc_id: str = "doc.txt", start: int = 0) -> Chunk:
    return Chunk(chunk_id=chunk_id, doc_id=doc_id, start=start,
                 end=start + len(text), text=text)


@pytest.fixture
def write_corpus(tmp_path):
    """Factory writing named files under a fresh corpus directory."""
    def _write(files: dict[str, str | bytes], dirname: str = "data") -> Path:
        root = tmp_path / dirname
        root.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            path = root / name
            path.parent.mkdir(parents=True, exist_ok=True)
            if isinstance(content, bytes):
                path.write_bytes(content)
            else:
                path.write_text(content, encoding="utf-8")
        return root
    return _write


@pytest.fixture
def http_stub():
    """Factory spinning up one-endpoint stub servers on ephemeral ports.

    Returns ``(url, received)`` where ``received`` collects each POST's
    path, headers, and raw body for later assertions.
    """
    servers: list[ThreadingHTTPServer] = []

    def _make(status: int = 200, payload=None, raw: bytes | None = None,
              content_type: str = "application/json"):
        received: list[dict] = []

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                received.append({
                    "path": self.path,
                    "headers": dict(self.headers),
                    "body": body,
                })
                data = raw if raw is not None else json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_port}/embed", received

    yield _make
    for server in servers:
        server.shutdown()
        server.server_close()


# Three-topic corpus used by retrieval-flavored tests: small enough that
# each document is a single chunk under the default parameters.
ELEVATOR_DOC = (
    "Elevator scheduling is the problem of assigning elevator cars to hall "
    "calls so that passengers wait as little as possible. Classic "
    "dispatchers use collective control, while modern systems explore "
    "genetic algorithms, swarm intelligence, and learned policies. "
    "Evaluations typically report average waiting time, travel time, and "
    "energy use across simulated traffic patterns."
)

CONSTITUTION_DOC = (
    "A constitution distributes power among the branches of government and "
    "entrenches the rights of citizens. Amendments require a special "
    "legislative majority, and courts interpret disputed clauses. Judicial "
    "review keeps ordinary statutes consistent with constitutional text."
)

COOKING_DOC = (
    "A good vegetable stock starts with onions, carrots, and celery "
    "sweated gently in oil. Simmer rather than boil, skim the surface, "
    "and never add salt until the reduction is finished. Strain through "
    "fine mesh and cool quickly before storing."
)

THREE_TOPIC_CORPUS = {
    "cooking.txt": COOKING_DOC,
    "elevators.txt": ELEVATOR_DOC,
    "law.txt": CONSTITUTION_DOC,
}
