"""Corpus loading: one document per readable text file under a data directory.

Only plain-text files (``.txt``, ``.md``) are ingested. Files that are empty
or not valid UTF-8 are skipped with a warning so a single bad file never
kills the corpus. The walk is recursive and documents are returned in
byte-wise order of their relative paths, which keeps chunk ids reproducible
across runs and machines.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyCorpus, InvalidParams, MissingDirectory

logger = logging.getLogger(__name__)

TEXT_EXTENSIONS = frozenset({".txt", ".md"})


@dataclass(frozen=True)
class Document:
    """One corpus file: stable identifier, full text, and its UTF-8 byte length.

    ``doc_id`` is the file path relative to the corpus root, in POSIX form,
    and is unique within a corpus. ``text`` is never empty.
    """

    doc_id: str
    text: str
    byte_len: int = field(default=-1)

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise InvalidParams("doc_id must be non-empty")
        if not self.text:
            raise InvalidParams(f"document {self.doc_id!r} has empty text")
        if self.byte_len < 0:
            object.__setattr__(self, "byte_len", len(self.text.encode("utf-8")))


def load_corpus(data_dir: str | Path) -> list[Document]:
    """Load every recognized text file under ``data_dir`` as a Document.

    Files are discovered recursively, matched on extension
    (case-insensitive), and returned sorted by ``doc_id`` in byte-wise
    (UTF-8) order. Empty files, files that do not decode as UTF-8, and files
    that cannot be read are skipped with a logged warning.

    Raises:
        MissingDirectory: ``data_dir`` does not exist or is not readable.
        EmptyCorpus: no file survived the skip rules.
    """
    root = Path(data_dir)
    if not root.is_dir():
        raise MissingDirectory(f"corpus directory not found: {root}")

    try:
        paths = [
            p for p in root.rglob("*")
            if p.is_file() and p.suffix.lower() in TEXT_EXTENSIONS
        ]
    except OSError as exc:
        raise MissingDirectory(f"corpus directory not readable: {root}: {exc}") from exc

    paths.sort(key=lambda p: p.relative_to(root).as_posix().encode("utf-8"))

    documents: list[Document] = []
    for path in paths:
        doc_id = path.relative_to(root).as_posix()
        try:
            raw = path.read_bytes()
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", doc_id, exc)
            continue
        if not raw:
            logger.warning("skipping empty file %s", doc_id)
            continue
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            logger.warning("skipping non-UTF-8 file %s", doc_id)
            continue
        documents.append(Document(doc_id=doc_id, text=text, byte_len=len(raw)))

    if not documents:
        raise EmptyCorpus(f"no loadable documents under {root}")
    return documents
