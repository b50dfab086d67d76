"""Document ingestion and paragraph splitting.

Documents arrive as JSON-lines records (keys: id, title, body, url); bodies
are split into blank-line-delimited blocks that become the retrieval units.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping
from urllib.parse import urlparse

DEFAULT_MIN_CHARS = 50
DEFAULT_MAX_CHARS = 1500

_SENTENCE_END = ".?!"


class CorpusError(ValueError):
    """Invalid corpus input (duplicate ids, missing fields, bad URLs)."""


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str
    source_url: str


@dataclass(frozen=True)
class Paragraph:
    para_id: str
    doc_id: str
    ordinal: int
    text: str
    char_offset: int


class DocumentStore:
    """Insertion-ordered, immutable-after-build collection of documents."""

    def __init__(self) -> None:
        self._docs: dict[str, Document] = {}

    def add(self, doc: Document) -> None:
        if doc.doc_id in self._docs:
            raise CorpusError(f"duplicate doc_id: {doc.doc_id!r}")
        self._docs[doc.doc_id] = doc

    def get(self, doc_id: str) -> Document:
        return self._docs[doc_id]

    def by_url(self, url: str) -> Document | None:
        for doc in self._docs.values():
            if doc.source_url == url:
                return doc
        return None

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs


def _validate_url(url: str) -> bool:
    parsed = urlparse(url)
    return bool(parsed.scheme) and bool(parsed.netloc or parsed.path)


def ingest_documents(record_stream: Iterable[Mapping[str, object]]) -> DocumentStore:
    """Build a DocumentStore from record dicts, rejecting bad records.

    Records need doc_id, title, body and source_url; errors carry the 1-based
    position of the offending record.
    """
    store = DocumentStore()
    for lineno, record in enumerate(record_stream, start=1):
        for field in ("doc_id", "title", "body", "source_url"):
            if field not in record:
                raise CorpusError(f"record {lineno}: missing field {field!r}")
        doc_id = str(record["doc_id"])
        if not doc_id:
            raise CorpusError(f"record {lineno}: empty doc_id")
        source_url = str(record["source_url"])
        if not _validate_url(source_url):
            raise CorpusError(f"record {lineno}: source_url is not an absolute URL: {source_url!r}")
        store.add(
            Document(
                doc_id=doc_id,
                title=str(record["title"]),
                body=str(record["body"]),
                source_url=source_url,
            )
        )
    return store


def read_corpus_file(path: str) -> DocumentStore:
    """Load a UTF-8 JSON-lines corpus (keys: id, title, body, url)."""

    def records() -> Iterator[Mapping[str, object]]:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"line {lineno}: invalid JSON: {exc}") from exc
                for key in ("id", "title", "body", "url"):
                    if key not in raw:
                        raise CorpusError(f"line {lineno}: missing field {key!r}")
                yield {
                    "doc_id": raw["id"],
                    "title": raw["title"],
                    "body": raw["body"],
                    "source_url": raw["url"],
                }

    return ingest_documents(records())


def write_corpus_file(store: DocumentStore, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in store:
            fh.write(
                json.dumps(
                    {"id": doc.doc_id, "title": doc.title, "body": doc.body, "url": doc.source_url},
                    ensure_ascii=False,
                )
                + "\n"
            )


def _block_spans(body: str) -> list[tuple[int, int]]:
    """(start, end) of maximal runs of non-blank lines, trimmed of whitespace."""
    spans: list[tuple[int, int]] = []
    offset = 0
    start: int | None = None
    end = 0
    for line in body.splitlines(keepends=True):
        if line.strip():
            if start is None:
                start = offset
            end = offset + len(line)
        else:
            if start is not None:
                spans.append((start, end))
                start = None
        offset += len(line)
    if start is not None:
        spans.append((start, end))
    trimmed = []
    for s, e in spans:
        while s < e and body[s].isspace():
            s += 1
        while e > s and body[e - 1].isspace():
            e -= 1
        if e > s:
            trimmed.append((s, e))
    return trimmed


def _last_sentence_cut(text: str, limit: int) -> int:
    """Length of the longest prefix <= limit ending at a sentence boundary, or -1."""
    cut = -1
    for i in range(min(limit, len(text) - 1)):
        if text[i] in _SENTENCE_END and text[i + 1].isspace():
            cut = i + 1
    return cut


def split_paragraphs(doc: Document, min_chars: int = DEFAULT_MIN_CHARS,
                     max_chars: int = DEFAULT_MAX_CHARS) -> list[Paragraph]:
    """Split a document body into paragraphs.

    Blocks are blank-line delimited; blocks shorter than min_chars merge into
    the following block (a trailing short block stays on its own); blocks
    longer than max_chars split at the last sentence boundary before
    max_chars, hard-splitting when no boundary exists. Every paragraph text
    is a verbatim slice of the body.
    """
    if not (0 < min_chars < max_chars):
        raise ValueError(f"need 0 < min_chars < max_chars, got {min_chars}, {max_chars}")
    body = doc.body
    spans = _block_spans(body)

    merged: list[tuple[int, int]] = []
    pending_start: int | None = None
    for idx, (s, e) in enumerate(spans):
        start = pending_start if pending_start is not None else s
        if e - start < min_chars and idx < len(spans) - 1:
            pending_start = start
            continue
        merged.append((start, e))
        pending_start = None

    pieces: list[tuple[int, int]] = []
    for s, e in merged:
        while e - s > max_chars:
            cut = _last_sentence_cut(body[s:e], max_chars)
            if cut == -1:
                cut = max_chars
            pieces.append((s, s + cut))
            s += cut
            while s < e and body[s].isspace():
                s += 1
        pieces.append((s, e))

    paragraphs = []
    for ordinal, (s, e) in enumerate(pieces):
        while e > s and body[e - 1].isspace():
            e -= 1
        text = body[s:e]
        paragraphs.append(
            Paragraph(
                para_id=f"{doc.doc_id}#{ordinal}",
                doc_id=doc.doc_id,
                ordinal=ordinal,
                text=text,
                char_offset=s,
            )
        )
    return paragraphs
