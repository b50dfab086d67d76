"""Build, persist and reload the data directory consumed by ask/serve/eval.

Layout: documents.jsonl, paragraphs.jsonl, text_index.json, kg.json,
weights.json (optional), manifest.json. Reloading reproduces the exact
behavior of the freshly built indexes.
"""

from __future__ import annotations

import json
import os

from .combiner import FallbackPipeline
from .config import SiteQaConfig
from .corpus import (
    Document,
    DocumentStore,
    Paragraph,
    read_corpus_file,
    split_paragraphs,
    write_corpus_file,
)
from .kgstore import KnowledgeGraph, load_graph, parse_ntriples, save_graph
from .ranker import RankWeights, load_weights, save_weights
from .retriever import InvertedIndex, build_index, load_index, save_index

_MANIFEST = "manifest.json"


class SiteData:
    """Everything a question needs: corpus, paragraphs, text index, graph."""

    def __init__(self, documents: DocumentStore | None = None,
                 paragraphs: list[Paragraph] | None = None,
                 index: InvertedIndex | None = None,
                 graph: KnowledgeGraph | None = None,
                 config: SiteQaConfig | None = None) -> None:
        self.documents = documents
        self.paragraphs = paragraphs or []
        self.index = index
        self.graph = graph
        self.config = config or SiteQaConfig()
        self.paragraphs_by_id = {p.para_id: p for p in self.paragraphs}
        self.paragraphs_by_doc: dict[str, list[Paragraph]] = {}
        for p in self.paragraphs:
            self.paragraphs_by_doc.setdefault(p.doc_id, []).append(p)

    @property
    def has_text(self) -> bool:
        return self.index is not None

    @property
    def has_kg(self) -> bool:
        return self.graph is not None

    def pipeline(self) -> FallbackPipeline:
        return FallbackPipeline(
            graph=self.graph,
            index=self.index,
            paragraphs=self.paragraphs_by_id,
            documents=self.documents,
            paragraphs_by_doc=self.paragraphs_by_doc,
            config=self.config,
        )


def build_text_data(corpus_path: str, config: SiteQaConfig) -> SiteData:
    """Ingest a JSONL corpus, split paragraphs, build the BM25 index."""
    documents = read_corpus_file(corpus_path)
    paragraphs: list[Paragraph] = []
    for doc in documents:
        paragraphs.extend(split_paragraphs(doc, config.min_chars, config.max_chars))
    titles = {doc.doc_id: doc.title for doc in documents}
    index = build_index(paragraphs, k1=config.k1, b=config.b, titles=titles)
    return SiteData(documents=documents, paragraphs=paragraphs, index=index, config=config)


def build_kg_data(ntriples_path: str, config: SiteQaConfig) -> KnowledgeGraph:
    with open(ntriples_path, encoding="utf-8") as fh:
        triples = parse_ntriples(fh)
    return KnowledgeGraph(triples, config.label_predicates, config.enrichment_props)


def _write_paragraphs(paragraphs: list[Paragraph], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in paragraphs:
            fh.write(json.dumps({
                "para_id": p.para_id, "doc_id": p.doc_id, "ordinal": p.ordinal,
                "text": p.text, "char_offset": p.char_offset,
            }, ensure_ascii=False) + "\n")


def _read_paragraphs(path: str) -> list[Paragraph]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                raw = json.loads(line)
                out.append(Paragraph(**raw))
    return out


def save_data(data: SiteData, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    manifest_path = os.path.join(directory, _MANIFEST)
    manifest = {"format": "siteqa-data", "version": 1, "text": False, "kg": False}
    if os.path.exists(manifest_path):
        with open(manifest_path, encoding="utf-8") as fh:
            manifest.update(json.load(fh))
    if data.documents is not None and data.index is not None:
        write_corpus_file(data.documents, os.path.join(directory, "documents.jsonl"))
        _write_paragraphs(data.paragraphs, os.path.join(directory, "paragraphs.jsonl"))
        save_index(data.index, os.path.join(directory, "text_index.json"))
        manifest["text"] = True
    if data.graph is not None:
        save_graph(data.graph, os.path.join(directory, "kg.json"))
        manifest["kg"] = True
    save_weights(data.config.weights, os.path.join(directory, "weights.json"))
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh)


def load_data(directory: str, config: SiteQaConfig | None = None) -> SiteData:
    manifest_path = os.path.join(directory, _MANIFEST)
    if not os.path.exists(manifest_path):
        raise FileNotFoundError(f"no siteqa data directory at {directory!r}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    config = config or SiteQaConfig()
    weights_path = os.path.join(directory, "weights.json")
    # stored weights apply unless the caller's config customized them
    if os.path.exists(weights_path) and config.weights == RankWeights():
        config.weights = load_weights(weights_path)
    documents = None
    paragraphs: list[Paragraph] = []
    index = None
    graph = None
    if manifest.get("text"):
        documents = read_corpus_file(os.path.join(directory, "documents.jsonl"))
        paragraphs = _read_paragraphs(os.path.join(directory, "paragraphs.jsonl"))
        index = load_index(os.path.join(directory, "text_index.json"))
    if manifest.get("kg"):
        graph = load_graph(os.path.join(directory, "kg.json"))
    return SiteData(documents=documents, paragraphs=paragraphs, index=index,
                    graph=graph, config=config)
