"""Fallback pipeline across the KG and text branches.

The KG branch runs first; the text branch is consulted only when KG
confidence misses its threshold. When neither clears, the bundle carries the
low-confidence candidates from both branches so the user can still inspect
them. Entity answers are enriched with contextual metadata from the graph
and, via sitelinks, from the corpus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from urllib.parse import quote

from .config import SiteQaConfig
from .corpus import DocumentStore, Paragraph
from .kgstore import KnowledgeGraph, Literal, ResultSet, execute, term_display
from .linker import link
from .querygen import CandidateQuery, generate
from .ranker import FeatureVector, confidence, featurize, rank, score
from .reader import ReaderUnavailableError, TextAnswer, read, remote_read
from .retriever import InvertedIndex, retrieve


@dataclass(frozen=True)
class Enrichment:
    description: str | None = None
    image: str | None = None
    homepage: str | None = None
    coordinates: tuple[float, float] | None = None
    sitelink: str | None = None
    summary: str | None = None

    def to_json(self) -> dict:
        out: dict = {}
        for key in ("description", "image", "homepage", "sitelink", "summary"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.coordinates is not None:
            out["coordinates"] = {"lat": self.coordinates[0], "lon": self.coordinates[1]}
        return out


@dataclass(frozen=True)
class TextSource:
    url: str
    para_id: str
    start_char: int
    end_char: int
    deep_link: str
    paragraph: str = ""        # full paragraph text, so clients can highlight in place

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "para_id": self.para_id,
            "start_char": self.start_char,
            "end_char": self.end_char,
            "deep_link": self.deep_link,
            "paragraph": self.paragraph,
        }


@dataclass(frozen=True)
class KgAnswer:
    entities: tuple[str | Literal, ...]
    interpretation: str
    enrichment: dict[str, Enrichment]
    labels: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class LowConfidenceCandidate:
    branch: str
    score: float
    value: str
    interpretation: str | None = None
    source: TextSource | None = None

    def to_json(self) -> dict:
        out = {"branch": self.branch, "score": self.score, "value": self.value}
        if self.interpretation is not None:
            out["interpretation"] = self.interpretation
        if self.source is not None:
            out["source"] = self.source.to_json()
        return out


@dataclass
class AnswerBundle:
    question: str
    branch: str                      # kg | text | none
    confidence: float
    kg_answer: KgAnswer | None = None
    text_answer: TextAnswer | None = None
    text_source: TextSource | None = None
    low_confidence: list[LowConfidenceCandidate] = field(default_factory=list)
    presentation: str = "exploratory"
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        answers: list[dict] = []
        interpretation = None
        if self.branch == "kg" and self.kg_answer is not None:
            interpretation = self.kg_answer.interpretation
            for entity in self.kg_answer.entities:
                item: dict = {"type": "entity", "value": term_display(entity)}
                if isinstance(entity, str):
                    if entity in self.kg_answer.labels:
                        item["label"] = self.kg_answer.labels[entity]
                    if entity in self.kg_answer.enrichment:
                        item["enrichment"] = self.kg_answer.enrichment[entity].to_json()
                answers.append(item)
        elif self.branch == "text" and self.text_answer and self.text_answer.best:
            item = {"type": "span", "value": self.text_answer.best.text}
            if self.text_source is not None:
                item["source"] = self.text_source.to_json()
            answers.append(item)
        return {
            "question": self.question,
            "branch": self.branch,
            "confidence": self.confidence,
            "interpretation": interpretation,
            "answers": answers,
            "low_confidence": [c.to_json() for c in self.low_confidence],
            "presentation": self.presentation,
            "diagnostics": self.diagnostics,
        }


def deep_link(url: str, answer_text: str) -> str:
    """URL text-fragment syntax that highlights the answer in the source page."""
    return f"{url}#:~:text={quote(answer_text, safe='')}"


def _parse_coordinates(lexical: str) -> tuple[float, float] | None:
    text = lexical.strip()
    try:
        if text.lower().startswith("point(") and text.endswith(")"):
            lon, lat = text[6:-1].split()
            lat, lon = float(lat), float(lon)
        elif "," in text:
            lat, lon = (float(part) for part in text.split(","))
        else:
            return None
    except ValueError:
        return None
    if -90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0:
        return (lat, lon)
    return None


def _as_url(value: str | Literal) -> str | None:
    text = term_display(value)
    return text if "://" in text else None


def enrich(entities, graph: KnowledgeGraph, corpus_store: DocumentStore | None = None,
           paragraphs_by_doc: dict[str, list[Paragraph]] | None = None) -> dict[str, Enrichment]:
    """Contextual metadata per entity IRI, per the graph's enrichment roles."""
    out: dict[str, Enrichment] = {}
    props = graph.enrichment_props
    for entity in entities:
        if isinstance(entity, Literal):
            continue
        values: dict[str, object] = {}
        if "description" in props:
            for obj in graph.property_values(entity, props["description"]):
                values["description"] = term_display(obj)
                break
        for role in ("image", "homepage", "sitelink"):
            if role in props:
                for obj in graph.property_values(entity, props[role]):
                    url = _as_url(obj)
                    if url:
                        values[role] = url
                        break
        if "coordinates" in props:
            for obj in graph.property_values(entity, props["coordinates"]):
                if isinstance(obj, Literal):
                    coords = _parse_coordinates(obj.lexical)
                    if coords:
                        values["coordinates"] = coords
                        break
        sitelink = values.get("sitelink")
        if sitelink and corpus_store is not None and paragraphs_by_doc is not None:
            doc = corpus_store.by_url(str(sitelink))
            if doc is not None:
                paragraphs = paragraphs_by_doc.get(doc.doc_id, [])
                if paragraphs:
                    values["summary"] = paragraphs[0].text
        out[entity] = Enrichment(**values)  # type: ignore[arg-type]
    return out


def classify_presentation(bundle: AnswerBundle) -> str:
    if bundle.branch == "kg" and bundle.kg_answer is not None:
        entities = bundle.kg_answer.entities
        if len(entities) == 1:
            return "panel"
        if len(entities) >= 2:
            if any(e.coordinates is not None for e in bundle.kg_answer.enrichment.values()):
                return "map"
            return "grid"
    if bundle.branch == "text":
        return "span"
    return "exploratory"


class FallbackPipeline:
    """Answers questions over immutable indexes; counts branch invocations."""

    def __init__(self, graph: KnowledgeGraph | None, index: InvertedIndex | None,
                 paragraphs: dict[str, Paragraph], documents: DocumentStore | None,
                 paragraphs_by_doc: dict[str, list[Paragraph]] | None = None,
                 config: SiteQaConfig | None = None) -> None:
        self.graph = graph
        self.index = index
        self.paragraphs = paragraphs
        self.documents = documents
        self.paragraphs_by_doc = paragraphs_by_doc or {}
        self.config = config or SiteQaConfig()
        self.kg_calls = 0
        self.text_calls = 0

    def _kg_branch(self, question: str) -> tuple[float, list[tuple[CandidateQuery, FeatureVector]]]:
        if self.graph is None:
            return 0.0, []
        spans = link(question, self.graph)
        candidates = generate(spans, self.graph)
        if not candidates:
            return 0.0, []
        featured = [
            (query, featurize(question, query, execute(query, self.graph)))
            for query in candidates
        ]
        ordered = rank(featured, self.config.weights)
        return confidence(ordered[0][1], self.config.weights), ordered

    def _text_branch(self, question: str) -> tuple[TextAnswer, str | None]:
        if self.index is None:
            return TextAnswer(best=None, candidates=(), confidence=0.0), "no text index loaded"
        scored = retrieve(question, self.index, self.config.k)
        if not scored:
            return TextAnswer(best=None, candidates=(), confidence=0.0), None
        if self.config.reader_mode == "remote" and self.config.reader_endpoint:
            try:
                answer = remote_read(
                    question, scored, self.paragraphs, self.config.reader_endpoint,
                    timeout_ms=self.config.reader_timeout_ms,
                    theta_null=self.config.theta_null,
                )
            except ReaderUnavailableError as exc:
                return TextAnswer(best=None, candidates=(), confidence=0.0), str(exc)
        else:
            answer = read(
                question, scored, self.paragraphs,
                theta_null=self.config.theta_null,
                max_span_tokens=self.config.max_span_tokens,
            )
        return answer, None

    def _kg_low_confidence(self, ordered, skip_first: bool) -> list[LowConfidenceCandidate]:
        cap = self.config.low_confidence_cap
        picked = ordered[1:] if skip_first else ordered
        out = []
        for query, features in picked[:cap]:
            result = execute(query, self.graph)
            out.append(
                LowConfidenceCandidate(
                    branch="kg",
                    score=confidence(features, self.config.weights),
                    value=", ".join(term_display(v) for v in result),
                    interpretation=query.serialization,
                )
            )
        return out

    def _text_low_confidence(self, answer: TextAnswer, skip_first: bool) -> list[LowConfidenceCandidate]:
        cap = self.config.low_confidence_cap
        spans = answer.candidates[1:] if skip_first else answer.candidates
        out = []
        for span in spans[:cap]:
            out.append(
                LowConfidenceCandidate(
                    branch="text",
                    score=span.span_score,
                    value=span.text,
                    source=self._source_for(span.para_id, span.start_char, span.end_char, span.text),
                )
            )
        return out

    def _source_for(self, para_id: str, start: int, end: int, text: str) -> TextSource | None:
        paragraph = self.paragraphs.get(para_id)
        if paragraph is None or self.documents is None or paragraph.doc_id not in self.documents:
            return None
        url = self.documents.get(paragraph.doc_id).source_url
        return TextSource(url=url, para_id=para_id, start_char=start, end_char=end,
                          deep_link=deep_link(url, text), paragraph=paragraph.text)

    def answer(self, question: str, kb: tuple[str, ...] = ("kg", "text")) -> AnswerBundle:
        config = self.config
        diagnostics: dict = {}
        kg_conf = 0.0
        kg_ordered: list = []
        if "kg" in kb:
            self.kg_calls += 1
            kg_conf, kg_ordered = self._kg_branch(question)
            diagnostics["kg_confidence"] = kg_conf

        if "kg" in kb and kg_ordered and kg_conf >= config.weights.theta_kg:
            top_query, _ = kg_ordered[0]
            result = execute(top_query, self.graph)
            entities = tuple(result)
            enrichment = enrich(
                entities, self.graph, self.documents, self.paragraphs_by_doc
            )
            labels = {}
            for entity in entities:
                if isinstance(entity, str):
                    label = self.graph.node_label(entity)
                    if label is not None:
                        labels[entity] = label
            bundle = AnswerBundle(
                question=question,
                branch="kg",
                confidence=kg_conf,
                kg_answer=KgAnswer(
                    entities=entities,
                    interpretation=top_query.serialization,
                    enrichment=enrichment,
                    labels=labels,
                ),
                low_confidence=self._kg_low_confidence(kg_ordered, skip_first=True),
                diagnostics=diagnostics,
            )
            bundle.presentation = classify_presentation(bundle)
            return bundle

        text_answer = TextAnswer(best=None, candidates=(), confidence=0.0)
        if "text" in kb:
            self.text_calls += 1
            text_answer, reader_error = self._text_branch(question)
            diagnostics["text_confidence"] = text_answer.confidence
            if reader_error:
                diagnostics["reader_error"] = reader_error

        if text_answer.best is not None and text_answer.confidence >= config.theta_text:
            best = text_answer.best
            low = self._kg_low_confidence(kg_ordered, skip_first=False)
            low += self._text_low_confidence(text_answer, skip_first=True)
            bundle = AnswerBundle(
                question=question,
                branch="text",
                confidence=text_answer.confidence,
                text_answer=text_answer,
                text_source=self._source_for(best.para_id, best.start_char, best.end_char, best.text),
                low_confidence=low,
                diagnostics=diagnostics,
            )
            bundle.presentation = classify_presentation(bundle)
            return bundle

        low = self._kg_low_confidence(kg_ordered, skip_first=False)
        low += self._text_low_confidence(text_answer, skip_first=False)
        bundle = AnswerBundle(
            question=question,
            branch="none",
            confidence=max(kg_conf, text_answer.confidence),
            low_confidence=low,
            diagnostics=diagnostics,
        )
        bundle.presentation = classify_presentation(bundle)
        return bundle
