"""Answer-span extraction from retrieved paragraphs.

The deterministic lexical baseline scores candidate token runs by how many
distinct question content stems occur near them; a remote model service can
replace it behind the same contract (JSON over HTTP POST).
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from .corpus import Paragraph
from .retriever import ScoredParagraph
from .tokenizer import token_spans, tokenize

DEFAULT_MAX_SPAN_TOKENS = 30
DEFAULT_THETA_NULL = 0.5
CONTEXT_WINDOW = 20          # tokens around a span that count as nearby
SPAN_WEIGHT = 0.7            # fusion of span score with retrieval score
RETRIEVAL_WEIGHT = 0.3
MAX_CANDIDATES = 10
DEFAULT_TIMEOUT_MS = 2000


class ReaderUnavailableError(RuntimeError):
    """The remote reader could not be reached; treat as no text answer."""


class ReaderProtocolError(ValueError):
    """The remote reader returned a span violating the contract."""


@dataclass(frozen=True)
class ScoredSpan:
    para_id: str
    start_char: int
    end_char: int
    text: str
    span_score: float


@dataclass(frozen=True)
class TextAnswer:
    best: ScoredSpan | None
    candidates: tuple[ScoredSpan, ...]
    confidence: float


def extract_spans(question: str, paragraph: Paragraph,
                  max_span_tokens: int = DEFAULT_MAX_SPAN_TOKENS) -> list[ScoredSpan]:
    """Baseline span candidates for one paragraph.

    Candidates are maximal runs of consecutive tokens that are neither
    stopwords nor question stems, at most max_span_tokens long. A span scores
    the fraction of distinct question content stems occurring within
    CONTEXT_WINDOW tokens of it; ties order longer-first, then by start.
    """
    if max_span_tokens < 1:
        raise ValueError(f"max_span_tokens must be >= 1, got {max_span_tokens}")
    q_tokens = tokenize(question)
    question_stems = {t.stem for t in q_tokens}
    content = {t.stem for t in q_tokens if not t.is_stopword}

    tokens = tokenize(paragraph.text)
    spans = token_spans(paragraph.text)

    runs: list[tuple[int, int]] = []
    start = None
    for idx, token in enumerate(tokens):
        eligible = not token.is_stopword and token.stem not in question_stems
        if eligible and start is None:
            start = idx
        elif not eligible and start is not None:
            runs.append((start, idx))
            start = None
    if start is not None:
        runs.append((start, len(tokens)))

    results = []
    for run_start, run_end in runs:
        if run_end - run_start > max_span_tokens:
            continue
        if content:
            lo = run_start - CONTEXT_WINDOW
            hi = run_end - 1 + CONTEXT_WINDOW
            nearby = {
                t.stem for t in tokens[max(lo, 0) : hi + 1] if t.stem in content
            }
            span_score = len(nearby) / len(content)
        else:
            span_score = 0.0
        start_char = spans[run_start][0]
        end_char = spans[run_end - 1][1]
        results.append(
            ScoredSpan(
                para_id=paragraph.para_id,
                start_char=start_char,
                end_char=end_char,
                text=paragraph.text[start_char:end_char],
                span_score=span_score,
            )
        )
    results.sort(key=lambda s: (-s.span_score, s.start_char - s.end_char, s.start_char))
    return results


def _normalized_retrieval(paragraphs: list[ScoredParagraph]) -> dict[str, float]:
    scores = [p.score for p in paragraphs]
    lo, hi = min(scores), max(scores)
    if hi == lo:
        return {p.para_id: 1.0 for p in paragraphs}
    return {p.para_id: (p.score - lo) / (hi - lo) for p in paragraphs}


def _pool(per_paragraph: list[tuple[ScoredParagraph, list[ScoredSpan]]],
          theta_null: float) -> TextAnswer:
    """Fuse span scores with min-max-normalized retrieval scores."""
    ranked = [p for p, _ in per_paragraph]
    if not ranked:
        return TextAnswer(best=None, candidates=(), confidence=0.0)
    norm = _normalized_retrieval(ranked)
    pooled: list[tuple[float, int, ScoredSpan]] = []
    for paragraph, spans in per_paragraph:
        for span in spans:
            combined = SPAN_WEIGHT * span.span_score + RETRIEVAL_WEIGHT * norm[paragraph.para_id]
            pooled.append((combined, paragraph.rank, ScoredSpan(
                para_id=span.para_id,
                start_char=span.start_char,
                end_char=span.end_char,
                text=span.text,
                span_score=combined,
            )))
    # stable sort keeps each paragraph's longer-first order for equal scores
    pooled.sort(key=lambda item: (-item[0], item[1]))
    candidates = tuple(span for _, _, span in pooled[:MAX_CANDIDATES])
    if candidates and candidates[0].span_score >= theta_null:
        best = candidates[0]
        return TextAnswer(best=best, candidates=candidates, confidence=best.span_score)
    return TextAnswer(best=None, candidates=candidates, confidence=0.0)


def read(question: str, paragraphs: list[ScoredParagraph],
         paragraph_lookup: dict[str, Paragraph], theta_null: float = DEFAULT_THETA_NULL,
         max_span_tokens: int = DEFAULT_MAX_SPAN_TOKENS) -> TextAnswer:
    """Pool baseline spans over retrieved paragraphs and apply the null threshold."""
    if not 0 <= theta_null:
        raise ValueError(f"theta_null must be >= 0, got {theta_null}")
    per_paragraph = [
        (sp, extract_spans(question, paragraph_lookup[sp.para_id], max_span_tokens))
        for sp in paragraphs
    ]
    return _pool(per_paragraph, theta_null)


def remote_read(question: str, paragraphs: list[ScoredParagraph],
                paragraph_lookup: dict[str, Paragraph], endpoint: str,
                timeout_ms: int = DEFAULT_TIMEOUT_MS,
                theta_null: float = DEFAULT_THETA_NULL) -> TextAnswer:
    """Ask an external model service for spans; validate against the contract."""
    payload = {
        "question": question,
        "paragraphs": [
            {"para_id": sp.para_id, "text": paragraph_lookup[sp.para_id].text}
            for sp in paragraphs
        ],
    }
    try:
        response = requests.post(endpoint, json=payload, timeout=timeout_ms / 1000.0)
        response.raise_for_status()
        body = response.json()
    except (requests.RequestException, ValueError) as exc:
        raise ReaderUnavailableError(f"reader unavailable: {exc}") from exc

    by_para: dict[str, list[ScoredSpan]] = {sp.para_id: [] for sp in paragraphs}
    for raw in body.get("spans", []):
        para_id = raw.get("para_id")
        if para_id not in by_para:
            raise ReaderProtocolError(f"span for unknown paragraph {para_id!r}")
        text = paragraph_lookup[para_id].text
        start, end, score = raw.get("start_char"), raw.get("end_char"), raw.get("score")
        if (
            not isinstance(start, int) or not isinstance(end, int)
            or not isinstance(score, (int, float))
            or not (0 <= start < end <= len(text)) or not (0.0 <= score <= 1.0)
        ):
            raise ReaderProtocolError(f"invalid span {raw!r} for paragraph {para_id!r}")
        by_para[para_id].append(
            ScoredSpan(para_id=para_id, start_char=start, end_char=end,
                       text=text[start:end], span_score=float(score))
        )
    for spans in by_para.values():
        spans.sort(key=lambda s: (-s.span_score, s.start_char))
    per_paragraph = [(sp, by_para[sp.para_id]) for sp in paragraphs]
    return _pool(per_paragraph, theta_null)
