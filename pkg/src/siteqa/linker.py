"""Map question n-grams to graph elements whose labels match up to stemming."""

from __future__ import annotations

from dataclasses import dataclass

from .kgstore import KnowledgeGraph
from .tokenizer import token_spans, tokenize

MAX_NGRAM_TOKENS = 8


@dataclass(frozen=True)
class LinkedSpan:
    start_tok: int
    end_tok: int
    surface: str
    element: str
    kind: str
    label_matched: str

    def overlaps(self, other: "LinkedSpan") -> bool:
        return self.start_tok < other.end_tok and other.start_tok < self.end_tok


def link(question: str, graph: KnowledgeGraph) -> list[LinkedSpan]:
    """All n-gram/label matches (1..8 tokens), every element retained.

    Stopword-only n-grams are skipped; a span wholly contained in a longer
    matching span for the same element is dropped. Disambiguation between
    different elements is left to ranking.
    """
    tokens = tokenize(question)
    spans = token_spans(question)
    found: list[LinkedSpan] = []
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + 1 + MAX_NGRAM_TOKENS, len(tokens) + 1)):
            window = tokens[i:j]
            if all(t.is_stopword for t in window):
                continue
            phrase = " ".join(t.stem for t in window)
            for element, kind, label in graph.labels.get(phrase, ()):
                found.append(
                    LinkedSpan(
                        start_tok=i,
                        end_tok=j,
                        surface=question[spans[i][0] : spans[j - 1][1]],
                        element=element,
                        kind=kind,
                        label_matched=label,
                    )
                )
    kept = [
        span
        for span in found
        if not any(
            other.element == span.element
            and other.start_tok <= span.start_tok
            and other.end_tok >= span.end_tok
            and (other.start_tok, other.end_tok) != (span.start_tok, span.end_tok)
            for other in found
        )
    ]
    kept.sort(key=lambda s: (s.start_tok, s.start_tok - s.end_tok, s.element))
    return kept
