"""BM25 inverted index over paragraphs.

Uses the lower-bounded idf variant ln(1 + (N - df + 0.5) / (df + 0.5)) so
scores stay non-negative; k1/b default to 0.9/0.4. Stopwords are indexed
(idf discounts them) but dropped from queries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .corpus import Paragraph
from .tokenizer import tokenize

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4
DEFAULT_TOP_K = 29

_INDEX_FORMAT = "siteqa-text-index"
_INDEX_VERSION = 1


@dataclass(frozen=True)
class ScoredParagraph:
    para_id: str
    score: float
    rank: int


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[str, int]]]
    doc_len: dict[str, int]
    N: int
    avgdl: float
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    _df: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._df = {stem: len(plist) for stem, plist in self.postings.items()}

    def idf(self, stem: str) -> float:
        df = self._df.get(stem, 0)
        return math.log(1.0 + (self.N - df + 0.5) / (df + 0.5))

    def term_frequency(self, stem: str, para_id: str) -> int:
        for pid, tf in self.postings.get(stem, ()):
            if pid == para_id:
                return tf
        return 0


def paragraph_stems(paragraph: Paragraph, title: str | None = None) -> list[str]:
    """Token stems indexed for a paragraph; title tokens are prepended."""
    stems = []
    if title:
        stems.extend(token.stem for token in tokenize(title))
    stems.extend(token.stem for token in tokenize(paragraph.text))
    return stems


def build_index(paragraphs: list[Paragraph], k1: float = DEFAULT_K1, b: float = DEFAULT_B,
                titles: dict[str, str] | None = None) -> InvertedIndex:
    """Build postings and length statistics over the given paragraphs."""
    if not paragraphs:
        raise ValueError("cannot build an index over zero paragraphs")
    if not (k1 >= 0 and 0 <= b <= 1):
        raise ValueError(f"invalid BM25 parameters k1={k1} b={b}")
    postings: dict[str, dict[str, int]] = {}
    doc_len: dict[str, int] = {}
    for para in paragraphs:
        if para.para_id in doc_len:
            raise ValueError(f"duplicate para_id: {para.para_id!r}")
        stems = paragraph_stems(para, titles.get(para.doc_id) if titles else None)
        doc_len[para.para_id] = len(stems)
        for s in stems:
            by_para = postings.setdefault(s, {})
            by_para[para.para_id] = by_para.get(para.para_id, 0) + 1
    plists = {s: sorted(by_para.items()) for s, by_para in postings.items()}
    n = len(doc_len)
    avgdl = sum(doc_len.values()) / n
    return InvertedIndex(postings=plists, doc_len=doc_len, N=n, avgdl=avgdl, k1=k1, b=b)


def bm25_score(query_stems: list[str], para_id: str, index: InvertedIndex) -> float:
    """Sum idf-weighted saturated term frequencies over distinct query stems."""
    if para_id not in index.doc_len:
        raise KeyError(f"unknown para_id: {para_id!r}")
    dl = index.doc_len[para_id]
    norm = index.k1 * (1.0 - index.b + index.b * dl / index.avgdl)
    score = 0.0
    for s in dict.fromkeys(query_stems):
        tf = index.term_frequency(s, para_id)
        if tf == 0:
            continue
        score += index.idf(s) * tf * (index.k1 + 1.0) / (tf + norm)
    return score


def retrieve(question: str, index: InvertedIndex, k: int = DEFAULT_TOP_K) -> list[ScoredParagraph]:
    """Top-k paragraphs for the question's non-stopword stems.

    Zero-score paragraphs are excluded; ties break by ascending para_id.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    stems = [t.stem for t in tokenize(question) if not t.is_stopword]
    if not stems:
        return []
    candidates: set[str] = set()
    for s in dict.fromkeys(stems):
        candidates.update(pid for pid, _ in index.postings.get(s, ()))
    scored = []
    for pid in candidates:
        score = bm25_score(stems, pid, index)
        if score > 0.0:
            scored.append((score, pid))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [
        ScoredParagraph(para_id=pid, score=score, rank=rank)
        for rank, (score, pid) in enumerate(scored[:k], start=1)
    ]


def save_index(index: InvertedIndex, path: str) -> None:
    payload = {
        "format": _INDEX_FORMAT,
        "version": _INDEX_VERSION,
        "k1": index.k1,
        "b": index.b,
        "N": index.N,
        "avgdl": index.avgdl,
        "doc_len": index.doc_len,
        "postings": {s: [[pid, tf] for pid, tf in plist] for s, plist in index.postings.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_index(path: str) -> InvertedIndex:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != _INDEX_FORMAT:
        raise ValueError(f"not a text index file: {path}")
    if payload.get("version") != _INDEX_VERSION:
        raise ValueError(f"unsupported index version {payload.get('version')}")
    return InvertedIndex(
        postings={s: [(pid, tf) for pid, tf in plist] for s, plist in payload["postings"].items()},
        doc_len=dict(payload["doc_len"]),
        N=payload["N"],
        avgdl=payload["avgdl"],
        k1=payload["k1"],
        b=payload["b"],
    )
