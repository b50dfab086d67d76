"""Shared tokenization: alphanumeric tokens, lowercasing, Porter stems.

Stopwords are flagged rather than removed so that index statistics stay
standard; query-side code decides what to drop.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .porter import stem

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Fixed embedded English stopword list (~120 entries). "s" and "t" cover
# contraction fragments left by the alphanumeric split ("what's" -> what, s).
STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can could did do does doing
    down during each few for from further had has have having he her here hers
    herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own s same she should so some such t than that the
    their theirs them themselves then there these they this those through to
    too under until up very was we were what when where which while who whom
    why will with you your yours yourself yourselves
    """.split()
)


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    is_stopword: bool
    position: int


def tokenize(text: str) -> list[Token]:
    """Split on non-alphanumeric runs, lowercase, stem, flag stopwords."""
    tokens = []
    for position, match in enumerate(_TOKEN_RE.finditer(text)):
        surface = match.group(0)
        lowered = surface.lower()
        tokens.append(
            Token(
                surface=surface,
                stem=stem(lowered),
                is_stopword=lowered in STOPWORDS,
                position=position,
            )
        )
    return tokens


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character (start, end) of each token, aligned with tokenize(text)."""
    return [match.span() for match in _TOKEN_RE.finditer(text)]


def content_stems(text: str) -> list[str]:
    """Distinct non-stopword stems in first-occurrence order."""
    seen: dict[str, None] = {}
    for token in tokenize(text):
        if not token.is_stopword and token.stem not in seen:
            seen[token.stem] = None
    return list(seen)


def stem_phrase(text: str) -> str:
    """Space-joined stems of every token (stopwords retained)."""
    return " ".join(token.stem for token in tokenize(text))
