"""N-Triples parsing, the knowledge graph, and graph-pattern execution.

The graph keeps a stemmed label index (for n-gram linking) and adjacency
lists in both directions (for breadth-search and pattern evaluation). It is
immutable after build; execution is read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .tokenizer import stem_phrase

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
SKOS_ALT_LABEL = "http://www.w3.org/2004/02/skos/core#altLabel"
DEFAULT_LABEL_PREDICATES = (RDFS_LABEL, SKOS_ALT_LABEL)

ENRICHMENT_ROLES = ("description", "image", "homepage", "coordinates", "sitelink")

_KG_FORMAT = "siteqa-kg"
_KG_VERSION = 1

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_REVERSE_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


class NTriplesError(ValueError):
    def __init__(self, lineno: int, col: int, message: str) -> None:
        super().__init__(f"line {lineno}, column {col}: {message}")
        self.lineno = lineno
        self.col = col


@dataclass(frozen=True)
class Literal:
    lexical: str
    lang: str | None = None
    datatype: str | None = None


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    obj: str | Literal


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class TriplePattern:
    s: str | Var
    p: str | Var
    o: str | Var | Literal


def term_key(value: str | Literal) -> str:
    """Canonical text of a term, used for deterministic ordering."""
    if isinstance(value, Literal):
        out = '"' + value.lexical + '"'
        if value.lang:
            out += "@" + value.lang
        elif value.datatype:
            out += "^^<" + value.datatype + ">"
        return out
    return "<" + value + ">"


def term_display(value: str | Literal) -> str:
    return value.lexical if isinstance(value, Literal) else value


@dataclass(frozen=True)
class ResultSet:
    values: tuple[str | Literal, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __bool__(self) -> bool:
        return bool(self.values)


class _LineParser:
    def __init__(self, line: str, lineno: int) -> None:
        self.line = line
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str) -> NTriplesError:
        return NTriplesError(self.lineno, self.pos + 1, message)

    def skip_ws(self) -> None:
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def _unescape(self, raw: str, base_col: int) -> str:
        out = []
        i = 0
        while i < len(raw):
            c = raw[i]
            if c != "\\":
                out.append(c)
                i += 1
                continue
            if i + 1 >= len(raw):
                raise NTriplesError(self.lineno, base_col + i + 1, "dangling escape")
            e = raw[i + 1]
            if e in _ESCAPES:
                out.append(_ESCAPES[e])
                i += 2
            elif e in ("u", "U"):
                width = 4 if e == "u" else 8
                hexpart = raw[i + 2 : i + 2 + width]
                if len(hexpart) != width or any(h not in "0123456789abcdefABCDEF" for h in hexpart):
                    raise NTriplesError(self.lineno, base_col + i + 1, f"bad \\{e} escape")
                out.append(chr(int(hexpart, 16)))
                i += 2 + width
            else:
                raise NTriplesError(self.lineno, base_col + i + 1, f"unknown escape \\{e}")
        return "".join(out)

    def parse_iri(self) -> str:
        if self.line[self.pos] != "<":
            raise self.error("expected '<'")
        end = self.line.find(">", self.pos + 1)
        if end == -1:
            raise self.error("unterminated IRI")
        raw = self.line[self.pos + 1 : end]
        iri = self._unescape(raw, self.pos + 1)
        if ":" not in iri:
            raise self.error(f"IRI is not absolute: {iri!r}")
        self.pos = end + 1
        return iri

    def parse_blank(self) -> str:
        start = self.pos
        self.pos += 2
        while self.pos < len(self.line) and (self.line[self.pos].isalnum() or self.line[self.pos] in "_-"):
            self.pos += 1
        if self.pos == start + 2:
            raise self.error("empty blank node label")
        return self.line[start : self.pos]

    def parse_subject(self) -> str:
        if self.pos >= len(self.line):
            raise self.error("expected subject")
        if self.line.startswith("_:", self.pos):
            return self.parse_blank()
        return self.parse_iri()

    def parse_literal(self) -> Literal:
        end = self.pos + 1
        while True:
            end = self.line.find('"', end)
            if end == -1:
                raise self.error("unterminated literal")
            backslashes = 0
            j = end - 1
            while j >= 0 and self.line[j] == "\\":
                backslashes += 1
                j -= 1
            if backslashes % 2 == 0:
                break
            end += 1
        lexical = self._unescape(self.line[self.pos + 1 : end], self.pos + 1)
        self.pos = end + 1
        lang = None
        datatype = None
        if self.pos < len(self.line) and self.line[self.pos] == "@":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.line) and (self.line[self.pos].isalnum() or self.line[self.pos] == "-"):
                self.pos += 1
            if self.pos == start:
                raise self.error("empty language tag")
            lang = self.line[start : self.pos].lower()
        elif self.line.startswith("^^", self.pos):
            self.pos += 2
            datatype = self.parse_iri()
        return Literal(lexical=lexical, lang=lang, datatype=datatype)

    def parse_object(self) -> str | Literal:
        if self.pos >= len(self.line):
            raise self.error("expected object")
        c = self.line[self.pos]
        if c == '"':
            return self.parse_literal()
        if self.line.startswith("_:", self.pos):
            return self.parse_blank()
        return self.parse_iri()


def parse_ntriples(line_stream: Iterable[str]) -> list[Triple]:
    """Parse N-Triples lines; raises NTriplesError on the first bad line."""
    triples = []
    for lineno, line in enumerate(line_stream, start=1):
        line = line.rstrip("\n").rstrip("\r")
        parser = _LineParser(line, lineno)
        parser.skip_ws()
        if parser.pos >= len(line) or line[parser.pos] == "#":
            continue
        subject = parser.parse_subject()
        parser.skip_ws()
        predicate = parser.parse_iri()
        parser.skip_ws()
        obj = parser.parse_object()
        parser.skip_ws()
        if parser.pos >= len(line) or line[parser.pos] != ".":
            raise parser.error("expected terminating '.'")
        parser.pos += 1
        parser.skip_ws()
        if parser.pos < len(line) and line[parser.pos] != "#":
            raise parser.error("trailing content after '.'")
        triples.append(Triple(subject=subject, predicate=predicate, obj=obj))
    return triples


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _REVERSE_ESCAPES:
            out.append(_REVERSE_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def _serialize_term(value: str | Literal) -> str:
    if isinstance(value, Literal):
        out = '"' + _escape_literal(value.lexical) + '"'
        if value.lang:
            out += "@" + value.lang
        elif value.datatype:
            out += "^^<" + value.datatype + ">"
        return out
    if value.startswith("_:"):
        return value
    return "<" + value + ">"


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    lines = []
    for t in triples:
        lines.append(f"{_serialize_term(t.subject)} {_serialize_term(t.predicate)} {_serialize_term(t.obj)} .")
    return "\n".join(lines) + ("\n" if lines else "")


class KnowledgeGraph:
    """Triples plus derived indexes: labels, adjacency, predicate set."""

    def __init__(self, triples: list[Triple], label_predicates: Iterable[str] = DEFAULT_LABEL_PREDICATES,
                 enrichment_props: dict[str, str] | None = None) -> None:
        self.triples = list(triples)
        self.triple_set = set(self.triples)
        self.label_predicates = tuple(label_predicates)
        self.enrichment_props = dict(enrichment_props or {})
        self.predicates = {t.predicate for t in self.triples}
        self.out_adj: dict[str, list[tuple[str, str | Literal]]] = {}
        self.in_adj: dict[str, list[tuple[str, str]]] = {}
        for t in self.triples:
            self.out_adj.setdefault(t.subject, []).append((t.predicate, t.obj))
            if not isinstance(t.obj, Literal):
                self.in_adj.setdefault(t.obj, []).append((t.predicate, t.subject))
        self.labels: dict[str, list[tuple[str, str, str]]] = {}
        for t in self.triples:
            if t.predicate in self.label_predicates and isinstance(t.obj, Literal):
                phrase = stem_phrase(t.obj.lexical)
                if not phrase:
                    continue
                kind = "relation" if t.subject in self.predicates else "node"
                entry = (t.subject, kind, t.obj.lexical)
                entries = self.labels.setdefault(phrase, [])
                if entry not in entries:
                    entries.append(entry)
        for entries in self.labels.values():
            entries.sort()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, KnowledgeGraph)
            and self.triples == other.triples
            and self.label_predicates == other.label_predicates
            and self.enrichment_props == other.enrichment_props
        )

    def node_label(self, iri: str) -> str | None:
        """First label literal attached via a label predicate, if any."""
        for pred in self.label_predicates:
            for p, o in self.out_adj.get(iri, ()):
                if p == pred and isinstance(o, Literal):
                    return o.lexical
        return None

    def property_values(self, iri: str, predicate: str) -> list[str | Literal]:
        return [o for p, o in self.out_adj.get(iri, ()) if p == predicate]

    def neighbors(self, iri: str) -> list[tuple[str, str]]:
        """Undirected IRI neighbors as (predicate, neighbor) pairs."""
        out: list[tuple[str, str]] = []
        for p, o in self.out_adj.get(iri, ()):
            if not isinstance(o, Literal):
                out.append((p, o))
        for p, s in self.in_adj.get(iri, ()):
            out.append((p, s))
        return out


def build_graph(triples: list[Triple], label_predicates: Iterable[str] = DEFAULT_LABEL_PREDICATES,
                enrichment_props: dict[str, str] | None = None) -> KnowledgeGraph:
    return KnowledgeGraph(triples, label_predicates, enrichment_props)


def _substitute(term: str | Var | Literal, binding: dict[str, str | Literal]) -> str | Var | Literal:
    if isinstance(term, Var) and term.name in binding:
        return binding[term.name]
    return term


def _match_pattern(pattern: TriplePattern, binding: dict[str, str | Literal],
                   graph: KnowledgeGraph) -> list[dict[str, str | Literal]]:
    s = _substitute(pattern.s, binding)
    p = _substitute(pattern.p, binding)
    o = _substitute(pattern.o, binding)
    results = []

    def emit(sv: str, pv: str, ov: str | Literal) -> None:
        new = dict(binding)
        ok = True
        for term, value in ((s, sv), (p, pv), (o, ov)):
            if isinstance(term, Var):
                if term.name in new and new[term.name] != value:
                    ok = False
                    break
                new[term.name] = value
            elif term != value:
                ok = False
                break
        if ok:
            results.append(new)

    if not isinstance(s, Var):
        if isinstance(s, Literal):
            return []
        for pv, ov in graph.out_adj.get(s, ()):
            if not isinstance(p, Var) and pv != p:
                continue
            if not isinstance(o, Var) and ov != o:
                continue
            emit(s, pv, ov)
    elif not isinstance(o, (Var, Literal)):
        for pv, sv in graph.in_adj.get(o, ()):
            if not isinstance(p, Var) and pv != p:
                continue
            emit(sv, pv, o)
    else:
        for t in graph.triples:
            if not isinstance(p, Var) and t.predicate != p:
                continue
            if not isinstance(o, Var) and t.obj != o:
                continue
            emit(t.subject, t.predicate, t.obj)
    return results


def execute_patterns(patterns: list[TriplePattern], projection: str,
                     graph: KnowledgeGraph) -> ResultSet:
    """Conjunctive-pattern evaluation: bindings of the projection variable."""
    bindings: list[dict[str, str | Literal]] = [{}]
    for pattern in patterns:
        bindings = [b2 for b in bindings for b2 in _match_pattern(pattern, b, graph)]
        if not bindings:
            return ResultSet(values=())
    values = {b[projection] for b in bindings if projection in b}
    return ResultSet(values=tuple(sorted(values, key=term_key)))


def execute(query, graph: KnowledgeGraph) -> ResultSet:
    """Evaluate anything exposing .patterns and .projection (CandidateQuery)."""
    return execute_patterns(list(query.patterns), query.projection, graph)


def save_graph(graph: KnowledgeGraph, path: str) -> None:
    payload = {
        "format": _KG_FORMAT,
        "version": _KG_VERSION,
        "label_predicates": list(graph.label_predicates),
        "enrichment_props": graph.enrichment_props,
        "ntriples": serialize_ntriples(graph.triples),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_graph(path: str) -> KnowledgeGraph:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != _KG_FORMAT:
        raise ValueError(f"not a knowledge-graph file: {path}")
    if payload.get("version") != _KG_VERSION:
        raise ValueError(f"unsupported graph version {payload.get('version')}")
    triples = parse_ntriples(payload["ntriples"].splitlines())
    return KnowledgeGraph(triples, payload["label_predicates"], payload["enrichment_props"])
