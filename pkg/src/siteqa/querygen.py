"""Candidate graph-pattern construction from linked spans.

Templates (x is the projection variable, n/r are linked or path-discovered
constants):

    T1  (n, r, ?x)
    T2  (?x, r, n)
    T3  (n1, r1, ?x) . (?x, r2, n2)
    T4  (?x, r1, n1) . (?x, r2, n2)
    T5  (n1, ?p, n2)           -- projects the predicate

Relation slots take linked relations, or relations discovered on
breadth-search paths (length <= 2, any edge direction) between two linked
nodes. Every emitted query is executed and kept only when non-empty; spans
with overlapping token ranges never share a query's provenance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kgstore import KnowledgeGraph, TriplePattern, Var, execute_patterns
from .linker import LinkedSpan

MAX_CANDIDATES = 512
BFS_DEPTH = 2


@dataclass(frozen=True)
class CandidateQuery:
    patterns: tuple[TriplePattern, ...]
    projection: str
    provenance: tuple[LinkedSpan, ...]
    serialization: str


def _pattern_sort_key(pattern: TriplePattern) -> tuple[str, str, str]:
    def key(term) -> str:
        return "?" if isinstance(term, Var) else "<" + str(term) + ">"

    return (key(pattern.s), key(pattern.p), key(pattern.o))


def serialize(patterns: list[TriplePattern], projection_var: str) -> tuple[str, tuple[TriplePattern, ...], str]:
    """Canonical text: patterns sorted, variables renamed in first-use order.

    Returns (text, canonical patterns, canonical projection name).
    """
    ordered = sorted(patterns, key=_pattern_sort_key)
    names: dict[str, str] = {}

    def rename(term):
        if isinstance(term, Var):
            if term.name not in names:
                names[term.name] = f"v{len(names) + 1}"
            return Var(names[term.name])
        return term

    canonical = tuple(
        TriplePattern(rename(p.s), rename(p.p), rename(p.o)) for p in ordered
    )
    projection = names.get(projection_var, "v1")

    def text(term) -> str:
        return "?" + term.name if isinstance(term, Var) else "<" + str(term) + ">"

    body = " ".join(f"{text(p.s)} {text(p.p)} {text(p.o)} ." for p in canonical)
    return f"SELECT ?{projection} WHERE {{ {body} }}", canonical, projection


def discovered_relations(node_elements: list[str], graph: KnowledgeGraph) -> set[str]:
    """Predicates on paths of length <= BFS_DEPTH between two distinct linked nodes."""
    found: set[str] = set()
    distinct = sorted(set(node_elements))
    for a in distinct:
        for b in distinct:
            if a >= b:
                continue
            neighbors_a = graph.neighbors(a)
            neighbors_b = graph.neighbors(b)
            for p, n in neighbors_a:
                if n == b:
                    found.add(p)
            by_mid: dict[str, set[str]] = {}
            for p, n in neighbors_a:
                by_mid.setdefault(n, set()).add(p)
            for p, n in neighbors_b:
                if n in by_mid and n not in (a, b):
                    found.add(p)
                    found.update(by_mid[n])
    return found


def _compatible(spans: list[LinkedSpan]) -> bool:
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            if spans[i].overlaps(spans[j]):
                return False
    return True


def generate(spans: list[LinkedSpan], graph: KnowledgeGraph,
             max_patterns: int = 2) -> list[CandidateQuery]:
    """All non-empty candidate queries, sorted by canonical serialization."""
    if max_patterns not in (1, 2):
        raise ValueError(f"max_patterns must be 1 or 2, got {max_patterns}")
    node_spans = [s for s in spans if s.kind == "node"]
    relation_spans = [s for s in spans if s.kind == "relation"]
    if not node_spans:
        return []

    discovered = discovered_relations([s.element for s in node_spans], graph)
    # relation options: linked spans first (preferred attribution), then
    # path-discovered relations with no provenance of their own
    relation_options: list[tuple[str, LinkedSpan | None]] = [
        (s.element, s) for s in relation_spans
    ] + [(r, None) for r in sorted(discovered)]

    x = Var("x")
    p_var = Var("p")
    seen: dict[str, CandidateQuery] = {}

    def consider(patterns: list[TriplePattern], projection: str,
                 provenance: list[LinkedSpan]) -> None:
        if len(seen) >= MAX_CANDIDATES:
            return
        if not _compatible(provenance):
            return
        text, canonical, proj_name = serialize(patterns, projection)
        if text in seen:
            return
        if not execute_patterns(list(canonical), proj_name, graph):
            return
        seen[text] = CandidateQuery(
            patterns=canonical,
            projection=proj_name,
            provenance=tuple(provenance),
            serialization=text,
        )

    for ns in node_spans:
        for rel, rel_span in relation_options:
            prov = [ns] + ([rel_span] if rel_span else [])
            consider([TriplePattern(ns.element, rel, x)], "x", prov)
            consider([TriplePattern(x, rel, ns.element)], "x", prov)

    for ns1 in node_spans:
        for ns2 in node_spans:
            if ns1 is ns2:
                continue
            consider([TriplePattern(ns1.element, p_var, ns2.element)], "p", [ns1, ns2])
            if max_patterns < 2:
                continue
            for r1, r1_span in relation_options:
                for r2, r2_span in relation_options:
                    prov = [ns1, ns2]
                    prov += [s for s in (r1_span, r2_span) if s is not None]
                    consider(
                        [TriplePattern(ns1.element, r1, x), TriplePattern(x, r2, ns2.element)],
                        "x", prov,
                    )
                    consider(
                        [TriplePattern(x, r1, ns1.element), TriplePattern(x, r2, ns2.element)],
                        "x", prov,
                    )

    return sorted(seen.values(), key=lambda q: q.serialization)
