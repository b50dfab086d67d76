"""Feature-based linear ranking of candidate queries plus a logistic
confidence for the top answer, trained pairwise-perceptron style.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

from .kgstore import KnowledgeGraph, ResultSet, Var, execute
from .linker import link
from .querygen import CandidateQuery, generate
from .tokenizer import tokenize

logger = logging.getLogger(__name__)

DEFAULT_WEIGHTS = (2.0, 0.5, 0.5, -0.1, 0.5)
DEFAULT_BIAS = -1.0
DEFAULT_THETA_KG = 0.5

LEARNING_RATE = 0.1
EPOCHS = 50


@dataclass(frozen=True)
class FeatureVector:
    coverage: float            # f1: question content words matched by provenance
    pattern_count: int         # f2: triple patterns (enters the score negated)
    exact_label_ratio: float   # f3: spans whose surface equals the label verbatim
    log_result_size: float     # f4: ln(1 + |result|)
    relation_linked: float     # f5: 1 when every relation slot came from a span

    def scoring_vector(self) -> tuple[float, float, float, float, float]:
        return (
            self.coverage,
            -float(self.pattern_count),
            self.exact_label_ratio,
            self.log_result_size,
            self.relation_linked,
        )


@dataclass
class RankWeights:
    w: tuple[float, float, float, float, float] = DEFAULT_WEIGHTS
    bias: float = DEFAULT_BIAS
    theta_kg: float = DEFAULT_THETA_KG


def featurize(question: str, query: CandidateQuery, result: ResultSet) -> FeatureVector:
    content_positions = [t.position for t in tokenize(question) if not t.is_stopword]
    covered = set()
    for span in query.provenance:
        covered.update(p for p in content_positions if span.start_tok <= p < span.end_tok)
    coverage = len(covered) / len(content_positions) if content_positions else 0.0

    exact = sum(
        1 for span in query.provenance if span.surface.lower() == span.label_matched.lower()
    )
    exact_ratio = exact / len(query.provenance) if query.provenance else 0.0

    linked_relations = {s.element for s in query.provenance if s.kind == "relation"}
    relation_slots = [p.p for p in query.patterns if not isinstance(p.p, Var)]
    relation_linked = 1.0 if all(r in linked_relations for r in relation_slots) else 0.0

    return FeatureVector(
        coverage=coverage,
        pattern_count=len(query.patterns),
        exact_label_ratio=exact_ratio,
        log_result_size=math.log(1.0 + len(result)),
        relation_linked=relation_linked,
    )


def score(features: FeatureVector, weights: RankWeights) -> float:
    return sum(w * f for w, f in zip(weights.w, features.scoring_vector())) + weights.bias


def rank(candidates: list[tuple[CandidateQuery, FeatureVector]],
         weights: RankWeights) -> list[tuple[CandidateQuery, FeatureVector]]:
    """Descending by linear score; ties prefer fewer patterns, then serialization."""
    return sorted(
        candidates,
        key=lambda pair: (
            -score(pair[1], weights),
            pair[1].pattern_count,
            pair[0].serialization,
        ),
    )


def confidence(top_features: FeatureVector, weights: RankWeights) -> float:
    """Logistic confidence of the top candidate; monotone in the linear score."""
    return 1.0 / (1.0 + math.exp(-score(top_features, weights)))


def train_weights(training_path: str, graph: KnowledgeGraph,
                  initial: RankWeights | None = None) -> RankWeights:
    """Pairwise perceptron over (question, gold canonical serialization) records.

    For every incorrect candidate ranked above the gold one, the weight vector
    moves toward the gold features. Questions without candidates (or whose
    gold query is never generated) are skipped with a warning.
    """
    weights = RankWeights(
        w=tuple(initial.w) if initial else DEFAULT_WEIGHTS,
        bias=initial.bias if initial else DEFAULT_BIAS,
        theta_kg=initial.theta_kg if initial else DEFAULT_THETA_KG,
    )
    records = []
    with open(training_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))

    prepared = []
    skipped = 0
    for record in records:
        question = record["question"]
        gold = record["gold_query"]
        candidates = generate(link(question, graph), graph)
        featured = [(c, featurize(question, c, execute(c, graph))) for c in candidates]
        gold_entry = next((pair for pair in featured if pair[0].serialization == gold), None)
        if not featured or gold_entry is None:
            skipped += 1
            continue
        prepared.append((featured, gold_entry))
    if skipped:
        logger.warning("train_weights: skipped %d question(s) without usable candidates", skipped)

    w = list(weights.w)
    for _ in range(EPOCHS):
        for featured, gold_entry in prepared:
            current = RankWeights(w=tuple(w), bias=weights.bias, theta_kg=weights.theta_kg)
            ordering = rank(featured, current)
            gold_vec = gold_entry[1].scoring_vector()
            for candidate, features in ordering:
                if candidate is gold_entry[0]:
                    break
                wrong_vec = features.scoring_vector()
                for i in range(5):
                    w[i] += LEARNING_RATE * (gold_vec[i] - wrong_vec[i])
    return RankWeights(w=tuple(w), bias=weights.bias, theta_kg=weights.theta_kg)


def save_weights(weights: RankWeights, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"w": list(weights.w), "bias": weights.bias, "theta_kg": weights.theta_kg}, fh)


def load_weights(path: str) -> RankWeights:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    w = raw["w"]
    if len(w) != 5:
        raise ValueError(f"weights file must carry 5 weights, got {len(w)}")
    return RankWeights(w=tuple(float(x) for x in w), bias=float(raw["bias"]),
                       theta_kg=float(raw.get("theta_kg", DEFAULT_THETA_KG)))
