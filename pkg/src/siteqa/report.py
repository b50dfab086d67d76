"""Evaluation over a gold QA file, with an optional figure-backed report.

The report directory gets results.csv plus PNG figures (branch breakdown,
confidence histogram, accuracy bars) rendered with the Agg backend.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .combiner import FallbackPipeline  # noqa: E402


@dataclass
class EvalRow:
    question: str
    expected_branch: str | None
    got_branch: str
    branch_ok: bool | None
    expected_answer: str | None
    got_answers: list[str]
    answer_ok: bool | None
    confidence: float
    presentation: str


@dataclass
class EvalSummary:
    rows: list[EvalRow]
    branch_accuracy: float | None
    answer_accuracy: float | None


def _answer_strings(bundle_json: dict, pipeline: FallbackPipeline) -> list[str]:
    values = []
    for answer in bundle_json["answers"]:
        values.append(answer["value"])
        if "label" in answer:
            values.append(answer["label"])
    return values


def read_eval_file(path: str) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            if "question" not in record:
                raise ValueError(f"line {lineno}: eval record needs a 'question' key")
            records.append(record)
    return records


def evaluate(records: list[dict], pipeline: FallbackPipeline) -> EvalSummary:
    rows = []
    for record in records:
        bundle = pipeline.answer(record["question"]).to_json()
        got_answers = _answer_strings(bundle, pipeline)
        expected_branch = record.get("branch")
        expected_answer = record.get("answer")
        rows.append(
            EvalRow(
                question=record["question"],
                expected_branch=expected_branch,
                got_branch=bundle["branch"],
                branch_ok=None if expected_branch is None else bundle["branch"] == expected_branch,
                expected_answer=expected_answer,
                got_answers=got_answers,
                answer_ok=None if expected_answer is None else expected_answer in got_answers,
                confidence=bundle["confidence"],
                presentation=bundle["presentation"],
            )
        )
    branch_judged = [r for r in rows if r.branch_ok is not None]
    answer_judged = [r for r in rows if r.answer_ok is not None]
    return EvalSummary(
        rows=rows,
        branch_accuracy=(
            sum(r.branch_ok for r in branch_judged) / len(branch_judged) if branch_judged else None
        ),
        answer_accuracy=(
            sum(r.answer_ok for r in answer_judged) / len(answer_judged) if answer_judged else None
        ),
    )


def write_report(summary: EvalSummary, directory: str) -> list[str]:
    """Write results.csv and figures; returns the created file paths."""
    os.makedirs(directory, exist_ok=True)
    created = []

    csv_path = os.path.join(directory, "results.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "question", "expected_branch", "got_branch", "branch_ok",
            "expected_answer", "got_answers", "answer_ok", "confidence", "presentation",
        ])
        for r in summary.rows:
            writer.writerow([
                r.question, r.expected_branch or "", r.got_branch,
                "" if r.branch_ok is None else int(r.branch_ok),
                r.expected_answer or "", " | ".join(r.got_answers),
                "" if r.answer_ok is None else int(r.answer_ok),
                f"{r.confidence:.6f}", r.presentation,
            ])
    created.append(csv_path)

    branches = ["kg", "text", "none"]
    counts = [sum(1 for r in summary.rows if r.got_branch == b) for b in branches]
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(branches, counts, color=["#3b6ea5", "#a55e3b", "#767676"])
    ax.set_ylabel("questions")
    ax.set_title("Answer branch breakdown")
    fig.tight_layout()
    path = os.path.join(directory, "branch_breakdown.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    fig, ax = plt.subplots(figsize=(4, 3))
    ax.hist([r.confidence for r in summary.rows], bins=10, range=(0.0, 1.0), color="#3b6ea5")
    ax.set_xlabel("confidence")
    ax.set_ylabel("questions")
    ax.set_title("Confidence distribution")
    fig.tight_layout()
    path = os.path.join(directory, "confidence_histogram.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    fig, ax = plt.subplots(figsize=(4, 3))
    labels = []
    values = []
    if summary.branch_accuracy is not None:
        labels.append("branch")
        values.append(summary.branch_accuracy)
    if summary.answer_accuracy is not None:
        labels.append("answer")
        values.append(summary.answer_accuracy)
    if labels:
        ax.bar(labels, values, color=["#3b6ea5", "#5ba53b"][: len(labels)])
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("accuracy")
    ax.set_title("Accuracy")
    fig.tight_layout()
    path = os.path.join(directory, "accuracy.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    return created
