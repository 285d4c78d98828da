"""Retrieval metrics, aggregation, best-config selection, and paired significance.

Document-level metrics score the set of distinct documents the retrieved
chunks came from; evidence-level metrics score the set of (doc_id,
sentence_index) pairs the retrieved chunks cover. Both are macro-averaged
over queries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Protocol, Sequence

import numpy as np

from .chunkers import ChunkerConfig, config_from_dict, family


class ChunkLike(Protocol):
    """Anything carrying chunk provenance: a doc id and sentence indices."""

    doc_id: str
    sentence_indices: tuple[int, ...]


@dataclass(frozen=True)
class EvalRecord:
    """One query evaluated at one k under one chunker config."""

    query_id: str
    k: int
    retrieved_chunk_ids: tuple[str, ...]
    recall: float
    precision: float
    f1: float
    chunker_kind: str
    config_id: str


@dataclass(frozen=True)
class MetricRow:
    """Macro-averaged metrics for one (config, k) cell."""

    chunker_kind: str
    config_id: str
    k: int
    recall: float
    precision: float
    f1: float
    n_queries: int


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean, defined as 0 when both terms vanish."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def doc_metrics(
    retrieved_chunks: Sequence[ChunkLike], relevant_doc_ids: AbstractSet[str]
) -> tuple[float, float, float]:
    """(recall, precision, f1) over the distinct documents retrieved."""
    if not relevant_doc_ids:
        raise ValueError("relevant_doc_ids must be non-empty")
    retrieved_docs = {chunk.doc_id for chunk in retrieved_chunks}
    if not retrieved_docs:
        return 0.0, 0.0, 0.0
    hits = len(retrieved_docs & set(relevant_doc_ids))
    recall = hits / len(relevant_doc_ids)
    precision = hits / len(retrieved_docs)
    return recall, precision, f1_score(precision, recall)


def evidence_metrics(
    retrieved_chunks: Sequence[ChunkLike], evidence: AbstractSet[tuple[str, int]]
) -> tuple[float, float, float]:
    """(recall, precision, f1) over the sentences the retrieved chunks cover."""
    if not evidence:
        raise ValueError("evidence must be non-empty")
    covered = {
        (chunk.doc_id, index)
        for chunk in retrieved_chunks
        for index in chunk.sentence_indices
    }
    if not covered:
        return 0.0, 0.0, 0.0
    hits = len(covered & set(evidence))
    recall = hits / len(evidence)
    precision = hits / len(covered)
    return recall, precision, f1_score(precision, recall)


def aggregate(records: Iterable[EvalRecord]) -> list[MetricRow]:
    """Macro-average per-query metrics into one row per (config, k).

    Order-insensitive: records are grouped and averaged over queries
    sorted by query_id, and rows come out sorted by (kind, config, k).
    """
    groups: dict[tuple[str, str, int], list[EvalRecord]] = {}
    for record in records:
        groups.setdefault(
            (record.chunker_kind, record.config_id, record.k), []
        ).append(record)
    rows: list[MetricRow] = []
    for key in sorted(groups):
        kind, config_id, k = key
        members = sorted(groups[key], key=lambda r: r.query_id)
        count = len(members)
        rows.append(
            MetricRow(
                chunker_kind=kind,
                config_id=config_id,
                k=k,
                recall=sum(r.recall for r in members) / count,
                precision=sum(r.precision for r in members) / count,
                f1=sum(r.f1 for r in members) / count,
                n_queries=count,
            )
        )
    return rows


def select_best_config(
    rows: Sequence[MetricRow], k_values: Sequence[int]
) -> dict[str, ChunkerConfig]:
    """Per reporting family, the config with the highest mean F1 across k.

    Every config must have a row for every k in k_values; ties go to the
    canonically smallest config serialization.
    """
    k_values = list(k_values)
    if not k_values:
        raise ValueError("k_values must be non-empty")
    by_config: dict[str, dict[int, float]] = {}
    for row in rows:
        by_config.setdefault(row.config_id, {})[row.k] = row.f1
    if not by_config:
        raise ValueError("no metric rows to select from")

    best: dict[str, tuple[float, str]] = {}
    for config_id in sorted(by_config):
        f1_by_k = by_config[config_id]
        missing = [k for k in k_values if k not in f1_by_k]
        if missing:
            raise ValueError(
                f"config {config_id} is missing rows for k={missing}"
            )
        mean_f1 = sum(f1_by_k[k] for k in k_values) / len(k_values)
        fam = family(config_from_dict(json.loads(config_id)))
        incumbent = best.get(fam)
        if incumbent is None or mean_f1 > incumbent[0]:
            best[fam] = (mean_f1, config_id)
        # On an exact tie the earlier (canonically smaller) config_id wins,
        # which the sorted iteration already guarantees.
    return {
        fam: config_from_dict(json.loads(config_id))
        for fam, (_, config_id) in sorted(best.items())
    }


def paired_permutation_test(
    scores_a: Sequence[float],
    scores_b: Sequence[float],
    iterations: int = 10000,
    seed: int = 0,
) -> float:
    """Two-sided sign-flip permutation test on paired per-query scores.

    The statistic is the mean difference. When 2**n <= iterations the
    null distribution is enumerated exhaustively (the identity flip makes
    p >= 1/2**n); otherwise `iterations` random sign vectors are drawn
    from a seeded generator and the estimate is (hits + 1) / (iterations + 1).
    Identical inputs give p = 1.0.
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"paired scores must be 1D and equal length: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("paired scores must be non-empty")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    diffs = a - b
    n = diffs.size
    observed = abs(float(np.mean(diffs)))

    if n < 63 and 2**n <= iterations:
        total = 2**n
        hits = 0
        block = 1 << 14
        shifts = np.arange(n, dtype=np.uint64)
        for start in range(0, total, block):
            masks = np.arange(start, min(start + block, total), dtype=np.uint64)
            bits = (masks[:, None] >> shifts) & np.uint64(1)
            signs = 1.0 - 2.0 * bits.astype(np.float64)
            stats = np.abs((signs * diffs).mean(axis=1))
            hits += int(np.count_nonzero(stats >= observed))
        return hits / total

    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(iterations, n)).astype(np.float64) * 2.0 - 1.0
    stats = np.abs((signs * diffs).mean(axis=1))
    hits = int(np.count_nonzero(stats >= observed))
    return (hits + 1) / (iterations + 1)
