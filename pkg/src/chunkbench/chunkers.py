"""The three chunker families: fixed-size, breakpoint-based, and clustering-based.

Fixed-size splits by sentence count alone. The breakpoint chunker cuts
wherever the consecutive-distance profile (or its gradient) strictly
exceeds a threshold policy's cutoff. The clustering chunkers group
sentences under the combined positional-semantic distance: constrained
single-linkage merging with a size cap, or density-based clustering with
noise kept as singleton chunks. Clustered chunks may be non-contiguous.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .distance import (
    ThresholdPolicy,
    consecutive_distances,
    gradient,
    pairwise_joint_distances,
    threshold,
)
from .segmenter import SegmentedDocument

DEFAULT_STOP_DISTANCE = 0.5
FAMILIES = ("fixed_size", "breakpoint", "clustering")


@dataclass(frozen=True)
class Chunk:
    """A group of sentences from one document, identified by doc_id + ordinal."""

    chunk_id: str
    doc_id: str
    sentence_indices: tuple[int, ...]
    text: str


@dataclass(frozen=True)
class FixedSizeConfig:
    """Split into n_chunks equal sentence ranges, optionally sharing one
    trailing sentence with the previous chunk."""

    n_chunks: int
    overlap: int = 0
    kind = "fixed_size"

    def __post_init__(self) -> None:
        if self.n_chunks < 1:
            raise ValueError(f"n_chunks must be >= 1, got {self.n_chunks}")
        if self.overlap not in (0, 1):
            raise ValueError(f"overlap must be 0 or 1, got {self.overlap}")


@dataclass(frozen=True)
class BreakpointConfig:
    """Cut between sentences wherever the distance profile exceeds a threshold."""

    policy: ThresholdPolicy
    kind = "breakpoint"


@dataclass(frozen=True)
class SingleLinkageConfig:
    """Greedy nearest-pair merging with a size cap and a stop distance."""

    n_clusters: int
    positional_weight: float
    stop_distance: float = DEFAULT_STOP_DISTANCE

    kind = "single_linkage"

    def __post_init__(self) -> None:
        if self.n_clusters < 1:
            raise ValueError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if not 0.0 <= self.positional_weight <= 1.0:
            raise ValueError(
                f"positional_weight must be in [0, 1], got {self.positional_weight}"
            )
        if self.stop_distance < 0.0:
            raise ValueError(f"stop_distance must be >= 0, got {self.stop_distance}")


@dataclass(frozen=True)
class DbscanConfig:
    """Density-based clustering over the combined distance; noise stays singleton."""

    eps: float
    min_samples: int
    positional_weight: float

    kind = "dbscan"

    def __post_init__(self) -> None:
        if self.eps <= 0.0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.min_samples < 1:
            raise ValueError(f"min_samples must be >= 1, got {self.min_samples}")
        if not 0.0 <= self.positional_weight <= 1.0:
            raise ValueError(
                f"positional_weight must be in [0, 1], got {self.positional_weight}"
            )


ChunkerConfig = Union[FixedSizeConfig, BreakpointConfig, SingleLinkageConfig, DbscanConfig]


def family(config: ChunkerConfig) -> str:
    """Reporting family: both clustering chunkers share one column."""
    if isinstance(config, FixedSizeConfig):
        return "fixed_size"
    if isinstance(config, BreakpointConfig):
        return "breakpoint"
    if isinstance(config, (SingleLinkageConfig, DbscanConfig)):
        return "clustering"
    raise TypeError(f"not a chunker config: {config!r}")


def config_to_dict(config: ChunkerConfig) -> dict:
    """JSON-friendly tagged representation of a chunker config."""
    if isinstance(config, FixedSizeConfig):
        return {"kind": "fixed_size", "n_chunks": config.n_chunks, "overlap": config.overlap}
    if isinstance(config, BreakpointConfig):
        policy: dict = {"kind": config.policy.kind, "amount": config.policy.amount}
        if config.policy.std_mode != "population":
            policy["std_mode"] = config.policy.std_mode
        return {"kind": "breakpoint", "policy": policy}
    if isinstance(config, SingleLinkageConfig):
        return {
            "kind": "single_linkage",
            "n_clusters": config.n_clusters,
            "positional_weight": config.positional_weight,
            "stop_distance": config.stop_distance,
        }
    if isinstance(config, DbscanConfig):
        return {
            "kind": "dbscan",
            "eps": config.eps,
            "min_samples": config.min_samples,
            "positional_weight": config.positional_weight,
        }
    raise TypeError(f"not a chunker config: {config!r}")


def config_from_dict(data: dict) -> ChunkerConfig:
    """Inverse of config_to_dict; raises ValueError on unknown or bad input."""
    if not isinstance(data, dict):
        raise ValueError("chunker config must be a JSON object")
    kind = data.get("kind")
    try:
        if kind == "fixed_size":
            return FixedSizeConfig(
                n_chunks=int(data["n_chunks"]), overlap=int(data.get("overlap", 0))
            )
        if kind == "breakpoint":
            policy = data["policy"]
            return BreakpointConfig(
                policy=ThresholdPolicy(
                    kind=policy["kind"],
                    amount=float(policy["amount"]),
                    std_mode=policy.get("std_mode", "population"),
                )
            )
        if kind == "single_linkage":
            return SingleLinkageConfig(
                n_clusters=int(data["n_clusters"]),
                positional_weight=float(data["positional_weight"]),
                stop_distance=float(data.get("stop_distance", DEFAULT_STOP_DISTANCE)),
            )
        if kind == "dbscan":
            return DbscanConfig(
                eps=float(data["eps"]),
                min_samples=int(data["min_samples"]),
                positional_weight=float(data["positional_weight"]),
            )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad chunker config {data!r}: {exc}") from exc
    raise ValueError(f"unknown chunker kind {kind!r}")


def canonical_config(config: ChunkerConfig) -> str:
    """Stable string form used for tie-breaking and as a grouping key."""
    return json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))


def _make_chunks(doc: SegmentedDocument, groups: Sequence[Sequence[int]]) -> list[Chunk]:
    ordered = sorted((sorted(group) for group in groups if group), key=lambda g: g[0])
    chunks: list[Chunk] = []
    for ordinal, indices in enumerate(ordered):
        text = " ".join(doc.sentences[i].text for i in indices)
        chunks.append(
            Chunk(
                chunk_id=f"{doc.doc_id}-{ordinal:04d}",
                doc_id=doc.doc_id,
                sentence_indices=tuple(indices),
                text=text,
            )
        )
    return chunks


def fixed_size_chunk(doc: SegmentedDocument, n_chunks: int, overlap: int = 0) -> list[Chunk]:
    """Split into ceil(n / n_chunks)-sentence ranges; overlap=1 prepends the
    previous base range's last sentence to each later chunk."""
    if n_chunks < 1:
        raise ValueError(f"n_chunks must be >= 1, got {n_chunks}")
    if overlap not in (0, 1):
        raise ValueError(f"overlap must be 0 or 1, got {overlap}")
    n = doc.n
    size = math.ceil(n / n_chunks)
    groups: list[list[int]] = []
    start = 0
    while start < n:
        end = min(start + size, n)
        indices = list(range(start, end))
        if overlap == 1 and start > 0:
            indices = [start - 1] + indices
        groups.append(indices)
        start = end
    return _make_chunks(doc, groups)


def breakpoint_chunk(
    doc: SegmentedDocument, sentence_embeddings: np.ndarray, policy: ThresholdPolicy
) -> list[Chunk]:
    """Cut after sentence i wherever the profile strictly exceeds the cutoff.

    Distance-domain policies compare the consecutive-distance array against
    the cutoff; gradient-domain policies compare its gradient. A document
    too short for the comparison array is one chunk.
    """
    n = doc.n
    if n == 1:
        return _make_chunks(doc, [[0]])
    if sentence_embeddings.shape[0] != n:
        raise ValueError(
            f"got {sentence_embeddings.shape[0]} embeddings for {n} sentences"
        )
    distances = consecutive_distances(sentence_embeddings)
    if policy.gradient_domain and distances.size < 2:
        break_after = np.zeros(distances.size, dtype=bool)
    else:
        compare = gradient(distances) if policy.gradient_domain else distances
        cutoff = threshold(distances, policy)
        break_after = compare > cutoff
    groups: list[list[int]] = []
    current = [0]
    for i in range(1, n):
        if break_after[i - 1]:
            groups.append(current)
            current = [i]
        else:
            current.append(i)
    groups.append(current)
    return _make_chunks(doc, groups)


def single_linkage_chunk(
    doc: SegmentedDocument,
    sentence_embeddings: np.ndarray,
    n_clusters: int,
    positional_weight: float,
    stop_distance: float = DEFAULT_STOP_DISTANCE,
) -> list[Chunk]:
    """Merge the closest sentence pairs first, subject to a cluster-size cap.

    Pairs are visited in ascending (distance, first index, second index)
    order; a merge is skipped when the combined size would exceed
    ceil(n / n_clusters), and scanning stops at the first pair whose
    distance exceeds stop_distance. Whatever never merged stays singleton.
    """
    if n_clusters < 1:
        raise ValueError(f"n_clusters must be >= 1, got {n_clusters}")
    n = doc.n
    if n == 1:
        return _make_chunks(doc, [[0]])
    if sentence_embeddings.shape[0] != n:
        raise ValueError(
            f"got {sentence_embeddings.shape[0]} embeddings for {n} sentences"
        )
    dmat = pairwise_joint_distances(sentence_embeddings, positional_weight)
    max_size = math.ceil(n / n_clusters)

    first, second = np.triu_indices(n, k=1)
    dist = dmat[first, second]
    order = np.lexsort((second, first, dist))

    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in order:
        if dist[t] > stop_distance:
            break
        ra, rb = find(int(first[t])), find(int(second[t]))
        if ra == rb:
            continue
        if size[ra] + size[rb] > max_size:
            continue
        parent[rb] = ra
        size[ra] += size[rb]

    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    return _make_chunks(doc, list(clusters.values()))


def dbscan_chunk(
    doc: SegmentedDocument,
    sentence_embeddings: np.ndarray,
    eps: float,
    min_samples: int,
    positional_weight: float,
) -> list[Chunk]:
    """Density clustering over the combined distance.

    A sentence is a core point when at least min_samples sentences
    (itself included) lie within eps. Clusters grow from core points in
    ascending index order; border points keep the first cluster that
    reaches them; noise becomes singleton chunks.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if min_samples < 1:
        raise ValueError(f"min_samples must be >= 1, got {min_samples}")
    n = doc.n
    if n == 1:
        return _make_chunks(doc, [[0]])
    if sentence_embeddings.shape[0] != n:
        raise ValueError(
            f"got {sentence_embeddings.shape[0]} embeddings for {n} sentences"
        )
    dmat = pairwise_joint_distances(sentence_embeddings, positional_weight)
    neighborhoods = [np.flatnonzero(dmat[i] <= eps) for i in range(n)]
    core = [neighborhoods[i].size >= min_samples for i in range(n)]

    labels = [-1] * n
    next_label = 0
    for seed in range(n):
        if labels[seed] != -1 or not core[seed]:
            continue
        labels[seed] = next_label
        queue = deque([seed])
        while queue:
            point = queue.popleft()
            for neighbor in neighborhoods[point]:
                neighbor = int(neighbor)
                if labels[neighbor] == -1:
                    labels[neighbor] = next_label
                    if core[neighbor]:
                        queue.append(neighbor)
        next_label += 1

    groups: list[list[int]] = [[] for _ in range(next_label)]
    for i in range(n):
        if labels[i] == -1:
            groups.append([i])
        else:
            groups[labels[i]].append(i)
    return _make_chunks(doc, groups)


def chunk_document(
    doc: SegmentedDocument,
    sentence_embeddings: np.ndarray | None,
    config: ChunkerConfig,
) -> list[Chunk]:
    """Run whichever chunker the config describes.

    Fixed-size ignores embeddings; every other chunker requires one
    embedding row per sentence.
    """
    if isinstance(config, FixedSizeConfig):
        return fixed_size_chunk(doc, config.n_chunks, config.overlap)
    if sentence_embeddings is None:
        raise ValueError(f"{config.kind} chunker requires sentence embeddings")
    if isinstance(config, BreakpointConfig):
        return breakpoint_chunk(doc, sentence_embeddings, config.policy)
    if isinstance(config, SingleLinkageConfig):
        return single_linkage_chunk(
            doc,
            sentence_embeddings,
            config.n_clusters,
            config.positional_weight,
            config.stop_distance,
        )
    if isinstance(config, DbscanConfig):
        return dbscan_chunk(
            doc, sentence_embeddings, config.eps, config.min_samples, config.positional_weight
        )
    raise TypeError(f"not a chunker config: {config!r}")


def default_grid() -> list[ChunkerConfig]:
    """The full default hyperparameter sweep, in canonical order."""
    configs: list[ChunkerConfig] = []
    for n_chunks in range(2, 11):
        for overlap in (0, 1):
            configs.append(FixedSizeConfig(n_chunks=n_chunks, overlap=overlap))
    breakpoint_amounts = {
        "percentile": [10.0, 30.0, 50.0, 70.0, 90.0],
        "std_dev": [1.0, 1.5, 2.0, 2.5, 3.0],
        "interquartile": [0.5, 0.75, 1.0, 1.25, 1.5],
        "gradient_percentile": [10.0, 30.0, 50.0, 70.0, 90.0],
        "absolute_distance": [0.1, 0.2, 0.3, 0.4, 0.5],
        "absolute_gradient": [0.01, 0.05, 0.1, 0.15, 0.2],
    }
    for kind in (
        "percentile",
        "std_dev",
        "interquartile",
        "gradient_percentile",
        "absolute_distance",
        "absolute_gradient",
    ):
        for amount in breakpoint_amounts[kind]:
            configs.append(BreakpointConfig(policy=ThresholdPolicy(kind=kind, amount=amount)))
    weights = [0.0, 0.25, 0.5, 0.75, 1.0]
    for n_clusters in range(2, 11):
        for weight in weights:
            configs.append(
                SingleLinkageConfig(n_clusters=n_clusters, positional_weight=weight)
            )
    for eps in [0.1, 0.2, 0.3, 0.4, 0.5]:
        for min_samples in range(1, 6):
            for weight in weights:
                configs.append(
                    DbscanConfig(eps=eps, min_samples=min_samples, positional_weight=weight)
                )
    return configs


def grid_from_dict(grid: dict) -> list[ChunkerConfig]:
    """Expand a config-file grid description into chunker configs.

    Families appear in fixed order (fixed_size, breakpoint, single_linkage,
    dbscan); axis values expand in the order given.
    """
    if not isinstance(grid, dict):
        raise ValueError("grid must be a JSON object")
    known = {"fixed_size", "breakpoint", "single_linkage", "dbscan"}
    unknown = set(grid) - known
    if unknown:
        raise ValueError(f"unknown grid families: {sorted(unknown)}")
    configs: list[ChunkerConfig] = []
    if "fixed_size" in grid:
        axes = grid["fixed_size"]
        for n_chunks in axes["n_chunks"]:
            for overlap in axes.get("overlap", [0]):
                configs.append(FixedSizeConfig(n_chunks=int(n_chunks), overlap=int(overlap)))
    if "breakpoint" in grid:
        for kind, amounts in grid["breakpoint"].items():
            for amount in amounts:
                configs.append(
                    BreakpointConfig(policy=ThresholdPolicy(kind=kind, amount=float(amount)))
                )
    if "single_linkage" in grid:
        axes = grid["single_linkage"]
        stop = float(axes.get("stop_distance", DEFAULT_STOP_DISTANCE))
        for n_clusters in axes["n_clusters"]:
            for weight in axes["positional_weight"]:
                configs.append(
                    SingleLinkageConfig(
                        n_clusters=int(n_clusters),
                        positional_weight=float(weight),
                        stop_distance=stop,
                    )
                )
    if "dbscan" in grid:
        axes = grid["dbscan"]
        for eps in axes["eps"]:
            for min_samples in axes["min_samples"]:
                for weight in axes["positional_weight"]:
                    configs.append(
                        DbscanConfig(
                            eps=float(eps),
                            min_samples=int(min_samples),
                            positional_weight=float(weight),
                        )
                    )
    if not configs:
        raise ValueError("grid expands to zero chunker configs")
    return configs


def write_chunks(chunks: Sequence[Chunk], path: str | Path) -> None:
    """Write chunks.jsonl: one chunk per line."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for chunk in chunks:
            record = {
                "chunk_id": chunk.chunk_id,
                "doc_id": chunk.doc_id,
                "sentence_indices": list(chunk.sentence_indices),
                "text": chunk.text,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_chunks(path: str | Path) -> list[Chunk]:
    """Read a chunks.jsonl dump back into Chunk objects."""
    chunks: list[Chunk] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{Path(path).name}:{lineno}: malformed JSON") from exc
            chunks.append(
                Chunk(
                    chunk_id=obj["chunk_id"],
                    doc_id=obj["doc_id"],
                    sentence_indices=tuple(obj["sentence_indices"]),
                    text=obj["text"],
                )
            )
    return chunks
