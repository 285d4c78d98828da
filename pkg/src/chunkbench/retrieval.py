"""Exact brute-force retrieval over chunk embeddings."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .chunkers import Chunk, read_chunks, write_chunks
from .embedding import EmbedderSpec, decode_vectors, embed_batch, encode_vectors

CHUNKS_FILENAME = "chunks.jsonl"
VECTORS_FILENAME = "vectors.bin"


class ChunkIndex:
    """An immutable in-memory index: chunks plus one unit vector per chunk."""

    def __init__(self, chunks: Sequence[Chunk], vectors: np.ndarray, model_id: str) -> None:
        chunks = tuple(chunks)
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.ndim != 2:
            raise ValueError("vectors must be a 2D array")
        if len(chunks) != vectors.shape[0]:
            raise ValueError(
                f"{len(chunks)} chunks but {vectors.shape[0]} vectors"
            )
        seen: set[str] = set()
        for chunk in chunks:
            if chunk.chunk_id in seen:
                raise ValueError(f"duplicate chunk_id {chunk.chunk_id!r}")
            seen.add(chunk.chunk_id)
        self.chunks = chunks
        self.vectors = vectors
        self.model_id = model_id
        self._by_id = {c.chunk_id: c for c in chunks}
        # Scores are computed in float64 so ranking is stable.
        self._matrix = vectors.astype(np.float64)

    def __len__(self) -> int:
        return len(self.chunks)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def get(self, chunk_id: str) -> Chunk:
        return self._by_id[chunk_id]


def build_index(chunks: Sequence[Chunk], spec: EmbedderSpec) -> ChunkIndex:
    """Embed each chunk's assembled text and wrap the result in a ChunkIndex."""
    chunks = list(chunks)
    if not chunks:
        raise ValueError("cannot build an index over zero chunks")
    vectors = embed_batch(spec, [c.text for c in chunks])
    return ChunkIndex(chunks=chunks, vectors=vectors, model_id=spec.model_id)


def retrieve(
    index: ChunkIndex, query_text: str, k: int, spec: EmbedderSpec
) -> list[tuple[str, float]]:
    """Top-k chunks by dot product, descending; ties broken by ascending chunk_id.

    Exact scan over the whole index; result lists are prefix-consistent
    across k. Returns (chunk_id, score) pairs.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(index) == 0:
        raise ValueError("cannot retrieve from an empty index")
    if spec.model_id != index.model_id:
        raise ValueError(
            f"index was built with model {index.model_id!r}, spec says {spec.model_id!r}"
        )
    query_vec = embed_batch(spec, [query_text])[0].astype(np.float64)
    scores = index._matrix @ query_vec
    ranked = sorted(
        range(len(index)), key=lambda i: (-scores[i], index.chunks[i].chunk_id)
    )
    return [(index.chunks[i].chunk_id, float(scores[i])) for i in ranked[:k]]


def save_index(index: ChunkIndex, directory: str | Path) -> None:
    """Persist as chunks.jsonl plus a binary vector file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_chunks(index.chunks, directory / CHUNKS_FILENAME)
    blob = encode_vectors(index.vectors, index.model_id)
    (directory / VECTORS_FILENAME).write_bytes(blob)


def load_index(directory: str | Path) -> ChunkIndex:
    """Load an index persisted by save_index."""
    directory = Path(directory)
    chunks = read_chunks(directory / CHUNKS_FILENAME)
    header, vectors = decode_vectors((directory / VECTORS_FILENAME).read_bytes())
    return ChunkIndex(chunks=chunks, vectors=vectors, model_id=str(header["model_id"]))
