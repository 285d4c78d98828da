"""Pluggable text embedders producing unit-norm float32 vectors, with disk caching.

Two backends share one interface: ``remote`` speaks a small JSON wire
contract (POST {"model", "texts"} -> {"embeddings"}), ``test`` is a
deterministic hash-based bag-of-words embedder that needs no network and
gives bit-identical vectors on every platform.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import struct
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import requests

logger = logging.getLogger(__name__)

API_KEY_ENV = "EMBED_API_KEY"
BACKENDS = ("test", "remote")
_RETRY_ATTEMPTS = 3
_REQUEST_TIMEOUT = 30.0
_TOKEN_SPLIT = re.compile(r"[\W_]+")
_CACHE_WRITE_LOCK = threading.Lock()


class EmbeddingError(RuntimeError):
    """Backend failure or a response violating the embedding contract."""

    def __init__(self, message: str, status: int | None = None) -> None:
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class EmbedderSpec:
    """Which embedder to use and how to talk to it."""

    backend: str = "test"
    model_id: str = "hash-v1"
    dimension: int = 512
    endpoint: str | None = None
    batch_size: int = 32
    cache_dir: str | Path | None = None
    max_concurrency: int = 4
    retry_base_delay: float = 0.5

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_concurrency < 1:
            raise ValueError(f"max_concurrency must be >= 1, got {self.max_concurrency}")
        if self.backend == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")


def tokenize(text: str) -> list[str]:
    """Case-fold and split on non-alphanumeric runs."""
    return [t for t in _TOKEN_SPLIT.split(text.casefold()) if t]


def token_bucket(token: str, dimension: int) -> tuple[int, int]:
    """Coordinate index and sign (+1/-1) a token hashes to.

    Uses blake2b so the mapping is identical across platforms and runs.
    """
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    h = int.from_bytes(digest, "little")
    sign = 1 if h & 1 == 0 else -1
    return (h >> 1) % dimension, sign


def deterministic_embed(text: str, dimension: int) -> np.ndarray:
    """Hash bag-of-words embedding; identical text gives an identical unit vector.

    Text with no tokens at all maps to the first basis vector.
    """
    if dimension < 2:
        raise ValueError(f"dimension must be >= 2, got {dimension}")
    acc = np.zeros(dimension, dtype=np.float64)
    for token in tokenize(text):
        index, sign = token_bucket(token, dimension)
        acc[index] += sign
    norm = float(np.linalg.norm(acc))
    if norm == 0.0:
        out = np.zeros(dimension, dtype=np.float32)
        out[0] = 1.0
        return out
    return (acc / norm).astype(np.float32)


def embed_batch(spec: EmbedderSpec, texts: Sequence[str]) -> np.ndarray:
    """Embed texts in order; returns a (len(texts), dimension) float32 array.

    Every row is L2-normalized. With a cache_dir configured, vectors are
    looked up by (model_id, text content) before the backend is asked, and
    fresh results are persisted; a second identical call does no backend
    work and returns bit-identical rows.
    """
    items = list(texts)
    for t in items:
        if not isinstance(t, str) or not t:
            raise ValueError("texts must be non-empty strings")
    if not items:
        return np.zeros((0, spec.dimension), dtype=np.float32)

    rows: list[np.ndarray | None] = [None] * len(items)
    cache = _VectorCache(spec) if spec.cache_dir else None
    missing: list[int] = []
    if cache is not None:
        for i, text in enumerate(items):
            hit = cache.get(text)
            if hit is not None:
                rows[i] = hit
            else:
                missing.append(i)
    else:
        missing = list(range(len(items)))

    if missing:
        fresh = _compute(spec, [items[i] for i in missing])
        for pos, row in zip(missing, fresh):
            rows[pos] = row
            if cache is not None:
                cache.put(items[pos], row)
    return np.stack(rows)  # type: ignore[arg-type]


def _compute(spec: EmbedderSpec, texts: list[str]) -> np.ndarray:
    if spec.backend == "test":
        return np.stack([deterministic_embed(t, spec.dimension) for t in texts])
    batches = [texts[i : i + spec.batch_size] for i in range(0, len(texts), spec.batch_size)]
    if len(batches) == 1:
        parts = [_remote_batch(spec, batches[0])]
    else:
        workers = min(spec.max_concurrency, len(batches))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda batch: _remote_batch(spec, batch), batches))
    return np.vstack(parts)


def _remote_batch(spec: EmbedderSpec, batch: list[str]) -> np.ndarray:
    raw = _request_with_retries(spec, batch)
    if raw.ndim != 2 or raw.shape[0] != len(batch):
        got = raw.shape[0] if raw.ndim >= 1 else 0
        raise EmbeddingError(f"backend returned {got} embeddings for {len(batch)} texts")
    if raw.shape[1] != spec.dimension:
        raise EmbeddingError(
            f"backend returned dimension {raw.shape[1]}, expected {spec.dimension}"
        )
    if not np.all(np.isfinite(raw)):
        raise EmbeddingError("backend returned non-finite embedding values")
    norms = np.linalg.norm(raw, axis=1)
    if np.any(norms == 0.0):
        raise EmbeddingError("backend returned a zero vector")
    return (raw / norms[:, None]).astype(np.float32)


def _request_with_retries(spec: EmbedderSpec, batch: list[str]) -> np.ndarray:
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(API_KEY_ENV)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    payload = {"model": spec.model_id, "texts": batch}
    delay = spec.retry_base_delay
    last_status: int | None = None
    last_error = "connection failed"
    for attempt in range(_RETRY_ATTEMPTS):
        try:
            resp = requests.post(
                spec.endpoint, json=payload, headers=headers, timeout=_REQUEST_TIMEOUT
            )
        except requests.RequestException as exc:
            last_error = str(exc)
            last_status = None
        else:
            if resp.status_code == 200:
                return _parse_embeddings(resp)
            last_status = resp.status_code
            last_error = f"status {resp.status_code}"
            if resp.status_code < 500:
                # Client errors will not heal on retry.
                raise EmbeddingError(
                    f"embedding backend rejected the request ({last_error})",
                    status=last_status,
                )
        if attempt < _RETRY_ATTEMPTS - 1:
            logger.warning("embedding request failed (%s), retrying in %.2fs", last_error, delay)
            time.sleep(delay)
            delay *= 2.0
    raise EmbeddingError(
        f"embedding backend failed after {_RETRY_ATTEMPTS} attempts ({last_error})",
        status=last_status,
    )


def _parse_embeddings(resp: requests.Response) -> np.ndarray:
    try:
        body = resp.json()
    except ValueError as exc:
        raise EmbeddingError(f"embedding backend returned invalid JSON: {exc}") from exc
    if not isinstance(body, dict) or "embeddings" not in body:
        raise EmbeddingError('embedding response is missing the "embeddings" field')
    try:
        return np.asarray(body["embeddings"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise EmbeddingError(f"embedding response is malformed: {exc}") from exc


def encode_vectors(matrix: np.ndarray, model_id: str) -> bytes:
    """Serialize vectors as a JSON header plus little-endian float32 payload."""
    mat = np.ascontiguousarray(np.asarray(matrix, dtype=np.float32))
    if mat.ndim != 2:
        raise ValueError("matrix must be 2D")
    header = json.dumps(
        {"count": int(mat.shape[0]), "dimension": int(mat.shape[1]), "model_id": model_id},
        sort_keys=True,
    ).encode("utf-8")
    return struct.pack("<I", len(header)) + header + mat.astype("<f4").tobytes()


def decode_vectors(blob: bytes) -> tuple[dict, np.ndarray]:
    """Inverse of encode_vectors; returns (header, float32 matrix)."""
    if len(blob) < 4:
        raise EmbeddingError("vector blob is truncated")
    (header_len,) = struct.unpack_from("<I", blob, 0)
    if len(blob) < 4 + header_len:
        raise EmbeddingError("vector blob is truncated")
    try:
        header = json.loads(blob[4 : 4 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise EmbeddingError(f"vector blob header is malformed: {exc}") from exc
    count = int(header["count"])
    dimension = int(header["dimension"])
    data = np.frombuffer(blob, dtype="<f4", offset=4 + header_len)
    if data.size != count * dimension:
        raise EmbeddingError(
            f"vector blob payload has {data.size} floats, header says {count}x{dimension}"
        )
    matrix = data.reshape(count, dimension).astype(np.float32, copy=True)
    return header, matrix


class _VectorCache:
    """Content-addressed vector files keyed by (model_id, text)."""

    def __init__(self, spec: EmbedderSpec) -> None:
        self.directory = Path(spec.cache_dir)  # type: ignore[arg-type]
        self.directory.mkdir(parents=True, exist_ok=True)
        self.model_id = spec.model_id
        self.dimension = spec.dimension

    def _path(self, text: str) -> Path:
        digest = hashlib.sha256(f"{self.model_id}\x00{text}".encode("utf-8")).hexdigest()
        return self.directory / f"{digest}.vec"

    def get(self, text: str) -> np.ndarray | None:
        try:
            blob = self._path(text).read_bytes()
        except FileNotFoundError:
            return None
        header, matrix = decode_vectors(blob)
        if header.get("model_id") != self.model_id or header.get("dimension") != self.dimension:
            raise EmbeddingError(
                f"cache entry {self._path(text).name} does not match "
                f"model {self.model_id!r} at dimension {self.dimension}"
            )
        return matrix[0]

    def put(self, text: str, vector: np.ndarray) -> None:
        blob = encode_vectors(vector[None, :], self.model_id)
        path = self._path(text)
        tmp = path.with_suffix(f".tmp-{threading.get_ident()}")
        with _CACHE_WRITE_LOCK:
            tmp.write_bytes(blob)
            os.replace(tmp, path)
