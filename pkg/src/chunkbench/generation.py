"""Answer generation over retrieved chunks, plus a query-answer similarity score."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import requests

from .embedding import EmbedderSpec, embed_batch

logger = logging.getLogger(__name__)

API_KEY_ENV = "GEN_API_KEY"
_REQUEST_TIMEOUT = 60.0
DEFAULT_CONCURRENCY = 2

DEFAULT_PROMPT_TEMPLATE = (
    "Answer the question using only the context below.\n\n"
    "Context:\n{chunks}\n\n"
    "Question: {query}\n"
    "Answer:"
)


class GenerationError(RuntimeError):
    """Generation backend failure or contract violation."""

    def __init__(self, message: str, status: int | None = None) -> None:
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class GenerationConfig:
    """Endpoint, model, and prompt shape for answer generation."""

    endpoint: str
    model_id: str
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE
    max_retries: int = 3
    top_k_context: int = 5
    retry_base_delay: float = 0.5

    def __post_init__(self) -> None:
        if not self.endpoint:
            raise ValueError("endpoint must be non-empty")
        if "{query}" not in self.prompt_template or "{chunks}" not in self.prompt_template:
            raise ValueError("prompt_template must contain {query} and {chunks} slots")
        if self.max_retries < 1:
            raise ValueError(f"max_retries must be >= 1, got {self.max_retries}")
        if self.top_k_context < 1:
            raise ValueError(f"top_k_context must be >= 1, got {self.top_k_context}")


def render_prompt(config: GenerationConfig, query_text: str, chunk_texts: Sequence[str]) -> str:
    """Fill the template; chunks are joined by blank lines in retrieval order."""
    chunk_texts = list(chunk_texts)
    if not chunk_texts:
        raise ValueError("chunk_texts must be non-empty")
    if len(chunk_texts) > config.top_k_context:
        raise ValueError(
            f"{len(chunk_texts)} chunks exceed top_k_context={config.top_k_context}"
        )
    joined = "\n\n".join(chunk_texts)
    return config.prompt_template.replace("{chunks}", joined).replace("{query}", query_text)


def generate_answer(
    config: GenerationConfig, query_text: str, chunk_texts: Sequence[str]
) -> str:
    """POST the rendered prompt to the generation endpoint and return its text.

    Transient failures (connection errors, 5xx) are retried with
    exponential backoff up to max_retries attempts.
    """
    prompt = render_prompt(config, query_text, chunk_texts)
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(API_KEY_ENV)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    payload = {"model": config.model_id, "prompt": prompt}
    delay = config.retry_base_delay
    last_status: int | None = None
    last_error = "connection failed"
    for attempt in range(config.max_retries):
        try:
            resp = requests.post(
                config.endpoint, json=payload, headers=headers, timeout=_REQUEST_TIMEOUT
            )
        except requests.RequestException as exc:
            last_error = str(exc)
            last_status = None
        else:
            if resp.status_code == 200:
                try:
                    body = resp.json()
                except ValueError as exc:
                    raise GenerationError(
                        f"generation backend returned invalid JSON: {exc}"
                    ) from exc
                if not isinstance(body, dict) or not isinstance(body.get("text"), str):
                    raise GenerationError('generation response is missing the "text" field')
                return body["text"]
            last_status = resp.status_code
            last_error = f"status {resp.status_code}"
            if resp.status_code < 500:
                raise GenerationError(
                    f"generation backend rejected the request ({last_error})",
                    status=last_status,
                )
        if attempt < config.max_retries - 1:
            logger.warning("generation request failed (%s), retrying in %.2fs", last_error, delay)
            time.sleep(delay)
            delay *= 2.0
    raise GenerationError(
        f"generation backend failed after {config.max_retries} attempts ({last_error})",
        status=last_status,
    )


def qa_similarity(query_text: str, answer_text: str, spec: EmbedderSpec) -> float:
    """Unclipped cosine similarity between query and answer embeddings; [-1, 1]."""
    vectors = embed_batch(spec, [query_text, answer_text]).astype(np.float64)
    cos = float(np.dot(vectors[0], vectors[1]))
    return min(1.0, max(-1.0, cos))
