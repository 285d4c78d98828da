"""Run all four chunker families over the same document and compare groupings.

The clustering chunkers can produce non-contiguous chunks; the positional
weight controls how strongly they prefer neighbors.
"""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from chunkbench.chunkers import canonical_config, chunk_document, config_from_dict
from chunkbench.corpus import load_corpus
from chunkbench.embedding import EmbedderSpec, embed_batch
from chunkbench.segmenter import segment_document

DATASET = Path(__file__).resolve().parents[1] / "data" / "mini"

CONFIGS = [
    {"kind": "fixed_size", "n_chunks": 3, "overlap": 0},
    {"kind": "fixed_size", "n_chunks": 3, "overlap": 1},
    {"kind": "breakpoint", "policy": {"kind": "percentile", "amount": 90}},
    {"kind": "breakpoint", "policy": {"kind": "absolute_distance", "amount": 0.5}},
    {"kind": "single_linkage", "n_clusters": 3, "positional_weight": 0.5, "stop_distance": 0.5},
    {"kind": "single_linkage", "n_clusters": 3, "positional_weight": 0.0, "stop_distance": 0.5},
    {"kind": "dbscan", "eps": 0.3, "min_samples": 2, "positional_weight": 0.5},
]


def main():
    documents, _ = load_corpus(DATASET)
    doc = segment_document(documents[0].doc_id, documents[0].text)
    print(f"document {doc.doc_id!r} with {doc.n} sentences:")
    for s in doc.sentences:
        print(f"  [{s.index}] {s.text}")

    spec = EmbedderSpec(backend="test", model_id="hash-v1", dimension=512)
    vectors = embed_batch(spec, [s.text for s in doc.sentences])

    for raw in CONFIGS:
        config = config_from_dict(raw)
        chunks = chunk_document(doc, vectors, config)
        print(f"\n{canonical_config(config)}")
        for chunk in chunks:
            print(f"  {chunk.chunk_id}: sentences {list(chunk.sentence_indices)}")


if __name__ == "__main__":
    main()
