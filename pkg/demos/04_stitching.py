"""Synthesize long documents by stitching short ones together, and show how
query ground truth (relevant documents, evidence sentences) is remapped."""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from chunkbench.corpus import load_corpus, stitch
from chunkbench.segmenter import segment

DATASET = Path(__file__).resolve().parents[1] / "data" / "mini"


def main():
    documents, queries = load_corpus(DATASET)
    total = sum(len(segment(d.text)) for d in documents)
    print(f"source corpus: {len(documents)} documents, {total} sentences")

    stitched, remapped = stitch(documents, queries, target_sentences=30, seed=7)
    print(f"stitched into {len(stitched)} documents (target 30 sentences each):\n")
    for doc in stitched:
        n = len(segment(doc.text))
        print(f"  {doc.doc_id} ({n} sentences)")
        for src, off in zip(doc.source_doc_ids, doc.sentence_offsets):
            print(f"    sentences {off:3d}+  <- {src}")

    assert sum(len(segment(d.text)) for d in stitched) == total
    print("\nsentence count conserved.")

    before = {q.query_id: q for q in queries}
    print("\nground-truth remapping for two queries:")
    for q in remapped[:2]:
        old = before[q.query_id]
        print(f"  {q.query_id}: {old.text}")
        print(f"    relevant: {sorted(old.relevant_doc_ids)} -> {sorted(q.relevant_doc_ids)}")
        print(f"    evidence: {list(old.evidence)} -> {list(q.evidence)}")


if __name__ == "__main__":
    main()
