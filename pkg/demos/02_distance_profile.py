"""Plot (in ASCII) the consecutive-distance profile of a document and the
cutoffs that the different threshold policies would place on it."""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from chunkbench.distance import ThresholdPolicy, consecutive_distances, gradient, threshold
from chunkbench.embedding import EmbedderSpec, embed_batch
from chunkbench.segmenter import segment

TEXT = (
    "Glaciers creep downhill under their own weight. Basal meltwater lubricates "
    "the bed and the ice speeds up. Crevasses open where the surface stretches. "
    "Espresso extraction is a different beast entirely. Grind size controls how "
    "fast water moves through the puck. A fine grind slows the shot and deepens "
    "the flavor. Now consider the night sky in winter. Orion dominates the "
    "southern view after dusk. Its belt points toward Sirius."
)


def bar(value, width=40):
    filled = int(round(value * width))
    return "#" * filled + "." * (width - filled)


def main():
    sentences = segment(TEXT)
    spec = EmbedderSpec(backend="test", model_id="hash-v1", dimension=512)
    vectors = embed_batch(spec, [s.text for s in sentences])

    profile = consecutive_distances(vectors)
    print(f"{len(sentences)} sentences -> {profile.size} consecutive distances\n")
    for i, d in enumerate(profile):
        print(f"  {i}->{i + 1}  {d:5.3f}  {bar(d)}")

    print("\ncutoffs (distance domain):")
    for policy in (
        ThresholdPolicy("percentile", 90.0),
        ThresholdPolicy("std_dev", 1.0),
        ThresholdPolicy("interquartile", 1.0),
        ThresholdPolicy("absolute_distance", 0.5),
    ):
        cut = threshold(profile, policy)
        breaks = [i for i, d in enumerate(profile) if d > cut]
        print(f"  {policy.kind:>20} amount={policy.amount:<4}  cutoff={cut:.3f}  breaks after {breaks}")

    grad = gradient(profile)
    print("\ngradient of the profile:")
    print(f"  {np.array2string(grad, precision=3)}")
    for policy in (
        ThresholdPolicy("gradient_percentile", 90.0),
        ThresholdPolicy("absolute_gradient", 0.1),
    ):
        cut = threshold(profile, policy)
        breaks = [i for i, g in enumerate(grad) if g > cut]
        print(f"  {policy.kind:>20} amount={policy.amount:<4}  cutoff={cut:.3f}  breaks after {breaks}")


if __name__ == "__main__":
    main()
