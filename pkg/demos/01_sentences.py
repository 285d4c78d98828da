"""Walk through the rule-based sentence segmenter on a few tricky paragraphs."""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from chunkbench.segmenter import (
    RuleSegmenter,
    load_default_abbreviations,
    segment,
    segment_document,
)

PARAGRAPH = (
    "Dr. Chen measured the flow at 3.5 m/s. The reading surprised no one! "
    'Was the gauge miscalibrated? "Check the log," she said.\n\n'
    "A new section starts after the blank line. It ends quietly."
)


def show(title, sentences):
    print(f"\n{title}")
    for i, s in enumerate(sentences):
        print(f"  [{i}] {s!r}")


def main():
    print("input paragraph:")
    print(f"  {PARAGRAPH!r}")

    show("default segmentation", segment(PARAGRAPH))

    # spans are exact slice offsets back into the original text
    doc = segment_document("demo", PARAGRAPH)
    print("\nchar spans slice the source exactly:")
    for s in doc.sentences:
        lo, hi = s.char_span
        assert PARAGRAPH[lo:hi] == s.text
        print(f"  [{s.index}] {lo:3d}:{hi:3d} ok")

    # a custom abbreviation list replaces the default one
    custom = RuleSegmenter(abbreviations=frozenset({"approx."}))
    text = "It weighs approx. Five kilograms. Dr. Who disagrees."
    show("custom list protects only 'approx.'", custom.segment(text))

    default_list = load_default_abbreviations()
    print(f"\nbundled abbreviation list has {len(default_list)} entries,")
    print(f"e.g. {sorted(default_list)[:6]}")


if __name__ == "__main__":
    main()
