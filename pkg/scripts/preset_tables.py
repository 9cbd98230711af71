"""Scene tables for the preset fixtures shaped after the reference results.

Prints shot, cluster and scene counts at each stage plus a side-by-side
table (spatial-temporal, coupled, ground truth). Shot numbers are 0-based.

    python scripts/preset_tables.py [--preset lone_survivor]
"""

import argparse

from cineparse.coupling import segment_full
from cineparse.evaluation import evaluate, format_table
from cineparse.synth import PRESETS, synthesize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=sorted(PRESETS), action="append")
    args = ap.parse_args()
    for name in args.preset or ["four_scenes", "lone_survivor"]:
        doc, truth = synthesize(PRESETS[name]())
        res = segment_full(doc)
        rep = evaluate(res.final, truth)
        print(f"== {name}")
        print(
            f"shots {len(doc.shots)}  clusters {len(res.tsg.clusters)}  "
            f"initial scenes {len(res.initial)} ({len(res.initial.one_shot_scenes)} one-shot)  "
            f"final scenes {len(res.final)}  truth {len(truth.scenes)}  passes {res.passes}  F1 {rep.f1:.3f}"
        )
        print(format_table(res.initial, res.final, truth))


if __name__ == "__main__":
    main()
