"""Boundary F1 over seeded fixtures, spatial-temporal stage versus the full
pipeline.

    python scripts/recovery_sweep.py --kind easy --count 50
    python scripts/recovery_sweep.py --kind random --count 200
"""

import argparse
import statistics

from cineparse.coupling import segment_full
from cineparse.evaluation import evaluate
from cineparse.synth import easy_spec, random_spec, synthesize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", choices=["easy", "random"], default="easy")
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--tolerance", type=int, default=0)
    args = ap.parse_args()
    make = easy_spec if args.kind == "easy" else random_spec
    initial, final = [], []
    for seed in range(args.count):
        doc, truth = synthesize(make(seed))
        res = segment_full(doc)
        initial.append(evaluate(res.initial, truth, args.tolerance).f1)
        final.append(evaluate(res.final, truth, args.tolerance).f1)
    for name, f1s in (("spatial-temporal", initial), ("with coupling", final)):
        perfect = sum(f == 1.0 for f in f1s)
        print(f"{name:>17}: mean F1 {statistics.fmean(f1s):.3f}  min {min(f1s):.3f}  perfect {perfect}/{len(f1s)}")


if __name__ == "__main__":
    main()
