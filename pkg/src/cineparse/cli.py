"""Command-line entry point.

Exit status: 0 success, 1 usage error, 2 invalid input, 3 internal
invariant violation. ``CINEPARSE_LOG`` sets the log level (default WARNING).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import jsonio
from .clustering import clusters_from_json, cluster_document
from .config import STAGES, Config
from .coupling import couple, resolve_residuals, segment_full
from .errors import InputError, InvariantViolation
from .evaluation import evaluate, format_table
from .foe import MatchConfig, detect_shot_transitions, load_patterns, score_sequence, transitions_to_manifest
from .model import load_manifest, sequence_boundaries
from .rhythm import ShotGroup, rhythm_segment, rhythm_stats, safe_interval
from .scenes import Segmentation, run_spatial_temporal
from .synth import PRESETS, FixtureSpec, GroundTruth, easy_spec, random_spec, synthesize, write_fixture
from .temporal_graph import build_tcg, export_dot, to_dag

log = logging.getLogger("cineparse")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _config(args) -> Config:
    try:
        return Config(
            threshold=args.threshold,
            alpha=args.alpha,
            min_group=args.min_group,
            bins_per_channel=args.bins,
            denominator=args.denominator,
            stop_after=getattr(args, "stop_after", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(obj, out: str | None) -> None:
    text = jsonio.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_doc(args, cfg: Config):
    return load_manifest(args.manifest, cfg.bins_per_channel, workers=args.workers)


def _load_json(path: str):
    try:
        return jsonio.load(path)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc


def _segmentation_payload(result, cfg: Config) -> dict:
    out = result.final.to_json()
    out["initial"] = result.initial.to_json()
    out["trace"] = [e.to_json() for e in result.trace]
    out["passes"] = result.passes
    out["config"] = cfg.to_json()
    return out


def cmd_segment(args) -> int:
    cfg = _config(args)
    doc = _load_doc(args, cfg)
    if cfg.stop_after == "clustering":
        _emit(cluster_document(doc, cfg.threshold).to_json(), args.out)
        return 0
    if cfg.stop_after in ("tcg", "initial"):
        st = run_spatial_temporal(doc, cfg.threshold)
        payload = st.tcg.to_json() if cfg.stop_after == "tcg" else st.segmentation.to_json()
        _emit(payload, args.out)
        return 0
    result = segment_full(doc, cfg)
    _emit(_segmentation_payload(result, cfg), args.out)
    if args.report:
        report = format_table(result.initial, result.final, _truth(args.truth) if args.truth else None)
        Path(args.report).write_text(report)
    return 0


def cmd_cluster(args) -> int:
    cfg = _config(args)
    doc = _load_doc(args, cfg)
    tsg = cluster_document(doc, cfg.threshold)
    _emit(tsg.to_json(), args.out)
    if args.timeline:
        sys.stderr.write(tsg.render_timeline() + "\n")
    return 0


def cmd_tcg(args) -> int:
    cfg = _config(args)
    doc = _load_doc(args, cfg)
    tsg = clusters_from_json(_load_json(args.clusters), doc) if args.clusters else cluster_document(doc, cfg.threshold)
    tcg = build_tcg(tsg, doc)
    dag = to_dag(tcg, doc)
    _emit(tcg.to_json(), args.out)
    if args.dot:
        Path(args.dot).write_text(export_dot(dag if args.dag else tcg, offset=args.offset))
    return 0


def cmd_rhythm(args) -> int:
    cfg = _config(args)
    doc = _load_doc(args, cfg)
    groups = []
    if args.segmentation:
        seg = Segmentation.from_json(_load_json(args.segmentation))
        for s in seg.scenes:
            if len(s) >= 2:
                groups.append(ShotGroup.of(doc.shots[s.first_shot : s.last_shot + 1]))
    else:
        for span in sequence_boundaries(doc):
            groups.extend(rhythm_segment(doc.shots[span.first_shot : span.last_shot + 1], cfg.min_group, cfg.alpha, cfg.denominator))
    out = []
    for gp in groups:
        rec = {"first_shot": gp.first, "last_shot": gp.last}
        if len(gp) >= 2:
            st = rhythm_stats(gp, cfg.denominator)
            iv = safe_interval(st, cfg.alpha)
            rec.update(st.to_json())
            rec["safe_interval"] = [iv.low, iv.high]
        out.append(rec)
    _emit({"groups": out, "config": cfg.to_json()}, args.out)
    return 0


def cmd_couple(args) -> int:
    cfg = _config(args)
    doc = _load_doc(args, cfg)
    initial = Segmentation.from_json(_load_json(args.initial))
    if initial.n_shots != len(doc.shots):
        raise InputError("initial segmentation does not cover the manifest's shots")
    coupled = couple(initial, doc, cfg.alpha, cfg.denominator)
    final = resolve_residuals(coupled.segmentation, doc, cfg.min_group, cfg.alpha, cfg.denominator)
    out = final.to_json()
    out["initial"] = initial.to_json()
    out["trace"] = [e.to_json() for e in coupled.trace]
    out["passes"] = coupled.passes
    out["config"] = cfg.to_json()
    _emit(out, args.out)
    return 0


def cmd_synth(args) -> int:
    if args.spec:
        spec = FixtureSpec.from_json(_load_json(args.spec))
    elif args.preset == "easy":
        spec = easy_spec(args.seed)
    elif args.preset == "random":
        spec = random_spec(args.seed)
    else:
        spec = PRESETS[args.preset]()
    doc, truth = synthesize(spec)
    write_fixture(doc, truth, args.out, args.truth, args.keyframes)
    return 0


def _truth(path: str):
    data = _load_json(path)
    return GroundTruth.from_json(data) if "initial_scenes" in data else Segmentation.from_json(data)


def cmd_eval(args) -> int:
    pred_data = _load_json(args.pred)
    pred = Segmentation.from_json(pred_data)
    truth = _truth(args.truth)
    report = evaluate(pred, truth, args.tolerance)
    _emit(report.to_json(), args.out)
    initial = Segmentation.from_json(pred_data["initial"]) if "initial" in pred_data else pred
    sys.stderr.write(format_table(initial, pred, truth))
    sys.stderr.write(f"precision={report.precision:.4f} recall={report.recall:.4f} F1={report.f1:.4f}\n")
    return 0


def cmd_foe(args) -> int:
    patterns = load_patterns(args.patterns)
    try:
        cfg = MatchConfig(args.radius, args.threshold, args.penalty, args.min_run)
    except InputError as exc:
        raise UsageError(str(exc)) from exc
    found = detect_shot_transitions(patterns, cfg)
    out = {
        "scores": score_sequence(patterns, cfg),
        "transitions": [t.to_json() for t in found],
    }
    _emit(out, args.out)
    if args.manifest_out:
        skeleton = transitions_to_manifest(found, patterns[0].frame, patterns[-1].frame)
        Path(args.manifest_out).write_text(jsonio.dumps(skeleton))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cineparse", description="Scene segmentation from parameterized shots.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pipeline_flags(sp, manifest=True):
        if manifest:
            sp.add_argument("--manifest", required=True, help="shot manifest JSON")
            sp.add_argument("--workers", type=int, default=1, help="threads for key-frame histograms")
        sp.add_argument("--out", help="output JSON (default: stdout)")
        sp.add_argument("--threshold", type=float, default=0.1, help="cluster dissimilarity threshold T")
        sp.add_argument("--alpha", type=float, default=2.25, help="safe-interval coefficient")
        sp.add_argument("--min-group", type=int, default=3, help="seed size n for rhythm segmentation")
        sp.add_argument("--bins", type=int, default=4, help="histogram bins per channel")
        sp.add_argument("--denominator", choices=["n", "n-1"], default="n")

    sp = sub.add_parser("segment", help="full pipeline: manifest -> segmentation")
    pipeline_flags(sp)
    sp.add_argument("--stop-after", choices=STAGES)
    sp.add_argument("--report", help="write a plain-text scene table here")
    sp.add_argument("--truth", help="ground truth to include in the report table")
    sp.set_defaults(func=cmd_segment)

    sp = sub.add_parser("cluster", help="temporally delimited clustering")
    pipeline_flags(sp)
    sp.add_argument("--timeline", action="store_true", help="print a text time-space graph to stderr")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("tcg", help="temporal-clusters graph")
    pipeline_flags(sp)
    sp.add_argument("--clusters", help="reuse a clustering written by the cluster command")
    sp.add_argument("--dot", help="write DOT here")
    sp.add_argument("--dag", action="store_true", help="include Begin/End nodes in the DOT output")
    sp.add_argument("--offset", type=int, default=0, help="shift printed cluster numbers")
    sp.set_defaults(func=cmd_tcg)

    sp = sub.add_parser("rhythm", help="rhythm statistics dump")
    pipeline_flags(sp)
    sp.add_argument("--segmentation", help="report stats per multi-shot scene of this segmentation")
    sp.set_defaults(func=cmd_rhythm)

    sp = sub.add_parser("couple", help="rhythm coupling of an initial segmentation")
    pipeline_flags(sp)
    sp.add_argument("--initial", required=True, help="initial segmentation JSON")
    sp.set_defaults(func=cmd_couple)

    sp = sub.add_parser("synth", help="write a synthetic fixture")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="fixture spec JSON")
    src.add_argument("--preset", choices=sorted(PRESETS) + ["easy", "random"])
    sp.add_argument("--seed", type=int, default=0, help="seed for the easy/random presets")
    sp.add_argument("--out", required=True, help="manifest path")
    sp.add_argument("--truth", help="ground-truth path")
    sp.add_argument("--keyframes", help="also write PPM key frames into this directory")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("eval", help="score a segmentation against ground truth")
    sp.add_argument("--pred", required=True)
    sp.add_argument("--truth", required=True)
    sp.add_argument("--tolerance", type=int, default=0)
    sp.add_argument("--out", help="report JSON (default: stdout)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("foe", help="shot transitions from FOE point patterns")
    sp.add_argument("--patterns", required=True)
    sp.add_argument("--threshold", type=float, required=True, help="global score threshold")
    sp.add_argument("--radius", type=float, required=True, help="matching zone radius")
    sp.add_argument("--penalty", type=float, default=0.0)
    sp.add_argument("--min-run", type=int, default=3)
    sp.add_argument("--out")
    sp.add_argument("--manifest-out", help="write a shot-manifest skeleton here")
    sp.set_defaults(func=cmd_foe)
    return p


def main(argv=None) -> int:
    level = os.environ.get("CINEPARSE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        log.info("running %s", args.command)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except (InputError, FileNotFoundError, IsADirectoryError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2
    except InvariantViolation as exc:
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
