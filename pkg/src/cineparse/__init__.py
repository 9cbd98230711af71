"""Video scene segmentation from parameterized shots.

Pipeline: histogram clustering within sequences, a temporal-clusters graph
of Allen relations, an initial scene cut from that graph, then rhythm
coupling of the one-shot scenes it leaves behind.
"""

from .clustering import Cluster, TimeSpaceGraph, cluster_document, cluster_sequence
from .config import Config
from .coupling import couple, resolve_residuals, segment_full
from .evaluation import evaluate
from .histogram import Histogram, Image, compute_histogram, dissimilarity, intersection, similarity
from .model import (
    SequenceSpan,
    Shot,
    TransitionEffect,
    TransitionKind,
    VideoDocument,
    load_manifest,
    sequence_boundaries,
    validate_manifest,
)
from .rhythm import ShotGroup, aggregation_test, rhythm_segment, rhythm_stats
from .scenes import Scene, Segmentation, extract_scenes, segment_spatial_temporal, split_sequences
from .synth import FixtureSpec, GroundTruth, synthesize
from .temporal_graph import build_tcg, derive_relation, export_dot, to_dag

__version__ = "0.1.0"

__all__ = [
    "aggregation_test",
    "build_tcg",
    "Cluster",
    "cluster_document",
    "cluster_sequence",
    "compute_histogram",
    "Config",
    "couple",
    "derive_relation",
    "dissimilarity",
    "evaluate",
    "export_dot",
    "extract_scenes",
    "FixtureSpec",
    "GroundTruth",
    "Histogram",
    "Image",
    "intersection",
    "load_manifest",
    "resolve_residuals",
    "rhythm_segment",
    "rhythm_stats",
    "Scene",
    "segment_full",
    "segment_spatial_temporal",
    "Segmentation",
    "sequence_boundaries",
    "SequenceSpan",
    "Shot",
    "ShotGroup",
    "similarity",
    "split_sequences",
    "synthesize",
    "TimeSpaceGraph",
    "to_dag",
    "TransitionEffect",
    "TransitionKind",
    "validate_manifest",
    "VideoDocument",
]
