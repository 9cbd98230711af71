"""Temporal-clusters graph (TCG): Allen relations between shot clusters.

Relations are read off cluster spans, the hull ``[first.t, last.t + last.td)``
of each cluster's member shots:

* touching spans joined by a cut            -> ``a Meets b``
* spans separated by exactly one gradual
  transition of ``tau`` frames              -> ``a Before(tau) b``
* ``b``'s span inside ``a``'s                 -> ``b During a``
* partial intersection with ``a`` first      -> ``a Overlaps b``

Edges always point forward in time, from the earlier-starting cluster
(``source``) to the later one (``target``). For During that means the
source is the enclosing cluster.
"""

from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .clustering import Cluster, TimeSpaceGraph
from .errors import CycleDetected
from .model import VideoDocument


class RelationKind(enum.Enum):
    MEETS = "Meets"
    BEFORE = "Before"
    DURING = "During"
    OVERLAPS = "Overlaps"

    @property
    def is_sequential(self) -> bool:
        return self in (RelationKind.MEETS, RelationKind.BEFORE)


@dataclass(frozen=True)
class ClusterSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"empty span [{self.start}, {self.end})")


def cluster_span(c: Cluster, doc: VideoDocument) -> ClusterSpan:
    first = doc.shots[c.shot_ids[0]]
    last = doc.shots[c.shot_ids[-1]]
    return ClusterSpan(first.t, last.t + last.td)


@dataclass(frozen=True)
class AllenRelation:
    """A relation kind plus its annotation.

    * Before: ``tau`` is the transition length.
    * During: ``times`` are the time codes of the enclosed cluster's shots.
    * Overlaps: ``times`` are the time codes of the later cluster's shots that
      fall inside the earlier one; ``first_outside`` is the time code of its
      first shot past that intersection.
    """

    kind: RelationKind
    tau: int | None = None
    times: tuple[int, ...] = ()
    first_outside: int | None = None

    @property
    def label(self) -> str:
        if self.kind is RelationKind.BEFORE:
            return f"Before({self.tau})"
        if self.kind is RelationKind.DURING:
            return f"During({','.join(map(str, self.times))})"
        if self.kind is RelationKind.OVERLAPS:
            return f"Overlaps({','.join(map(str, self.times))};{self.first_outside})"
        return self.kind.value

    def params(self) -> dict:
        if self.kind is RelationKind.BEFORE:
            return {"tau": self.tau}
        if self.kind is RelationKind.DURING:
            return {"times": list(self.times)}
        if self.kind is RelationKind.OVERLAPS:
            return {"times": list(self.times), "first_outside": self.first_outside}
        return {}


def derive_relation(c1: Cluster, c2: Cluster, doc: VideoDocument) -> AllenRelation | None:
    """Relation between two clusters, ``c1`` starting no later than ``c2``.

    Returns None when the spans are disjoint but not adjacent, i.e. some
    other cluster sits between them.
    """
    if c1.id == c2.id:
        raise ValueError("a cluster has no relation with itself")
    s1, s2 = cluster_span(c1, doc), cluster_span(c2, doc)
    if s2.start < s1.start:
        raise ValueError(f"C{c1.id} must not start after C{c2.id}")

    if s2.start >= s1.end:
        if s2.start == s1.end:
            return AllenRelation(RelationKind.MEETS)
        tau = doc.shots[c1.last].tau
        if tau > 0 and s2.start == s1.end + tau:
            return AllenRelation(RelationKind.BEFORE, tau=tau)
        return None

    inner = tuple(doc.shots[i].t for i in c2.shot_ids)
    if s2.end <= s1.end:
        return AllenRelation(RelationKind.DURING, times=inner)
    inside = tuple(t for t in inner if t < s1.end)
    outside = next(t for t in inner if t >= s1.end)
    return AllenRelation(RelationKind.OVERLAPS, times=inside, first_outside=outside)


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    relation: AllenRelation

    @property
    def kind(self) -> RelationKind:
        return self.relation.kind

    def describe(self, offset: int = 0) -> str:
        """Human-readable statement, e.g. ``C20 During C19``."""
        a, b = f"C{self.source + offset}", f"C{self.target + offset}"
        if self.kind is RelationKind.DURING:
            return f"{b} During {a}"
        return f"{a} {self.relation.label if self.kind is RelationKind.BEFORE else self.kind.value} {b}"

    def to_json(self) -> dict:
        return {
            "left": self.source,
            "right": self.target,
            "kind": self.kind.value,
            "params": self.relation.params(),
        }


@dataclass(frozen=True)
class TemporalClustersGraph:
    clusters: tuple[Cluster, ...]
    edges: tuple[Edge, ...]

    def edges_of(self, kinds: Iterable[RelationKind]) -> list[Edge]:
        kinds = set(kinds)
        return [e for e in self.edges if e.kind in kinds]

    def to_json(self) -> dict:
        return {
            "nodes": [c.to_json() for c in self.clusters],
            "edges": [e.to_json() for e in self.edges],
        }


def build_tcg(tsg: TimeSpaceGraph, doc: VideoDocument | None = None) -> TemporalClustersGraph:
    doc = doc or tsg.doc
    spans = {c.id: cluster_span(c, doc) for c in tsg.clusters}
    ordered = sorted(tsg.clusters, key=lambda c: (spans[c.id].start, c.id))
    edges = []
    for i, c1 in enumerate(ordered):
        for c2 in ordered[i + 1 :]:
            # clusters are sorted by start; once c2 begins past c1's end plus
            # the longest possible gap, nothing further can relate to c1
            if spans[c2.id].start > spans[c1.id].end + doc.shots[c1.last].tau:
                break
            rel = derive_relation(c1, c2, doc)
            if rel is not None:
                edges.append(Edge(c1.id, c2.id, rel))
    edges.sort(key=lambda e: (e.source, e.target))
    return TemporalClustersGraph(tuple(tsg.clusters), tuple(edges))


# --- DAG with Begin / End -------------------------------------------------

BEGIN = "Begin"
END = "End"


@dataclass(frozen=True)
class TemporalDag:
    """TCG plus abstract Begin/End nodes.

    ``begin_edges`` map source nodes to their start time (the Begin delay);
    ``end_edges`` map sink nodes to the time left until the program ends.
    """

    tcg: TemporalClustersGraph
    begin_edges: tuple[tuple[int, int], ...]
    end_edges: tuple[tuple[int, int], ...]
    order: tuple[int, ...] = field(default=())

    def successors(self) -> dict:
        succ: dict = {BEGIN: [n for n, _ in self.begin_edges]}
        for c in self.tcg.clusters:
            succ[c.id] = []
        for e in self.tcg.edges:
            succ[e.source].append(e.target)
        for n, _ in self.end_edges:
            succ[n].append(END)
        succ[END] = []
        return succ


def _topological_order(nodes: Sequence[int], edges: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    ts = graphlib.TopologicalSorter({n: set() for n in nodes})
    for a, b in edges:
        ts.add(b, a)
    try:
        return tuple(ts.static_order())
    except graphlib.CycleError as exc:
        raise CycleDetected(f"temporal graph contains a cycle: {exc.args[1]}") from exc


def to_dag(tcg: TemporalClustersGraph, doc: VideoDocument) -> TemporalDag:
    ids = [c.id for c in tcg.clusters]
    order = _topological_order(ids, ((e.source, e.target) for e in tcg.edges))
    has_in = {e.target for e in tcg.edges}
    has_out = {e.source for e in tcg.edges}
    spans = {c.id: cluster_span(c, doc) for c in tcg.clusters}
    t0 = doc.shots[0].t
    t_end = doc.end
    begin = tuple((n, spans[n].start - t0) for n in sorted(ids) if n not in has_in)
    end = tuple((n, t_end - spans[n].end) for n in sorted(ids) if n not in has_out)
    return TemporalDag(tcg, begin, end, order)


# --- DOT export ------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: TemporalClustersGraph | TemporalDag, offset: int = 0, name: str = "tcg") -> str:
    """Deterministic DOT text; ``offset`` shifts the printed cluster numbers."""
    dag = graph if isinstance(graph, TemporalDag) else None
    tcg = dag.tcg if dag else graph
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    if dag:
        lines.append(f"  {BEGIN} [shape=box];")
        lines.append(f"  {END} [shape=box];")
    for c in sorted(tcg.clusters, key=lambda c: c.id):
        lines.append(f"  C{c.id + offset} [label={_quote(f'C{c.id + offset}')}];")
    if dag:
        for n, delay in dag.begin_edges:
            lines.append(f"  {BEGIN} -> C{n + offset} [label={_quote(f'delay={delay}')}];")
    for e in tcg.edges:
        lines.append(f"  C{e.source + offset} -> C{e.target + offset} [label={_quote(e.relation.label)}];")
    if dag:
        for n, delay in dag.end_edges:
            lines.append(f"  C{n + offset} -> {END} [label={_quote(f'delay={delay}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- independent constraint audit -----------------------------------------


def check_edge(edge: Edge, doc: VideoDocument, clusters: dict[int, Cluster]) -> list[str]:
    """Re-evaluate an edge's timing constraint on raw shot records.

    Works member shot by member shot rather than through spans so it does not
    share a code path with :func:`derive_relation`. Returns a list of
    violations (empty when the edge is sound).
    """
    a = [doc.shots[i] for i in clusters[edge.source].shot_ids]
    b = [doc.shots[i] for i in clusters[edge.target].shot_ids]
    rel = edge.relation
    problems = []
    a_last = max(a, key=lambda s: s.t)
    b_first = min(b, key=lambda s: s.t)
    b_last = max(b, key=lambda s: s.t)
    a_first = min(a, key=lambda s: s.t)

    if rel.kind is RelationKind.MEETS:
        if a_last.t + a_last.td != b_first.t:
            problems.append("Meets: last shot of left does not end where right begins")
        if a_last.transition is None or a_last.transition.kind.is_gradual:
            problems.append("Meets: joint is not a cut")
    elif rel.kind is RelationKind.BEFORE:
        if not rel.tau or rel.tau <= 0:
            problems.append("Before: delay must be positive")
        elif a_last.t + a_last.td + rel.tau != b_first.t:
            problems.append("Before: delay does not bridge the two clusters")
        if a_last.transition is None or a_last.transition.tau != rel.tau:
            problems.append("Before: delay differs from the transition length")
    elif rel.kind is RelationKind.DURING:
        # some left shot ends before the right cluster starts, and some left
        # shot starts after the right cluster ends
        if not any(s.t + s.td <= b_first.t for s in a):
            problems.append("During: nothing of the outer cluster precedes the inner one")
        if not any(s.t >= b_last.t + b_last.td for s in a):
            problems.append("During: nothing of the outer cluster follows the inner one")
        if tuple(s.t for s in b) != rel.times:
            problems.append("During: parameters are not the inner cluster's time codes")
    elif rel.kind is RelationKind.OVERLAPS:
        a_end = a_last.t + a_last.td
        if not a_first.t + a_first.td <= b_first.t:
            problems.append("Overlaps: left does not start first")
        if not a_end > b_first.t:
            problems.append("Overlaps: clusters do not intersect")
        if not a_end < b_last.t + b_last.td:
            problems.append("Overlaps: right cluster does not outlast the left")
        expect_in = tuple(s.t for s in b if s.t < a_end)
        outside = [s.t for s in b if s.t >= a_end]
        if rel.times != expect_in:
            problems.append("Overlaps: intersecting time codes are wrong")
        if not outside or rel.first_outside != outside[0] or not a_end <= rel.first_outside:
            problems.append("Overlaps: first non-intersecting time code is wrong")
    return problems


def audit_tcg(tcg: TemporalClustersGraph, doc: VideoDocument) -> list[str]:
    clusters = {c.id: c for c in tcg.clusters}
    problems = []
    seen = set()
    for e in tcg.edges:
        pair = (e.source, e.target)
        if pair in seen:
            problems.append(f"duplicate relation for C{e.source}/C{e.target}")
        seen.add(pair)
        problems += [f"C{e.source}->C{e.target}: {p}" for p in check_edge(e, doc, clusters)]
    return problems
