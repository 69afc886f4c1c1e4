"""Fixed prompt scenarios shared by the fusion tests and the golden files.

Each builder constructs a graph through the public API only, using fixture
parameters chosen so the printed one-decimal weights are hand-checkable:

* weights_pair:   two fragments, f=3 and f=2, equal emotion (shares 0.5),
                  mention Jaccard 0.5, so W = 0.3*ln(f+1) + 0.25 + 0.1,
                  printing as 0.8 and 0.7.
* conflict_pair:  four fragments with token-disjoint mention sets
                  (resonance 0); the family contradiction lands at
                  positions 3 and 4 by emotion/frequency ordering.
* empty_graph:    no memories at all.
* geo_anchor:     a place-intent query displaces the weakest non-place
                  memory with the place-tagged caption fragment.
* singleton:      one lone memory at the analytic 0.3*ln2 + 0.5 weight.

theme_threshold=0 pins every fragment into one cluster so the softmax
population is exactly the whole graph.
"""

from __future__ import annotations

from collective_memory import (
    ContextBundle,
    MemoryGraph,
    WeightParams,
    build_context,
    detect_conflicts,
    ingest_photo_caption,
)

SINGLE_CLUSTER = WeightParams(theme_threshold=0.0)


def weights_pair() -> tuple[MemoryGraph, ContextBundle]:
    graph = MemoryGraph(SINGLE_CLUSTER)
    for _ in range(3):
        graph.ingest_fragment("daming lake at sunset", "s1", 0.5)
    for _ in range(2):
        graph.ingest_fragment("daming lake at morning", "s2", 0.5)
    return graph, build_context(graph, "what do you recall", 2)


def conflict_pair() -> tuple[MemoryGraph, ContextBundle]:
    graph = MemoryGraph(SINGLE_CLUSTER)
    for _ in range(3):
        graph.ingest_fragment("baotu spring bubbles brightly", "s1", 1.0)
    for _ in range(2):
        graph.ingest_fragment("willow path curves gently", "s2", 1.0)
    graph.ingest_fragment("I have siblings", "s3", 0.3)
    graph.ingest_fragment("I'm alone", "s4", 0.3)
    detect_conflicts(graph)
    return graph, build_context(graph, "what do you recall", 4)


def empty_graph() -> tuple[MemoryGraph, ContextBundle]:
    graph = MemoryGraph()
    return graph, build_context(graph, "hello", 3)


def geo_anchor() -> tuple[MemoryGraph, ContextBundle]:
    graph = MemoryGraph(SINGLE_CLUSTER)
    for _ in range(2):
        graph.ingest_fragment("the stone bell rings deeply", "s1", 0.9)
    graph.ingest_fragment("crickets sing in tall grass", "s2", 0.9)
    ingest_photo_caption(
        graph,
        "i see myself by daming lake at sunset",
        "Daming Lake",
        "s3",
        emotion=0.2,
    )
    return graph, build_context(graph, "what places do you remember", 2)


def singleton() -> tuple[MemoryGraph, ContextBundle]:
    graph = MemoryGraph()
    graph.ingest_fragment("I love the lake", "s1", 0.6)
    return graph, build_context(graph, "what do you recall", 1)


SCENARIOS = {
    "weights_pair": weights_pair,
    "conflict_pair": conflict_pair,
    "empty_graph": empty_graph,
    "geo_anchor": geo_anchor,
    "singleton": singleton,
}
