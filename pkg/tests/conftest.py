"""Shared test helpers.

`oracle_weight` is a deliberately independent re-implementation of the
weight formula: it reads only public fragment fields (theme, emotion,
frequency, mention tokens), re-derives cluster membership from fragment
state instead of the graph's cluster caches, and uses its own Jaccard and
softmax code. Tests that compare the engine against it are comparing two
separate code paths.
"""

from __future__ import annotations

import math
import random

import pytest

from collective_memory import MemoryGraph, WeightParams


def oracle_jaccard(a, b) -> float:
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def oracle_weight(graph: MemoryGraph, fragment_id: str) -> float:
    """Brute-force weight: cluster softmax plus normalized Jaccard sum."""
    fragment = graph.fragments[fragment_id]
    members = [f for f in graph.fragments.values() if f.live and f.theme == fragment.theme]
    exps = {f.id: math.exp(f.emotion) for f in members}
    share = exps[fragment_id] / sum(exps.values())
    sigma = sum(
        oracle_jaccard(fragment.mention_tokens, other.mention_tokens)
        for other in members
        if other.id != fragment_id
    )
    resonance = sigma / max(1, len(members) - 1)
    p = graph.params
    return p.alpha * math.log(fragment.frequency + 1) + p.beta * share + p.gamma * resonance


_VOCAB = (
    "lantern bridge spring willow market stone boat chime alley drum "
    "garden mist rain bell pavilion cart kite moon thread brick "
    "harbor cricket tile shadow lotus reed amber fern gull ember"
).split()


def random_graph(rng: random.Random, max_fragments: int = 20, params: WeightParams | None = None) -> MemoryGraph:
    """A graph grown by random ingestion: repeats, varied emotions, merges."""
    graph = MemoryGraph(params or WeightParams())
    target = rng.randint(1, max_fragments)
    seen_texts: list[str] = []
    attempts = 0
    while len([f for f in graph.fragments.values() if f.live]) < target and attempts < 6 * max_fragments:
        attempts += 1
        if seen_texts and rng.random() < 0.35:
            text = rng.choice(seen_texts)  # repeat: exercises merging, f > 1
        else:
            length = rng.randint(3, 7)
            text = " ".join(rng.choice(_VOCAB) for _ in range(length))
            seen_texts.append(text)
        emotion = round(rng.random(), 3)
        session = f"s{rng.randint(1, 4)}"
        graph.ingest_fragment(text, session, emotion)
    return graph


@pytest.fixture
def rng() -> random.Random:
    return random.Random(2024)
