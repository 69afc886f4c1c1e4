"""Forgetting, archival, rescue, and daily synthesis.

The archival fixture pins a fragment below the forgetting threshold with a
low-alpha parameter set (a singleton with f=1 then has raw weight
alpha*ln2 + beta, below 0.1 for alpha=beta=0.05) and checks the day-by-day
trajectory against an independent straight-line simulation of the rules.
"""

from __future__ import annotations

import pytest

from collective_memory import (
    FragmentStatus,
    MemoryGraph,
    StubDialogueClient,
    WeightParams,
    synthesize,
    tick,
)

LOW_PARAMS = WeightParams(alpha=0.05, beta=0.05, gamma=0.2, w_forget=0.1, w_synth=0.5)


def _pinned_graph() -> tuple[MemoryGraph, str]:
    graph = MemoryGraph(LOW_PARAMS)
    receipt = graph.ingest_fragment("a faint remark nobody repeats", "s1", 0.1)
    return graph, receipt.fragment_id


def simulate_pinned(raw_value: float, params: WeightParams, days: int) -> list[dict]:
    """Independent oracle: applies the tick rules to one constant-raw fragment."""
    state = {"status": "active", "lwd": 0, "weight": raw_value}
    trajectory = []
    for _ in range(days):
        if state["status"] == "archived":
            trajectory.append(dict(state))
            continue
        if raw_value < params.w_forget:
            state["status"] = "decaying"
            state["lwd"] += 1
            state["weight"] = raw_value * 2.0 ** (-state["lwd"] / params.decay_half_life_cycles)
        else:
            state["status"] = "active"
            state["lwd"] = 0
            state["weight"] = raw_value
        if state["status"] == "decaying" and state["lwd"] >= params.archive_after_days:
            state["status"] = "archived"
        trajectory.append(dict(state))
    return trajectory


def test_pinned_fragment_archives_on_exactly_the_seventh_day():
    graph, fid = _pinned_graph()
    raw = graph.raw_weight(fid)
    assert raw < 0.1
    expected = simulate_pinned(raw, graph.params, 10)

    for day_index in range(10):
        report = tick(graph, 1)
        fragment = graph.fragments[fid]
        want = expected[day_index]
        assert fragment.status.value == want["status"], f"day {day_index + 1}"
        assert fragment.low_weight_days == want["lwd"]
        if fragment.status is not FragmentStatus.ARCHIVED:
            assert fragment.weight == pytest.approx(want["weight"], abs=1e-12)
        archived_now = [d.archived_ids for d in report.days]
        if day_index + 1 == 7:
            assert archived_now == [[fid]], "archival lands exactly on day 7"
        else:
            assert archived_now == [[]]


def test_healthy_fragments_never_decay():
    graph = MemoryGraph()  # default params: singleton raw is ~0.708
    graph.ingest_fragment("I love the lake", "s1", 0.6)
    report = tick(graph, 5)
    assert report.decayed_total == 0
    assert report.archived_total == 0


def test_rescued_fragment_resets_low_weight_days():
    graph, fid = _pinned_graph()
    tick(graph, 3)
    fragment = graph.fragments[fid]
    assert fragment.status is FragmentStatus.DECAYING
    assert fragment.low_weight_days == 3
    # A repeat mention lifts raw above the threshold: alpha*ln3 + 0.05 >= 0.1.
    graph.ingest_fragment("a faint remark nobody repeats", "s2", 0.1)
    assert graph.raw_weight(fid) >= 0.1
    tick(graph, 1)
    fragment = graph.fragments[fid]
    assert fragment.status is FragmentStatus.ACTIVE
    assert fragment.low_weight_days == 0
    # And it never archives inside the original window.
    report = tick(graph, 10)
    assert report.archived_total == 0


def test_decay_strictly_monotone_while_untouched():
    graph, fid = _pinned_graph()
    weights = []
    for _ in range(6):
        tick(graph, 1)
        weights.append(graph.fragments[fid].weight)
    assert all(b < a for a, b in zip(weights, weights[1:]))


def test_archived_fragment_leaves_retrieval_and_softmax():
    graph, fid = _pinned_graph()
    other = graph.ingest_fragment("company for the cluster walk", "s1", 0.9)
    tick(graph, 8)
    assert graph.fragments[fid].status is FragmentStatus.ARCHIVED
    assert fid not in [f.id for f in graph.top_weighted(10)]
    for cluster in graph.clusters.values():
        assert fid not in cluster
    # Sole survivor of its cluster: softmax share returns to 1.
    if graph.fragments[other.fragment_id].theme == graph.fragments[fid].theme:
        assert graph.raw_weight(other.fragment_id) == pytest.approx(
            graph.params.alpha * __import__("math").log(2) + graph.params.beta, abs=1e-9
        )


def test_tick_rejects_nonpositive_days():
    graph = MemoryGraph()
    with pytest.raises(ValueError):
        tick(graph, 0)


def test_no_summary_below_threshold():
    graph, _ = _pinned_graph()  # weights sit near 0.085, w_synth is 0.5
    report = tick(graph, 1)
    assert report.summaries_total == 0
    assert graph.summaries == []


def test_summary_references_exactly_the_qualifying_fragments():
    graph = MemoryGraph()
    a = graph.ingest_fragment("I love the lake", "s1", 0.9)
    b = graph.ingest_fragment("the spring sings below", "s2", 0.8)
    summary = synthesize(graph, day=1, dialogue_client=StubDialogueClient())
    qualified = {f.id for f in graph.active_fragments() if f.weight >= graph.params.w_synth}
    assert summary is not None
    assert set(summary.source_fragment_ids) == qualified
    assert {a.fragment_id, b.fragment_id} <= qualified
    assert summary.text.startswith("I remember: ")


def test_at_most_one_summary_per_tick_day():
    graph = MemoryGraph()
    graph.ingest_fragment("I love the lake", "s1", 0.9)
    report = tick(graph, 4)
    assert report.summaries_total == 4
    assert len(graph.summaries) == 4
    assert len({s.day for s in graph.summaries}) == 4


class _FailingClient:
    def generate(self, prompt, query, bundle=None):
        raise RuntimeError("generation down")

    def summarize(self, texts):
        raise RuntimeError("summarizer down")


def test_client_failure_skips_summary_and_surfaces_error():
    graph = MemoryGraph()
    graph.ingest_fragment("I love the lake", "s1", 0.9)
    before = graph.summaries[:]
    report = tick(graph, 1, dialogue_client=_FailingClient())
    assert report.days[0].client_error is not None
    assert report.days[0].summary_id is None
    assert graph.summaries == before


def test_replay_same_inputs_same_report_sequence():
    def run() -> list[dict]:
        graph, _ = _pinned_graph()
        graph.ingest_fragment("I love the lake", "s1", 0.9)
        return [tick(graph, 1).to_dict() for _ in range(9)]

    assert run() == run()
