"""Simulated-clock lifecycle: forgetting, archival, and daily synthesis.

Each tick advances the clock one day and runs four steps in order:

1. recompute the formula weight of every live fragment;
2. fragments below the forgetting threshold enter (or stay in) decaying
   status, gain a low-weight day, and have their stored weight multiplied
   down by ``2 ** (-low_weight_days / half_life)``; fragments at or above
   the threshold reset to active with the fresh value, which is how new
   resonance rescues a decaying memory;
3. fragments that have spent ``archive_after_days`` consecutive days below
   the threshold move to the archive (excluded from retrieval and softmax
   populations, retained in storage);
4. live fragments at or above the synthesis threshold are condensed into a
   first-person self-awareness summary through the dialogue client.

Because the decay multiplier compounds on the consecutive-low-day count, a
decaying fragment's stored weight is strictly decreasing while untouched,
even though step 1 refreshes the underlying formula value every day.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .graph import FragmentStatus, MemoryGraph, SelfSummary, SimClock  # noqa: F401 (SimClock re-exported)

if TYPE_CHECKING:  # pragma: no cover
    from .fusion import DialogueClient
    from .store import EventLog

logger = logging.getLogger(__name__)


@dataclass
class DayReport:
    day: int
    decayed_ids: list[str] = field(default_factory=list)
    archived_ids: list[str] = field(default_factory=list)
    summary_id: str | None = None
    client_error: str | None = None

    def to_dict(self) -> dict:
        return {
            "day": self.day,
            "decayed": len(self.decayed_ids),
            "archived": len(self.archived_ids),
            "decayed_ids": self.decayed_ids,
            "archived_ids": self.archived_ids,
            "summary_id": self.summary_id,
            "client_error": self.client_error,
        }


@dataclass
class LifecycleReport:
    started_day: int
    ended_day: int
    days: list[DayReport] = field(default_factory=list)

    @property
    def decayed_total(self) -> int:
        return sum(len(d.decayed_ids) for d in self.days)

    @property
    def archived_total(self) -> int:
        return sum(len(d.archived_ids) for d in self.days)

    @property
    def summaries_total(self) -> int:
        return sum(1 for d in self.days if d.summary_id is not None)

    def to_dict(self) -> dict:
        return {
            "started_day": self.started_day,
            "ended_day": self.ended_day,
            "decayed": self.decayed_total,
            "archived": self.archived_total,
            "summarized": self.summaries_total,
            "days": [d.to_dict() for d in self.days],
        }


def synthesize(
    graph: MemoryGraph,
    day: int,
    dialogue_client: "DialogueClient",
    events: "EventLog | None" = None,
) -> SelfSummary | None:
    """Condense above-threshold memories into one summary, or None.

    The dialogue client renders the text; with the stub that is the ordered
    concatenation "I remember: <texts>". A client failure propagates without
    touching the graph.
    """
    qualified = [f for f in graph.active_fragments() if f.weight >= graph.params.w_synth]
    if not qualified:
        return None
    qualified.sort(key=lambda f: (-f.weight, f.created_at, f.id))
    text = dialogue_client.summarize([f.text for f in qualified])

    summary_id = MemoryGraph._unique_key(f"s{day:05d}", {s.id: s for s in graph.summaries})
    summary = SelfSummary(
        id=summary_id,
        day=day,
        source_fragment_ids=tuple(sorted(f.id for f in qualified)),
        text=text,
    )
    graph.summaries.append(summary)
    if events is not None:
        events.append("summary", day, summary.to_dict())
    return summary


def tick(
    graph: MemoryGraph,
    days: int,
    *,
    dialogue_client: "DialogueClient | None" = None,
    events: "EventLog | None" = None,
    run_synthesis: bool = True,
) -> LifecycleReport:
    """Advance the simulated clock, decaying, archiving, and synthesizing.

    ``run_synthesis=False`` is used by log replay, which re-applies recorded
    summary events instead of regenerating them.
    """
    if days < 1:
        raise ValueError("days must be at least 1")
    if dialogue_client is None and run_synthesis:
        from .fusion import StubDialogueClient

        dialogue_client = StubDialogueClient()

    params = graph.params
    report = LifecycleReport(started_day=graph.clock.day, ended_day=graph.clock.day)

    for _ in range(days):
        day = graph.clock.advance(1)
        if events is not None:
            events.append("tick", day, {})
        day_report = DayReport(day=day)

        raw = graph.recompute_all_raw()
        for fid in sorted(raw):
            fragment = graph.fragments[fid]
            value = raw[fid]
            if value < params.w_forget:
                fragment.status = FragmentStatus.DECAYING
                fragment.low_weight_days += 1
                fragment.weight = value * 2.0 ** (-fragment.low_weight_days / params.decay_half_life_cycles)
                day_report.decayed_ids.append(fid)
                if events is not None:
                    events.append("decay", day, {"fragment_id": fid, "weight": round(fragment.weight, 9)})
            else:
                fragment.status = FragmentStatus.ACTIVE
                fragment.low_weight_days = 0
                fragment.weight = value
        if events is not None and raw:
            events.append("weight-update", day, {"fragments": len(raw)})

        for fid in sorted(raw):
            fragment = graph.fragments[fid]
            if fragment.live and fragment.low_weight_days >= params.archive_after_days:
                graph.archive_fragment(fid)
                day_report.archived_ids.append(fid)
                if events is not None:
                    events.append("archive", day, {"fragment_id": fid})

        if run_synthesis:
            try:
                summary = synthesize(graph, day, dialogue_client, events)
                day_report.summary_id = summary.id if summary else None
            except Exception as exc:  # client failure: skip, surface, leave graph intact
                day_report.client_error = str(exc)
                logger.warning("synthesis skipped on day %d: %s", day, exc)

        report.days.append(day_report)
        report.ended_day = day

    return report
