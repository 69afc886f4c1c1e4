"""Persistence and retrieval: event log, canonical snapshots, cosine search.

The event log is an append-only sequence (optionally mirrored to a JSON-lines
file, one event per line). Command events (ingest, delete, tick) are enough
to rebuild the graph from empty; derived events (merge, weight-update,
conflict, decay, archive, summary) are recorded for audit and, in the case of
summaries, replayed as facts so replay never re-calls a generation service.
Delete events are tombstones holding ids only, so replaying a log never
resurrects deleted text.

Snapshots are canonical JSON: sorted keys, compact separators, ASCII-only,
floats rounded to 9 decimal places. Equal graphs therefore produce equal
bytes and a stable SHA-256.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Iterable, Iterator

from .config import WeightParams
from .embedding import HashingEmbedder, cosine
from .graph import ClaimExtractor, MemoryGraph

# Event types. "tick" marks one simulated-day advance so trailing days with
# no visible effect still replay; the rest follow the processing pipeline.
INGEST = "ingest"
MERGE = "merge"
WEIGHT_UPDATE = "weight-update"
CONFLICT = "conflict"
DECAY = "decay"
ARCHIVE = "archive"
DELETE = "delete"
SUMMARY = "summary"
TICK = "tick"

COMMAND_EVENTS = frozenset({INGEST, DELETE, TICK})


@dataclass(frozen=True)
class Event:
    seq: int
    day: int
    type: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "day": self.day, "type": self.type, "payload": self.payload}


class EventLog:
    """Append-only event sequence with an optional JSONL file mirror."""

    def __init__(self, path: str | Path | None = None):
        self.events: list[Event] = []
        self._fh: IO[str] | None = None
        if path is not None:
            self._fh = open(path, "a", encoding="utf-8")

    def append(self, type: str, day: int, payload: dict) -> Event:
        event = Event(seq=len(self.events), day=day, type=type, payload=payload)
        self.events.append(event)
        if self._fh is not None:
            self._fh.write(json.dumps(event.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")
            self._fh.flush()
        return event

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    @staticmethod
    def read(path: str | Path) -> list[Event]:
        events = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                events.append(Event(seq=raw["seq"], day=raw["day"], type=raw["type"], payload=raw["payload"]))
        return events


# ----------------------------------------------------------------------
# Canonical snapshot encoding
# ----------------------------------------------------------------------


def _round_floats(value: Any) -> Any:
    if isinstance(value, float):
        return 0.0 if value == 0 else round(value, 9)
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def canonical_bytes(data: dict) -> bytes:
    """Canonical JSON bytes: sorted keys, compact, ASCII, 9-decimal floats."""
    return json.dumps(_round_floats(data), sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("utf-8")


def snapshot_bytes(graph: MemoryGraph) -> bytes:
    return canonical_bytes(graph.to_dict())


def snapshot_hash(graph: MemoryGraph) -> str:
    return hashlib.sha256(snapshot_bytes(graph)).hexdigest()


def save_snapshot(graph: MemoryGraph, path: str | Path) -> str:
    """Write the canonical snapshot; returns its SHA-256 content hash."""
    data = snapshot_bytes(graph)
    Path(path).write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def load_snapshot(
    path: str | Path,
    *,
    embedder: HashingEmbedder | None = None,
    claim_extractor: ClaimExtractor | None = None,
) -> MemoryGraph:
    data = json.loads(Path(path).read_bytes())
    return MemoryGraph.from_dict(data, embedder=embedder, claim_extractor=claim_extractor)


# ----------------------------------------------------------------------
# Retrieval
# ----------------------------------------------------------------------


def similar(graph: MemoryGraph, query: str, k: int) -> list[tuple[str, float]]:
    """Top-k live fragments by embedding cosine; ties break on fragment id.

    Exact scan over the live population; at desk scale (<= 10^4 fragments)
    this is cheap and exactly testable, and an ANN index would buy nothing.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    query_vec = graph.embedder.embed(query)
    scored = [(fragment.id, cosine(query_vec, graph.fragment_vector(fragment.id))) for fragment in graph.active_fragments()]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]


# ----------------------------------------------------------------------
# Deletion
# ----------------------------------------------------------------------


@dataclass
class DeletionReceipt:
    contribution_id: str
    fragment_id: str
    fragment_deleted: bool
    remaining_frequency: int
    conflicts_removed: list[dict] = field(default_factory=list)
    summaries_marked_stale: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "contribution_id": self.contribution_id,
            "fragment_id": self.fragment_id,
            "fragment_deleted": self.fragment_deleted,
            "remaining_frequency": self.remaining_frequency,
            "conflicts_removed": self.conflicts_removed,
            "summaries_marked_stale": self.summaries_marked_stale,
        }


def delete_contribution(graph: MemoryGraph, contribution_id: str, events: EventLog | None = None) -> DeletionReceipt:
    """Remove one contribution with full cascade and log a tombstone.

    The tombstone records ids only; the contributed text is not retained in
    the deletion event.
    """
    report = graph.remove_contribution(contribution_id)
    receipt = DeletionReceipt(**report)
    if events is not None:
        events.append(
            DELETE,
            graph.clock.day,
            {"contribution_id": receipt.contribution_id, "fragment_id": receipt.fragment_id},
        )
    return receipt


# ----------------------------------------------------------------------
# Replay
# ----------------------------------------------------------------------


def replay_events(
    events: Iterable[Event],
    *,
    params: WeightParams | None = None,
    embedder: HashingEmbedder | None = None,
    claim_extractor: ClaimExtractor | None = None,
    auto_register_sessions: bool = True,
) -> MemoryGraph:
    """Rebuild a graph from an event log.

    Commands are re-executed; recorded summaries are re-applied as facts;
    other derived events are regenerated by the deterministic pipeline and
    therefore skipped on read.
    """
    from .graph import SelfSummary
    from .lifecycle import tick
    from .tension import detect_conflicts

    graph = MemoryGraph(
        params,
        embedder=embedder,
        claim_extractor=claim_extractor,
        auto_register_sessions=auto_register_sessions,
    )
    for event in events:
        if event.type == INGEST:
            p = event.payload
            graph.ingest_fragment(
                p["text"],
                p["session_id"],
                p["emotion"],
                place_tags=p.get("place_tags", ()),
                day=p["day"],
            )
            detect_conflicts(graph)
        elif event.type == DELETE:
            graph.remove_contribution(event.payload["contribution_id"])
        elif event.type == TICK:
            tick(graph, 1, run_synthesis=False)
        elif event.type == SUMMARY:
            p = event.payload
            graph.summaries.append(
                SelfSummary(
                    id=p["id"],
                    day=p["day"],
                    source_fragment_ids=tuple(p["source_fragment_ids"]),
                    text=p["text"],
                    stale=False,
                )
            )
    return graph
