"""Corpus replay, retrieval benchmarking, and synthetic corpus generation.

A corpus is a JSON-lines file of dialogue records ordered by non-decreasing
simulated day::

    {"day": 0, "session_id": "s1", "text": "the copper bridge ..."}
    {"day": 2, "session_id": "s3", "text": "i see myself by daming lake",
     "location": "Daming Lake"}
    {"day": 9, "session_id": "s1", "text": "do you remember the bridge?",
     "probe": {"expected_fragment_text": "the copper bridge ..."}}

Records with a `location` ingest as place-tagged captions. Records with a
`probe` are retrieval questions: replay skips them, the benchmark answers
them. Replay advances the clock with lifecycle ticks between days plus one
closing tick, so a corpus spanning days 0..N-1 simulates N days.

The benchmark compares three retrieval policies over one shared graph:
`dcm` (the engine's weight-ranked context bundle), `naive-cosine` (embedding
similarity only), and `recency` (most recently touched). It reports
recall@k; the interesting property is the ordering on corpora whose planted
facts earn their weight through repetition and resonance.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .config import EngineConfig, WeightParams
from .engine import MemoryEngine
from .errors import CorpusFormatError
from .fusion import DialogueClient, build_context
from .store import INGEST, canonical_bytes, similar, snapshot_hash

logger = logging.getLogger(__name__)

POLICIES = ("dcm", "naive-cosine", "recency")


@dataclass
class CorpusRecord:
    day: int
    session_id: str
    text: str
    location: str | None = None
    emotion: float | None = None
    probe: dict | None = None

    def to_dict(self) -> dict:
        data: dict = {"day": self.day, "session_id": self.session_id, "text": self.text}
        if self.location is not None:
            data["location"] = self.location
        if self.emotion is not None:
            data["emotion"] = self.emotion
        if self.probe is not None:
            data["probe"] = self.probe
        return data


def write_corpus(records: Iterable[CorpusRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")


def read_corpus(path: str | Path) -> list[CorpusRecord]:
    """Parse a corpus file; aborts with the offending line number."""
    records: list[CorpusRecord] = []
    previous_day = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON ({exc.msg})", line_no) from exc
            record = _parse_record(raw, line_no)
            if record.day < previous_day:
                raise CorpusFormatError("days must be non-decreasing", line_no)
            previous_day = record.day
            records.append(record)
    return records


def _parse_record(raw: dict, line_no: int) -> CorpusRecord:
    if not isinstance(raw, dict):
        raise CorpusFormatError("record must be a JSON object", line_no)
    try:
        day = int(raw["day"])
        session_id = str(raw["session_id"])
        text = str(raw["text"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"missing or bad required field ({exc})", line_no) from exc
    if day < 0:
        raise CorpusFormatError("day must be non-negative", line_no)
    if not text.strip():
        raise CorpusFormatError("text must be non-empty", line_no)
    if not session_id.strip():
        raise CorpusFormatError("session_id must be non-empty", line_no)
    probe = raw.get("probe")
    if probe is not None and (not isinstance(probe, dict) or "expected_fragment_text" not in probe):
        raise CorpusFormatError("probe needs expected_fragment_text", line_no)
    emotion = raw.get("emotion")
    if emotion is not None:
        emotion = float(emotion)
        if not 0.0 <= emotion <= 1.0:
            raise CorpusFormatError("emotion must be in [0, 1]", line_no)
    return CorpusRecord(
        day=day,
        session_id=session_id,
        text=text,
        location=raw.get("location"),
        emotion=emotion,
        probe=probe,
    )


# ----------------------------------------------------------------------
# Replay
# ----------------------------------------------------------------------


def replay_corpus(
    records: Sequence[CorpusRecord],
    config: EngineConfig | None = None,
    *,
    dialogue_client: DialogueClient | None = None,
) -> tuple[MemoryEngine, dict]:
    """Run the ingest/tick schedule for a corpus and build the replay report.

    The report is free of wall-clock data, so (corpus, params, seed) map to
    byte-identical report files across runs.
    """
    engine = MemoryEngine(config, dialogue_client=dialogue_client)
    ingested = 0
    probes = 0
    for record in records:
        if record.day > engine.graph.clock.day:
            engine.tick(record.day - engine.graph.clock.day)
        if record.probe is not None:
            probes += 1
            continue
        engine.ingest_turn(
            record.session_id,
            text=None if record.location else record.text,
            caption=record.text if record.location else None,
            location=record.location,
            emotion=record.emotion,
            allow_unresolved_place=True,
        )
        ingested += 1
    if records:
        engine.tick(1)  # close out the final day; an empty corpus stays pristine

    report = build_report(engine, records_total=len(records), ingested=ingested, probes=probes)
    return engine, report


def build_report(engine: MemoryEngine, *, records_total: int, ingested: int, probes: int) -> dict:
    graph = engine.graph
    created = {e.payload["fragment_id"] for e in engine.events if e.type == INGEST}
    by_status = {"active": 0, "decaying": 0, "archived": 0}
    for fragment in graph.fragments.values():
        by_status[fragment.status.value] += 1
    lifecycle = {
        "decayed_events": sum(1 for e in engine.events if e.type == "decay"),
        "archived": sum(1 for e in engine.events if e.type == "archive"),
        "summaries": sum(1 for e in engine.events if e.type == "summary"),
    }
    return {
        "records": records_total,
        "ingested_turns": ingested,
        "probe_records": probes,
        "days_simulated": graph.clock.day,
        "fragments_created": len(created),
        "fragments": by_status,
        "conflicts": [pair.to_dict() for pair in sorted(graph.conflicts, key=lambda p: p.key())],
        "summaries": [s.to_dict() for s in graph.summaries],
        "lifecycle": lifecycle,
        "graph_hash": snapshot_hash(graph),
    }


def report_bytes(report: dict) -> bytes:
    return canonical_bytes(report)


# ----------------------------------------------------------------------
# Benchmark
# ----------------------------------------------------------------------


def run_bench(
    records: Sequence[CorpusRecord],
    config: EngineConfig | None = None,
    *,
    k: int = 5,
    policies: Sequence[str] = POLICIES,
) -> dict:
    """Answer every probe with each retrieval policy over one shared graph."""
    probes = [r for r in records if r.probe is not None]
    if not probes:
        raise ValueError("bench needs at least one probe record")
    unknown = [p for p in policies if p not in POLICIES]
    if unknown:
        raise ValueError(f"unknown policies: {unknown}")

    engine, replay_report = replay_corpus(records, config)
    graph = engine.graph

    results: dict[str, dict] = {}
    for policy in policies:
        hits = 0
        detail = []
        for record in probes:
            expected = record.probe["expected_fragment_text"]
            target = graph.find_fragment_by_text(expected)
            retrieved = _retrieve(policy, engine, record.text, k)
            hit = target is not None and target in retrieved
            hits += int(hit)
            detail.append(
                {
                    "query": record.text,
                    "expected_text": expected,
                    "target_fragment": target,
                    "retrieved": retrieved,
                    "hit": hit,
                }
            )
        results[policy] = {
            "hits": hits,
            "probes": len(probes),
            "recall_at_k": hits / len(probes),
            "detail": detail,
        }

    return {
        "k": k,
        "probes": len(probes),
        "policies": results,
        "graph_hash": replay_report["graph_hash"],
    }


def _retrieve(policy: str, engine: MemoryEngine, query: str, k: int) -> list[str]:
    graph = engine.graph
    if policy == "dcm":
        bundle = build_context(
            graph,
            query,
            k,
            gazetteer=engine.gazetteer,
            place_keywords=engine.config.place_intent_keywords,
        )
        return [fid for fid, _ in bundle.memories]
    if policy == "naive-cosine":
        return [fid for fid, _ in similar(graph, query, k)]
    if policy == "recency":
        ranked = sorted(graph.active_fragments(), key=lambda f: (-f.last_touched, -f.created_at, f.id))
        return [f.id for f in ranked[:k]]
    raise ValueError(f"unknown policy {policy!r}")


# ----------------------------------------------------------------------
# Corpus generation
# ----------------------------------------------------------------------

_FACT_ADJECTIVES = (
    "copper quiet crooked mossy gilded narrow winding dusty amber painted "
    "carved crimson hollow silver braided woven marble pebbled slanted shaded "
    "ironbound lacquered tiled arched"
).split()
_FACT_NOUNS = (
    "bridge teahouse lantern ferry belltower courtyard stall pavilion gate "
    "canal rooftop orchard fountain archway workshop kiln terrace boathouse "
    "signpost drumtower"
).split()
_FACT_SITES = "river dock wall hill grove pier crossing channel embankment meadow".split()
_FACT_VERBS = "creaks hums glows drifts sways flickers rustles echoes shimmers settles".split()
_FACT_TIMES = "dawn dusk noon midnight twilight daybreak".split()
_DISTRACTOR_EXTRAS = "yesterday twice loudly perhaps quickly slowly briefly elsewhere someday rarely".split()

_BENCH_FILLER_WORDS = (
    "teapot sparrow ribbon pebble thread basket candle mirror ladder bucket "
    "jacket compass spindle saucer whistle magnet "
).split()

_SCALE_FILLER_WORDS = (
    "tickets porridge umbrellas chess kites noodles scooters dumplings fans "
    "posters buses melons radios puddles pigeons benches scarves crickets "
    "newspapers chestnuts slippers brooms teacups abacus marbles shutters "
    "awnings gourds mooncakes parasols lacquer dominoes censers zithers "
    "pinwheels tangrams sparklers vendors gongs peonies"
).split()

_CONTRADICTION_BANK = [
    ("family", "my siblings gather at the long table each week", "i am alone in these streets now"),
    ("residence", "i live beside the willow lane", "i never lived anywhere near this lane"),
    ("city-affection", "i love this city with all my heart", "i do not love this city anymore"),
    ("age", "i feel old as the stones here", "i am still young inside"),
    ("solitude", "i treasure silence and solitude", "i never feel solitude in this crowd"),
]

_CAPTION_PLACES = (
    "Daming Lake",
    "Baotu Spring",
    "Old Market Streets",
    "Thousand Buddha Mountain",
    "Quancheng Square",
)


@dataclass
class CorpusSpec:
    """Counts and seed for the deterministic corpus generator."""

    seed: int = 11
    days: int = 10
    sessions: int = 6
    facts: int = 4
    fact_mentions: int = 5
    fact_echoes: int = 1
    probes_per_fact: int = 1
    distractors_per_fact: int = 6
    contradiction_pairs: int = 1
    place_mentions: int = 4
    filler: int = 60
    target_records: int | None = None

    @classmethod
    def bench_preset(cls) -> "CorpusSpec":
        return cls(seed=101)

    @classmethod
    def scale_preset(cls) -> "CorpusSpec":
        """Desk-scale stand-in for the recorded-interaction corpus size."""
        return cls(
            seed=202,
            days=30,
            sessions=12,
            facts=20,
            fact_mentions=5,
            fact_echoes=1,
            probes_per_fact=0,
            distractors_per_fact=0,
            contradiction_pairs=3,
            place_mentions=30,
            filler=0,
            target_records=2500,
        )

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


def forgetting_params() -> WeightParams:
    """Weighting preset that makes one-off chatter actually forgettable.

    With the default mixing weights the frequency term alone keeps every
    fragment above the forgetting threshold, so nothing ever archives. This
    preset lowers alpha and gamma and loosens clustering so that unrepeated
    low-resonance fragments sink below the threshold while repeated,
    echoed facts stay comfortably above it.
    """
    return WeightParams(alpha=0.05, beta=0.5, gamma=0.05, theme_threshold=0.35)


def generate_corpus(spec: CorpusSpec) -> list[CorpusRecord]:
    """Deterministic synthetic corpus with planted facts, echoes,
    contradictions, place captions, probes, and filler."""
    rng = random.Random(spec.seed)
    facts = []
    for i in range(spec.facts):
        adj = _FACT_ADJECTIVES[i % len(_FACT_ADJECTIVES)]
        noun = _FACT_NOUNS[i % len(_FACT_NOUNS)]
        site = _FACT_SITES[i % len(_FACT_SITES)]
        verb = _FACT_VERBS[(i + 3) % len(_FACT_VERBS)]
        time = _FACT_TIMES[(i + 5) % len(_FACT_TIMES)]
        facts.append(
            {
                "text": f"the {adj} {noun} by the {site} {verb} at {time}",
                "echo": f"the {adj} {noun} by the {site} {verb} after rain",
                "query": f"do you remember the {adj} {noun}",
                "adj": adj,
                "noun": noun,
            }
        )

    early = max(1, spec.days // 3)
    late_start = spec.days // 2
    timeline: list[CorpusRecord] = []

    def session() -> str:
        return f"s{1 + rng.randrange(spec.sessions)}"

    for fact in facts:
        mention_sessions = [session() for _ in range(3)] or ["s1"]
        for m in range(spec.fact_mentions):
            timeline.append(
                CorpusRecord(
                    day=rng.randrange(0, early),
                    session_id=mention_sessions[m % len(mention_sessions)],
                    text=fact["text"],
                )
            )
        for _ in range(spec.fact_echoes):
            timeline.append(CorpusRecord(day=rng.randrange(0, early), session_id=session(), text=fact["echo"]))
        for d in range(spec.distractors_per_fact):
            x1 = _DISTRACTOR_EXTRAS[d % len(_DISTRACTOR_EXTRAS)]
            x2 = _DISTRACTOR_EXTRAS[(d + 3) % len(_DISTRACTOR_EXTRAS)]
            timeline.append(
                CorpusRecord(
                    day=rng.randrange(late_start, spec.days),
                    session_id=session(),
                    text=f"someone will remember the {fact['adj']} {fact['noun']} {x1} {x2}",
                )
            )

    for i in range(spec.contradiction_pairs):
        _topic, positive, negative = _CONTRADICTION_BANK[i % len(_CONTRADICTION_BANK)]
        timeline.append(CorpusRecord(day=rng.randrange(0, early), session_id=session(), text=positive))
        timeline.append(CorpusRecord(day=rng.randrange(0, max(early, spec.days // 2)), session_id=session(), text=negative))

    for i in range(spec.place_mentions):
        place = _CAPTION_PLACES[i % len(_CAPTION_PLACES)]
        time = _FACT_TIMES[i % len(_FACT_TIMES)]
        timeline.append(
            CorpusRecord(
                day=rng.randrange(0, spec.days),
                session_id=session(),
                text=f"i see myself by {place.lower()} at {time}",
                location=place,
            )
        )

    filler_count = spec.filler
    if spec.target_records is not None:
        probe_count = spec.facts * spec.probes_per_fact
        filler_count = max(0, spec.target_records - len(timeline) - probe_count)
    if spec.target_records is not None:
        pool = _SCALE_FILLER_WORDS
        for _ in range(filler_count):
            a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
            timeline.append(
                CorpusRecord(
                    day=rng.randrange(0, spec.days),
                    session_id=session(),
                    text=f"small talk by the harbor about {a} and {b} near the {c} this evening",
                )
            )
    else:
        pool = _BENCH_FILLER_WORDS
        for _ in range(filler_count):
            w1, w2, w3 = rng.choice(pool), rng.choice(pool), rng.choice(pool)
            timeline.append(
                CorpusRecord(
                    day=rng.randrange(0, spec.days),
                    session_id=session(),
                    text=f"the {w1} beside the {w2} seems plainer than the {w3}",
                )
            )

    probe_day = max(0, spec.days - 1)
    for fact in facts:
        for _ in range(spec.probes_per_fact):
            timeline.append(
                CorpusRecord(
                    day=probe_day,
                    session_id=session(),
                    text=fact["query"],
                    probe={"expected_fragment_text": fact["text"]},
                )
            )

    timeline.sort(key=lambda r: r.day)  # stable: preserves build order within a day
    return timeline
