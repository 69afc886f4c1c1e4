"""Context fusion: prompt bundles, geo anchoring, and dialogue clients.

Builds the exact three-line prompt injected into generation::

    Context: [High-weight memories: M1(W=0.8), M2(W=0.7)]
    Conflicts: [Contradictory pairs: (M3<->M4)]
    Task: Generate response acknowledging tensions if present.

Memory labels are bundle-local positions, not fragment ids, and weights are
printed to one decimal. The weight, not query similarity, is the final sort
key: candidates come from the union of the top-weighted fragments and the
cosine-nearest fragments, re-ranked by weight and truncated.

Geo anchoring: when the query names a gazetteer place or uses a place-intent
keyword, at least one place-tagged fragment is pulled into the bundle (when
one exists), displacing the lowest-weight non-place entry.
"""

from __future__ import annotations

import hashlib
import json
import re
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .errors import DialogueClientError, PromptFormatError, UnknownPlaceError
from .graph import IngestReceipt, MemoryGraph
from .store import similar
from .tension import ConflictPair, tension_directive
from .textutils import normalize_text, score_emotion

TASK_LINE = "Task: Generate response acknowledging tensions if present."

DEFAULT_PLACE_KEYWORDS = ("place", "where", "city", "location", "street")


class Gazetteer:
    """Place names and their aliases, normalized for matching."""

    def __init__(self, places: dict[str, Iterable[str]]):
        self.places: dict[str, frozenset[str]] = {}
        self._lookup: dict[str, str] = {}
        for name in sorted(places):
            canonical = name.strip()
            aliases = {normalize_text(a) for a in places[name]} | {normalize_text(canonical)}
            aliases.discard("")
            self.places[canonical] = frozenset(aliases)
            for alias in aliases:
                self._lookup.setdefault(alias, canonical)

    @classmethod
    def from_dict(cls, data: dict) -> "Gazetteer":
        return cls({entry["name"]: entry.get("aliases", []) for entry in data.get("places", [])})

    @classmethod
    def from_file(cls, path: str | Path) -> "Gazetteer":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def default(cls) -> "Gazetteer":
        raw = resources.files("collective_memory.data").joinpath("gazetteer_jinan.json")
        return cls.from_dict(json.loads(raw.read_text(encoding="utf-8")))

    def resolve(self, name: str) -> str | None:
        return self._lookup.get(normalize_text(name))

    def find_mentions(self, text: str) -> list[str]:
        """Canonical names of all places mentioned in the text, sorted."""
        norm = normalize_text(text)
        found = set()
        for canonical in sorted(self.places):
            for alias in self.places[canonical]:
                if re.search(rf"\b{re.escape(alias)}\b", norm):
                    found.add(canonical)
                    break
        return sorted(found)


_default_gazetteer: Gazetteer | None = None


def default_gazetteer() -> Gazetteer:
    global _default_gazetteer
    if _default_gazetteer is None:
        _default_gazetteer = Gazetteer.default()
    return _default_gazetteer


# ----------------------------------------------------------------------
# Bundle
# ----------------------------------------------------------------------


@dataclass
class ContextBundle:
    bundle_id: str
    query: str
    memories: list[tuple[str, float]]
    memory_texts: list[str]
    conflicts: list[ConflictPair]
    directive: str | None
    geo_anchors: list[str]
    rendered_prompt: str

    def to_dict(self) -> dict:
        return {
            "bundle_id": self.bundle_id,
            "query": self.query,
            "memories": [{"fragment_id": fid, "weight": w} for fid, w in self.memories],
            "memory_texts": list(self.memory_texts),
            "conflicts": [pair.to_dict() for pair in self.conflicts],
            "directive": self.directive,
            "geo_anchors": list(self.geo_anchors),
            "rendered_prompt": self.rendered_prompt,
        }


def wants_place_context(query: str, gazetteer: Gazetteer, keywords: Sequence[str]) -> bool:
    norm = normalize_text(query)
    if any(kw in norm for kw in keywords):
        return True
    return bool(gazetteer.find_mentions(query))


def build_context(
    graph: MemoryGraph,
    query: str,
    k: int,
    *,
    gazetteer: Gazetteer | None = None,
    place_keywords: Sequence[str] = DEFAULT_PLACE_KEYWORDS,
    bundle_id: str | None = None,
) -> ContextBundle:
    """Assemble the prompt bundle for one query against a graph snapshot."""
    if k < 1:
        raise ValueError("k must be at least 1")
    gazetteer = gazetteer or default_gazetteer()

    ordered_ids = [fragment.id for fragment in graph.top_weighted(k)]
    for fid, _score in similar(graph, query, k):
        if fid not in ordered_ids:
            ordered_ids.append(fid)
    entries = [(fid, graph.fragments[fid].weight) for fid in ordered_ids]
    entries.sort(key=lambda e: (-e[1], graph.fragments[e[0]].created_at, e[0]))
    entries = entries[:k]

    if wants_place_context(query, gazetteer, place_keywords):
        entries = _anchor_place(graph, entries, k)

    query_topics = {claim.topic for claim in graph.claim_extractor(query)}
    scope = {fid for fid, _ in entries}
    if query_topics:
        for fragment in graph.active_fragments():
            if any(claim.topic in query_topics for claim in fragment.claims):
                scope.add(fragment.id)
    pairs = sorted(
        (p for p in graph.conflicts if p.fragment_a in scope and p.fragment_b in scope),
        key=ConflictPair.key,
    )

    labels = {fid: idx + 1 for idx, (fid, _) in enumerate(entries)}
    positions = sorted(
        {
            tuple(sorted((labels[p.fragment_a], labels[p.fragment_b])))
            for p in pairs
            if p.fragment_a in labels and p.fragment_b in labels
        }
    )
    prompt = render_prompt([w for _, w in entries], positions)

    if bundle_id is None:
        joined = ",".join(fid for fid, _ in entries)
        digest = hashlib.blake2b(f"{graph.clock.day}|{query}|{joined}".encode(), digest_size=6).hexdigest()
        bundle_id = "b" + digest

    return ContextBundle(
        bundle_id=bundle_id,
        query=query,
        memories=entries,
        memory_texts=[graph.fragments[fid].text for fid, _ in entries],
        conflicts=pairs,
        directive=tension_directive(pairs),
        geo_anchors=[fid for fid, _ in entries if graph.fragments[fid].place_tags],
        rendered_prompt=prompt,
    )


def _anchor_place(graph: MemoryGraph, entries: list[tuple[str, float]], k: int) -> list[tuple[str, float]]:
    if any(graph.fragments[fid].place_tags for fid, _ in entries):
        return entries
    candidates = [f for f in graph.active_fragments() if f.place_tags]
    if not candidates:
        return entries
    candidates.sort(key=lambda f: (-f.weight, f.created_at, f.id))
    best = candidates[0]
    entries = list(entries)
    if len(entries) < k:
        entries.append((best.id, best.weight))
    else:
        # entries are weight-descending; displace the weakest non-place one
        for idx in range(len(entries) - 1, -1, -1):
            if not graph.fragments[entries[idx][0]].place_tags:
                entries[idx] = (best.id, best.weight)
                break
    entries.sort(key=lambda e: (-e[1], graph.fragments[e[0]].created_at, e[0]))
    return entries


# ----------------------------------------------------------------------
# Prompt grammar
# ----------------------------------------------------------------------


def render_prompt(weights: Sequence[float], conflict_positions: Sequence[tuple[int, int]]) -> str:
    memories = ", ".join(f"M{i + 1}(W={w:.1f})" for i, w in enumerate(weights))
    if conflict_positions:
        pairs = ", ".join(f"(M{a}<->M{b})" for a, b in conflict_positions)
        conflicts = f"Contradictory pairs: {pairs}"
    else:
        conflicts = ""
    return f"Context: [High-weight memories: {memories}]\nConflicts: [{conflicts}]\n{TASK_LINE}"


@dataclass
class ParsedPrompt:
    memories: list[tuple[int, float]]
    conflicts: list[tuple[int, int]]
    task: str


_MEMORY_RE = re.compile(r"^M(\d+)\(W=(\d+\.\d)\)$")
_PAIR_RE = re.compile(r"^\(M(\d+)<->M(\d+)\)$")
_CONTEXT_RE = re.compile(r"^Context: \[High-weight memories: (.*)\]$")
_CONFLICT_RE = re.compile(r"^Conflicts: \[(?:Contradictory pairs: (.+))?\]$")


def parse_prompt(text: str) -> ParsedPrompt:
    """Reference parser for the rendered prompt grammar; raises on mismatch."""
    lines = text.split("\n")
    if len(lines) != 3:
        raise PromptFormatError(f"expected 3 lines, got {len(lines)}")
    context_match = _CONTEXT_RE.match(lines[0])
    conflict_match = _CONFLICT_RE.match(lines[1])
    if context_match is None:
        raise PromptFormatError(f"bad context line: {lines[0]!r}")
    if conflict_match is None:
        raise PromptFormatError(f"bad conflicts line: {lines[1]!r}")
    if lines[2] != TASK_LINE:
        raise PromptFormatError(f"bad task line: {lines[2]!r}")

    memories = []
    body = context_match.group(1)
    if body:
        for chunk in body.split(", "):
            m = _MEMORY_RE.match(chunk)
            if m is None:
                raise PromptFormatError(f"bad memory entry: {chunk!r}")
            memories.append((int(m.group(1)), float(m.group(2))))

    conflicts = []
    pair_body = conflict_match.group(1)
    if pair_body:
        for chunk in pair_body.split(", "):
            m = _PAIR_RE.match(chunk)
            if m is None:
                raise PromptFormatError(f"bad conflict entry: {chunk!r}")
            conflicts.append((int(m.group(1)), int(m.group(2))))

    return ParsedPrompt(memories=memories, conflicts=conflicts, task=lines[2])


# ----------------------------------------------------------------------
# Dialogue clients
# ----------------------------------------------------------------------


class DialogueClient(Protocol):
    def generate(self, prompt: str, query: str, bundle: ContextBundle | None = None) -> str:
        ...  # pragma: no cover

    def summarize(self, texts: Sequence[str]) -> str:
        ...  # pragma: no cover


class StubDialogueClient:
    """Deterministic in-process client used in tests and default deployments.

    Echoes the top-weight memory text; when the bundle carries a tension
    directive, the response is prefixed with "My memory blurs about <topic>".
    """

    def __init__(self, seed: int = 0):
        self.seed = seed

    def generate(self, prompt: str, query: str, bundle: ContextBundle | None = None) -> str:
        prefix = ""
        if bundle is not None and bundle.directive:
            topics = ", ".join(sorted({pair.topic for pair in bundle.conflicts}))
            prefix = f"My memory blurs about {topics}... "
        top = bundle.memory_texts[0] if bundle and bundle.memory_texts else "I am still gathering memories."
        return prefix + top

    def summarize(self, texts: Sequence[str]) -> str:
        return "I remember: " + "; ".join(texts)


SUMMARY_PROMPT = "Condense these memories into one first-person reflection."


class HttpDialogueClient:
    """Adapter for an external HTTP chat-completion service.

    Wire format: POST {"prompt": ..., "query": ..., "seed": ...} and the
    service answers {"text": ...}.
    """

    def __init__(self, url: str, seed: int = 0, timeout: float = 10.0):
        self.url = url
        self.seed = seed
        self.timeout = timeout

    def _post(self, prompt: str, query: str) -> str:
        body = json.dumps({"prompt": prompt, "query": query, "seed": self.seed}).encode("utf-8")
        request = urllib.request.Request(self.url, data=body, headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                payload = json.loads(response.read().decode("utf-8"))
        except Exception as exc:
            raise DialogueClientError(f"dialogue service failed: {exc}") from exc
        if "text" not in payload:
            raise DialogueClientError("dialogue service response missing 'text'")
        return payload["text"]

    def generate(self, prompt: str, query: str, bundle: ContextBundle | None = None) -> str:
        return self._post(prompt, query)

    def summarize(self, texts: Sequence[str]) -> str:
        return self._post(SUMMARY_PROMPT, "; ".join(texts))


def respond(bundle: ContextBundle, query: str, client: DialogueClient) -> str:
    """Send the rendered prompt and query to the client; never mutates state.

    Failures raise `DialogueClientError` carrying the bundle id so callers
    can retry generation against the stored bundle.
    """
    try:
        return client.generate(bundle.rendered_prompt, query, bundle)
    except DialogueClientError as exc:
        if exc.bundle_id is None:
            exc.bundle_id = bundle.bundle_id
        raise
    except Exception as exc:
        raise DialogueClientError(str(exc), bundle_id=bundle.bundle_id) from exc


# ----------------------------------------------------------------------
# Caption ingestion
# ----------------------------------------------------------------------


def ingest_photo_caption(
    graph: MemoryGraph,
    caption: str,
    location: str,
    session_id: str,
    *,
    gazetteer: Gazetteer | None = None,
    emotion: float | None = None,
    allow_unresolved: bool = False,
    day: int | None = None,
) -> IngestReceipt:
    """Ingest a synthetic-photo caption as a place-tagged fragment.

    The location must resolve in the gazetteer unless `allow_unresolved` is
    set, in which case the raw name is used as the tag. Emotion defaults to
    the text scorer.
    """
    gazetteer = gazetteer or default_gazetteer()
    canonical = gazetteer.resolve(location)
    if canonical is None:
        if not allow_unresolved:
            raise UnknownPlaceError(f"unknown place {location!r}")
        canonical = location.strip()
        if not canonical:
            raise UnknownPlaceError("empty place name")
    if emotion is None:
        emotion = score_emotion(caption)
    return graph.ingest_fragment(caption, session_id, emotion, place_tags={canonical}, day=day)
