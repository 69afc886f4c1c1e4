"""Stance claims, contradiction detection, and tension directives.

Claims are extracted by rules over a shipped topic lexicon: a term hit yields
(topic, stance) and a negation cue elsewhere in the utterance flips the
stance. The lexicon and cue list load from a JSON file so deployments can
swap them, and the extractor is a plain callable so a learned classifier can
replace it without touching the graph.

Contradictory fragment pairs are retained, never resolved: detection only
appends `ConflictPair` records and emits "Express uncertainty about [topic]"
directives for downstream generation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, NamedTuple

from .textutils import tokenize

if TYPE_CHECKING:  # pragma: no cover
    from .graph import MemoryGraph

POSITIVE = "positive"
NEGATIVE = "negative"

DIRECTIVE_TEMPLATE = "Express uncertainty about [{topic}]"


class Claim(NamedTuple):
    """One stance assertion: a normalized topic plus positive/negative."""

    topic: str
    stance: str


@dataclass(frozen=True)
class ConflictPair:
    """Two fragments asserting opposing stances on one topic.

    `fragment_a` < `fragment_b` lexicographically so each pair exists in
    exactly one orientation.
    """

    fragment_a: str
    fragment_b: str
    topic: str
    detected_at: int

    def key(self) -> tuple[str, str, str]:
        return (self.topic, self.fragment_a, self.fragment_b)

    def to_dict(self) -> dict:
        return {
            "fragment_a": self.fragment_a,
            "fragment_b": self.fragment_b,
            "topic": self.topic,
            "detected_at": self.detected_at,
        }


class TopicLexicon:
    """Topic terms with inherent stances plus negation cues.

    File format (JSON)::

        {
          "negation_cues": ["not", "never", "no", "alone", "without"],
          "topics": [
            {"topic": "family",
             "terms": [{"term": "siblings", "stance": "positive"},
                       {"term": "alone", "stance": "negative"}]}
          ]
        }

    Terms may be multi-word phrases; they are matched as contiguous token
    runs against the raw token sequence of the utterance.
    """

    def __init__(self, topics: dict[str, list[tuple[tuple[str, ...], str]]], cues: Iterable[str]):
        self.topics = topics
        self.negation_cues = frozenset(cues)

    @classmethod
    def from_dict(cls, data: dict) -> "TopicLexicon":
        topics: dict[str, list[tuple[tuple[str, ...], str]]] = {}
        for entry in data.get("topics", []):
            terms = []
            for term in entry.get("terms", []):
                tokens = tuple(tokenize(term["term"]))
                if not tokens:
                    continue
                stance = term.get("stance", POSITIVE)
                if stance not in (POSITIVE, NEGATIVE):
                    raise ValueError(f"bad stance {stance!r} for term {term['term']!r}")
                terms.append((tokens, stance))
            topics[entry["topic"].strip().lower()] = terms
        return cls(topics, data.get("negation_cues", []))

    @classmethod
    def from_file(cls, path: str | Path) -> "TopicLexicon":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def default(cls) -> "TopicLexicon":
        raw = resources.files("collective_memory.data").joinpath("topic_lexicon.json")
        return cls.from_dict(json.loads(raw.read_text(encoding="utf-8")))

    def extract(self, utterance: str) -> list[Claim]:
        """Rule-based claim extraction; returns a sorted, deduplicated list."""
        tokens = tokenize(utterance)
        if not tokens:
            return []
        cue_positions = {i for i, t in enumerate(tokens) if t in self.negation_cues}
        claims: set[Claim] = set()
        for topic in sorted(self.topics):
            for term_tokens, stance in self.topics[topic]:
                for start in _find_runs(tokens, term_tokens):
                    span = set(range(start, start + len(term_tokens)))
                    negated = bool(cue_positions - span)
                    final = _flip(stance) if negated else stance
                    claims.add(Claim(topic, final))
        return sorted(claims)


def _find_runs(tokens: list[str], run: tuple[str, ...]) -> list[int]:
    width = len(run)
    return [i for i in range(len(tokens) - width + 1) if tuple(tokens[i : i + width]) == run]


def _flip(stance: str) -> str:
    return NEGATIVE if stance == POSITIVE else POSITIVE


_default_lexicon: TopicLexicon | None = None


def default_lexicon() -> TopicLexicon:
    global _default_lexicon
    if _default_lexicon is None:
        _default_lexicon = TopicLexicon.default()
    return _default_lexicon


def extract_claims(utterance: str, lexicon: TopicLexicon | None = None) -> list[Claim]:
    """Extract (topic, stance) claims from one utterance."""
    return (lexicon or default_lexicon()).extract(utterance)


def detect_conflicts(graph: "MemoryGraph") -> list[ConflictPair]:
    """Find all opposing-stance pairs among live fragments.

    New pairs are appended to ``graph.conflicts``; no fragment is ever removed
    or down-weighted here. Returns the full current pair list in (topic,
    fragment_a, fragment_b) order.
    """
    by_topic: dict[str, dict[str, list[str]]] = {}
    for frag in graph.fragments.values():
        if not frag.live or not frag.claims:
            continue
        for claim in frag.claims:
            sides = by_topic.setdefault(claim.topic, {POSITIVE: [], NEGATIVE: []})
            sides[claim.stance].append(frag.id)

    existing = {pair.key() for pair in graph.conflicts}
    for topic in sorted(by_topic):
        sides = by_topic[topic]
        for pos_id in sides[POSITIVE]:
            for neg_id in sides[NEGATIVE]:
                if pos_id == neg_id:
                    continue  # a fragment can self-contradict; pairs need two
                a, b = sorted((pos_id, neg_id))
                pair = ConflictPair(a, b, topic, detected_at=graph.clock.day)
                if pair.key() not in existing:
                    existing.add(pair.key())
                    graph.conflicts.append(pair)

    return sorted(graph.conflicts, key=ConflictPair.key)


def tension_directive(conflicts: Iterable[ConflictPair]) -> str | None:
    """One directive per distinct conflicted topic, or None when there are none."""
    topics = sorted({pair.topic for pair in conflicts})
    if not topics:
        return None
    return "; ".join(DIRECTIVE_TEMPLATE.format(topic=t) for t in topics)
