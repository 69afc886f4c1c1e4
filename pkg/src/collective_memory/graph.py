"""The weighted memory graph: fragments, theme clusters, and weighting.

A fragment is one remembered assertion, possibly merged from several
near-duplicate contributions. Its weight mixes three signals:

    weight = alpha * ln(frequency + 1)
           + beta  * softmax_share(emotion within the theme cluster)
           + gamma * resonance

where resonance is the sum of Jaccard overlaps between the fragment's
mention tokens and those of its cluster siblings, normalized by
(cluster size - 1) so it stays in [0, 1]. Fragments whose recomputed weight
sits below the forgetting threshold decay multiplicatively per low-weight
day and archive after the configured window; archived fragments drop out of
every softmax population and retrieval surface but stay in storage.

Identifiers are content-derived (hashes of the founding utterance and of the
contributing session/day/text), so two graphs built from interleavings of
the same merged contributions serialize identically. Cluster internals
iterate in insertion order (deterministic for a given ingest sequence, and
cheap); anything surfaced to callers or serialized is sorted. A given
ingestion sequence therefore reproduces bit-identical snapshots.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .config import WeightParams
from .embedding import HashingEmbedder, cosine
from .errors import EmptyUtteranceError, NotFoundError, StaleFragmentError, UnknownSessionError
from .tension import Claim, ConflictPair, extract_claims
from .textutils import content_tokens, normalize_text, tokenize

ClaimExtractor = Callable[[str], "list[Claim]"]

SNAPSHOT_FORMAT = "collective-memory-graph-v1"

# Replaces a summary's text when a source contribution is deleted: the
# summary record survives as evidence, its content does not.
REDACTED_SUMMARY_TEXT = "[withdrawn at a participant's request]"


class FragmentStatus(str, Enum):
    ACTIVE = "active"
    DECAYING = "decaying"
    ARCHIVED = "archived"


@dataclass
class SimClock:
    """Simulated day counter; one tick equals one cycle."""

    day: int = 0

    def advance(self, days: int = 1) -> int:
        if days < 0:
            raise ValueError("clock cannot move backwards")
        self.day += days
        return self.day


@dataclass
class SelfSummary:
    """Daily first-person synthesis of above-threshold memories."""

    id: str
    day: int
    source_fragment_ids: tuple[str, ...]
    text: str
    stale: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "day": self.day,
            "source_fragment_ids": sorted(self.source_fragment_ids),
            "text": self.text,
            "stale": self.stale,
        }


@dataclass
class Contribution:
    """One participant utterance folded into a fragment."""

    id: str
    session_id: str
    text: str
    day: int
    emotion: float
    tokens: frozenset[str]
    place_tags: frozenset[str]
    claims: tuple[Claim, ...]

    def sort_key(self) -> tuple[int, str]:
        return (self.day, self.id)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "session_id": self.session_id,
            "text": self.text,
            "day": self.day,
            "emotion": self.emotion,
            "place_tags": sorted(self.place_tags),
            "claims": [list(c) for c in self.claims],
        }


@dataclass
class MemoryFragment:
    """One canonical remembered assertion and its merged contributions."""

    id: str
    theme: str
    created_at: int
    last_touched: int
    status: FragmentStatus = FragmentStatus.ACTIVE
    weight: float = 0.0
    low_weight_days: int = 0
    contributions: dict[str, Contribution] = field(default_factory=dict)

    # Derived from contributions; refreshed by rebuild().
    text: str = ""
    emotion: float = 0.0
    mention_tokens: frozenset[str] = frozenset()
    place_tags: frozenset[str] = frozenset()
    claims: tuple[Claim, ...] = ()

    @property
    def frequency(self) -> int:
        return len(self.contributions)

    @property
    def contribution_ids(self) -> set[str]:
        return set(self.contributions)

    @property
    def live(self) -> bool:
        return self.status is not FragmentStatus.ARCHIVED

    def canonical_contribution(self) -> Contribution:
        return min(self.contributions.values(), key=Contribution.sort_key)

    def rebuild(self) -> None:
        """Recompute derived fields after contributions change."""
        if not self.contributions:
            raise ValueError(f"fragment {self.id} has no contributions left")
        canonical = self.canonical_contribution()
        self.text = canonical.text
        self.emotion = max(c.emotion for c in self.contributions.values())
        self.mention_tokens = frozenset().union(*(c.tokens for c in self.contributions.values()))
        self.place_tags = frozenset().union(*(c.place_tags for c in self.contributions.values()))
        self.claims = tuple(sorted({claim for c in self.contributions.values() for claim in c.claims}))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "theme": self.theme,
            "status": self.status.value,
            "created_at": self.created_at,
            "last_touched": self.last_touched,
            "low_weight_days": self.low_weight_days,
            "weight": self.weight,
            "text": self.text,
            "frequency": self.frequency,
            "emotion": self.emotion,
            "mention_tokens": sorted(self.mention_tokens),
            "place_tags": sorted(self.place_tags),
            "claims": [list(c) for c in self.claims],
            "contributions": [c.to_dict() for c in sorted(self.contributions.values(), key=Contribution.sort_key)],
        }

    def to_public_dict(self) -> dict:
        """Fragment view served over the API (no per-contribution payloads)."""
        data = self.to_dict()
        data["contribution_ids"] = sorted(self.contributions)
        del data["contributions"]
        return data


@dataclass
class IngestReceipt:
    fragment_id: str
    contribution_id: str
    merged: bool
    theme: str

    def to_dict(self) -> dict:
        return {
            "fragment_id": self.fragment_id,
            "contribution_id": self.contribution_id,
            "merged": self.merged,
            "theme": self.theme,
        }


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a & b| / |a | b|, with two empty sets scoring 0 by convention."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


class ThemeCluster:
    """Live members of one theme plus incremental resonance bookkeeping.

    For every member we keep the running sum of Jaccard overlaps against all
    other members, updated as members join, leave, or change token sets. That
    keeps ingest-time cluster recomputation linear in cluster size.
    """

    def __init__(self, theme_id: str, dim: int):
        self.theme_id = theme_id
        self._tokens: dict[str, frozenset[str]] = {}
        self._row_sums: dict[str, float] = {}
        self._centroid_sum = np.zeros(dim, dtype=np.float64)

    def __len__(self) -> int:
        return len(self._tokens)

    @property
    def member_ids(self) -> list[str]:
        return sorted(self._tokens)

    def iter_members(self) -> Iterable[str]:
        """Members in insertion order (deterministic for a given ingest sequence)."""
        return self._tokens.keys()

    def __contains__(self, fragment_id: str) -> bool:
        return fragment_id in self._tokens

    def add(self, fragment_id: str, tokens: frozenset[str], vec: np.ndarray) -> None:
        total = 0.0
        for other, other_tokens in self._tokens.items():
            overlap = jaccard(tokens, other_tokens)
            self._row_sums[other] += overlap
            total += overlap
        self._tokens[fragment_id] = tokens
        self._row_sums[fragment_id] = total
        self._centroid_sum += vec

    def remove(self, fragment_id: str, vec: np.ndarray) -> None:
        tokens = self._tokens.pop(fragment_id)
        del self._row_sums[fragment_id]
        for other, other_tokens in self._tokens.items():
            self._row_sums[other] -= jaccard(tokens, other_tokens)
        self._centroid_sum -= vec

    def update_member(self, fragment_id: str, tokens: frozenset[str], old_vec: np.ndarray, new_vec: np.ndarray) -> None:
        self.remove(fragment_id, old_vec)
        self.add(fragment_id, tokens, new_vec)

    def centroid_similarity(self, vec: np.ndarray) -> float:
        if not self._tokens:
            return 0.0
        norm = float(np.linalg.norm(self._centroid_sum))
        if norm == 0.0:
            return 0.0
        return float(np.dot(vec, self._centroid_sum) / norm)

    def resonance(self, fragment_id: str) -> float:
        return self._row_sums[fragment_id] / max(1, len(self._tokens) - 1)

    def softmax_shares(self, emotions: dict[str, float]) -> dict[str, float]:
        """Per-member share of exp(emotion), temperature 1."""
        exps = {fid: math.exp(emotions[fid]) for fid in self._tokens}
        denom = 0.0
        for value in exps.values():
            denom += value
        return {fid: value / denom for fid, value in exps.items()}


def _short_hash(text: str) -> str:
    return hashlib.blake2b(text.encode("utf-8"), digest_size=6).hexdigest()


class MemoryGraph:
    """Fragment population, theme clusters, conflicts, and summaries.

    Single-writer: all mutation goes through one caller at a time (the engine
    serializes writes with a lock). Reads over a quiescent graph are safe
    from any thread.
    """

    def __init__(
        self,
        params: WeightParams | None = None,
        *,
        embedder: HashingEmbedder | None = None,
        claim_extractor: ClaimExtractor | None = None,
        auto_register_sessions: bool = True,
    ):
        self.params = params or WeightParams()
        self.embedder = embedder or HashingEmbedder()
        self.claim_extractor: ClaimExtractor = claim_extractor or extract_claims
        self.auto_register_sessions = auto_register_sessions

        self.clock = SimClock()
        self.fragments: dict[str, MemoryFragment] = {}
        self.clusters: dict[str, ThemeCluster] = {}
        self.conflicts: list[ConflictPair] = []
        self.summaries: list[SelfSummary] = []
        self.sessions: set[str] = set()

        self._vectors: dict[str, np.ndarray] = {}
        self._norm_index: dict[str, str] = {}
        self._contribution_index: dict[str, str] = {}

    # ------------------------------------------------------------------
    # Sessions
    # ------------------------------------------------------------------

    def register_session(self, session_id: str) -> None:
        session_id = (session_id or "").strip()
        if not session_id:
            raise UnknownSessionError("session id must be non-empty")
        self.sessions.add(session_id)

    def _require_session(self, session_id: str) -> str:
        session_id = (session_id or "").strip()
        if not session_id:
            raise UnknownSessionError("session id must be non-empty")
        if session_id not in self.sessions:
            if not self.auto_register_sessions:
                raise UnknownSessionError(f"unknown session {session_id!r}")
            self.sessions.add(session_id)
        return session_id

    # ------------------------------------------------------------------
    # Ingestion and merging
    # ------------------------------------------------------------------

    def ingest_fragment(
        self,
        utterance: str,
        session_id: str,
        emotion: float,
        place_tags: Iterable[str] = (),
        day: int | None = None,
    ) -> IngestReceipt:
        """Fold one utterance into the graph.

        An utterance merges into an existing live fragment when its text is an
        exact duplicate, or when its embedding is at least `merge_threshold`
        cosine-similar to a fragment in the assigned theme cluster. Otherwise
        it founds a new fragment (and possibly a new theme). The affected
        cluster's weights are recomputed either way.
        """
        norm = normalize_text(utterance)
        if not norm:
            raise EmptyUtteranceError("utterance is empty after normalization")
        if not tokenize(utterance):
            raise EmptyUtteranceError("utterance has no content tokens")
        if not 0.0 <= emotion <= 1.0:
            raise ValueError("emotion must be in [0, 1]")
        session_id = self._require_session(session_id)
        day = self.clock.day if day is None else int(day)
        if day < 0:
            raise ValueError("day must be non-negative")

        tokens = content_tokens(utterance)
        vec = self.embedder.embed(utterance)
        claims = tuple(sorted(set(self.claim_extractor(utterance))))
        tags = frozenset(place_tags)

        target = self._merge_target(norm, vec)
        if target is not None:
            receipt = self._merge_into(target, norm, utterance, session_id, emotion, day, tokens, tags, claims)
        else:
            receipt = self._create_fragment(norm, utterance, session_id, emotion, day, tokens, vec, tags, claims)

        self.recompute_cluster(receipt.theme)
        return receipt

    def _merge_target(self, norm: str, vec: np.ndarray) -> MemoryFragment | None:
        # Exact duplicates always merge, wherever clustering would have put
        # them; this is what makes repeated ingestion idempotent.
        exact = self._norm_index.get(norm)
        if exact is not None:
            return self.fragments[exact]
        theme = self._nearest_theme(vec)
        if theme is None:
            return None
        best_id, best_cos = None, -1.0
        for fid in self.clusters[theme].iter_members():
            sim = cosine(vec, self._vectors[fid])
            if sim > best_cos + 1e-12:
                best_id, best_cos = fid, sim
        if best_id is not None and best_cos >= self.params.merge_threshold:
            return self.fragments[best_id]
        return None

    def _nearest_theme(self, vec: np.ndarray) -> str | None:
        best_theme, best_sim = None, -1.0
        for theme in sorted(self.clusters):
            sim = self.clusters[theme].centroid_similarity(vec)
            if sim > best_sim + 1e-12:
                best_theme, best_sim = theme, sim
        if best_theme is not None and best_sim >= self.params.theme_threshold:
            return best_theme
        return None

    def _contribution_id(self, fragment: MemoryFragment | None, session_id: str, day: int, norm: str) -> str:
        occupied = 0
        if fragment is not None:
            occupied = sum(
                1
                for c in fragment.contributions.values()
                if c.session_id == session_id and c.day == day and normalize_text(c.text) == norm
            )
        cid = "c" + _short_hash(f"{session_id}|{day}|{norm}|{occupied}")
        # Re-ingesting text whose earlier fragment was archived can replay the
        # same hash inputs; bump the occurrence until the id is free.
        while cid in self._contribution_index:
            occupied += 1
            cid = "c" + _short_hash(f"{session_id}|{day}|{norm}|{occupied}")
        return cid

    def _merge_into(
        self,
        fragment: MemoryFragment,
        norm: str,
        utterance: str,
        session_id: str,
        emotion: float,
        day: int,
        tokens: frozenset[str],
        tags: frozenset[str],
        claims: tuple[Claim, ...],
    ) -> IngestReceipt:
        cid = self._contribution_id(fragment, session_id, day, norm)
        old_text = fragment.text
        fragment.contributions[cid] = Contribution(
            id=cid, session_id=session_id, text=utterance, day=day,
            emotion=emotion, tokens=tokens, place_tags=tags, claims=claims,
        )
        fragment.rebuild()
        fragment.last_touched = max(fragment.last_touched, day)

        cluster = self.clusters[fragment.theme]
        old_vec = self._vectors[fragment.id]
        new_vec = old_vec
        if fragment.text != old_text:
            new_vec = self.embedder.embed(fragment.text)
            self._vectors[fragment.id] = new_vec
        cluster.update_member(fragment.id, fragment.mention_tokens, old_vec, new_vec)

        self._norm_index[norm] = fragment.id
        self._contribution_index[cid] = fragment.id
        return IngestReceipt(fragment.id, cid, merged=True, theme=fragment.theme)

    def _create_fragment(
        self,
        norm: str,
        utterance: str,
        session_id: str,
        emotion: float,
        day: int,
        tokens: frozenset[str],
        vec: np.ndarray,
        tags: frozenset[str],
        claims: tuple[Claim, ...],
    ) -> IngestReceipt:
        fid = self._unique_key("f" + _short_hash(norm), self.fragments)
        theme = self._nearest_theme(vec)
        if theme is None:
            theme = self._unique_key("t" + fid[1:], self.clusters)
            self.clusters[theme] = ThemeCluster(theme, self.embedder.dim)

        cid = self._contribution_id(None, session_id, day, norm)
        fragment = MemoryFragment(id=fid, theme=theme, created_at=day, last_touched=day)
        fragment.contributions[cid] = Contribution(
            id=cid, session_id=session_id, text=utterance, day=day,
            emotion=emotion, tokens=tokens, place_tags=tags, claims=claims,
        )
        fragment.rebuild()

        self.fragments[fid] = fragment
        self._vectors[fid] = vec
        self._norm_index[norm] = fid
        self._contribution_index[cid] = fid
        self.clusters[theme].add(fid, fragment.mention_tokens, vec)
        return IngestReceipt(fid, cid, merged=False, theme=theme)

    @staticmethod
    def _unique_key(base: str, existing: dict) -> str:
        if base not in existing:
            return base
        n = 2
        while f"{base}-{n}" in existing:
            n += 1
        return f"{base}-{n}"

    # ------------------------------------------------------------------
    # Weighting
    # ------------------------------------------------------------------

    def raw_weight(self, fragment_id: str) -> float:
        """The weight formula value, before any decay multiplier."""
        fragment = self._live_fragment(fragment_id)
        cluster = self.clusters[fragment.theme]
        shares = cluster.softmax_shares({fid: self.fragments[fid].emotion for fid in cluster.iter_members()})
        return self._formula(fragment, shares[fragment_id], cluster.resonance(fragment_id))

    def _formula(self, fragment: MemoryFragment, share: float, resonance: float) -> float:
        p = self.params
        return p.alpha * math.log(fragment.frequency + 1) + p.beta * share + p.gamma * resonance

    def _decay_multiplier(self, fragment: MemoryFragment) -> float:
        if fragment.status is not FragmentStatus.DECAYING:
            return 1.0
        return 2.0 ** (-fragment.low_weight_days / self.params.decay_half_life_cycles)

    def compute_weight(self, fragment_id: str) -> float:
        """Recompute, store, and return one fragment's weight.

        Decaying fragments keep their accumulated decay multiplier so an
        off-cycle recomputation cannot resurrect them; the lifecycle tick is
        the only place the multiplier resets.
        """
        fragment = self._live_fragment(fragment_id)
        fragment.weight = self.raw_weight(fragment_id) * self._decay_multiplier(fragment)
        return fragment.weight

    def recompute_cluster(self, theme: str) -> list[str]:
        """Recompute stored weights for every live member of one cluster."""
        cluster = self.clusters.get(theme)
        if cluster is None or len(cluster) == 0:
            return []
        members = list(cluster.iter_members())
        shares = cluster.softmax_shares({fid: self.fragments[fid].emotion for fid in members})
        for fid in members:
            fragment = self.fragments[fid]
            raw = self._formula(fragment, shares[fid], cluster.resonance(fid))
            fragment.weight = raw * self._decay_multiplier(fragment)
        return members

    def recompute_all_raw(self) -> dict[str, float]:
        """Fresh formula values for every live fragment (no storing).

        The lifecycle tick consumes these to decide decay versus rescue.
        """
        raw: dict[str, float] = {}
        for theme in sorted(self.clusters):
            cluster = self.clusters[theme]
            if len(cluster) == 0:
                continue
            members = list(cluster.iter_members())
            shares = cluster.softmax_shares({fid: self.fragments[fid].emotion for fid in members})
            for fid in members:
                raw[fid] = self._formula(self.fragments[fid], shares[fid], cluster.resonance(fid))
        return raw

    def _live_fragment(self, fragment_id: str) -> MemoryFragment:
        fragment = self.fragments.get(fragment_id)
        if fragment is None:
            raise NotFoundError(f"unknown fragment {fragment_id!r}")
        if not fragment.live:
            raise StaleFragmentError(f"fragment {fragment_id} is archived")
        return fragment

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def active_fragments(self) -> list[MemoryFragment]:
        """Live (active or decaying) fragments in sorted-id order."""
        return [self.fragments[fid] for fid in sorted(self.fragments) if self.fragments[fid].live]

    def top_weighted(self, k: int) -> list[MemoryFragment]:
        """Live fragments by weight descending; ties go to the older, then
        lexicographically smaller, fragment."""
        if k < 0:
            raise ValueError("k must be non-negative")
        ranked = sorted(self.active_fragments(), key=lambda f: (-f.weight, f.created_at, f.id))
        return ranked[:k]

    def fragment_vector(self, fragment_id: str) -> np.ndarray:
        return self._vectors[fragment_id]

    def fragment_for_contribution(self, contribution_id: str) -> str | None:
        return self._contribution_index.get(contribution_id)

    def find_fragment_by_text(self, text: str) -> str | None:
        """Live fragment holding a contribution with this exact text, if any."""
        return self._norm_index.get(normalize_text(text))

    # ------------------------------------------------------------------
    # Archival and deletion cascades
    # ------------------------------------------------------------------

    def archive_fragment(self, fragment_id: str) -> None:
        """Move a fragment out of the live population (storage retained)."""
        fragment = self.fragments[fragment_id]
        if not fragment.live:
            return
        fragment.status = FragmentStatus.ARCHIVED
        self._detach_from_indexes(fragment)
        self.prune_conflicts()

    def _detach_from_indexes(self, fragment: MemoryFragment) -> None:
        cluster = self.clusters.get(fragment.theme)
        if cluster is not None and fragment.id in cluster:
            cluster.remove(fragment.id, self._vectors[fragment.id])
            if len(cluster) == 0:
                del self.clusters[fragment.theme]
        self._vectors.pop(fragment.id, None)
        for norm in {normalize_text(c.text) for c in fragment.contributions.values()}:
            if self._norm_index.get(norm) == fragment.id:
                del self._norm_index[norm]

    def remove_contribution(self, contribution_id: str) -> dict:
        """Delete one contribution and cascade.

        Decrements frequency; hard-deletes the fragment when its last
        contribution goes, dropping its conflict pairs and marking dependent
        summaries stale. Returns a report of everything that changed.
        """
        fid = self._contribution_index.get(contribution_id)
        if fid is None:
            raise NotFoundError(f"unknown contribution {contribution_id!r}")
        fragment = self.fragments[fid]
        contribution = fragment.contributions.pop(contribution_id)
        del self._contribution_index[contribution_id]

        norm = normalize_text(contribution.text)
        still_present = any(normalize_text(c.text) == norm for c in fragment.contributions.values())
        if not still_present and self._norm_index.get(norm) == fid:
            del self._norm_index[norm]

        stale_marked = []
        removed_conflicts: list[ConflictPair] = []
        fragment_deleted = False

        if not fragment.contributions:
            fragment_deleted = True
            if fragment.live:
                self._detach_from_indexes(fragment)
            del self.fragments[fid]
            removed_conflicts = self.prune_conflicts()
        else:
            old_text = fragment.text
            fragment.rebuild()
            if fragment.live:
                cluster = self.clusters[fragment.theme]
                old_vec = self._vectors[fid]
                new_vec = old_vec
                if fragment.text != old_text:
                    new_vec = self.embedder.embed(fragment.text)
                    self._vectors[fid] = new_vec
                cluster.update_member(fid, fragment.mention_tokens, old_vec, new_vec)
                self.recompute_cluster(fragment.theme)
            removed_conflicts = self.prune_conflicts()

        for summary in self.summaries:
            if not summary.stale and fid in summary.source_fragment_ids:
                summary.stale = True
                summary.text = REDACTED_SUMMARY_TEXT
                stale_marked.append(summary.id)

        return {
            "contribution_id": contribution_id,
            "fragment_id": fid,
            "fragment_deleted": fragment_deleted,
            "remaining_frequency": 0 if fragment_deleted else fragment.frequency,
            "conflicts_removed": [pair.to_dict() for pair in removed_conflicts],
            "summaries_marked_stale": stale_marked,
        }

    def prune_conflicts(self) -> list[ConflictPair]:
        """Drop pairs whose members are gone, archived, or no longer opposed."""
        kept: list[ConflictPair] = []
        removed: list[ConflictPair] = []
        for pair in self.conflicts:
            a = self.fragments.get(pair.fragment_a)
            b = self.fragments.get(pair.fragment_b)
            if a is None or b is None or not a.live or not b.live:
                removed.append(pair)
                continue
            a_stances = {c.stance for c in a.claims if c.topic == pair.topic}
            b_stances = {c.stance for c in b.claims if c.topic == pair.topic}
            if any(s in a_stances and _opposite(s) in b_stances for s in a_stances):
                kept.append(pair)
            else:
                removed.append(pair)
        self.conflicts = kept
        return removed

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": SNAPSHOT_FORMAT,
            "clock_day": self.clock.day,
            "embedder": {
                "dim": self.embedder.dim,
                "seed": getattr(self.embedder, "seed", None),
            },
            "params": self.params.to_dict(),
            "sessions": sorted(self.sessions),
            "fragments": {fid: self.fragments[fid].to_dict() for fid in sorted(self.fragments)},
            "clusters": {theme: cluster.member_ids for theme, cluster in sorted(self.clusters.items())},
            "conflicts": [pair.to_dict() for pair in sorted(self.conflicts, key=ConflictPair.key)],
            "summaries": [s.to_dict() for s in self.summaries],
        }

    @classmethod
    def from_dict(
        cls,
        data: dict,
        *,
        embedder: HashingEmbedder | None = None,
        claim_extractor: ClaimExtractor | None = None,
        auto_register_sessions: bool = True,
    ) -> "MemoryGraph":
        if data.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"unsupported snapshot format {data.get('format')!r}")
        if embedder is None:
            emb = data.get("embedder", {})
            if emb.get("seed") is None:
                raise ValueError("snapshot has no embedder seed; pass the embedder explicitly")
            embedder = HashingEmbedder(dim=emb["dim"], seed=emb["seed"])
        graph = cls(
            WeightParams.from_dict(data["params"]),
            embedder=embedder,
            claim_extractor=claim_extractor,
            auto_register_sessions=auto_register_sessions,
        )
        graph.clock.day = int(data["clock_day"])
        graph.sessions = set(data["sessions"])

        for fid in sorted(data["fragments"]):
            raw = data["fragments"][fid]
            fragment = MemoryFragment(
                id=raw["id"],
                theme=raw["theme"],
                created_at=raw["created_at"],
                last_touched=raw["last_touched"],
                status=FragmentStatus(raw["status"]),
                weight=raw["weight"],
                low_weight_days=raw["low_weight_days"],
            )
            for centry in raw["contributions"]:
                contribution = Contribution(
                    id=centry["id"],
                    session_id=centry["session_id"],
                    text=centry["text"],
                    day=centry["day"],
                    emotion=centry["emotion"],
                    tokens=content_tokens(centry["text"]),
                    place_tags=frozenset(centry["place_tags"]),
                    claims=tuple(Claim(t, s) for t, s in centry["claims"]),
                )
                fragment.contributions[contribution.id] = contribution
                graph._contribution_index[contribution.id] = fid
            fragment.rebuild()
            graph.fragments[fid] = fragment
            if fragment.live:
                vec = graph.embedder.embed(fragment.text)
                graph._vectors[fid] = vec
                for c in fragment.contributions.values():
                    graph._norm_index[normalize_text(c.text)] = fid

        for theme in sorted(data["clusters"]):
            cluster = ThemeCluster(theme, graph.embedder.dim)
            for fid in data["clusters"][theme]:
                fragment = graph.fragments[fid]
                cluster.add(fid, fragment.mention_tokens, graph._vectors[fid])
            graph.clusters[theme] = cluster

        graph.conflicts = [
            ConflictPair(p["fragment_a"], p["fragment_b"], p["topic"], p["detected_at"])
            for p in data["conflicts"]
        ]
        graph.summaries = [
            SelfSummary(
                id=s["id"],
                day=s["day"],
                source_fragment_ids=tuple(s["source_fragment_ids"]),
                text=s["text"],
                stale=s["stale"],
            )
            for s in data["summaries"]
        ]
        return graph


def _opposite(stance: str) -> str:
    return "negative" if stance == "positive" else "positive"
