"""Engine facade: one graph, one writer, the full request pipeline.

A dialogue turn runs perception (ingest, claim extraction, place tagging),
processing (merge, weighting, conflict detection), fusion (context bundle
plus generation through the pluggable dialogue client), and output (the
embodied expression state). Writes serialize through one lock; an admin tick
takes the same lock exclusively and dialogue arriving mid-tick is rejected
rather than queued. Every accepted mutation is appended to the event log
before any response leaves the engine, so a successful reply implies the
ingest is durable.
"""

from __future__ import annotations

import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass, field

from . import store
from .avatar import ExpressionState, derive_expression
from .config import EngineConfig
from .embedding import HashingEmbedder
from .errors import EmptyUtteranceError, NotFoundError, TickInProgressError
from .fusion import (
    ContextBundle,
    DialogueClient,
    Gazetteer,
    HttpDialogueClient,
    StubDialogueClient,
    build_context,
    default_gazetteer,
    ingest_photo_caption,
    respond,
)
from .graph import IngestReceipt, MemoryGraph
from .lifecycle import LifecycleReport, tick
from .store import EventLog
from .tension import TopicLexicon, default_lexicon, detect_conflicts
from .textutils import score_emotion

logger = logging.getLogger(__name__)

VALID_STATUS_FILTERS = ("active", "decaying", "archived")

_BUNDLE_CACHE_LIMIT = 1024


def build_dialogue_client(config: EngineConfig) -> DialogueClient:
    """'stub' or an external URL, per the config's dialogue_client field."""
    selection = config.dialogue_client
    if selection == "stub":
        return StubDialogueClient(seed=config.embedder_seed)
    if selection.startswith("http://") or selection.startswith("https://"):
        return HttpDialogueClient(selection, seed=config.embedder_seed, timeout=config.dialogue_timeout)
    raise ValueError(f"dialogue_client must be 'stub' or an http(s) URL, got {selection!r}")


@dataclass
class DialogueOutcome:
    response_text: str
    bundle: ContextBundle
    expression: ExpressionState
    receipts: list[IngestReceipt] = field(default_factory=list)

    @property
    def fragment_ids(self) -> list[str]:
        return [r.fragment_id for r in self.receipts]

    def to_dict(self) -> dict:
        return {
            "response_text": self.response_text,
            "bundle": self.bundle.to_dict(),
            "expression": self.expression.to_dict(),
            "fragment_ids": self.fragment_ids,
            "contribution_ids": [r.contribution_id for r in self.receipts],
        }


class MemoryEngine:
    """Single-process, single-graph engine behind the service and harness."""

    def __init__(
        self,
        config: EngineConfig | None = None,
        *,
        dialogue_client: DialogueClient | None = None,
        lexicon: TopicLexicon | None = None,
        gazetteer: Gazetteer | None = None,
    ):
        self.config = config or EngineConfig()
        self.lexicon = lexicon or (
            TopicLexicon.from_file(self.config.lexicon_path) if self.config.lexicon_path else default_lexicon()
        )
        self.gazetteer = gazetteer or (
            Gazetteer.from_file(self.config.gazetteer_path) if self.config.gazetteer_path else default_gazetteer()
        )
        self.graph = MemoryGraph(
            self.config.params,
            embedder=HashingEmbedder(self.config.embedder_dim, self.config.embedder_seed),
            claim_extractor=self.lexicon.extract,
            auto_register_sessions=self.config.auto_register_sessions,
        )
        self.dialogue_client = dialogue_client or build_dialogue_client(self.config)
        self.events = EventLog(self.config.event_log_path)

        self._lock = threading.RLock()
        self._tick_active = False
        self._bundles: OrderedDict[str, ContextBundle] = OrderedDict()

    # ------------------------------------------------------------------
    # Perception + processing
    # ------------------------------------------------------------------

    def ingest_turn(
        self,
        session_id: str,
        *,
        text: str | None = None,
        caption: str | None = None,
        location: str | None = None,
        emotion: float | None = None,
        allow_unresolved_place: bool = False,
    ) -> list[IngestReceipt]:
        """Ingest the pieces of one turn and update conflicts. Returns receipts."""
        text = (text or "").strip()
        caption = (caption or "").strip()
        if not text and not caption:
            raise EmptyUtteranceError("a turn needs text or a caption")

        with self._lock:
            receipts: list[IngestReceipt] = []
            if caption:
                receipt = ingest_photo_caption(
                    self.graph,
                    caption,
                    location or "",
                    session_id,
                    gazetteer=self.gazetteer,
                    emotion=emotion,
                    allow_unresolved=allow_unresolved_place,
                )
                self._log_ingest(receipt, caption, session_id, kind="caption")
                receipts.append(receipt)
            if text:
                place_tags = self.gazetteer.find_mentions(text)
                receipt = self._ingest_text(text, session_id, emotion, place_tags)
                receipts.append(receipt)

            previous = {pair.key() for pair in self.graph.conflicts}
            detect_conflicts(self.graph)
            for pair in self.graph.conflicts:
                if pair.key() not in previous:
                    self.events.append(store.CONFLICT, self.graph.clock.day, pair.to_dict())
            return receipts

    def _ingest_text(self, text: str, session_id: str, emotion: float | None, place_tags: list[str]) -> IngestReceipt:
        effective = emotion if emotion is not None else score_emotion(text)
        receipt = self.graph.ingest_fragment(text, session_id, effective, place_tags=place_tags)
        self._log_ingest(receipt, text, session_id, kind="text", emotion=effective, place_tags=place_tags)
        return receipt

    def _log_ingest(
        self,
        receipt: IngestReceipt,
        text: str,
        session_id: str,
        *,
        kind: str,
        emotion: float | None = None,
        place_tags: list[str] | None = None,
    ) -> None:
        fragment = self.graph.fragments[receipt.fragment_id]
        contribution = fragment.contributions[receipt.contribution_id]
        self.events.append(
            store.INGEST,
            self.graph.clock.day,
            {
                "session_id": session_id,
                "text": text,
                "emotion": contribution.emotion if emotion is None else emotion,
                "place_tags": sorted(contribution.place_tags) if place_tags is None else sorted(place_tags),
                "day": contribution.day,
                "kind": kind,
                "contribution_id": receipt.contribution_id,
                "fragment_id": receipt.fragment_id,
            },
        )
        if receipt.merged:
            self.events.append(
                store.MERGE,
                self.graph.clock.day,
                {"fragment_id": receipt.fragment_id, "contribution_id": receipt.contribution_id},
            )
        self.events.append(store.WEIGHT_UPDATE, self.graph.clock.day, {"theme": receipt.theme})

    # ------------------------------------------------------------------
    # Full dialogue pipeline
    # ------------------------------------------------------------------

    def handle_dialogue(
        self,
        session_id: str,
        *,
        text: str | None = None,
        caption: str | None = None,
        location: str | None = None,
        emotion: float | None = None,
        allow_unresolved_place: bool = False,
    ) -> DialogueOutcome:
        if self._tick_active:
            raise TickInProgressError("an admin tick is in progress")
        with self._lock:
            receipts = self.ingest_turn(
                session_id,
                text=text,
                caption=caption,
                location=location,
                emotion=emotion,
                allow_unresolved_place=allow_unresolved_place,
            )
            query = (text or "").strip() or (caption or "").strip()
            bundle = build_context(
                self.graph,
                query,
                self.config.context_k,
                gazetteer=self.gazetteer,
                place_keywords=self.config.place_intent_keywords,
            )
            self._remember_bundle(bundle)

        # Generation is read-only; a client failure leaves the graph as-is
        # and the bundle retrievable for retry.
        response_text = respond(bundle, query, self.dialogue_client)

        with self._lock:
            expression = self._expression()
        return DialogueOutcome(response_text=response_text, bundle=bundle, expression=expression, receipts=receipts)

    def _remember_bundle(self, bundle: ContextBundle) -> None:
        self._bundles[bundle.bundle_id] = bundle
        while len(self._bundles) > _BUNDLE_CACHE_LIMIT:
            self._bundles.popitem(last=False)

    def get_bundle(self, bundle_id: str) -> ContextBundle:
        bundle = self._bundles.get(bundle_id)
        if bundle is None:
            raise NotFoundError(f"unknown bundle {bundle_id!r}")
        return bundle

    # ------------------------------------------------------------------
    # Lifecycle, deletion, inspection
    # ------------------------------------------------------------------

    def tick(self, days: int) -> LifecycleReport:
        if days < 1:
            raise ValueError("days must be at least 1")
        if self._tick_active:
            raise TickInProgressError("a tick is already running")
        with self._lock:
            self._tick_active = True
            try:
                return tick(self.graph, days, dialogue_client=self.dialogue_client, events=self.events)
            finally:
                self._tick_active = False

    def delete_contribution(self, contribution_id: str) -> store.DeletionReceipt:
        with self._lock:
            return store.delete_contribution(self.graph, contribution_id, self.events)

    def _expression(self) -> ExpressionState:
        return derive_expression(
            self.graph,
            weight_reference=self.config.avatar_weight_reference,
            conflict_reference=self.config.avatar_conflict_reference,
        )

    def avatar(self) -> ExpressionState:
        with self._lock:
            return self._expression()

    def memories(self, status: str | None = None) -> list[dict]:
        if status is not None and status not in VALID_STATUS_FILTERS:
            raise ValueError(f"status must be one of {VALID_STATUS_FILTERS}")
        with self._lock:
            fragments = [self.graph.fragments[fid] for fid in sorted(self.graph.fragments)]
            if status is not None:
                fragments = [f for f in fragments if f.status.value == status]
            return [f.to_public_dict() for f in fragments]

    def summaries(self) -> list[dict]:
        with self._lock:
            return [s.to_dict() for s in self.graph.summaries]

    def snapshot_bytes(self) -> bytes:
        with self._lock:
            return store.snapshot_bytes(self.graph)

    def snapshot_hash(self) -> str:
        with self._lock:
            return store.snapshot_hash(self.graph)

    def close(self) -> None:
        self.events.close()
