"""Collective memory engine for a dialogue-shaped virtual persona.

Turns many participants' utterances into a weighted, contradiction-aware,
decaying memory graph; builds the context bundles injected into generation
prompts; and maps graph state to embodied avatar expression parameters.
"""

from .avatar import ExpressionState, derive_expression
from .config import EngineConfig, WeightParams
from .embedding import HashingEmbedder, cosine
from .engine import DialogueOutcome, MemoryEngine, build_dialogue_client
from .errors import (
    CollectiveMemoryError,
    CorpusFormatError,
    DialogueClientError,
    EmptyUtteranceError,
    NotFoundError,
    PromptFormatError,
    StaleFragmentError,
    TickInProgressError,
    UnknownPlaceError,
    UnknownSessionError,
)
from .fusion import (
    ContextBundle,
    Gazetteer,
    HttpDialogueClient,
    StubDialogueClient,
    build_context,
    ingest_photo_caption,
    parse_prompt,
    render_prompt,
    respond,
)
from .graph import (
    Contribution,
    FragmentStatus,
    IngestReceipt,
    MemoryFragment,
    MemoryGraph,
    SelfSummary,
    SimClock,
    jaccard,
)
from .lifecycle import DayReport, LifecycleReport, synthesize, tick
from .store import (
    DeletionReceipt,
    Event,
    EventLog,
    delete_contribution,
    load_snapshot,
    replay_events,
    save_snapshot,
    similar,
    snapshot_bytes,
    snapshot_hash,
)
from .tension import Claim, ConflictPair, TopicLexicon, detect_conflicts, extract_claims, tension_directive

__version__ = "0.1.0"

__all__ = [
    "Claim",
    "CollectiveMemoryError",
    "ConflictPair",
    "ContextBundle",
    "Contribution",
    "CorpusFormatError",
    "DayReport",
    "DeletionReceipt",
    "DialogueClientError",
    "DialogueOutcome",
    "EmptyUtteranceError",
    "EngineConfig",
    "Event",
    "EventLog",
    "ExpressionState",
    "FragmentStatus",
    "Gazetteer",
    "HashingEmbedder",
    "HttpDialogueClient",
    "IngestReceipt",
    "LifecycleReport",
    "MemoryEngine",
    "MemoryFragment",
    "MemoryGraph",
    "NotFoundError",
    "PromptFormatError",
    "SelfSummary",
    "SimClock",
    "StaleFragmentError",
    "StubDialogueClient",
    "TickInProgressError",
    "TopicLexicon",
    "UnknownPlaceError",
    "UnknownSessionError",
    "WeightParams",
    "build_context",
    "build_dialogue_client",
    "cosine",
    "delete_contribution",
    "derive_expression",
    "detect_conflicts",
    "extract_claims",
    "ingest_photo_caption",
    "jaccard",
    "load_snapshot",
    "parse_prompt",
    "render_prompt",
    "replay_events",
    "respond",
    "save_snapshot",
    "similar",
    "snapshot_bytes",
    "snapshot_hash",
    "synthesize",
    "tension_directive",
    "tick",
]
