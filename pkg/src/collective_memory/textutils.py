"""Text normalization, tokenization, and a small rule-based emotion scorer.

All downstream determinism (merging, clustering, resonance) hangs off these
functions, so they are deliberately boring: unicode NFKC, lowercase, a regex
token split, and a fixed built-in stop list.
"""

from __future__ import annotations

import re
import unicodedata

# Small built-in stop list. Negation words (no / not / never) are deliberately
# excluded so they survive into token sets used by claim extraction callers.
STOP_WORDS = frozenset(
    """
    a an the and or but if then than so to of in on at by for with from as
    is am are was were be been being do does did done have has had having
    i me my mine we us our you your he she him her his it its they them their
    this that these those there here what when who whom which how why where
    will would can could should shall may might must
    very just too also about into over under again
    s t m re ve d ll im
    """.split()
)

# Emotion cue words. The scorer measures intensity, not valence, so both
# warm and dark words raise the score.
EMOTION_WORDS = frozenset(
    """
    love loves loved beautiful happy joy wonderful sweet warm laugh smile
    miss missed dear bright peaceful glad proud dream dreams
    hate hates sad lonely cold dark afraid fear cry lost empty bitter angry
    """.split()
)

# Words for alphabetic scripts; single ideographs for CJK text, the usual
# segmentation-free fallback so distinct CJK utterances stay distinguishable.
_TOKEN_RE = re.compile(r"[a-z0-9]+|[一-鿿]")
_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Lowercase, NFKC-fold, and collapse whitespace. Returns '' for blank input."""
    folded = unicodedata.normalize("NFKC", text or "").lower()
    return _WS_RE.sub(" ", folded).strip()


def tokenize(text: str) -> list[str]:
    """All word tokens of the normalized text, contractions expanded."""
    norm = normalize_text(text).replace("n't", " not")
    return _TOKEN_RE.findall(norm)


def content_tokens(text: str) -> frozenset[str]:
    """Stop-word-free token set; the mention set used for resonance overlap."""
    return frozenset(t for t in tokenize(text) if t not in STOP_WORDS)


def content_sequence(text: str) -> list[str]:
    """Stop-word-free tokens in utterance order (feeds embedding n-grams)."""
    return [t for t in tokenize(text) if t not in STOP_WORDS]


def score_emotion(text: str) -> float:
    """Heuristic emotional intensity in [0, 1].

    Baseline 0.3, +0.2 per emotion cue word, +0.1 for an exclamation mark.
    Used whenever a contribution arrives without an explicit emotion value.
    """
    tokens = tokenize(text)
    score = 0.3 + 0.2 * sum(1 for t in tokens if t in EMOTION_WORDS)
    if "!" in text:
        score += 0.1
    return max(0.0, min(1.0, score))
