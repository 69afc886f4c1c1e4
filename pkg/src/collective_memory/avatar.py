"""Embodied expression state derived from the memory graph.

Maps graph state onto numeric avatar parameters: memory weight drives
murmuring intensity and pace, narrative tension drives gaze drift and
micro-expressions, and the forgetting process drives voice fade and gesture
slowdown. The transfer functions are linear with saturation constants
(weight_reference, conflict_reference); only the monotone directions are
fixed, the constants are configurable. No rendering happens here; the state
serializes into dialogue responses and a polling endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import FragmentStatus, MemoryGraph


def _clamp(value: float, lo: float = 0.0, hi: float = 1.0) -> float:
    return max(lo, min(hi, value))


@dataclass(frozen=True)
class ExpressionState:
    murmur_intensity: float
    murmur_pace: float
    gaze_drift: float
    micro_expression_rate: float
    voice_fade: float
    gesture_slowdown: float

    def to_dict(self) -> dict:
        return {
            "murmur_intensity": self.murmur_intensity,
            "murmur_pace": self.murmur_pace,
            "gaze_drift": self.gaze_drift,
            "micro_expression_rate": self.micro_expression_rate,
            "voice_fade": self.voice_fade,
            "gesture_slowdown": self.gesture_slowdown,
        }


def derive_expression(
    graph: MemoryGraph,
    *,
    weight_reference: float = 1.0,
    conflict_reference: int = 5,
) -> ExpressionState:
    """Pure function of the graph snapshot; equal snapshots map to equal states."""
    live = graph.active_fragments()
    max_weight = max((f.weight for f in live), default=0.0)
    intensity = _clamp(max_weight / weight_reference)
    drift = _clamp(len(graph.conflicts) / conflict_reference)
    decaying = sum(1 for f in live if f.status is FragmentStatus.DECAYING)
    fade = decaying / max(1, len(live))
    return ExpressionState(
        murmur_intensity=intensity,
        murmur_pace=0.5 + 1.5 * intensity,
        gaze_drift=drift,
        micro_expression_rate=drift,
        voice_fade=fade,
        gesture_slowdown=fade,
    )
