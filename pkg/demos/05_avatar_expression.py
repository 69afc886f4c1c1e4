"""Graph state to embodied expression parameters.

No rendering here: just the numeric knobs an avatar layer would animate.
Weight drives murmuring, conflicts drive gaze drift and micro-expressions,
decay drives voice fade and slower gestures.
"""

from collective_memory import MemoryGraph, WeightParams, derive_expression, detect_conflicts, tick


def show(label: str, graph: MemoryGraph) -> None:
    state = derive_expression(graph)
    print(f"{label}:")
    for key, value in state.to_dict().items():
        print(f"    {key:22} {value:.3f}")


graph = MemoryGraph()
show("Fresh, empty mind", graph)

graph.ingest_fragment("I love the lake", "visitor-1", emotion=0.9)
graph.ingest_fragment("I love the lake", "visitor-2", emotion=0.9)
show("\nOne strong memory (murmuring picks up)", graph)

for pos, neg in [
    ("I have siblings", "I'm alone"),
    ("I love this city", "I do not love this city"),
    ("I treasure solitude", "I never feel solitude here"),
]:
    graph.ingest_fragment(pos, "visitor-3", emotion=0.5)
    graph.ingest_fragment(neg, "visitor-4", emotion=0.5)
detect_conflicts(graph)
show("\nThree lived contradictions (gaze drifts)", graph)

fading = MemoryGraph(WeightParams(alpha=0.05, beta=0.05, gamma=0.2))
fading.ingest_fragment("a whisper", "visitor-5", emotion=0.1)
fading.ingest_fragment("another whisper entirely", "visitor-6", emotion=0.1)
tick(fading, 3)
show("\nEverything decaying (voice fades)", fading)
