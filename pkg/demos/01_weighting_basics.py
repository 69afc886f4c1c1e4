"""How utterances become weighted memory fragments.

Walks through ingestion, duplicate merging, and the three-part weight:
frequency (log), emotional salience (cluster softmax), and resonance
(token overlap with cluster siblings).
"""

from collective_memory import MemoryGraph, WeightParams

graph = MemoryGraph(WeightParams(theme_threshold=0.0))  # one shared cluster for clarity

print("A first memory arrives:")
first = graph.ingest_fragment("the night market smells of candied hawthorn", "visitor-1", emotion=0.7)
print(f"  fragment {first.fragment_id}  W = {graph.fragments[first.fragment_id].weight:.4f}")

print("\nThe same sentence again merges instead of duplicating:")
again = graph.ingest_fragment("the night market smells of candied hawthorn", "visitor-2", emotion=0.4)
fragment = graph.fragments[again.fragment_id]
print(f"  merged = {again.merged}, frequency = {fragment.frequency}, emotion keeps its max = {fragment.emotion}")
print(f"  W rose with frequency: {fragment.weight:.4f}")

print("\nA resonant neighbour (shared tokens) lifts both through the overlap term:")
echo = graph.ingest_fragment("the night market glows after rain", "visitor-3", emotion=0.4)
for fid in (first.fragment_id, echo.fragment_id):
    f = graph.fragments[fid]
    print(f"  {f.text!r:50}  f={f.frequency}  W={f.weight:.4f}")

print("\nAn unrelated aside gets no resonance:")
aside = graph.ingest_fragment("buses run late on tuesdays", "visitor-4", emotion=0.1)
print(f"  {graph.fragments[aside.fragment_id].text!r:50}  W={graph.fragments[aside.fragment_id].weight:.4f}")

print("\nRanking (weight desc, older first on ties):")
for rank, f in enumerate(graph.top_weighted(5), start=1):
    print(f"  {rank}. W={f.weight:.4f}  {f.text}")
