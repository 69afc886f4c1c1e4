"""Geo-cultural anchoring: place-tagged memories answer place questions.

Photo captions arrive tagged with gazetteer places. When a query shows
place intent ('where', 'places', a place name...), the context bundle is
guaranteed to carry at least one place-tagged memory, displacing the
weakest generic one if it must.
"""

from collective_memory import MemoryGraph, build_context, ingest_photo_caption

graph = MemoryGraph()
graph.ingest_fragment("people ask me who I am", "visitor-1", emotion=0.9)
graph.ingest_fragment("someone hummed an old tune", "visitor-2", emotion=0.8)
ingest_photo_caption(
    graph,
    "I see myself by Daming Lake at sunset",
    "Daming Lake",
    "visitor-3",
)
ingest_photo_caption(
    graph,
    "I'm walking through the old market streets",
    "old market",  # alias resolves to the canonical name
    "visitor-4",
)

generic = build_context(graph, "what did people tell you", k=2)
print("Generic query bundle:")
for (fid, weight), text in zip(generic.memories, generic.memory_texts):
    print(f"  W={weight:.3f}  {text}")

anchored = build_context(graph, "What places do you remember?", k=2)
print("\nPlace-intent query bundle:")
for (fid, weight), text in zip(anchored.memories, anchored.memory_texts):
    tags = sorted(graph.fragments[fid].place_tags)
    print(f"  W={weight:.3f}  {text}   tags={tags}")
print("\nGeo anchors:", anchored.geo_anchors)
