"""Contradictions are kept, not resolved.

Two participants assert opposite things about family. The graph keeps both
fragments, records the conflict pair, and every context bundle touching the
topic tells the generator to express uncertainty.
"""

from collective_memory import (
    MemoryGraph,
    StubDialogueClient,
    build_context,
    detect_conflicts,
    respond,
)

graph = MemoryGraph()
graph.ingest_fragment("I have siblings", "visitor-1", emotion=0.5)
graph.ingest_fragment("I'm alone", "visitor-2", emotion=0.5)

pairs = detect_conflicts(graph)
print("Conflict pairs:")
for pair in pairs:
    print(f"  {pair.fragment_a} <-> {pair.fragment_b}  topic={pair.topic}")

bundle = build_context(graph, "tell me about your family", k=4)
print("\nRendered prompt:")
print(bundle.rendered_prompt)
print("\nDirective:", bundle.directive)

reply = respond(bundle, "tell me about your family", StubDialogueClient())
print("\nStub persona reply:")
print(" ", reply)

print("\nBoth memories are still here; nothing was voted away:")
for fragment in graph.active_fragments():
    print(f"  {fragment.text!r}  status={fragment.status.value}")
