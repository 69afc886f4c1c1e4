"""Exponential forgetting, the 7-day archive window, and rescue.

Uses a low-alpha parameter set so a one-off remark actually falls below the
forgetting threshold. One fragment dwindles day by day until it archives;
a second is rescued mid-decay by a repeat mention.
"""

from collective_memory import MemoryGraph, WeightParams, tick

params = WeightParams(alpha=0.05, beta=0.05, gamma=0.2)

print("--- a remark nobody repeats ---")
graph = MemoryGraph(params)
doomed = graph.ingest_fragment("a faint remark nobody repeats", "visitor-1", emotion=0.1)
for day in range(1, 9):
    report = tick(graph, 1)
    f = graph.fragments[doomed.fragment_id]
    marker = "  <- archived" if report.days[0].archived_ids else ""
    print(f"  day {day}: status={f.status.value:9} low_weight_days={f.low_weight_days} W={f.weight:.5f}{marker}")

print("\n--- the same remark, rescued on day 3 ---")
graph = MemoryGraph(params)
saved = graph.ingest_fragment("a faint remark nobody repeats", "visitor-1", emotion=0.1)
tick(graph, 3)
print(f"  after 3 days: status={graph.fragments[saved.fragment_id].status.value}, "
      f"low_weight_days={graph.fragments[saved.fragment_id].low_weight_days}")
graph.ingest_fragment("a faint remark nobody repeats", "visitor-2", emotion=0.1)
print("  someone repeats it (frequency now 2) ...")
report = tick(graph, 7)
f = graph.fragments[saved.fragment_id]
print(f"  7 days later: status={f.status.value}, W={f.weight:.4f}, archived this window: {report.archived_total}")
