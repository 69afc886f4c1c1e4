"""The HTTP facade, end to end against a live local server.

Starts uvicorn on a local port, has two visitors talk to the persona,
deletes one contribution (the right to be forgotten), advances simulated
time, and polls the avatar state.
"""

import json
import threading
import time
import urllib.request

import uvicorn

from collective_memory import EngineConfig, MemoryEngine
from collective_memory.service import create_app

PORT = 8761
BASE = f"http://127.0.0.1:{PORT}"

engine = MemoryEngine(EngineConfig())
server = uvicorn.Server(uvicorn.Config(create_app(engine), host="127.0.0.1", port=PORT, log_level="warning"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.05)


def call(method: str, path: str, body: dict | None = None) -> dict:
    data = json.dumps(body).encode() if body is not None else None
    request = urllib.request.Request(BASE + path, data=data, method=method)
    if data:
        request.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


print("visitor-1 shares a memory:")
first = call("POST", "/v1/dialogue", {"session_id": "visitor-1", "text": "I have siblings"})
print("  persona:", first["response_text"])

print("visitor-2 disagrees:")
second = call("POST", "/v1/dialogue", {"session_id": "visitor-2", "text": "I'm alone"})
print("  persona:", second["response_text"])
print("  prompt sent to the dialogue model:")
for line in second["bundle"]["rendered_prompt"].split("\n"):
    print("   |", line)

print("\na photo caption anchors a place:")
photo = call(
    "POST",
    "/v1/dialogue",
    {"session_id": "visitor-1", "caption": "I see myself by Daming Lake at sunset", "location": "Daming Lake"},
)
print("  persona:", photo["response_text"])

print("\nseven simulated days pass:")
report = call("POST", "/v1/admin/tick", {"days": 7})
print(f"  decayed={report['decayed']} archived={report['archived']} summaries={report['summarized']}")

print("\nvisitor-2 withdraws their contribution:")
receipt = call("DELETE", f"/v1/contributions/{second['contribution_ids'][0]}")
print("  fragment deleted:", receipt["fragment_deleted"], " conflicts removed:", len(receipt["conflicts_removed"]))

print("\navatar state now:")
for key, value in call("GET", "/v1/avatar").items():
    print(f"    {key:22} {value:.3f}")

server.should_exit = True
