"""A complete HTTP session: boot the server, edit by phrase, watch events.

Everything the web UI does goes through these endpoints; this script is the
same conversation in miniature.
"""

import json
import socket
import threading
import time

import httpx
import uvicorn

from paramflow.service import create_app

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]

config = uvicorn.Config(create_app(), host="127.0.0.1", port=port, log_level="error")
server = uvicorn.Server(config)
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.02)
base = f"http://127.0.0.1:{port}"

session = httpx.post(f"{base}/sessions").json()["session_id"]
print("session:", session)

for phrase in [
    "add slider with value four",
    "add component construct point",
    "connect node one output out to node two input x",
    "connect node one output out to node two input y",
    "connect node one output out to node two input z",
    "add component box",
    "connect node two output point to node three input b",
]:
    response = httpx.post(f"{base}/sessions/{session}/commands", json={"phrase": phrase})
    print(f"{response.status_code} {phrase}")

# a rejected command: connecting backwards would close a cycle
for phrase in ["add component addition",          # node 4
               "add component addition",          # node 5
               "connect node four output sum to node five input a"]:
    httpx.post(f"{base}/sessions/{session}/commands", json={"phrase": phrase})
response = httpx.post(f"{base}/sessions/{session}/commands", json={
    "action": {"kind": "connect", "src_node": 5, "src_port": "sum",
               "dst_node": 4, "dst_port": "a"}})
print("cycle attempt:", response.status_code, response.json()["error"]["code"])

geometry = httpx.get(f"{base}/sessions/{session}/geometry").json()
print("meshes:", [(m["node"], len(m["vertices"])) for m in geometry["meshes"]])

obj = httpx.get(f"{base}/sessions/{session}/geometry", headers={"accept": "model/obj"})
print("OBJ first line:", obj.text.splitlines()[0])

count = 0
with httpx.stream("GET", f"{base}/sessions/{session}/events",
                  params={"limit": 6}, timeout=10) as stream:
    for line in stream.iter_lines():
        if line.startswith("data: "):
            event = json.loads(line[len("data: "):])
            print("event", event["seq"], event["kind"])
            count += 1
print(f"replayed {count} events from seq 0")

server.should_exit = True
