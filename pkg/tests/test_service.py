"""HTTP API: sessions, commands, documents, geometry, and the event channel."""

from __future__ import annotations

import json
import socket
import threading
import time

import httpx
import pytest
from fastapi.testclient import TestClient

from paramflow import Engine, replay_events
from paramflow.service import create_app
from test_engine import CUBE_PHRASES


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


def new_session(client) -> str:
    response = client.post("/sessions")
    assert response.status_code == 200
    return response.json()["session_id"]


def read_events(client, session_id: str, limit: int) -> list[dict]:
    events = []
    with client.stream("GET", f"/sessions/{session_id}/events",
                       params={"limit": limit}) as response:
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/event-stream")
        for line in response.iter_lines():
            if line.startswith("data: "):
                events.append(json.loads(line[len("data: "):]))
    return events


def test_sessions_are_distinct_and_empty(client):
    a, b = new_session(client), new_session(client)
    assert a != b
    snapshot = client.get(f"/sessions/{a}/graph").json()
    assert snapshot["nodes"] == [] and snapshot["edges"] == []
    doc = client.get(f"/sessions/{a}/document")
    assert doc.content == b'{"format_version":1,"templates":[],"nodes":[],"edges":[]}'


def test_unknown_session_is_404(client):
    for method, url in [
        ("get", "/sessions/nope/graph"),
        ("get", "/sessions/nope/document"),
        ("get", "/sessions/nope/geometry"),
        ("get", "/sessions/nope/grammar"),
        ("post", "/sessions/nope/commands"),
        ("put", "/sessions/nope/document"),
    ]:
        response = getattr(client, method)(url, content=b"{}") \
            if method in ("post", "put") else getattr(client, method)(url)
        assert response.status_code == 404


def test_load_cube_document(client, fixtures_dir):
    sid = new_session(client)
    data = (fixtures_dir / "cube.pfg.json").read_bytes()
    response = client.put(f"/sessions/{sid}/document", content=data)
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "nodes": 8, "edges": 14}
    # canonical readback equals the canonicalized input
    assert client.get(f"/sessions/{sid}/document").content == data
    # the geometry event carries the cube
    events = read_events(client, sid, limit=2)
    assert [e["kind"] for e in events] == ["graph_changed", "geometry_changed"]
    mesh = events[1]["meshes"][0]
    assert len(mesh["vertices"]) == 8 and len(mesh["triangles"]) == 12


def test_load_malformed_document_is_422_and_state_kept(client, fixtures_dir):
    sid = new_session(client)
    cube = (fixtures_dir / "cube.pfg.json").read_bytes()
    client.put(f"/sessions/{sid}/document", content=cube)
    bad = (fixtures_dir / "malformed" / "cycle__CyclicDocument.pfg.json").read_bytes()
    response = client.put(f"/sessions/{sid}/document", content=bad)
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "CyclicDocument"
    assert client.get(f"/sessions/{sid}/document").content == cube


def test_load_twice_replaces(client, fixtures_dir):
    sid = new_session(client)
    cube = (fixtures_dir / "cube.pfg.json").read_bytes()
    client.put(f"/sessions/{sid}/document", content=cube)
    empty = b'{"format_version":1,"templates":[],"nodes":[],"edges":[]}'
    client.put(f"/sessions/{sid}/document", content=empty)
    assert client.get(f"/sessions/{sid}/document").content == empty


def test_phrase_command_creates_node(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/commands",
                           json={"phrase": "add slider with value seven"})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok" and body["created"] == 1
    snapshot = client.get(f"/sessions/{sid}/graph").json()
    assert snapshot["nodes"][0]["params"] == {"value": 7}


def test_cycle_rejection_is_409_with_reason(client):
    sid = new_session(client)
    for phrase in ["add component addition", "add component addition",
                   "connect node one output sum to node two input a"]:
        assert client.post(f"/sessions/{sid}/commands", json={"phrase": phrase}).status_code == 200
    response = client.post(
        f"/sessions/{sid}/commands",
        json={"action": {"kind": "connect", "src_node": 2, "src_port": "sum",
                         "dst_node": 1, "dst_port": "a"}})
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "WouldCreateCycle"
    events = read_events(client, sid, limit=7)
    assert [e["kind"] for e in events][-1] == "command_rejected"


def test_gibberish_is_422_with_hint(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/commands", json={"phrase": "open the pod bay doors"})
    assert response.status_code == 422
    error = response.json()["error"]
    assert error["code"] == "NoMatch" and "hint" in error


def test_both_or_neither_field_is_400(client):
    sid = new_session(client)
    assert client.post(f"/sessions/{sid}/commands", json={}).status_code == 400
    assert client.post(
        f"/sessions/{sid}/commands",
        json={"phrase": "x", "action": {"kind": "remove_node", "node": 1}},
    ).status_code == 400
    assert client.post(f"/sessions/{sid}/commands", content=b"!").status_code == 400


def test_geometry_json_and_obj_negotiation(client, fixtures_dir):
    sid = new_session(client)
    client.put(f"/sessions/{sid}/document",
               content=(fixtures_dir / "cube.pfg.json").read_bytes())
    body = client.get(f"/sessions/{sid}/geometry").json()
    assert len(body["meshes"]) == 1

    engine = Engine()
    engine.load_document((fixtures_dir / "cube.pfg.json").read_bytes())
    obj = client.get(f"/sessions/{sid}/geometry", headers={"accept": "model/obj"})
    assert obj.headers["content-type"].startswith("model/obj")
    assert obj.content == engine.geometry_obj()


def test_cube_built_purely_via_phrases_over_http(client):
    sid = new_session(client)
    for phrase in CUBE_PHRASES:
        response = client.post(f"/sessions/{sid}/commands", json={"phrase": phrase})
        assert response.status_code == 200, phrase
    meshes = client.get(f"/sessions/{sid}/geometry").json()["meshes"]
    assert len(meshes) == 1
    xs = [v[0] for v in meshes[0]["vertices"]]
    zs = [v[2] for v in meshes[0]["vertices"]]
    assert (min(xs), max(xs), max(zs)) == (0, 4, 4)

    # replaying the event log rebuilds the same document
    events = read_events(client, sid, limit=2 * len(CUBE_PHRASES))
    rebuilt = replay_events(events)
    assert rebuilt.save_document() == client.get(f"/sessions/{sid}/document").content


def test_two_subscribers_see_identical_streams(client):
    sid = new_session(client)
    client.post(f"/sessions/{sid}/commands", json={"phrase": "add component box"})
    client.post(f"/sessions/{sid}/commands", json={"phrase": "remove node one"})
    first = read_events(client, sid, limit=4)
    second = read_events(client, sid, limit=4)
    assert first == second
    assert [e["seq"] for e in first] == [0, 1, 2, 3]


def test_cross_session_isolation(client):
    a, b = new_session(client), new_session(client)
    client.post(f"/sessions/{a}/commands", json={"phrase": "add component box"})
    assert client.get(f"/sessions/{b}/graph").json()["nodes"] == []


def test_grammar_endpoint_reflects_learned_templates(client, fixtures_dir):
    sid = new_session(client)
    before = client.get(f"/sessions/{sid}/grammar").json()
    assert "add component <type>" in before["phrases"]
    assert "Box" in before["component_types"]

    voronoi_doc = {
        "format_version": 1,
        "templates": [{
            "name": "Voronoi",
            "inputs": [{"name": "cells", "type": "number", "default": 10}],
            "intrinsics": [],
            "outputs": [{"name": "result", "type": "mesh"}],
        }],
        "nodes": [{"id": 1, "type": "Voronoi", "position": [0, 0, 0], "params": {}}],
        "edges": [],
    }
    client.put(f"/sessions/{sid}/document", content=json.dumps(voronoi_doc).encode())
    after = client.get(f"/sessions/{sid}/grammar").json()
    assert "Voronoi" in after["component_types"]
    response = client.post(f"/sessions/{sid}/commands", json={"phrase": "add component voronoi"})
    assert response.status_code == 200


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_live_event_push_over_real_http():
    """Subscribe first, then mutate from another connection; events arrive."""
    import uvicorn

    port = _free_port()
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        assert time.time() < deadline, "server did not start"
        time.sleep(0.02)
    try:
        base = f"http://127.0.0.1:{port}"
        sid = httpx.post(f"{base}/sessions").json()["session_id"]
        got: list[dict] = []

        def subscribe():
            with httpx.stream("GET", f"{base}/sessions/{sid}/events",
                              params={"limit": 2}, timeout=10) as response:
                for line in response.iter_lines():
                    if line.startswith("data: "):
                        got.append(json.loads(line[len("data: "):]))

        subscriber = threading.Thread(target=subscribe)
        subscriber.start()
        time.sleep(0.1)
        httpx.post(f"{base}/sessions/{sid}/commands",
                   json={"phrase": "add slider with value seven"})
        subscriber.join(timeout=10)
        assert not subscriber.is_alive()
        assert [e["kind"] for e in got] == ["graph_changed", "geometry_changed"]
        assert got[0]["summary"]["action"] == {
            "kind": "add_component", "type": "Number Slider", "value": 7}
    finally:
        server.should_exit = True
        thread.join(timeout=10)
