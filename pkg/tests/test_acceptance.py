"""Acceptance gate: one test per release criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
"""

from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from helpers import (
    find_cycle,
    inp,
    mesh_bbox,
    out,
    random_graph,
    random_mutation,
    reaches,
    results_bitwise_equal,
    try_random_edge,
)
from paramflow import (
    Engine,
    Graph,
    Registry,
    build_grammar,
    evaluate_full,
    evaluate_incremental,
    load,
    parse_command,
    replay_events,
    sample_phrase,
    save,
    sink_geometry,
)
from paramflow.cli import main as cli_main
from paramflow.errors import NoMatch, WouldCreateCycle
from paramflow.evaluation import EvalCache
from paramflow.grammar import AddComponent
from paramflow.numerals import parse_number
from paramflow.service import create_app
from test_engine import CUBE_PHRASES
from test_numerals import oracle_words
from test_persistence import graphs_equal, _malformed_cases, _EXPECTED_ERRORS


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def test_cube_golden(fixtures_dir):
    with criterion("cube-golden"):
        registry = Registry()
        graph = load((fixtures_dir / "cube.pfg.json").read_bytes(), registry)
        start = time.perf_counter()
        result = evaluate_full(graph, registry)
        meshes = sink_geometry(graph, result)
        elapsed_ms = (time.perf_counter() - start) * 1000
        assert elapsed_ms < 100, f"evaluation took {elapsed_ms:.1f} ms"
        assert len(meshes) == 1
        mesh = meshes[0][1]
        assert len(mesh.vertices) == 8
        assert len(mesh.triangles) == 12
        assert mesh_bbox(mesh) == ((0.0, 0.0, 0.0), (4.0, 4.0, 4.0))  # exact doubles


def test_parameter_ripple(fixtures_dir):
    with criterion("parameter-ripple"):
        registry = Registry()
        graph = load((fixtures_dir / "cube.pfg.json").read_bytes(), registry)
        cache = EvalCache.capture(graph, evaluate_full(graph, registry))
        side = next(nid for nid, node in sorted(graph.nodes.items())
                    if node.type_name == "Number Slider" and node.params.get("value") == 4.0)
        graph.set_param(registry, side, "value", 5)
        incremental = evaluate_incremental(graph, registry, cache, {side})
        meshes = sink_geometry(graph, incremental)
        assert mesh_bbox(meshes[0][1]) == ((0.0, 0.0, 0.0), (5.0, 5.0, 5.0))
        assert results_bitwise_equal(incremental, evaluate_full(graph, registry))


def test_acyclicity_fuzz():
    """500 random sequences of >=50 ops; DFS after every op; every rejected
    add_edge confirmed cycle-forming by the reachability oracle."""
    with criterion("acyclicity-fuzz"):
        rng = random.Random(14142)
        registry = Registry()
        rejected_cycles = 0
        for _ in range(500):
            graph = Graph()
            for _ in range(50):
                if not graph.nodes or rng.random() < 0.45:
                    random_mutation(rng, graph, registry)
                else:
                    attempt = try_random_edge(rng, graph, registry)
                    if isinstance(attempt.error, WouldCreateCycle):
                        assert reaches(graph, attempt.target.node, attempt.source.node), \
                            "rejection not confirmed by oracle"
                        rejected_cycles += 1
                assert not find_cycle(graph)
        assert rejected_cycles > 100, "fuzz never provoked cycle rejections"


def test_incremental_equals_full():
    with criterion("incremental-equals-full"):
        rng = random.Random(271828)
        registry = Registry()
        checked = 0
        for _ in range(200):
            graph = random_graph(rng, registry, max_nodes=20)
            cache = EvalCache.capture(graph, evaluate_full(graph, registry))
            for _ in range(10):
                changed = random_mutation(rng, graph, registry)
                incremental = evaluate_incremental(graph, registry, cache, changed)
                assert results_bitwise_equal(incremental, evaluate_full(graph, registry))
                cache = EvalCache.capture(graph, incremental)
                checked += 1
        assert checked == 2000


def test_numeral_grammar():
    with criterion("numeral-grammar"):
        for n in range(10000):
            tokens = oracle_words(n).split()
            assert parse_number(tokens) == (float(n), len(tokens)), oracle_words(n)
        ones = ["zero", "one", "two", "three", "four", "five", "six", "seven",
                "eight", "nine"]
        rng = random.Random(31415)
        for _ in range(500):
            magnitude = rng.randint(0, 9999)
            digits = "".join(str(rng.randint(0, 9)) for _ in range(rng.randint(1, 4)))
            sign_word = rng.choice(["minus", "negative", ""])
            tokens = ([sign_word] if sign_word else []) + oracle_words(magnitude).split() \
                + ["point"] + [ones[int(d)] for d in digits]
            expected = float(f"{magnitude}.{digits}")
            if sign_word:
                expected = -expected
            assert parse_number(tokens) == (expected, len(tokens))


def test_phrase_conformance():
    with criterion("phrase-conformance"):
        grammar = build_grammar(Registry())
        assert parse_command(grammar, "add component box") == AddComponent("Box", None)
        assert parse_command(grammar, "add slider with value seven") == \
            AddComponent("Number Slider", 7.0)
        rng = random.Random(16180)
        full_match_checked = 0
        for _ in range(1000):
            phrase = sample_phrase(grammar, rng)
            parse_command(grammar, phrase)  # round trip must succeed
            if not phrase.startswith("set text"):
                with pytest.raises(NoMatch):
                    parse_command(grammar, phrase + " xyzzy")
                full_match_checked += 1
        assert full_match_checked > 500


def test_persistence_criterion():
    with criterion("persistence"):
        rng = random.Random(123123)
        registry = Registry()
        for _ in range(200):
            graph = random_graph(rng, registry, max_nodes=12)
            fresh = Registry()
            reloaded = load(save(graph, registry), fresh)
            assert graphs_equal(graph, reloaded)
            assert save(reloaded, fresh) == save(graph, registry)

        # canonical: two different histories, same state, same bytes
        first = Graph()
        a = first.add_node(registry, "Number Slider", 4)
        b = first.add_node(registry, "Addition")
        first.add_edge(registry, out(a, "out"), inp(b, "a"))
        second = Graph()
        a2 = second.add_node(registry, "Number Slider", 1)
        b2 = second.add_node(registry, "Addition")
        second.add_edge(registry, out(a2, "out"), inp(b2, "b"))
        second.remove_edge(out(a2, "out"), inp(b2, "b"))
        second.add_edge(registry, out(a2, "out"), inp(b2, "a"))
        second.set_param(registry, a2, "value", 4)
        assert save(first, registry) == save(second, registry)

        for path in _malformed_cases():
            error_name = path.name.rsplit("__", 1)[1].split(".")[0]
            with pytest.raises(_EXPECTED_ERRORS[error_name]):
                load(path.read_bytes(), Registry())


def test_service_criterion():
    with criterion("service"):
        with TestClient(create_app()) as client:
            sid = client.post("/sessions").json()["session_id"]
            for phrase in CUBE_PHRASES:
                response = client.post(f"/sessions/{sid}/commands", json={"phrase": phrase})
                assert response.status_code == 200, phrase
            meshes = client.get(f"/sessions/{sid}/geometry").json()["meshes"]
            assert len(meshes) == 1
            corners = {tuple(v) for v in meshes[0]["vertices"]}
            assert (0, 0, 0) in corners and (4, 4, 4) in corners

            events = []
            with client.stream("GET", f"/sessions/{sid}/events",
                               params={"limit": 2 * len(CUBE_PHRASES)}) as response:
                for line in response.iter_lines():
                    if line.startswith("data: "):
                        events.append(json.loads(line[len("data: "):]))
            rebuilt = replay_events(events)
            document = client.get(f"/sessions/{sid}/document").content
            assert rebuilt.save_document() == document

            engine = Engine()
            engine.load_document(document)
            obj = client.get(f"/sessions/{sid}/geometry", headers={"accept": "model/obj"})
            assert obj.content == engine.geometry_obj()


def test_scenario_runner_criterion(fixtures_dir, tmp_path):
    with criterion("scenario-runner"):
        runner = CliRunner()
        report = tmp_path / "clean.json"
        result = runner.invoke(cli_main, [
            "run", str(fixtures_dir / "scripts" / "build_cube.phrases"),
            "--expect", str(fixtures_dir / "scripts" / "build_cube_expected.pfg.json"),
            "--report", str(report),
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads(report.read_text())
        assert payload["totals"]["errors"] == 0

        report2 = tmp_path / "cycle.json"
        result = runner.invoke(cli_main, [
            "run", str(fixtures_dir / "scripts" / "build_cube_with_cycle.phrases"),
            "--report", str(report2),
        ])
        assert result.exit_code == 1
        payload = json.loads(report2.read_text())
        assert payload["totals"]["errors"] == 1
