"""Command-line front door: REPL, scripted scenario runs, one-shot geometry
export, and the HTTP server."""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click

from .components import format_number
from .engine import Engine
from .errors import EngineError
from .evaluation import sink_geometry


def _bounding_box(mesh) -> tuple:
    xs = [p.x for p in mesh.vertices]
    ys = [p.y for p in mesh.vertices]
    zs = [p.z for p in mesh.vertices]
    return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))


def _format_corner(corner) -> str:
    return "(" + ", ".join(format_number(c) for c in corner) + ")"


def _print_statuses(engine: Engine, out) -> None:
    for nid in sorted(engine.graph.nodes):
        status = engine.result.node_status.get(nid)
        if status is not None and not status.is_ok:
            click.echo(f"  node {nid}: {status.kind.value}"
                       + (f" ({status.message})" if status.message else ""), file=out)


@click.group()
def main() -> None:
    """paramflow: edit parametric dataflow graphs with phrases."""


@main.command()
@click.option("--file", "file_", type=click.Path(exists=True, path_type=Path),
              help="Document to load before the first prompt.")
def repl(file_: Path | None) -> None:
    """Interactive loop; phrases edit the graph, ':' lines are meta-commands."""
    engine = Engine()
    if file_ is not None:
        engine.load_document(file_.read_bytes())
        click.echo(f"loaded {file_} ({len(engine.graph.nodes)} nodes)")
    click.echo("phrases edit the graph; :save PATH :load PATH :graph :geometry :heights :quit")
    while True:
        try:
            line = input("paramflow> ").strip()
        except EOFError:
            click.echo("")
            return
        if not line:
            continue
        if line.startswith(":"):
            if _meta_command(engine, line):
                return
            continue
        try:
            outcome = engine.apply_phrase(line)
        except EngineError as exc:
            hint = getattr(exc, "hint", None)
            click.echo(f"rejected [{exc.code}]: {exc}" + (f" - try: {hint}" if hint else ""))
            continue
        click.echo(_describe(engine, outcome))
        _print_statuses(engine, None)


def _describe(engine: Engine, outcome) -> str:
    command = outcome.command
    name = type(command).__name__
    if outcome.created_id is not None:
        node = engine.graph.nodes[outcome.created_id]
        return f"node {outcome.created_id} ({node.type_name}) added"
    if outcome.summary.removed_edges and name == "RemoveNode":
        return f"node {command.node} removed ({len(outcome.summary.removed_edges)} edges dropped)"
    if name == "ConnectPorts":
        note = " (replaced previous edge)" if outcome.summary.replaced_edge else ""
        return (f"connected {command.src_node}.{command.src_port} -> "
                f"{command.dst_node}.{command.dst_port}{note}")
    if name == "DisconnectPorts":
        return (f"disconnected {command.src_node}.{command.src_port} -> "
                f"{command.dst_node}.{command.dst_port}")
    if name == "MoveNode":
        return f"node {command.node} moved"
    if name == "RemoveNode":
        return f"node {command.node} removed"
    return f"node {command.node} updated"


def _meta_command(engine: Engine, line: str) -> bool:
    """Handle a ':' line; returns True when the REPL should exit."""
    parts = line.split(None, 1)
    name, arg = parts[0], (parts[1] if len(parts) > 1 else "")
    try:
        if name == ":quit":
            return True
        if name == ":save":
            if not arg:
                click.echo("usage: :save PATH")
                return False
            Path(arg).write_bytes(engine.save_document())
            click.echo(f"saved {arg}")
        elif name == ":load":
            if not arg:
                click.echo("usage: :load PATH")
                return False
            engine.load_document(Path(arg).read_bytes())
            click.echo(f"loaded {arg} ({len(engine.graph.nodes)} nodes)")
        elif name == ":graph":
            snapshot = engine.graph_snapshot()
            for node in snapshot["nodes"]:
                click.echo(f"  {node['id']}: {node['type']} {node['params']}"
                           f" [{node['status']['kind']}]")
            for edge in snapshot["edges"]:
                click.echo(f"  {edge['src_node']}.{edge['src_port']} -> "
                           f"{edge['dst_node']}.{edge['dst_port']}")
        elif name == ":geometry":
            meshes = engine.geometry_meshes()
            if not meshes:
                click.echo("  no sink geometry")
            for nid, mesh in meshes:
                lo, hi = _bounding_box(mesh)
                click.echo(f"  node {nid}: {len(mesh.vertices)} vertices, "
                           f"{len(mesh.triangles)} triangles, "
                           f"bbox {_format_corner(lo)}-{_format_corner(hi)}")
        elif name == ":heights":
            for nid, h in sorted(engine.graph.compute_heights(1.0).items()):
                click.echo(f"  node {nid}: height {format_number(h)}")
        else:
            click.echo(f"unknown meta-command {name}")
    except (EngineError, OSError) as exc:
        click.echo(f"error: {exc}")
    return False


@main.command()
@click.argument("script", type=click.Path(exists=True, path_type=Path))
@click.option("--file", "file_", type=click.Path(exists=True, path_type=Path),
              help="Base document to load before running.")
@click.option("--expect", type=click.Path(exists=True, path_type=Path),
              help="Document the end state must equal (canonical form).")
@click.option("--report", type=click.Path(path_type=Path), required=True,
              help="Where to write the JSON scenario report.")
def run(script: Path, file_: Path | None, expect: Path | None, report: Path) -> None:
    """Replay a phrase script and report per-command outcome, timing, errors."""
    try:
        lines = script.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        click.echo(f"cannot read script: {exc}", err=True)
        sys.exit(2)
    engine = Engine()
    if file_ is not None:
        try:
            engine.load_document(file_.read_bytes())
        except (EngineError, OSError) as exc:
            click.echo(f"cannot load base document: {exc}", err=True)
            sys.exit(2)

    commands = []
    rejected = 0
    total_ms = 0.0
    for line in lines:
        phrase = line.strip()
        if not phrase or phrase.startswith("#"):
            continue
        start = time.perf_counter()
        try:
            engine.apply_phrase(phrase)
            outcome = {"phrase": phrase, "outcome": "accepted"}
        except EngineError as exc:
            rejected += 1
            outcome = {"phrase": phrase, "outcome": "rejected", "reason": exc.code}
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        outcome["ms"] = elapsed_ms
        total_ms += elapsed_ms
        commands.append(outcome)

    end_state: dict = {"checked": False}
    mismatch = 0
    if expect is not None:
        try:
            expected_engine = Engine()
            expected_engine.load_document(expect.read_bytes())
        except (EngineError, OSError) as exc:
            click.echo(f"cannot load expected document: {exc}", err=True)
            sys.exit(2)
        got = engine.save_document()
        want = expected_engine.save_document()
        end_state = {"checked": True, "pass": got == want}
        if got != want:
            mismatch = 1
            end_state["diff"] = _diff_summary(engine, expected_engine)

    errors = rejected + mismatch
    payload = {
        "commands": commands,
        "totals": {"commands": len(commands), "errors": errors, "ms": total_ms},
        "end_state": end_state,
    }
    try:
        report.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot write report: {exc}", err=True)
        sys.exit(2)
    click.echo(f"{len(commands)} commands, {errors} errors, {total_ms:.1f} ms")
    sys.exit(0 if errors == 0 else 1)


def _diff_summary(got: Engine, want: Engine) -> str:
    parts = []
    if len(got.graph.nodes) != len(want.graph.nodes):
        parts.append(f"node count {len(got.graph.nodes)} != {len(want.graph.nodes)}")
    if len(got.graph.edges) != len(want.graph.edges):
        parts.append(f"edge count {len(got.graph.edges)} != {len(want.graph.edges)}")
    return "; ".join(parts) if parts else "documents differ (same counts)"


@main.command("eval")
@click.option("--file", "file_", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True,
              help="OBJ file to write.")
def eval_command(file_: Path, out: Path) -> None:
    """Load a document, evaluate it, and export the sink geometry as OBJ."""
    engine = Engine()
    try:
        engine.load_document(file_.read_bytes())
    except (EngineError, OSError) as exc:
        click.echo(f"cannot load document: {exc}", err=True)
        sys.exit(2)
    meshes = sink_geometry(engine.graph, engine.result)
    out.write_bytes(engine.geometry_obj())
    click.echo(f"wrote {out} ({len(meshes)} meshes)")
    sys.exit(0)


@main.command()
@click.option("--port", type=int, default=None, help="Override the bind port.")
@click.option("--ui", type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Also serve the built web client from this directory.")
def serve(port: int | None, ui: Path | None) -> None:
    """Run the HTTP API (bind address from PARAMFLOW_ADDR, default 127.0.0.1:8600)."""
    import uvicorn

    from .service import create_app

    addr = os.environ.get("PARAMFLOW_ADDR", "127.0.0.1:8600")
    host, _, addr_port = addr.partition(":")
    bind_port = port if port is not None else int(addr_port or 8600)
    uvicorn.run(create_app(ui_dir=ui), host=host or "127.0.0.1", port=bind_port)


if __name__ == "__main__":
    main()
