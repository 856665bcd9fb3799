"""JSON graph documents and the bundled fixture graphs."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .graph import KINDS, Edge, Graph, GraphError

FIXTURES = ("one_loop", "two_loop", "ws3", "fig1_right", "graph_h")


class DocumentError(ValueError):
    """Malformed graph document, with the offending field in the message."""


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_graph(doc: str | dict) -> Graph:
    """Build a validated graph from a JSON document (text or decoded)."""
    if isinstance(doc, str):
        try:
            data = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    else:
        data = doc
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in data:
            raise DocumentError(f"missing field {key!r}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("name: expected a string")
    if not isinstance(data["vertices"], list):
        raise DocumentError("vertices: expected a list")
    verts = [_int(v, f"vertices[{i}]") for i, v in enumerate(data["vertices"])]
    if not isinstance(data["edges"], list):
        raise DocumentError("edges: expected a list")
    edges = []
    for i, e in enumerate(data["edges"]):
        where = f"edges[{i}]"
        if not isinstance(e, dict):
            raise DocumentError(f"{where}: expected an object")
        for key in ("id", "src", "dst", "kind"):
            if key not in e:
                raise DocumentError(f"{where}: missing field {key!r}")
        kind = e["kind"]
        if kind not in KINDS:
            raise DocumentError(f"{where}.kind: expected one of {KINDS}, got {kind!r}")
        edges.append(Edge(_int(e["id"], f"{where}.id"), _int(e["src"], f"{where}.src"),
                          _int(e["dst"], f"{where}.dst"), kind))
    ext = data.get("external", [])
    if not isinstance(ext, list) or len(ext) not in (0, 2):
        raise DocumentError("external: expected a list of two vertex ids")
    ext = [_int(v, f"external[{i}]") for i, v in enumerate(ext)]
    try:
        return Graph(tuple(verts), tuple(edges), tuple(ext), name)
    except GraphError as exc:
        raise DocumentError(str(exc)) from exc


def graph_to_doc(G: Graph) -> dict:
    return {
        "name": G.name,
        "vertices": list(G.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "kind": e.kind} for e in G.edges],
        "external": list(G.external),
    }


def dump_graph(G: Graph) -> str:
    return json.dumps(graph_to_doc(G), indent=2) + "\n"


def load_fixture(name: str) -> Graph:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    text = resources.files("feynpoly").joinpath("fixtures", f"{name}.json").read_text()
    return parse_graph(text)


def load_graph(name_or_path: str) -> Graph:
    """A fixture name or a path to a graph document."""
    if name_or_path in FIXTURES:
        return load_fixture(name_or_path)
    path = Path(name_or_path)
    if not path.exists():
        raise DocumentError(f"{name_or_path!r} is neither a fixture name nor a readable file")
    return parse_graph(path.read_text())
