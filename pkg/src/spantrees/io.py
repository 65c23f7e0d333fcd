"""Graph and certificate file formats (field names are documented in docs/format.md)."""

from __future__ import annotations

import json
from pathlib import Path

from .coverpack import TreeCertificate
from .errors import InputError
from .graph import MultiGraph


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_text(text: str) -> MultiGraph:
    """One edge per line ``u v``; ``vertex u`` declares a vertex; ``#`` starts a comment.

    Vertex names are arbitrary tokens numbered by first appearance; repeated
    edge lines are distinct parallel edges with ids in line order.
    """
    index: dict[str, int] = {}
    edges = []

    def vid(name: str) -> int:
        if name not in index:
            index[name] = len(index)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ParseError("expected 'vertex <name>'", lineno)
            vid(parts[1])
            continue
        if len(parts) != 2:
            raise ParseError(f"expected two endpoints, got {len(parts)} tokens", lineno)
        if parts[0] == parts[1]:
            raise ParseError(f"loop at vertex {parts[0]} is not allowed", lineno)
        edges.append((vid(parts[0]), vid(parts[1])))
    labels = sorted(index, key=index.get)
    return MultiGraph(len(labels), tuple(edges), tuple(labels))


def emit_text(g: MultiGraph) -> str:
    lines = [f"vertex {g.label(v)}" for v in range(g.vertex_count)]
    lines += [f"{g.label(u)} {g.label(v)}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_json(g: MultiGraph) -> dict:
    data = {"vertex_count": g.vertex_count, "edges": [[e, u, v] for e, u, v in g.records()]}
    if g.labels is not None:
        data["labels"] = list(g.labels)
    return data


def graph_from_json(data) -> MultiGraph:
    if not isinstance(data, dict) or "vertex_count" not in data or "edges" not in data:
        raise ParseError("graph JSON needs 'vertex_count' and 'edges'")
    try:
        records = [(int(e), int(u), int(v)) for e, u, v in data["edges"]]
    except (TypeError, ValueError):
        raise ParseError("each edge must be [edge_id, u, v]") from None
    return MultiGraph.from_records(int(data["vertex_count"]), records, data.get("labels"))


def parse_graph(text: str) -> MultiGraph:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        return graph_from_json(data)
    return parse_text(text)


def emit_graph(g: MultiGraph, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(graph_to_json(g), indent=None) + "\n"
    if fmt == "text":
        return emit_text(g)
    if fmt == "dot":
        return emit_dot(g)
    raise InputError(f"unknown format {fmt!r}")


def emit_dot(g: MultiGraph) -> str:
    lines = ["graph G {"]
    lines += [f'  "{g.label(v)}";' for v in range(g.vertex_count)]
    lines += [f'  "{g.label(u)}" -- "{g.label(v)}" [label={e}];' for e, u, v in g.records()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> MultiGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def read_certificate(path: str | Path) -> TreeCertificate:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return TreeCertificate.from_json(data)
