import json

import pytest
from hypothesis import given, settings

from spantrees.errors import InputError
from spantrees.graph import MultiGraph
from spantrees.io import (
    ParseError,
    emit_dot,
    emit_graph,
    emit_text,
    graph_from_json,
    graph_to_json,
    parse_graph,
    parse_text,
    read_certificate,
    read_graph,
)

from test_graph import multigraphs


def test_text_format_basics():
    g = parse_text("# a triangle\na b\nb c\nc a  # closing edge\n\nvertex lonely\n")
    assert g.vertex_count == 4 and g.edges == ((0, 1), (1, 2), (2, 0))
    assert g.labels == ("a", "b", "c", "lonely")
    par = parse_text("x y\nx y\n")
    assert par.edges == ((0, 1), (0, 1))


@pytest.mark.parametrize("text,line", [
    ("a b\na a\n", 2),
    ("a b c\n", 1),
    ("# c\n\nvertex\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_text(text)
    assert info.value.line == line and f"line {line}" in str(info.value)


def test_json_errors():
    with pytest.raises(ParseError) as info:
        parse_graph('{"vertex_count": 2,\n "edges": [[0, 0, 1]\n')
    assert info.value.line is not None
    with pytest.raises(ParseError):
        graph_from_json({"edges": []})
    with pytest.raises(ParseError):
        graph_from_json({"vertex_count": 2, "edges": [[0, 1]]})
    with pytest.raises(InputError):
        graph_from_json({"vertex_count": 2, "edges": [[1, 0, 1]]})
    with pytest.raises(InputError):
        graph_from_json({"vertex_count": 2, "edges": [[0, 1, 1]]})


@settings(max_examples=200, deadline=None)
@given(multigraphs(max_n=8, max_m=14))
def test_json_round_trip_is_identity(g):
    data = graph_to_json(g)
    assert graph_from_json(json.loads(json.dumps(data))) == g
    assert graph_to_json(parse_graph(emit_graph(g, "json"))) == data


@settings(max_examples=200, deadline=None)
@given(multigraphs(max_n=8, max_m=14))
def test_text_round_trip_keeps_structure(g):
    back = parse_text(emit_text(g))
    assert back.vertex_count == g.vertex_count and back.edges == g.edges


def test_labels_survive_json():
    g = parse_text("u v\nv w\n")
    assert graph_from_json(graph_to_json(g)).labels == ("u", "v", "w")


def test_dot_output(k2x2):
    dot = emit_dot(k2x2)
    assert dot.startswith("graph G {") and dot.count("--") == 2
    with pytest.raises(InputError):
        emit_graph(k2x2, "png")


def test_file_readers(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n1 2\n")
    assert read_graph(p) == MultiGraph(3, ((0, 1), (1, 2)), ("0", "1", "2"))
    c = tmp_path / "c.json"
    c.write_text('{"kind": "packing", "k": 1, "trees": [[0, 1]]}')
    assert read_certificate(c).trees == ((0, 1),)
    c.write_text("{nope")
    with pytest.raises(ParseError):
        read_certificate(c)
