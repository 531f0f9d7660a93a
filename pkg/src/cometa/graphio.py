"""Deterministic graph exports: edge-list CSV, GraphML, centrality CSV.

Node and edge order is always sorted so identical graphs serialize to
identical bytes. The GraphML writer emits nodes explicitly (isolates
survive a round trip); the edge-list format carries edges only.
"""

from __future__ import annotations

import csv
import io
from typing import Mapping, Sequence
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import ConfigurationError

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

FORMATS = ("edgelist", "graphml", "centrality")

# attribute name -> GraphML attr.type
_NODE_ATTR_TYPES = {"degree": "double", "closeness": "double", "mode": "string"}


def render_edge_list(edges: Mapping[tuple[str, str], int | float]) -> str:
    """CSV text `source,target,weight`, rows sorted by (source, target)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for (u, v), w in sorted(edges.items()):
        writer.writerow([u, v, w])
    return buf.getvalue()


def parse_edge_list(text: str) -> dict[tuple[str, str], float]:
    """Inverse of render_edge_list; weights parse as int when possible."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["source", "target", "weight"]:
        raise ConfigurationError("edge-list CSV must start with source,target,weight")
    edges: dict[tuple[str, str], float] = {}
    for row in reader:
        if not row:
            continue
        u, v, w = row
        value = float(w)
        edges[(u, v)] = int(value) if value.is_integer() else value
    return edges


def render_centrality_csv(
    rows: Sequence[tuple], header: Sequence[str] = ("node", "degree", "closeness")
) -> str:
    """CSV of centrality rows in the given order (callers pre-sort)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


def render_graphml(
    nodes: Sequence[str],
    edges: Mapping[tuple[str, str], int | float],
    node_attrs: Mapping[str, Mapping[str, object]] | None = None,
) -> str:
    """GraphML with explicit node elements and weight/centrality attributes."""
    node_attrs = node_attrs or {}
    used_attrs = sorted({k for attrs in node_attrs.values() for k in attrs})
    for name in used_attrs:
        if name not in _NODE_ATTR_TYPES:
            raise ConfigurationError(f"unsupported node attribute: {name}")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{GRAPHML_NS}">',
    ]
    for name in used_attrs:
        lines.append(
            f'  <key id="{name}" for="node" attr.name="{name}" '
            f'attr.type="{_NODE_ATTR_TYPES[name]}"/>'
        )
    lines.append(
        '  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>'
    )
    lines.append('  <graph id="G" edgedefault="undirected">')
    for node in sorted(nodes):
        attrs = node_attrs.get(node, {})
        if attrs:
            lines.append(f"    <node id={quoteattr(node)}>")
            for key in sorted(attrs):
                lines.append(
                    f'      <data key="{key}">{escape(str(attrs[key]))}</data>'
                )
            lines.append("    </node>")
        else:
            lines.append(f"    <node id={quoteattr(node)}/>")
    for (u, v), w in sorted(edges.items()):
        lines.append(f"    <edge source={quoteattr(u)} target={quoteattr(v)}>")
        lines.append(f'      <data key="weight">{w}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def parse_graphml(
    text: str,
) -> tuple[list[str], dict[tuple[str, str], float], dict[str, dict[str, object]]]:
    """Inverse of render_graphml: (nodes, edges, node_attrs)."""
    root = ElementTree.fromstring(text)
    ns = {"g": GRAPHML_NS}
    key_types = {
        el.get("id"): el.get("attr.type", "string")
        for el in root.findall("g:key", ns)
    }

    def convert(key: str, value: str):
        kind = key_types.get(key, "string")
        if kind in ("double", "float"):
            parsed = float(value)
            return int(parsed) if parsed.is_integer() else parsed
        if kind in ("int", "long"):
            return int(value)
        return value

    graph = root.find("g:graph", ns)
    if graph is None:
        raise ConfigurationError("graphml has no <graph> element")
    nodes = []
    node_attrs: dict[str, dict[str, object]] = {}
    for el in graph.findall("g:node", ns):
        node_id = el.get("id")
        nodes.append(node_id)
        attrs = {
            data.get("key"): convert(data.get("key"), data.text or "")
            for data in el.findall("g:data", ns)
        }
        if attrs:
            node_attrs[node_id] = attrs
    edges: dict[tuple[str, str], float] = {}
    for el in graph.findall("g:edge", ns):
        pair = (el.get("source"), el.get("target"))
        weight = 1.0
        for data in el.findall("g:data", ns):
            if data.get("key") == "weight":
                weight = float(data.text)
        edges[pair] = int(weight) if weight.is_integer() else weight
    return nodes, edges, node_attrs


def export_graph(
    nodes: Sequence[str],
    edges: Mapping[tuple[str, str], int | float],
    fmt: str,
    path: str,
    node_attrs: Mapping[str, Mapping[str, object]] | None = None,
    centrality_rows: Sequence[tuple] | None = None,
    centrality_header: Sequence[str] = ("node", "degree", "closeness"),
) -> str:
    """Write a graph artifact to `path` in the requested format; returns path."""
    if fmt == "edgelist":
        text = render_edge_list(edges)
    elif fmt == "graphml":
        text = render_graphml(nodes, edges, node_attrs)
    elif fmt == "centrality":
        if centrality_rows is None:
            raise ConfigurationError("centrality export needs centrality rows")
        text = render_centrality_csv(centrality_rows, centrality_header)
    else:
        raise ConfigurationError(
            f"unknown export format {fmt!r}; expected one of {FORMATS}"
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
