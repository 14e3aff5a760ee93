"""Graph builders and format validators shared by the tests."""
import xml.etree.ElementTree as ET

from hetmap.attributes import Attribute, AttributeClass
from hetmap.simgraph import HeteroGraph


def make_graph(n, edges, cls=AttributeClass.WORD, weight=1.0):
    nodes = tuple(Attribute(cls, "n%02d" % i, 1) for i in range(n))
    return HeteroGraph(nodes, tuple((i, j, weight) for i, j in sorted(edges)), 0.0)


def random_connected_edges(rng, n, extra):
    edges = set()
    for i in range(1, n):
        edges.add((int(rng.integers(0, i)), i))
    tries = 0
    while len(edges) < n - 1 + extra and tries < 10 * n * n:
        tries += 1
        a, b = sorted(int(v) for v in rng.choice(n, 2, replace=False))
        edges.add((a, b))
    return sorted(edges)


def random_edges(rng, n, p):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


GML = "{http://graphml.graphdrawing.org/xmlns}"

_TYPES = {"boolean": lambda v: v in ("true", "false"), "int": int, "long": int,
          "float": float, "double": float, "string": str}


def validate_graphml(text):
    """Structural checks of the GraphML 1.0 schema that the writer relies on."""
    root = ET.fromstring(text)
    assert root.tag == GML + "graphml"
    children = list(root)
    keys = {}
    seen_graph = False
    for el in children:
        if el.tag == GML + "key":
            assert not seen_graph, "key elements must precede the graph"
            assert el.get("for") in ("node", "edge", "graph", "all")
            assert el.get("attr.type") in _TYPES
            assert el.get("id") not in keys
            keys[el.get("id")] = el
        else:
            assert el.tag == GML + "graph"
            seen_graph = True
    graphs = root.findall(GML + "graph")
    assert len(graphs) == 1
    graph = graphs[0]
    assert graph.get("edgedefault") in ("directed", "undirected")
    node_ids = set()
    for el in graph:
        assert el.tag in (GML + "node", GML + "edge", GML + "data")
        if el.tag == GML + "node":
            assert el.get("id") and el.get("id") not in node_ids
            node_ids.add(el.get("id"))
    for el in graph:
        kind = el.tag[len(GML):]
        if kind == "edge":
            assert el.get("source") in node_ids and el.get("target") in node_ids
        for data in el.findall(GML + "data"):
            key = keys[data.get("key")]
            assert key.get("for") in (kind, "all")
            _TYPES[key.get("attr.type")](data.text)
    return root
