import json
import math
import re
import xml.etree.ElementTree as ET

import mpmath
import networkx as nx
import numpy as np
import pytest

from corpus import FOCAL, evolving_corpus
from helpers import GML, validate_graphml
from hetmap.attributes import Attribute, AttributeClass, animation_thresholds
from hetmap.errors import BadFreq
from hetmap.export import (
    StyleSpec,
    build_frames,
    node_size,
    parse_clu,
    parse_pajek,
    render_svg,
    rescale,
    write_clu,
    write_graphml,
    write_pajek,
)
from hetmap.layout import LayoutParams, kk_layout
from hetmap.occurrence import slice_by_period
from hetmap.simgraph import HeteroGraph, build_graph
from hetmap.wos_parser import Record, RecordSet

A, W, J = AttributeClass.AUTHOR, AttributeClass.WORD, AttributeClass.JOURNAL
SVG_NS = "{http://www.w3.org/2000/svg}"


def three_class_graph():
    nodes = (Attribute(A, "law j", 2, 1986), Attribute(W, "translation", 3, 1983),
             Attribute(J, "minerva", 1, 1990))
    return HeteroGraph(nodes, ((0, 1, 0.816497), (1, 2, 0.57735)), 0.2)


# -- node size -------------------------------------------------------------

def test_node_size_floor():
    assert node_size(1) == 4.0


@pytest.mark.parametrize("freq", [2, 3, 7, 65, 1000])
def test_node_size_against_high_precision_log(freq):
    style = StyleSpec(s_min=4.0, s_scale=3.0)
    with mpmath.workdps(50):
        expected = float(mpmath.mpf(4) + 3 * mpmath.log(freq))
    assert abs(node_size(freq, style) - expected) <= 1e-12


@pytest.mark.parametrize("freq", [1, 3, 17, 40])
def test_node_size_doubling(freq):
    assert abs(node_size(2 * freq) - node_size(freq) - 3.0 * math.log(2)) <= 1e-12


def test_node_size_rejects_zero():
    with pytest.raises(BadFreq):
        node_size(0)


def test_style_validation():
    with pytest.raises(ValueError):
        StyleSpec(s_min=0)
    with pytest.raises(ValueError):
        StyleSpec(s_scale=-1)


# -- rescale ---------------------------------------------------------------

def test_rescale_bounds_and_ratios(rng):
    for _ in range(20):
        pos = rng.normal(size=(12, 2)) * rng.uniform(0.01, 100, size=2)
        out = rescale(pos)
        assert out.min() >= 0.05 - 1e-12 and out.max() <= 0.95 + 1e-12
        d0 = np.linalg.norm(pos[:, None] - pos[None], axis=-1)
        d1 = np.linalg.norm(out[:, None] - out[None], axis=-1)
        iu = np.triu_indices(12, 1)
        ratio = d1[iu] / d0[iu]
        assert np.max(np.abs(ratio - ratio[0])) <= 1e-9 * ratio[0]


def test_rescale_degenerate():
    assert rescale(np.zeros((1, 2))).tolist() == [[0.5, 0.5]]
    assert rescale(np.zeros((0, 2))).shape == (0, 2)


# -- Pajek -----------------------------------------------------------------

def test_pajek_two_nodes_byte_exact():
    g = HeteroGraph((Attribute(A, "callon m", 1), Attribute(W, "network", 3)), ((0, 1, 0.5),), 0.2)
    text = write_pajek(g, np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert text == (
        "*Vertices 2\n"
        '1 "callon m" 0.0500 0.5000 0.5000 ellipse x_fact 1.0000 y_fact 1.0000 ic Red\n'
        '2 "network" 0.9500 0.5000 0.5000 triangle x_fact 1.8240 y_fact 1.8240 ic Yellow\n'
        "*Edges\n"
        "1 2 0.500000\n"
    )
    assert "\r" not in text


def test_pajek_round_trip(corpus_matrix):
    g = build_graph(corpus_matrix, 0.2)
    pos = kk_layout(g).positions
    net = parse_pajek(write_pajek(g, pos))
    assert len(net.labels) == g.n == 101
    assert net.labels == [a.label for a in g.nodes]
    shapes = {A: "ellipse", W: "triangle", J: "diamond"}
    assert net.shapes == [shapes[a.cls] for a in g.nodes]
    assert len(net.edges) == len(g.edges)
    for (i, j, w), (pi, pj, pw) in zip(g.edges, net.edges):
        assert (i, j) == (pi, pj)
        assert abs(w - pw) <= 5e-7
    assert all(0.05 - 1e-4 <= c <= 0.95 + 1e-4 for xy in net.coords for c in xy)


def test_pajek_header_for_101_nodes(corpus_matrix):
    g = build_graph(corpus_matrix, 0.2)
    text = write_pajek(g, kk_layout(g).positions)
    assert text.splitlines()[0] == "*Vertices 101"


def test_pajek_quotes_in_labels():
    g = HeteroGraph((Attribute(J, 'the "journal"', 1),), (), 0.0)
    net = parse_pajek(write_pajek(g, np.zeros((1, 2))))
    assert net.labels == ["the 'journal'"]


def test_clu_partition():
    g = three_class_graph()
    text = write_clu(g)
    assert text == "*Vertices 3\n1\n2\n3\n"
    assert parse_clu(text) == [1, 2, 3]


# -- GraphML ---------------------------------------------------------------

def test_graphml_empty_graph():
    g = HeteroGraph((), (), 0.2)
    root = validate_graphml(write_graphml(g, np.zeros((0, 2))))
    assert root.find(GML + "graph").findall(GML + "node") == []


def test_graphml_round_trip():
    g = three_class_graph()
    pos = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, -1.0]])
    text = write_graphml(g, pos)
    validate_graphml(text)
    path_graph = nx.parse_graphml(text)
    assert path_graph.number_of_nodes() == 3
    assert path_graph.number_of_edges() == 2
    n1 = path_graph.nodes["n1"]
    assert n1["class"] == "word" and n1["label"] == "translation"
    assert n1["freq"] == 3 and n1["first_year"] == 1983
    assert n1["x"] == 2.0 and n1["y"] == 3.0
    assert n1["size"] == pytest.approx(node_size(3))
    assert path_graph.edges["n0", "n1"]["weight"] == 0.816497


def test_graphml_101_nodes(corpus_matrix):
    g = build_graph(corpus_matrix, 0.2)
    root = validate_graphml(write_graphml(g, kk_layout(g).positions))
    assert len(root.find(GML + "graph").findall(GML + "node")) == 101


# -- SVG -------------------------------------------------------------------

def svg_shapes(text):
    root = ET.fromstring(text)
    nodes = [el for el in root.iter() if "node" in (el.get("class") or "").split()]
    return root, nodes


def test_svg_empty():
    root, nodes = svg_shapes(render_svg(HeteroGraph((), (), 0.0), np.zeros((0, 2))))
    assert root.tag == SVG_NS + "svg"
    assert nodes == []


def test_svg_one_shape_per_class():
    g = three_class_graph()
    _, nodes = svg_shapes(render_svg(g, np.array([[0, 0], [1, 0], [0, 1.0]])))
    kinds = sorted(el.get("class").split()[1] for el in nodes)
    assert kinds == ["diamond", "ellipse", "triangle"]
    tags = {el.get("class").split()[1]: el.tag for el in nodes}
    assert tags["ellipse"] == SVG_NS + "circle"
    assert tags["triangle"] == tags["diamond"] == SVG_NS + "path"
    tri = [el for el in nodes if "triangle" in el.get("class")][0]
    assert len(re.findall(r"[ML]", tri.get("d"))) == 3
    dia = [el for el in nodes if "diamond" in el.get("class")][0]
    assert len(re.findall(r"[ML]", dia.get("d"))) == 4


def test_svg_sizes_edges_and_labels():
    g = three_class_graph()
    text = render_svg(g, np.array([[0, 0], [1, 0], [0, 1.0]]))
    root = ET.fromstring(text)
    circle = root.find(".//%scircle" % SVG_NS)
    assert float(circle.get("r")) == pytest.approx(node_size(2), abs=0.01)
    widths = sorted(float(el.get("stroke-width")) for el in root.iter(SVG_NS + "line"))
    assert widths == pytest.approx(sorted(1 + 2 * w for _, _, w in g.edges), abs=1e-3)
    labels = [el.text for el in root.iter(SVG_NS + "text")]
    assert labels == ["law j", "translation", "minerva"]
    assert root.get("width") == "1000"


def test_svg_new_node_fill():
    g = three_class_graph()
    style = StyleSpec()
    _, nodes = svg_shapes(render_svg(g, np.array([[0, 0], [1, 0], [0, 1.0]]), style,
                                     is_new=[False, True, False]))
    fills = {el.get("data-id"): el.get("fill") for el in nodes}
    assert fills["word:translation"] == style.new_node_color == "green"
    assert fills["author:law j"] != "green"


# -- frames ----------------------------------------------------------------

def test_six_frames_in_order(corpus_rs, stopwords):
    periods = slice_by_period(corpus_rs, 1975, 5, 2005)
    manifest = build_frames(periods, corpus_rs, animation_thresholds(), 0.2,
                            stopwords=stopwords, excluded_author=FOCAL)
    assert [f.label for f in manifest.frames] == [
        "1975-1979", "1980-1984", "1985-1989", "1990-1994", "1995-1999", "2000-2004"]
    assert manifest.threshold == 0.2
    assert manifest.thresholds == {A: 2, W: 2, J: 2}
    for f in manifest.frames:
        if f.graph is not None:
            assert all(a.freq >= 2 for a in f.graph.nodes)
            assert all(w >= 0.2 for _, _, w in f.graph.edges)


def test_is_new_only_in_first_period():
    rs = evolving_corpus()
    periods = slice_by_period(rs, 1975, 5, 2005)
    manifest = build_frames(periods, rs, animation_thresholds(), 0.2, excluded_author="Callon, M")
    flags = []
    for f in manifest.frames:
        keys = [a.key for a in f.graph.nodes]
        flags.append(f.is_new[keys.index("word:performativity")] if "word:performativity" in keys else None)
    assert flags == [None, None, None, True, False, False]
    first = manifest.frames[0]
    assert all(first.is_new)  # everything is new in the opening period
    assert not any(manifest.frames[1].is_new)


def test_empty_slice_gives_empty_frame():
    rs = evolving_corpus()
    periods = slice_by_period(rs, 1960, 5, 1980)
    manifest = build_frames(periods, rs, animation_thresholds(), 0.2)
    assert [f.graph is None for f in manifest.frames] == [True, True, True, False]
    doc = manifest.to_dict()
    assert doc["frames"][0]["nodes"] == [] and doc["frames"][0]["edges"] == []
    assert len(manifest.svgs()) == 4


def test_manifest_json_schema():
    rs = evolving_corpus()
    manifest = build_frames(slice_by_period(rs, 1975, 5, 2005), rs, animation_thresholds(), 0.2,
                            params=LayoutParams(seed=1))
    doc = json.loads(manifest.to_json())
    assert set(doc) == {"cosine_threshold", "thresholds", "frames"}
    assert doc["thresholds"] == {"author": 2, "word": 2, "journal": 2}
    frame = doc["frames"][3]
    assert frame["period"] == "1990-1994"
    assert set(frame["nodes"][0]) == {"id", "class", "label", "freq", "x", "y", "size", "is_new"}
    ids = {n["id"] for n in frame["nodes"]}
    assert all(e["source"] in ids and e["target"] in ids for e in frame["edges"])
    for f in doc["frames"]:
        assert all(0.05 - 1e-9 <= n["x"] <= 0.95 + 1e-9 for n in f["nodes"])


def test_global_catalog_mode():
    rs = evolving_corpus()
    periods = slice_by_period(rs, 1975, 5, 2005)
    manifest = build_frames(periods, rs, {A: 1, W: 3, J: 1}, 0.0, rebuild_catalog=False)
    # performativity reaches 6 documents corpus-wide but only 2 per period
    keys = [a.key for a in manifest.frames[3].graph.nodes]
    assert "word:performativity" in keys
    rebuilt = build_frames(periods, rs, {A: 1, W: 3, J: 1}, 0.0)
    assert "word:performativity" not in [a.key for a in rebuilt.frames[3].graph.nodes]


def test_frames_require_slices():
    with pytest.raises(ValueError):
        build_frames([], evolving_corpus(), animation_thresholds())
