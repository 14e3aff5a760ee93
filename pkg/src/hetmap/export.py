"""Writers for Pajek .net/.clu, GraphML, SVG and the animation-frame manifest."""
from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .attributes import AttributeCatalog, AttributeClass, build_catalog
from .errors import BadFreq, ShapeError
from .layout import LayoutParams, kk_layout
from .occurrence import PeriodSlice, build_matrix
from .simgraph import HeteroGraph, build_graph
from .wos_parser import RecordSet

MARGIN = 0.05
SVG_CANVAS = 1000.0
WEIGHT_DECIMALS = 6

CLU_CODES = {AttributeClass.AUTHOR: 1, AttributeClass.WORD: 2, AttributeClass.JOURNAL: 3}
PAJEK_COLORS = {AttributeClass.AUTHOR: "Red", AttributeClass.WORD: "Yellow", AttributeClass.JOURNAL: "Cyan"}


@dataclass(frozen=True)
class StyleSpec:
    shapes: dict = field(default_factory=lambda: {
        AttributeClass.WORD: "triangle",
        AttributeClass.AUTHOR: "ellipse",
        AttributeClass.JOURNAL: "diamond",
    })
    s_min: float = 4.0
    s_scale: float = 3.0
    colors: dict = field(default_factory=lambda: {
        AttributeClass.AUTHOR: "#d62728",
        AttributeClass.WORD: "#ffbf00",
        AttributeClass.JOURNAL: "#1f77b4",
    })
    new_node_color: str = "green"

    def __post_init__(self):
        if not self.s_min > 0:
            raise ValueError("s_min must be positive")
        if not self.s_scale >= 0:
            raise ValueError("s_scale must be nonnegative")


def node_size(freq: float, style: Optional[StyleSpec] = None) -> float:
    """Display size growing with the log of document frequency; freq 1 maps to s_min."""
    style = style or StyleSpec()
    if not freq >= 1:
        raise BadFreq("node frequency must be >= 1, got %r" % (freq,))
    return style.s_min + style.s_scale * math.log(freq)


def rescale(pos: np.ndarray, lo: float = MARGIN, hi: float = 1 - MARGIN) -> np.ndarray:
    """Uniformly scale positions into [lo, hi]^2, preserving aspect ratio.

    The shorter axis is centred.  A single point (or all-coincident points)
    lands at the centre of the square.
    """
    pos = np.asarray(pos, dtype=float).reshape(-1, 2)
    if len(pos) == 0:
        return pos.copy()
    mn, mx = pos.min(axis=0), pos.max(axis=0)
    span = mx - mn
    mid = (lo + hi) / 2
    if span.max() == 0:
        return np.full_like(pos, mid)
    s = (hi - lo) / span.max()
    return (pos - (mn + mx) / 2) * s + mid


def _check_positions(g: HeteroGraph, pos) -> np.ndarray:
    pos = np.asarray(pos, dtype=float).reshape(-1, 2)
    if len(pos) != g.n:
        raise ShapeError("got %d positions for %d nodes" % (len(pos), g.n))
    if not np.all(np.isfinite(pos)):
        raise ValueError("positions must be finite")
    return pos


# -- Pajek -----------------------------------------------------------------

def _pajek_label(label: str) -> str:
    # Pajek has no escape for quotes inside labels
    return '"%s"' % label.replace('"', "'")


def write_pajek(g: HeteroGraph, pos, style: Optional[StyleSpec] = None) -> str:
    style = style or StyleSpec()
    xy = rescale(_check_positions(g, pos))
    lines = ["*Vertices %d" % g.n]
    for i, (a, (x, y)) in enumerate(zip(g.nodes, xy), start=1):
        fact = node_size(a.freq, style) / style.s_min
        lines.append("%d %s %.4f %.4f 0.5000 %s x_fact %.4f y_fact %.4f ic %s" % (
            i, _pajek_label(a.label), x, y, style.shapes[a.cls], fact, fact, PAJEK_COLORS[a.cls]))
    lines.append("*Edges")
    for i, j, w in g.edges:
        lines.append("%d %d %.*f" % (i + 1, j + 1, WEIGHT_DECIMALS, w))
    return "\n".join(lines) + "\n"


def write_clu(g: HeteroGraph) -> str:
    """Partition file: 1 = author, 2 = word, 3 = journal."""
    lines = ["*Vertices %d" % g.n] + [str(CLU_CODES[a.cls]) for a in g.nodes]
    return "\n".join(lines) + "\n"


@dataclass
class PajekNetwork:
    labels: list[str]
    coords: list[tuple[float, float]]
    shapes: list[Optional[str]]
    x_fact: list[float]
    edges: list[tuple[int, int, float]]  # zero-based endpoints


def _split_pajek_vertex(line: str) -> list[str]:
    out, i = [], 0
    while i < len(line):
        c = line[i]
        if c.isspace():
            i += 1
        elif c == '"':
            j = line.index('"', i + 1)
            out.append(line[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < len(line) and not line[j].isspace():
                j += 1
            out.append(line[i:j])
            i = j
    return out


def parse_pajek(text: str) -> PajekNetwork:
    """Read the subset of the .net format that :func:`write_pajek` emits."""
    net = PajekNetwork([], [], [], [], [])
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            section = line.split()[0].lower()
            continue
        if section == "*vertices":
            parts = _split_pajek_vertex(line)
            net.labels.append(parts[1].strip('"'))
            net.coords.append((float(parts[2]), float(parts[3])))
            rest = parts[5:] if len(parts) > 5 else []
            shape = rest[0] if rest and rest[0] in ("ellipse", "box", "diamond", "triangle", "cross", "empty") else None
            net.shapes.append(shape)
            fact = 1.0
            if "x_fact" in rest:
                fact = float(rest[rest.index("x_fact") + 1])
            net.x_fact.append(fact)
        elif section in ("*edges", "*arcs"):
            a, b, *w = line.split()
            net.edges.append((int(a) - 1, int(b) - 1, float(w[0]) if w else 1.0))
    return net


def parse_clu(text: str) -> list[int]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    return [int(v) for v in lines[1:]]


# -- GraphML ---------------------------------------------------------------

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
_NODE_KEYS = [("class", "string"), ("label", "string"), ("freq", "int"), ("x", "double"),
              ("y", "double"), ("size", "double"), ("first_year", "int")]


def write_graphml(g: HeteroGraph, pos, style: Optional[StyleSpec] = None) -> str:
    style = style or StyleSpec()
    xy = _check_positions(g, pos)
    ET.register_namespace("", GRAPHML_NS)
    q = lambda tag: "{%s}%s" % (GRAPHML_NS, tag)  # noqa: E731
    root = ET.Element(q("graphml"))
    for name, typ in _NODE_KEYS:
        ET.SubElement(root, q("key"), {"id": name, "for": "node", "attr.name": name, "attr.type": typ})
    ET.SubElement(root, q("key"), {"id": "weight", "for": "edge", "attr.name": "weight", "attr.type": "double"})
    graph = ET.SubElement(root, q("graph"), {"id": "G", "edgedefault": "undirected"})
    for i, (a, (x, y)) in enumerate(zip(g.nodes, xy)):
        node = ET.SubElement(graph, q("node"), {"id": "n%d" % i})
        values = {
            "class": a.cls.value, "label": a.label, "freq": str(a.freq),
            "x": repr(float(x)), "y": repr(float(y)), "size": repr(node_size(a.freq, style)),
            "first_year": None if a.first_year is None else str(a.first_year),
        }
        for name, _ in _NODE_KEYS:
            if values[name] is not None:
                ET.SubElement(node, q("data"), {"key": name}).text = values[name]
    for e, (i, j, w) in enumerate(g.edges):
        edge = ET.SubElement(graph, q("edge"), {"id": "e%d" % e, "source": "n%d" % i, "target": "n%d" % j})
        ET.SubElement(edge, q("data"), {"key": "weight"}).text = repr(float(w))
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


# -- SVG -------------------------------------------------------------------

def _shape_svg(shape: str, cx: float, cy: float, r: float, fill: str, key: str) -> str:
    attrs = 'class="node %s" data-id=%s fill="%s" stroke="#333333"' % (shape, quoteattr(key), fill)
    if shape == "ellipse":
        return '<circle %s cx="%.2f" cy="%.2f" r="%.2f"/>' % (attrs, cx, cy, r)
    if shape == "triangle":
        h = r * math.sqrt(3) / 2
        d = "M %.2f %.2f L %.2f %.2f L %.2f %.2f Z" % (cx, cy - r, cx + h, cy + r / 2, cx - h, cy + r / 2)
    else:
        d = "M %.2f %.2f L %.2f %.2f L %.2f %.2f L %.2f %.2f Z" % (
            cx, cy - r, cx + r, cy, cx, cy + r, cx - r, cy)
    return '<path %s d="%s"/>' % (attrs, d)


def render_svg(g: HeteroGraph, pos, style: Optional[StyleSpec] = None,
               is_new: Optional[Sequence[bool]] = None, title: Optional[str] = None) -> str:
    """Draw the map: triangles for words, circles for authors, diamonds for journals.

    Nodes flagged in ``is_new`` are filled with ``style.new_node_color``.
    """
    style = style or StyleSpec()
    xy = rescale(_check_positions(g, pos)) * SVG_CANVAS
    flags = list(is_new) if is_new is not None else [False] * g.n
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%d" height="%d" viewBox="0 0 %d %d">'
        % ((SVG_CANVAS,) * 4),
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        out.append("<title>%s</title>" % escape(title))
    out.append('<g class="edges" stroke="#999999" stroke-opacity="0.6">')
    for i, j, w in g.edges:
        out.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke-width="%.3f"/>' % (
            xy[i, 0], xy[i, 1], xy[j, 0], xy[j, 1], 1 + 2 * w))
    out.append("</g>")
    out.append('<g class="nodes">')
    for a, (x, y), new in zip(g.nodes, xy, flags):
        r = node_size(a.freq, style)
        fill = style.new_node_color if new else style.colors[a.cls]
        out.append(_shape_svg(style.shapes[a.cls], x, y, r, fill, a.key))
    out.append("</g>")
    out.append('<g class="labels" font-family="sans-serif" font-size="10" text-anchor="middle">')
    for a, (x, y) in zip(g.nodes, xy):
        r = node_size(a.freq, style)
        out.append('<text x="%.2f" y="%.2f">%s</text>' % (x, y + r + 10, escape(a.label)))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- animation frames ------------------------------------------------------

@dataclass
class Frame:
    label: str
    start_year: int
    end_year: int
    record_ids: list[int]
    graph: Optional[HeteroGraph]
    positions: np.ndarray
    is_new: list[bool]

    def to_dict(self, style: StyleSpec) -> dict:
        nodes, edges = [], []
        if self.graph is not None:
            xy = rescale(self.positions)
            for a, (x, y), new in zip(self.graph.nodes, xy, self.is_new):
                nodes.append({
                    "id": a.key, "class": a.cls.value, "label": a.label, "freq": a.freq,
                    "x": round(float(x), 6), "y": round(float(y), 6),
                    "size": round(node_size(a.freq, style), 6), "is_new": bool(new),
                })
            keys = [a.key for a in self.graph.nodes]
            edges = [{"source": keys[i], "target": keys[j], "weight": round(w, WEIGHT_DECIMALS)}
                     for i, j, w in self.graph.edges]
        return {"period": self.label, "start_year": self.start_year, "end_year": self.end_year,
                "records": list(self.record_ids), "nodes": nodes, "edges": edges}


@dataclass
class FrameManifest:
    frames: list[Frame]
    threshold: float
    thresholds: dict
    style: StyleSpec = field(default_factory=StyleSpec)

    def to_dict(self) -> dict:
        return {
            "cosine_threshold": self.threshold,
            "thresholds": {c.value: n for c, n in self.thresholds.items()},
            "frames": [f.to_dict(self.style) for f in self.frames],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def svgs(self) -> list[str]:
        out = []
        for f in self.frames:
            if f.graph is None:
                out.append(render_svg(_EMPTY_GRAPH, np.zeros((0, 2)), self.style, title=f.label))
            else:
                out.append(render_svg(f.graph, f.positions, self.style, f.is_new, title=f.label))
        return out


_EMPTY_GRAPH = HeteroGraph((), (), 0.0)


def build_frames(
    slices: Iterable[PeriodSlice],
    rs: RecordSet,
    thresholds: dict,
    threshold: float = 0.2,
    params: Optional[LayoutParams] = None,
    style: Optional[StyleSpec] = None,
    *,
    stopwords: Iterable[str] = (),
    excluded_author: Optional[str] = None,
    classes: Optional[Iterable[AttributeClass]] = None,
    rebuild_catalog: bool = True,
) -> FrameManifest:
    """One laid-out network per period.

    A node is new in a frame when its first appearance anywhere in the
    corpus falls inside that frame's period.  With ``rebuild_catalog`` off,
    the corpus-wide catalog (at ``thresholds``) is reused and restricted to
    attributes present in the slice.
    """
    slices = list(slices)
    if not slices:
        raise ValueError("at least one period slice is required")
    params = params or LayoutParams()
    style = style or StyleSpec()
    stop = frozenset(stopwords)
    wanted = set(classes) if classes else None
    by_id = {r.id: r for r in rs.records}
    first_seen = {a.key: a.first_year
                  for a in build_catalog(rs, {c: 1 for c in AttributeClass}, excluded_author, stop)}
    global_cat = None if rebuild_catalog else build_catalog(rs, thresholds, excluded_author, stop)

    frames = []
    for sl in slices:
        records = [by_id[i] for i in sl.record_ids]
        if rebuild_catalog:
            cat = build_catalog(records, thresholds, excluded_author, stop)
        else:
            present = build_catalog(records, {c: 1 for c in AttributeClass}, excluded_author, stop)
            keep = {a.key for a in present}
            cat = AttributeCatalog(tuple(a for a in global_cat if a.key in keep),
                                   global_cat.thresholds, global_cat.excluded_author)
        if wanted is not None:
            cat = AttributeCatalog(tuple(a for a in cat if a.cls in wanted), cat.thresholds, cat.excluded_author)
        graph, positions, new = None, np.zeros((0, 2)), []
        if len(cat):
            graph = build_graph(build_matrix(records, cat), threshold)
            positions = kk_layout(graph, params).positions
            new = [sl.contains(first_seen[a.key]) if first_seen.get(a.key) is not None else False
                   for a in graph.nodes]
        frames.append(Frame(sl.label, sl.start_year, sl.end_year, list(sl.record_ids),
                            graph, positions, new))
    return FrameManifest(frames, threshold, dict(thresholds), style)
