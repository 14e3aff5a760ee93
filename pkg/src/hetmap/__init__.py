"""Heterogeneous scientometric maps: authors, title words and journals in one network."""

__version__ = "0.1.0"

from .attributes import (  # noqa: E402
    Attribute,
    AttributeCatalog,
    AttributeClass,
    animation_thresholds,
    build_catalog,
    static_thresholds,
    tokenize_title,
)
from .export import StyleSpec, build_frames, node_size, render_svg, write_graphml, write_pajek  # noqa: E402
from .factors import connected_components, factor_analysis, variance_explained  # noqa: E402
from .layout import LayoutParams, hop_distances, kk_layout, pack_components  # noqa: E402
from .occurrence import build_matrix, slice_by_period, submatrix  # noqa: E402
from .simgraph import HeteroGraph, build_graph, cosine  # noqa: E402
from .wos_parser import Record, RecordSet, parse_records, recordset_stats  # noqa: E402
