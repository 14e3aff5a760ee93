"""Cosine similarity between attribute columns and the thresholded network."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ZeroVector
from .occurrence import OccurrenceMatrix


@dataclass(frozen=True)
class HeteroGraph:
    nodes: tuple  # of Attribute, freq = column frequency
    edges: tuple[tuple[int, int, float], ...]  # i < j, weight = cosine
    threshold: float

    @property
    def n(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def edge_set(self) -> set[tuple[int, int]]:
        return {(i, j) for i, j, _ in self.edges}


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Salton's cosine of two nonnegative vectors.

    For binary columns this is c / sqrt(f_u * f_v), with c the number of
    shared documents.
    """
    if len(u) != len(v):
        raise ValueError("vectors differ in length: %d vs %d" % (len(u), len(v)))
    # fsum is correctly rounded, so the result is exactly symmetric in (u, v)
    nu = math.sqrt(math.fsum(float(x) * float(x) for x in u))
    nv = math.sqrt(math.fsum(float(x) * float(x) for x in v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    dot = math.fsum(float(x) * float(y) for x, y in zip(u, v))
    return dot / (nu * nv)


def cosine_matrix(m: OccurrenceMatrix) -> np.ndarray:
    """All column-pair cosines of a binary occurrence matrix."""
    x = m.cells.astype(np.float64)
    co = x.T @ x  # co-occurrence counts, exact in float64 at this scale
    f = np.diag(co).copy()
    if np.any(f == 0):
        raise ZeroVector("occurrence matrix has an empty column")
    return co / np.sqrt(np.outer(f, f))


def build_graph(m: OccurrenceMatrix, threshold: float = 0.2) -> HeteroGraph:
    """Keep every column pair with cosine >= threshold.

    With threshold 0 all pairs sharing at least one document are linked;
    pairs with zero similarity never become edges.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("cosine threshold must lie in [0, 1], got %r" % threshold)
    sim = cosine_matrix(m)
    p = sim.shape[0]
    iu, ju = np.triu_indices(p, k=1)
    w = sim[iu, ju]
    keep = (w >= threshold) & (w > 0.0)
    edges = tuple((int(i), int(j), float(s)) for i, j, s in zip(iu[keep], ju[keep], w[keep]))
    nodes = tuple(
        a if a.freq == int(f) else replace(a, freq=int(f))
        for a, f in zip(m.cols, m.col_freq)
    )
    return HeteroGraph(nodes=nodes, edges=edges, threshold=float(threshold))

