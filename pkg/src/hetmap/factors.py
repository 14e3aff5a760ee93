"""Principal-component factor analysis and network components."""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np

from .errors import BadK, DegenerateMatrix
from .occurrence import OccurrenceMatrix
from .simgraph import HeteroGraph

log = logging.getLogger(__name__)

NEG_EIG_TOL = 1e-9


@dataclass(frozen=True)
class FactorResult:
    eigenvalues: np.ndarray  # descending, clamped to >= 0
    eigenvectors: np.ndarray  # p x p, columns orthonormal
    loadings: np.ndarray  # eigenvectors scaled by sqrt(eigenvalue)
    variance_fraction: np.ndarray
    columns: tuple  # retained Attributes, row order of loadings
    dropped_columns: tuple

    @property
    def p(self) -> int:
        return len(self.columns)


def factor_analysis(m: OccurrenceMatrix) -> FactorResult:
    """PCA of the Pearson correlation matrix of the occurrence columns, unrotated.

    Constant columns have no defined correlation and are dropped with a
    warning.  Each loading column is signed so that its largest-magnitude
    entry is nonnegative.
    """
    x = np.asarray(m.cells, dtype=np.float64)
    if x.shape[0] < 2:
        raise DegenerateMatrix("factor analysis needs at least 2 documents, got %d" % x.shape[0])
    sd = x.std(axis=0)
    constant = sd == 0
    dropped = tuple(a for a, c in zip(m.cols, constant) if c)
    if dropped:
        log.warning("dropping %d constant column(s): %s",
                    len(dropped), ", ".join(a.key for a in dropped))
    keep = ~constant
    if keep.sum() < 2:
        raise DegenerateMatrix("fewer than 2 non-constant columns remain")

    z = (x[:, keep] - x[:, keep].mean(axis=0)) / sd[keep]
    r = (z.T @ z) / z.shape[0]
    r = (r + r.T) / 2
    np.fill_diagonal(r, 1.0)

    vals, vecs = np.linalg.eigh(r)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    if vals[-1] < -NEG_EIG_TOL:
        raise DegenerateMatrix("correlation matrix has eigenvalue %.3g" % vals[-1])
    vals = np.clip(vals, 0.0, None)

    pivot = np.abs(vecs).argmax(axis=0)
    signs = np.where(vecs[pivot, np.arange(vecs.shape[1])] < 0, -1.0, 1.0)
    vecs = vecs * signs

    p = r.shape[0]
    return FactorResult(
        eigenvalues=vals,
        eigenvectors=vecs,
        loadings=vecs * np.sqrt(vals),
        variance_fraction=vals / p,
        columns=tuple(a for a, k in zip(m.cols, keep) if k),
        dropped_columns=dropped,
    )


def variance_explained(fr: FactorResult, k: int) -> float:
    """Cumulative share of total variance carried by the first k factors."""
    if not 1 <= k <= len(fr.eigenvalues):
        raise BadK("k must lie in [1, %d], got %r" % (len(fr.eigenvalues), k))
    return float(np.sum(fr.eigenvalues[:k]) / fr.p)


def factor_report_csv(fr: FactorResult, k: int) -> str:
    """Loadings of the first k factors; header cells carry each factor's variance fraction."""
    variance_explained(fr, k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "class"] + ["F%d (%.6f)" % (i + 1, fr.variance_fraction[i]) for i in range(k)])
    for a, row in zip(fr.columns, fr.loadings):
        w.writerow([a.label, a.cls.value] + ["%.6f" % v for v in row[:k]])
    return buf.getvalue()


def connected_components(g: HeteroGraph) -> list[list[int]]:
    """Node-id lists, largest component first, ties broken by smallest member id.

    Members of each component are sorted ascending.
    """
    adj = g.adjacency()
    seen = [False] * g.n
    comps: list[list[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps
