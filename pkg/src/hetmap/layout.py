"""
Kamada-Kawai spring embedding.

Every pair of nodes in a connected component is joined by a spring whose
rest length is proportional to the hop distance between them:

    l_ij = L * d_ij,   L = side / max(d_ij),   k_ij = K / d_ij**2
    E    = sum_{i<j} 0.5 * k_ij * (|p_i - p_j| - l_ij)**2

The energy is minimised one node at a time: the node with the largest
gradient norm is moved by 2x2 Newton-Raphson steps until its own gradient
is below tolerance.  Components are laid out separately and then packed
onto shelves so their bounding boxes never overlap.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .factors import connected_components
from .simgraph import HeteroGraph

log = logging.getLogger(__name__)

DESCENT_SLACK = 1e-9
MAX_HALVINGS = 20
COINCIDENT_JITTER = 1e-6
ANGLE_JITTER = 0.05  # fraction of the angular spacing between circle neighbours


@dataclass(frozen=True)
class LayoutParams:
    side: float = 1.0
    spring_k: float = 1.0
    tol: float = 1e-4
    max_outer: Optional[int] = None  # default 1000 * n per component
    max_inner: int = 50
    seed: int = 0

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")
        if not self.spring_k > 0:
            raise ValueError("spring_k must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_inner < 1 or (self.max_outer is not None and self.max_outer < 1):
            raise ValueError("iteration caps must be >= 1")

    def outer_cap(self, n: int) -> int:
        return self.max_outer if self.max_outer is not None else 1000 * n


@dataclass
class Layout:
    positions: np.ndarray  # n x 2, indexed by node id
    energy: float
    iterations: int
    converged: bool
    components: list[list[int]] = field(default_factory=list)
    fallback_steps: int = 0


def hop_distances(g: HeteroGraph) -> list[tuple[list[int], np.ndarray]]:
    """BFS hop counts within each connected component.

    Returns ``(node_ids, D)`` per component, where ``D[a, b]`` is the
    distance between ``node_ids[a]`` and ``node_ids[b]``.
    """
    adj = g.adjacency()
    out = []
    for comp in connected_components(g):
        local = {u: a for a, u in enumerate(comp)}
        dist = np.zeros((len(comp), len(comp)))
        for a, src in enumerate(comp):
            seen = {src: 0}
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v in adj[u]:
                    if v not in seen:
                        seen[v] = seen[u] + 1
                        queue.append(v)
            for v, d in seen.items():
                dist[a, local[v]] = d
        out.append((comp, dist))
    return out


def spring_model(dist: np.ndarray, side: float = 1.0, spring_k: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Rest lengths and stiffnesses for a connected component's distance matrix."""
    n = dist.shape[0]
    if n < 2:
        return np.zeros((n, n)), np.zeros((n, n))
    unit = side / dist.max()
    ell = unit * dist
    with np.errstate(divide="ignore"):
        k = np.where(dist > 0, spring_k / np.where(dist > 0, dist, 1.0) ** 2, 0.0)
    return ell, k


def kk_energy(pos: np.ndarray, ell: np.ndarray, k: np.ndarray) -> float:
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(len(pos), k=1)
    return float(0.5 * np.sum(k[iu] * (r[iu] - ell[iu]) ** 2))


def kk_gradient(pos: np.ndarray, ell: np.ndarray, k: np.ndarray) -> np.ndarray:
    """dE/dp for every node, shape n x 2."""
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(r, 1.0)
    coef = k * (1.0 - ell / r)
    np.fill_diagonal(coef, 0.0)
    return np.einsum("ij,ijc->ic", coef, diff)


class _Relaxer:
    """Node-by-node Newton relaxation of one connected component.

    Per-node quantities are computed over full rows; the self term drops
    out because k[m, m] == 0.  Coordinates live in two contiguous arrays.
    """

    def __init__(self, pos: np.ndarray, ell: np.ndarray, k: np.ndarray, params: LayoutParams):
        self.x = np.ascontiguousarray(pos[:, 0], dtype=float)
        self.y = np.ascontiguousarray(pos[:, 1], dtype=float)
        self.ell = ell
        self.k = k
        self.p = params
        self.n = len(pos)
        self.fallbacks = 0

    @property
    def pos(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    def _local_energy(self, m: int, px: float, py: float) -> float:
        r = np.hypot(px - self.x, py - self.y)
        r -= self.ell[m]
        return 0.5 * float(np.dot(self.k[m], r * r))

    def _derivatives(self, m: int):
        dx = self.x[m] - self.x
        dy = self.y[m] - self.y
        r = np.hypot(dx, dy)
        r[m] = 1.0
        np.maximum(r, 1e-300, out=r)
        k = self.k[m]
        kl = k * self.ell[m] / r  # k * l / r
        gx = float(np.dot(k, dx) - np.dot(kl, dx))
        gy = float(np.dot(k, dy) - np.dot(kl, dy))
        klr3 = kl / (r * r)
        ksum = float(k.sum())
        hxx = ksum - float(np.dot(klr3, dy * dy))
        hxy = float(np.dot(klr3, dx * dy))
        hyy = ksum - float(np.dot(klr3, dx * dx))
        return gx, gy, hxx, hxy, hyy

    def _contrib(self, m: int, px: float, py: float) -> tuple[np.ndarray, np.ndarray]:
        """Term that node m at (px, py) adds to every node's gradient (row m is zero)."""
        dx = self.x - px
        dy = self.y - py
        r = np.hypot(dx, dy)
        r[m] = 1.0
        np.maximum(r, 1e-300, out=r)
        coef = self.k[m] * (1.0 - self.ell[m] / r)
        return coef * dx, coef * dy

    def _step(self, m: int, derivs) -> bool:
        """One inner step on node m; False when no acceptable move exists."""
        px, py = float(self.x[m]), float(self.y[m])
        gx, gy, hxx, hxy, hyy = derivs
        e0 = self._local_energy(m, px, py)

        det = hxx * hyy - hxy * hxy
        scale = hxx * hxx + hyy * hyy + 2 * hxy * hxy
        if hxx > 0 and hyy > 0 and det > 1e-12 * scale:
            ddx = (hxy * gy - hyy * gx) / det
            ddy = (hxy * gx - hxx * gy) / det
            t = 1.0
            for _ in range(MAX_HALVINGS + 1):
                cx, cy = px + t * ddx, py + t * ddy
                if self._local_energy(m, cx, cy) <= e0 + DESCENT_SLACK:
                    self.x[m], self.y[m] = cx, cy
                    return True
                t *= 0.5

        # indefinite or singular Hessian, or a Newton step that does not descend
        self.fallbacks += 1
        t = 1.0 / max(float(self.k[m].sum()), 1e-300)
        for _ in range(MAX_HALVINGS + 1):
            cx, cy = px - t * gx, py - t * gy
            if self._local_energy(m, cx, cy) < e0:
                self.x[m], self.y[m] = cx, cy
                return True
            t *= 0.5
        return False

    def _full_gradient(self) -> tuple[np.ndarray, np.ndarray]:
        g = kk_gradient(self.pos, self.ell, self.k)
        return np.ascontiguousarray(g[:, 0]), np.ascontiguousarray(g[:, 1])

    def run(self) -> tuple[int, bool]:
        tol = self.p.tol
        cap = self.p.outer_cap(self.n)
        gxs, gys = self._full_gradient()
        norms = np.hypot(gxs, gys)
        iterations = 0
        stalled: set[int] = set()
        while True:
            m = int(np.argmax(norms))
            if norms[m] < tol or len(stalled) == self.n:
                # certify against a fresh gradient, free of incremental drift
                gxs, gys = self._full_gradient()
                norms = np.hypot(gxs, gys)
                if norms.max() < tol:
                    return iterations, True
                if len(stalled) == self.n:
                    return iterations, False
                m = int(np.argmax(norms))
            if iterations >= cap:
                return iterations, False
            iterations += 1

            ox, oy = float(self.x[m]), float(self.y[m])
            moved = False
            derivs = self._derivatives(m)
            for _ in range(self.p.max_inner):
                if not self._step(m, derivs):
                    break
                moved = True
                derivs = self._derivatives(m)
                if math.hypot(derivs[0], derivs[1]) < tol:
                    break
            if not moved:
                stalled.add(m)
                norms[m] = -1.0  # let the next-worst node go first
                continue
            stalled.clear()
            nx_, ny_ = self._contrib(m, float(self.x[m]), float(self.y[m]))
            ox_, oy_ = self._contrib(m, ox, oy)
            gxs += nx_ - ox_
            gys += ny_ - oy_
            gxs[m], gys[m] = derivs[0], derivs[1]
            norms = np.hypot(gxs, gys)


def initial_positions(n: int, side: float, rng: np.random.Generator) -> np.ndarray:
    """Nodes on a circle of radius side/2, in index order, with small angular jitter."""
    if n == 1:
        return np.zeros((1, 2))
    spacing = 2 * math.pi / n
    angles = spacing * np.arange(n) + rng.uniform(-ANGLE_JITTER, ANGLE_JITTER, n) * spacing
    pos = 0.5 * side * np.column_stack([np.cos(angles), np.sin(angles)])
    return _separate_coincident(pos, side, rng)


def _separate_coincident(pos: np.ndarray, side: float, rng: np.random.Generator) -> np.ndarray:
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(r, np.inf)
    clash = np.unique(np.nonzero(r == 0)[0])
    if len(clash):
        pos = pos.copy()
        pos[clash] += rng.uniform(-1, 1, (len(clash), 2)) * COINCIDENT_JITTER * side
    return pos


def layout_component(dist: np.ndarray, params: LayoutParams, rng: np.random.Generator,
                     pos: Optional[np.ndarray] = None):
    """Relax one connected component; returns (positions, energy, iterations, converged, fallbacks)."""
    n = dist.shape[0]
    if n == 1:
        return np.zeros((1, 2)), 0.0, 0, True, 0
    ell, k = spring_model(dist, params.side, params.spring_k)
    if pos is None:
        pos = initial_positions(n, params.side, rng)
    else:
        pos = _separate_coincident(np.array(pos, dtype=float), params.side, rng)
    relaxer = _Relaxer(pos, ell, k, params)
    iterations, converged = relaxer.run()
    return relaxer.pos, kk_energy(relaxer.pos, ell, k), iterations, converged, relaxer.fallbacks


def kk_layout(g: HeteroGraph, params: Optional[LayoutParams] = None) -> Layout:
    """Lay out every connected component with Kamada-Kawai, then pack them."""
    params = params or LayoutParams()
    if g.n < 1:
        raise ValueError("cannot lay out an empty graph")
    parts, comps = [], []
    energy, iterations, fallbacks, converged = 0.0, 0, 0, True
    for ci, (comp, dist) in enumerate(hop_distances(g)):
        rng = np.random.default_rng([params.seed, ci])
        pos, e, it, ok, fb = layout_component(dist, params, rng)
        if not ok:
            log.warning("component %d (%d nodes) did not converge after %d iterations",
                        ci, len(comp), it)
        parts.append(pos)
        comps.append(comp)
        energy += e
        iterations += it
        fallbacks += fb
        converged &= ok
    packed = pack_components(parts, params.side)
    positions = np.zeros((g.n, 2))
    for comp, pos in zip(comps, packed):
        positions[comp] = pos
    return Layout(positions, energy, iterations, converged, comps, fallbacks)


def bounding_box(pos: np.ndarray) -> tuple[float, float, float, float]:
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def pack_components(parts: list[np.ndarray], side: float = 1.0) -> list[np.ndarray]:
    """Translate component layouts onto left-to-right shelves.

    Components are placed largest bounding box first, separated by
    ``0.25 * side``; a shelf wraps once it would exceed
    ``2 * side * sqrt(len(parts))``.  A singleton gets a padding-sized cell
    and sits at its centre.  Returned in input order.
    """
    if not parts:
        return []
    pad = 0.25 * side
    wrap = 2 * side * math.sqrt(len(parts))
    boxes = [bounding_box(p) for p in parts]
    cells = [(max(b[2] - b[0], pad if len(p) == 1 else 0.0),
              max(b[3] - b[1], pad if len(p) == 1 else 0.0)) for p, b in zip(parts, boxes)]
    order = sorted(range(len(parts)),
                   key=lambda i: -(boxes[i][2] - boxes[i][0]) * (boxes[i][3] - boxes[i][1]))
    out: list[Optional[np.ndarray]] = [None] * len(parts)
    x = y = shelf_h = 0.0
    for i in order:
        w, h = cells[i]
        if x > 0 and x + w > wrap:
            y += shelf_h + pad
            x = shelf_h = 0.0
        bx0, by0, bx1, by1 = boxes[i]
        # centre the bounding box inside its cell
        off = np.array([x + (w - (bx1 - bx0)) / 2 - bx0, y + (h - (by1 - by0)) / 2 - by0])
        out[i] = parts[i] + off
        x += w + pad
        shelf_h = max(shelf_h, h)
    return out
