"""Construction of the data-random proximity catch digraph and its densities.

Only arc *counts* are kept: every statistic of interest (relative density,
adjusted density, the weighted per-triangle U-statistic) is a function of the
per-triangle pair ``(n_j, arcs_j)``.  Arcs never cross triangles because each
proximity region is a subset of the triangle containing its base point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation, triangulate
from .geometry import BOUNDARY_TOL, COORD_TOL, PROXIMITY_TOL, Triangle, barycentric

__all__ = [
    "PCDigraph",
    "adjusted_density",
    "arcs_in_triangle",
    "build_digraph",
    "relative_density",
    "weighted_U",
]


@dataclass(frozen=True)
class PCDigraph:
    """Arc counts of a proximity catch digraph, per triangle and total."""

    n: int
    per_triangle: tuple[tuple[int, int], ...]  # (n_j, arcs_j)
    r: float
    n_dropped: int = 0

    @property
    def total_arcs(self) -> int:
        return sum(a for _, a in self.per_triangle)


def arcs_in_triangle(tri: Triangle, pts: np.ndarray, r: float) -> int:
    """Arc count of the digraph on ``pts`` inside a single triangle.

    Vectorized over point pairs: within each vertex region the arc condition
    is a one-dimensional threshold on 1 - b_j, so sorting plus binary search
    replaces the quadratic pair loop.
    """
    m = len(pts)
    if m < 2:
        return 0
    b = barycentric(tri, pts)
    if b.min() < -BOUNDARY_TOL:
        raise ValueError("point outside its triangle")
    at_vertex = b.max(axis=1) >= 1.0 - COORD_TOL
    regions = b.argmax(axis=1)
    arcs = 0
    if np.any(at_vertex):
        # proximity region of a point sitting on an anchor vertex is just
        # itself: it emits arcs only to exact duplicates
        for i in np.nonzero(at_vertex)[0]:
            same = np.abs(pts - pts[i]).max(axis=1) <= COORD_TOL
            arcs += int(same.sum()) - 1
    if r == math.inf:
        free = ~at_vertex
        # complete digraph from every non-vertex source
        return arcs + int(free.sum()) * (m - 1)
    for j in range(3):
        src = (~at_vertex) & (regions == j)
        if not np.any(src):
            continue
        s = np.sort(1.0 - b[:, j])
        thr = r * (1.0 - b[src, j]) + PROXIMITY_TOL
        # every source reaches itself, so subtract the self-arc
        arcs += int(np.searchsorted(s, thr, side="right").sum()) - int(src.sum())
    return arcs


def build_digraph(tr: Triangulation | Triangle, X, r: float, outside: str = "reject") -> PCDigraph:
    """Build the digraph of ``X`` over the triangles of ``tr``.

    ``outside`` controls points falling outside the hull: "reject" raises a
    ValueError naming the first offending index, "drop" excludes them and
    records the count.
    """
    if r != math.inf and r < 1.0:
        raise ValueError(f"expansion factor must be >= 1, got {r}")
    if outside not in ("reject", "drop"):
        raise ValueError(f"outside policy must be 'reject' or 'drop', got {outside!r}")
    if isinstance(tr, Triangle):
        tr = Triangulation(tr.vertices, ((0, 1, 2),))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    loc = tr.locate_many(X)
    out_mask = loc < 0
    if np.any(out_mask):
        if outside == "reject":
            bad = int(np.nonzero(out_mask)[0][0])
            raise ValueError(
                f"point {bad} at {tuple(X[bad])} lies outside the convex hull "
                "(use outside='drop' to exclude such points)"
            )
        X = X[~out_mask]
        loc = loc[~out_mask]
    per = []
    for j, cell in enumerate(tr.cells):
        pts = X[loc == j]
        per.append((len(pts), arcs_in_triangle(cell, pts, r)))
    return PCDigraph(
        n=len(X), per_triangle=tuple(per), r=r, n_dropped=int(out_mask.sum())
    )


def relative_density(d: PCDigraph) -> float:
    """Arc count over n(n-1), the arc count of the complete digraph."""
    if d.n < 2:
        raise ValueError(f"relative density needs n >= 2, got n={d.n}")
    return d.total_arcs / (d.n * (d.n - 1))


def adjusted_density(d: PCDigraph) -> float:
    """Arc count over the maximum attainable given the per-triangle counts."""
    n_t = sum(nj * (nj - 1) for nj, _ in d.per_triangle)
    if n_t == 0:
        raise ValueError("adjusted density undefined: every triangle holds <= 1 point")
    return d.total_arcs / n_t


def weighted_U(d: PCDigraph, tr: Triangulation) -> float:
    """Sum of w_j^2 * (per-triangle density); triangles with n_j < 2 contribute 0."""
    if len(tr) != len(d.per_triangle):
        raise ValueError("triangulation does not match the digraph")
    tot = 0.0
    any_pair = False
    for w, (nj, aj) in zip(tr.weights, d.per_triangle):
        if nj >= 2:
            any_pair = True
            tot += w * w * aj / (nj * (nj - 1))
    if not any_pair:
        raise ValueError("weighted U undefined: every triangle holds <= 1 point")
    return tot
