"""Delaunay triangulation of the anchor set and area weights for the test.

Incremental Bowyer-Watson with a super-triangle. Candidate cavity triangles
are found with a vectorized circumcircle test over the alive set, which keeps
anchor sets up to ~10^4 points comfortable; co-circular degeneracies are
resolved by insertion order, which leaves the empty-circumcircle property
intact up to ``INCIRCLE_TOL``. Output is deterministic for fixed input order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import BOUNDARY_TOL, Triangle, barycentric

__all__ = ["INCIRCLE_TOL", "Triangulation", "triangulate"]

INCIRCLE_TOL = 1e-9
DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class Triangulation:
    """Delaunay triangles of an anchor set with their area weights."""

    points: np.ndarray
    triangles: tuple[tuple[int, int, int], ...]
    weights: np.ndarray = field(init=False)
    hull_area: float = field(init=False)
    cells: tuple[Triangle, ...] = field(init=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        cells = tuple(Triangle(pts[list(t)]) for t in self.triangles)
        areas = np.array([c.area for c in cells])
        hull_area = float(areas.sum())
        w = areas / hull_area
        w.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "hull_area", hull_area)

    def __len__(self) -> int:
        return len(self.triangles)

    def locate(self, p) -> int | None:
        """Index of the first triangle containing ``p``, None outside the hull.

        Shared-boundary points resolve to the lowest triangle index.
        """
        idx = self.locate_many(np.asarray(p, dtype=float)[None, :])[0]
        return None if idx < 0 else int(idx)

    def locate_many(self, pts) -> np.ndarray:
        """Vectorized locate: array of triangle indices, -1 for outside."""
        pts = np.asarray(pts, dtype=float)
        out = np.full(len(pts), -1, dtype=np.int64)
        # descending so the lowest containing index is written last
        for j in range(len(self.cells) - 1, -1, -1):
            b = barycentric(self.cells[j], pts)
            out[b.min(axis=-1) >= -BOUNDARY_TOL] = j
        return out


def _circumcircles(verts: np.ndarray, tris: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Centers and squared radii for an (m,3) index array of CCW triangles."""
    a = verts[tris[:, 0]]
    b = verts[tris[:, 1]]
    c = verts[tris[:, 2]]
    ab = b - a
    ac = c - a
    d = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    ab2 = (ab * ab).sum(axis=1)
    ac2 = (ac * ac).sum(axis=1)
    ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2) / d
    uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2) / d
    centers = a + np.stack([ux, uy], axis=1)
    r2 = ux * ux + uy * uy
    return centers, r2


def triangulate(points) -> Triangulation:
    """Delaunay triangulation of ``points`` ((n,2) array-like, n >= 3).

    Raises ValueError for fewer than three points, duplicate points, or an
    all-collinear configuration.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"anchor points must be an (n, 2) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("anchor points must be finite")
    n = len(pts)
    if n < 3:
        raise ValueError(f"need at least 3 anchor points, got {n}")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    gaps = np.abs(np.diff(pts[order], axis=0)).max(axis=1)
    for k in np.nonzero(gaps <= DUPLICATE_TOL)[0]:
        i, j = sorted((int(order[k]), int(order[k + 1])))
        raise ValueError(f"duplicate anchor points at indices {i} and {j}")

    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    mid = (lo + hi) / 2.0
    big = 64.0 * span
    sup = np.array(
        [
            [mid[0] - 2.0 * big, mid[1] - big],
            [mid[0] + 2.0 * big, mid[1] - big],
            [mid[0], mid[1] + 2.0 * big],
        ]
    )
    verts = np.vstack([pts, sup])
    tol = INCIRCLE_TOL * span * span

    # growing arrays of triangles; dead ones are masked out, never reused
    cap = 16 * n + 16
    tri_idx = np.zeros((cap, 3), dtype=np.int64)
    centers = np.zeros((cap, 2))
    rad2 = np.zeros(cap)
    alive = np.zeros(cap, dtype=bool)

    def push(ts: list[tuple[int, int, int]], top: int) -> int:
        nonlocal cap, tri_idx, centers, rad2, alive
        m = len(ts)
        if top + m > cap:
            cap = max(2 * cap, top + m)
            tri_idx = np.resize(tri_idx, (cap, 3))
            centers = np.resize(centers, (cap, 2))
            rad2 = np.resize(rad2, cap)
            alive = np.resize(alive, cap)
            alive[top:] = False
        arr = np.array(ts, dtype=np.int64)
        tri_idx[top : top + m] = arr
        c, r2 = _circumcircles(verts, arr)
        centers[top : top + m] = c
        rad2[top : top + m] = r2
        alive[top : top + m] = True
        return top + m

    top = push([(n, n + 1, n + 2)], 0)

    for i in range(n):
        p = verts[i]
        d2 = ((centers[:top] - p) ** 2).sum(axis=1)
        bad = np.nonzero(alive[:top] & (d2 < rad2[:top] - tol))[0]
        if len(bad) == 0:
            # tolerance pushed p onto/just outside every circumcircle; use the
            # containing triangle so insertion never stalls
            for k in np.nonzero(alive[:top])[0]:
                b = barycentric(Triangle(verts[tri_idx[k]]), p)
                if b.min() >= -1e-9:
                    bad = np.array([k])
                    break
        # cavity boundary: directed edges of bad triangles appearing once
        edges: dict[tuple[int, int], tuple[int, int]] = {}
        for k in bad:
            t = tri_idx[k]
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (min(e), max(e))
                if key in edges:
                    edges.pop(key)
                else:
                    edges[key] = (int(e[0]), int(e[1]))
        alive[bad] = False
        top = push([(e0, e1, i) for e0, e1 in edges.values()], top)

    out = []
    for k in np.nonzero(alive[:top])[0]:
        t = tuple(int(v) for v in tri_idx[k])
        if max(t) < n:
            a, b, c = verts[t[0]], verts[t[1]], verts[t[2]]
            if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
                t = (t[0], t[2], t[1])
            s = int(np.argmin(t))
            out.append((t[s], t[(s + 1) % 3], t[(s + 2) % 3]))
    if not out:
        raise ValueError("anchor points are collinear; no triangulation exists")
    out.sort()
    return Triangulation(pts, tuple(out))
