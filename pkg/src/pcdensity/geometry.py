"""Planar predicates for expansion-factor proximity regions on triangles.

Everything is expressed through barycentric coordinates: vertex regions are
argmax cells of the barycentric vector (the centroid-to-edge-midpoint segments
are exactly the loci ``b_i == b_j``), and membership of ``y`` in the proximity
region of ``x`` with expansion factor ``r`` reduces to the closed inequality

    1 - b_j(y) <= r * (1 - b_j(x)),      j = vertex region of x.

Because barycentric coordinates are preserved by every affine bijection, all
predicates here are affine invariant, which is what makes the arc statistics
independent of the triangle's shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BOUNDARY_TOL",
    "AffineMap",
    "Triangle",
    "barycentric",
    "gamma1_contains",
    "proximity_contains",
    "standard_triangle",
    "to_standard_map",
    "vertex_region",
]

# Points within this barycentric distance of the boundary count as inside;
# boundary events have probability zero under every hypothesis considered.
BOUNDARY_TOL = 1e-12

# Tolerance for the proximity inequality and for exact-point comparisons.
PROXIMITY_TOL = 1e-12
COORD_TOL = 1e-12

_STANDARD_VERTICES = np.array(
    [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]
)


@dataclass(frozen=True)
class Triangle:
    """A non-degenerate planar triangle with cached derived quantities."""

    vertices: np.ndarray
    signed_area: float = field(init=False)
    centroid: np.ndarray = field(init=False)
    midpoints: np.ndarray = field(init=False)

    def __init__(self, vertices) -> None:
        v = np.asarray(vertices, dtype=float)
        if v.shape != (3, 2):
            raise ValueError(f"triangle needs 3 planar vertices, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("triangle vertices must be finite")
        area = 0.5 * float(np.cross(v[1] - v[0], v[2] - v[0]))
        scale = float(np.abs(v - v.mean(axis=0)).max()) or 1.0
        if abs(area) <= 1e-14 * scale * scale:
            raise ValueError("degenerate triangle: vertices are (near) collinear")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "signed_area", area)
        object.__setattr__(self, "centroid", v.mean(axis=0))
        # midpoints[j] is the midpoint of the edge opposite vertex j
        mids = 0.5 * (v[[1, 2, 0]] + v[[2, 0, 1]])
        mids.setflags(write=False)
        object.__setattr__(self, "midpoints", mids)

    @property
    def area(self) -> float:
        return abs(self.signed_area)


def standard_triangle() -> Triangle:
    """The unit equilateral triangle (0,0), (1,0), (1/2, sqrt(3)/2)."""
    return Triangle(_STANDARD_VERTICES)


def barycentric(tri: Triangle, p) -> np.ndarray:
    """Barycentric coordinates of ``p`` (shape (2,) or (N,2)) in ``tri``.

    The weights sum to one and reproduce ``p`` as an affine combination of the
    vertices; points inside the triangle have all weights >= -BOUNDARY_TOL.
    """
    p = np.asarray(p, dtype=float)
    v = tri.vertices
    d = 2.0 * tri.signed_area
    rel = p - v[0]
    e1 = v[1] - v[0]
    e2 = v[2] - v[0]
    b1 = (rel[..., 0] * e2[1] - rel[..., 1] * e2[0]) / d
    b2 = (rel[..., 1] * e1[0] - rel[..., 0] * e1[1]) / d
    return np.stack([1.0 - b1 - b2, b1, b2], axis=-1)


def _require_inside(b: np.ndarray, what: str) -> None:
    if np.min(b) < -BOUNDARY_TOL:
        raise ValueError(f"{what} lies outside the triangle (barycentric {b})")


def vertex_region(tri: Triangle, p) -> int:
    """Index (0, 1 or 2) of the vertex whose region contains ``p``.

    The vertex regions are the argmax cells of the barycentric coordinates.
    Boundary ties are broken deterministically toward the lowest index, which
    is a probability-zero event under every continuous sampling model.
    """
    b = barycentric(tri, p)
    if b.ndim != 1:
        raise ValueError("vertex_region expects a single point")
    _require_inside(b, "point")
    return int(np.argmax(b))


def proximity_contains(tri: Triangle, r: float, x, y) -> bool:
    """Is ``y`` inside the r-factor proximity region of ``x``?

    The proximity region is the similar triangle anchored at the vertex whose
    region contains ``x``, scaled by ``r`` toward the opposite edge and clipped
    to the triangle.  ``r`` may be ``math.inf`` (region = whole triangle).  If
    ``x`` coincides with a triangle vertex the region degenerates to {x}.
    """
    if r != math.inf and r < 1.0:
        raise ValueError(f"expansion factor must be >= 1, got {r}")
    bx = barycentric(tri, x)
    by = barycentric(tri, y)
    _require_inside(bx, "x")
    _require_inside(by, "y")
    j = int(np.argmax(bx))
    if bx[j] >= 1.0 - COORD_TOL:
        # x sits on a vertex of the triangle: region is the single point {x}
        return bool(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float))) <= COORD_TOL)
    if r == math.inf:
        return True
    return (1.0 - by[j]) <= r * (1.0 - bx[j]) + PROXIMITY_TOL


def gamma1_contains(tri: Triangle, r: float, x, z) -> bool:
    """Is ``z`` in the Gamma1-region of ``x``, i.e. does N^r(z) cover ``x``?"""
    return proximity_contains(tri, r, z, x)


@dataclass(frozen=True)
class AffineMap:
    """Invertible planar affine map ``p -> linear @ p + offset``."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self) -> None:
        lin = np.asarray(self.linear, dtype=float).reshape(2, 2)
        off = np.asarray(self.offset, dtype=float).reshape(2)
        if abs(np.linalg.det(lin)) <= 1e-300:
            raise ValueError("affine map is singular")
        lin.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p @ self.linear.T + self.offset

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.offset)


def to_standard_map(tri: Triangle) -> AffineMap:
    """Affine map sending ``tri``'s vertices onto the standard equilateral ones.

    Vertex order is preserved, so the map carries barycentric coordinates (and
    with them vertex regions, parallels to edges, and proximity membership)
    over unchanged.
    """
    src = tri.vertices
    dst = _STANDARD_VERTICES
    # solve linear @ (src_i - src_0) = dst_i - dst_0 for i = 1, 2
    s = np.column_stack([src[1] - src[0], src[2] - src[0]])
    t = np.column_stack([dst[1] - dst[0], dst[2] - dst[0]])
    lin = t @ np.linalg.inv(s)
    return AffineMap(lin, dst[0] - lin @ src[0])
