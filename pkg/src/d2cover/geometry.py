"""Planar convex geometry: polygons, half-plane clipping, bounded Voronoi cells.

Everything here works in plain double precision with a single absolute
tolerance (``TOL``); domains are assumed to be of order one in size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TOL = 1e-12

# edge label used for pieces of the outer domain boundary
BOUNDARY = -1


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DegenerateBisectorError(GeometryError):
    pass


class DuplicateSiteError(GeometryError):
    pass


class OutOfDomainError(GeometryError):
    pass


class ConvexPolygon:
    """Counter-clockwise convex polygon.

    ``labels[i]`` tags the edge running from vertex ``i`` to vertex ``i+1``:
    ``BOUNDARY`` for edges inherited from the domain, otherwise the index of the
    site whose bisector produced the edge.
    """

    __slots__ = ("vertices", "labels")

    def __init__(self, vertices, labels=None, *, check=True):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if labels is None:
            labels = [BOUNDARY] * len(v)
        if check:
            if len(v) < 3:
                raise GeometryError("a polygon needs at least 3 vertices")
            if not np.all(np.isfinite(v)):
                raise GeometryError("non-finite vertex coordinates")
            area = _signed_area(v)
            if area < 0:
                v = v[::-1].copy()
                labels = list(labels[-2::-1]) + [labels[-1]] if len(labels) > 1 else list(labels)
                area = -area
            if area <= TOL:
                raise GeometryError("polygon has no area")
            v, labels = _merge_close(v, list(labels))
            if len(v) < 3 or not _is_convex(v):
                raise GeometryError("polygon is not convex")
        self.vertices = v
        self.labels = list(labels)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.vertices)
        return f"ConvexPolygon([{pts}])"

    @classmethod
    def rectangle(cls, x0, y0, x1, y1):
        return cls([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @classmethod
    def unit_square(cls):
        return cls.rectangle(0.0, 0.0, 1.0, 1.0)

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def bounds(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def contains(self, points, tol=1e-9):
        """Vectorised closed point-in-polygon test."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        e = b - a
        # cross(e, p - a) >= 0 for every edge when p is inside a CCW polygon
        cross = e[None, :, 0] * (p[:, None, 1] - a[None, :, 1]) - e[None, :, 1] * (
            p[:, None, 0] - a[None, :, 0]
        )
        length = np.hypot(e[:, 0], e[:, 1])
        inside = np.all(cross >= -tol * length[None, :], axis=1)
        return inside if np.ndim(points) > 1 else bool(inside[0])

    def edges(self):
        """Yield ``(start, end, label)`` for each edge."""
        v = self.vertices
        n = len(v)
        for i in range(n):
            yield v[i], v[(i + 1) % n], self.labels[i]


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1]) + x[-1] * y[0] - x[0] * y[-1])


def _area_list(pts):
    s = 0.0
    x0, y0 = pts[-1]
    for x1, y1 in pts:
        s += x0 * y1 - x1 * y0
        x0, y0 = x1, y1
    return 0.5 * s


def _merge_close(v, labels):
    """Drop vertices within TOL of their predecessor and collinear middle vertices."""
    pts, labs = _merge_close_list([tuple(p) for p in np.asarray(v).tolist()], list(labels))
    return np.array(pts, dtype=float).reshape(-1, 2), labs


def _merge_close_list(pts, labs):
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            a = pts[i - 1]
            b = pts[i]
            if abs(a[0] - b[0]) <= TOL and abs(a[1] - b[1]) <= TOL:
                # vertex b collapses onto a; a takes over b's outgoing label
                labs[i - 1] = labs[i]
                del pts[i], labs[i]
                changed = True
                break
            c = pts[(i + 1) % n]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cross) <= TOL * math.hypot(c[0] - a[0], c[1] - a[1]):
                # b sits on segment a-c: the two edges merge, keep the longer's label
                la = math.hypot(b[0] - a[0], b[1] - a[1])
                lc = math.hypot(c[0] - b[0], c[1] - b[1])
                labs[i - 1] = labs[i - 1] if la >= lc else labs[i]
                del pts[i], labs[i]
                changed = True
                break
    return pts, labs


def _is_convex(v):
    a = v
    b = np.roll(v, -1, axis=0)
    c = np.roll(v, -2, axis=0)
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - b[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - b[:, 0])
    return bool(np.all(cross >= -TOL))


def _clip_lists(verts, labs, nx, ny, offset, label):
    """Half-plane clip on plain vertex/label lists.

    Returns the inputs unchanged (same objects) when nothing is cut off, and
    ``None`` when nothing with positive area remains.
    """
    s = [nx * x + ny * y - offset for x, y in verts]
    if max(s) <= TOL:
        return verts, labs
    if min(s) >= -TOL:
        return None
    out = []
    out_labels = []
    n = len(verts)
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        si, sj = s[i], s[j]
        a_in = si <= TOL
        b_in = sj <= TOL
        if a_in:
            out.append(verts[i])
            out_labels.append(labs[i])
        if a_in != b_in and abs(si) > TOL and abs(sj) > TOL:
            t = si / (si - sj)
            xa, ya = verts[i]
            xb, yb = verts[j]
            out.append((xa + t * (xb - xa), ya + t * (yb - ya)))
            out_labels.append(label if a_in else labs[i])
        elif a_in and not b_in:
            # vertex i lies on the line; the outgoing edge now runs along it
            out_labels[-1] = label
    if len(out) < 3:
        return None
    out, out_labels = _merge_close_list(out, out_labels)
    if len(out) < 3 or _area_list(out) <= TOL * TOL:
        return None
    return out, out_labels


def clip_line(poly: ConvexPolygon | None, nx, ny, offset, label=BOUNDARY):
    """Intersect ``poly`` with the half-plane ``nx*x + ny*y <= offset``.

    Returns ``None`` when the intersection has no area. New edges lying on the
    clipping line get ``label``.
    """
    if poly is None:
        return None
    verts = [tuple(v) for v in poly.vertices.tolist()]
    res = _clip_lists(verts, poly.labels, nx, ny, offset, label)
    if res is None:
        return None
    if res[0] is verts:
        return poly
    return ConvexPolygon(res[0], res[1], check=False)


def _bisector(a, b):
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    nx, ny = bx - ax, by - ay
    if math.hypot(nx, ny) <= TOL:
        raise DegenerateBisectorError(f"bisector of coincident points {a!r}, {b!r}")
    # |q-a|^2 <= |q-b|^2  <=>  q.(b-a) <= (|b|^2 - |a|^2) / 2
    return nx, ny, 0.5 * (bx * bx + by * by - ax * ax - ay * ay)


def clip_halfplane(poly: ConvexPolygon | None, a, b, label=BOUNDARY):
    """Keep the part of ``poly`` at least as close to ``a`` as to ``b``."""
    nx, ny, offset = _bisector(a, b)
    return clip_line(poly, nx, ny, offset, label)


def clip_to_domain(poly: ConvexPolygon | None, domain: ConvexPolygon):
    """Intersect ``poly`` with a convex ``domain`` (edges inherit BOUNDARY)."""
    for p0, p1, _ in domain.edges():
        if poly is None:
            return None
        # outward normal of a CCW edge is (dy, -dx)
        nx, ny = p1[1] - p0[1], -(p1[0] - p0[0])
        poly = clip_line(poly, nx, ny, nx * p0[0] + ny * p0[1], BOUNDARY)
    return poly


def polygon_area_centroid(poly: ConvexPolygon):
    """Shoelace area and geometric centroid."""
    v = poly.vertices
    x, y = v[:, 0], v[:, 1]
    x1 = np.concatenate((x[1:], x[:1]))
    y1 = np.concatenate((y[1:], y[:1]))
    cross = x * y1 - x1 * y
    area = 0.5 * cross.sum()
    cx = ((x + x1) * cross).sum() / (6.0 * area)
    cy = ((y + y1) * cross).sum() / (6.0 * area)
    return float(area), np.array([cx, cy])


@dataclass
class VoronoiPartition:
    """Voronoi cells of ``sites`` clipped to a convex domain, aligned by index."""

    cells: list
    neighbor_pairs: set = field(default_factory=set)

    def __len__(self):
        return len(self.cells)

    def locate(self, points):
        """Index of the cell containing each point (lowest index on ties), -1 if none."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.full(len(p), -1, dtype=int)
        for i in range(len(self.cells) - 1, -1, -1):
            out[self.cells[i].contains(p)] = i
        return out


def _as_sites(sites):
    s = np.asarray(sites, dtype=float)
    if s.ndim == 1:
        s = s.reshape(1, 2)
    if s.ndim != 2 or s.shape[1] != 2 or len(s) == 0:
        raise GeometryError("sites must be a non-empty (k, 2) array")
    return s


def voronoi_partition(sites, domain: ConvexPolygon) -> VoronoiPartition:
    """Bounded Voronoi partition by per-site half-plane intersection.

    Site j is only tested against cell i while ``|p_i - p_j| < 2 R`` where R is
    the current distance from p_i to its farthest cell vertex; beyond that the
    bisector cannot touch the cell, so the result is identical to clipping
    against every other site.
    """
    s = _as_sites(sites)
    k = len(s)
    inside = domain.contains(s, tol=1e-9)
    if not np.all(inside):
        bad = np.flatnonzero(~inside)
        raise OutOfDomainError(f"sites {bad.tolist()} lie outside the domain")
    diff = s[:, None, :] - s[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    if k > 1:
        off = dist + np.diag(np.full(k, np.inf))
        if off.min() <= TOL:
            i, j = np.unravel_index(np.argmin(off), off.shape)
            raise DuplicateSiteError(f"sites {min(i, j)} and {max(i, j)} coincide")
    order = np.argsort(dist, axis=1, kind="stable").tolist()
    dist = dist.tolist()
    pts = [tuple(p) for p in s.tolist()]
    dom_verts = [tuple(v) for v in domain.vertices.tolist()]
    dom_labels = [BOUNDARY] * len(dom_verts)
    cells = []
    for i in range(k):
        verts, labs = dom_verts, dom_labels
        xi, yi = pts[i]
        radius = _max_vertex_dist(verts, xi, yi)
        row = dist[i]
        for j in order[i][1:]:
            if row[j] >= 2.0 * radius + TOL:
                break
            nx, ny, off = _bisector(pts[i], pts[j])
            res = _clip_lists(verts, labs, nx, ny, off, j)
            if res is None:
                # only reachable through round-off for a site on its own cell boundary
                raise GeometryError(f"cell {i} vanished while clipping against site {j}")
            if res[0] is not verts:
                verts, labs = res
                radius = _max_vertex_dist(verts, xi, yi)
        cells.append(ConvexPolygon(verts, labs, check=False))
    return VoronoiPartition(cells, _neighbor_pairs(cells))


def _max_vertex_dist(verts, x, y):
    return math.sqrt(max((vx - x) ** 2 + (vy - y) ** 2 for vx, vy in verts))


def _neighbor_pairs(cells):
    pairs = set()
    for i, cell in enumerate(cells):
        v = cell.vertices.tolist()
        for e, lab in enumerate(cell.labels):
            if lab >= 0:
                (ax, ay), (bx, by) = v[e], v[e - len(v) + 1]
                if math.hypot(bx - ax, by - ay) > TOL:
                    pairs.add((min(i, lab), max(i, lab)))
    return pairs


def max_neighbor_distance(partition: VoronoiPartition, sites) -> float:
    """Largest distance between two sites whose cells share an edge (0 for k=1)."""
    s = _as_sites(sites)
    if not partition.neighbor_pairs:
        return 0.0
    idx = np.array(sorted(partition.neighbor_pairs))
    d = s[idx[:, 0]] - s[idx[:, 1]]
    return float(np.sqrt((d**2).sum(axis=1)).max())
