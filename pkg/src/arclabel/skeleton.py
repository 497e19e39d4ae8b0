"""Medial-axis approximation from the Delaunay triangulation of the boundary.

Triangle circumcenters act as Voronoi vertices; circumcenters of adjacent
triangles are connected when the connecting segment lies inside the area.
Each surviving edge carries a clearance value: half the shared Delaunay edge
when the two circumcenters lie on opposite sides of it, otherwise the smaller
of the two circumradii.  Points closer to the edge than its clearance are
covered by the two circumballs, which are empty of boundary vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import DegenerateInput, EmptySkeleton
from .geometry import AreaShape, cross2, points_in_area, segments_cross_boundary


@dataclass(frozen=True)
class Triangulation:
    """Delaunay triangulation of the (deduplicated) boundary vertices."""

    points: np.ndarray    # (n, 2)
    triangles: np.ndarray  # (t, 3) vertex indices
    neighbors: np.ndarray  # (t, 3); neighbors[i, k] is opposite vertex k, -1 on hull


@dataclass(frozen=True)
class SkeletonNode:
    position: tuple[float, float]
    circumradius: float


@dataclass(frozen=True, eq=False)
class SkeletonGraph:
    """Undirected graph of Voronoi vertices inside the area.

    Nodes and edges are stored as flat arrays; ``node_xy[i]`` is the
    circumcenter position and ``node_radius[i]`` its circumradius.
    """

    node_xy: np.ndarray        # (n, 2)
    node_radius: np.ndarray    # (n,)
    edges: np.ndarray          # (e, 2) node index pairs, u < v
    edge_length: np.ndarray    # (e,)
    edge_clearance: np.ndarray  # (e,)

    @property
    def node_count(self) -> int:
        return len(self.node_xy)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def node(self, i: int) -> SkeletonNode:
        return SkeletonNode(tuple(self.node_xy[i]), float(self.node_radius[i]))

    @cached_property
    def clearance_by_pair(self) -> dict[tuple[int, int], float]:
        return {(int(u), int(v)): float(c)
                for (u, v), c in zip(self.edges, self.edge_clearance)}

    def path_min_clearance(self, nodes) -> float:
        table = self.clearance_by_pair
        best = np.inf
        for u, v in zip(nodes[:-1], nodes[1:]):
            key = (min(int(u), int(v)), max(int(u), int(v)))
            best = min(best, table[key])
        return float(best)

    def subgraph_by_clearance(self, c: float) -> "SkeletonGraph":
        mask = self.edge_clearance >= c
        return SkeletonGraph(self.node_xy, self.node_radius,
                             self.edges[mask], self.edge_length[mask],
                             self.edge_clearance[mask])


def triangulate(area: AreaShape) -> Triangulation:
    """Delaunay triangulation of all ring vertices (duplicates removed)."""
    pts = np.unique(area.vertices, axis=0)
    if len(pts) < 3:
        raise DegenerateInput(f"need >= 3 distinct vertices, got {len(pts)}")
    try:
        tri = Delaunay(pts)
    except QhullError as exc:
        raise DegenerateInput(f"degenerate vertex set: {exc}") from exc
    if tri.simplices.size == 0:
        raise DegenerateInput("all vertices collinear")
    return Triangulation(pts, tri.simplices.astype(np.int64),
                         tri.neighbors.astype(np.int64))


def circumcircles(points: np.ndarray, triangles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized circumcenters and circumradii of index triangles."""
    a = points[triangles[:, 0]]
    b = points[triangles[:, 1]] - a
    c = points[triangles[:, 2]] - a
    d = 2.0 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    b2 = np.einsum("ij,ij->i", b, b)
    c2 = np.einsum("ij,ij->i", c, c)
    with np.errstate(divide="ignore", invalid="ignore"):
        ux = (c[:, 1] * b2 - b[:, 1] * c2) / d
        uy = (b[:, 0] * c2 - c[:, 0] * b2) / d
    centers = a + np.stack([ux, uy], axis=1)
    radii = np.hypot(ux, uy)
    return centers, radii


def edge_clearance(tri_a: np.ndarray, tri_b: np.ndarray) -> float:
    """Clearance of the Voronoi edge between two triangles sharing one edge.

    Opposite-side circumcenters: half the shared Delaunay edge length.
    Same-side (or either center on the edge line): min of the circumradii.
    Always clamped to min of the circumradii.
    """
    tri_a = np.asarray(tri_a, dtype=float)
    tri_b = np.asarray(tri_b, dtype=float)
    shared = [p for p in map(tuple, tri_a) if any(np.array_equal(p, q) for q in tri_b)]
    if len(shared) != 2:
        raise DegenerateInput(f"triangles share {len(shared)} vertices, expected 2")
    (ca,), (ra,) = circumcircles(tri_a, np.array([[0, 1, 2]]))
    (cb,), (rb,) = circumcircles(tri_b, np.array([[0, 1, 2]]))
    p = np.asarray(shared[0], dtype=float)
    q = np.asarray(shared[1], dtype=float)
    sa = float(cross2(q - p, ca - p))
    sb = float(cross2(q - p, cb - p))
    if sa * sb < 0.0:
        clearance = 0.5 * float(np.hypot(*(q - p)))
    else:
        clearance = float(min(ra, rb))
    return float(min(clearance, ra, rb))


def _adjacent_pairs(tri: Triangulation):
    """(t_i, t_j, shared_p, shared_q) arrays over internal Delaunay edges, t_i < t_j."""
    t = np.arange(len(tri.triangles))
    pairs_i, pairs_j, sp, sq = [], [], [], []
    for k in range(3):
        nb = tri.neighbors[:, k]
        mask = nb > t  # each adjacency once
        pairs_i.append(t[mask])
        pairs_j.append(nb[mask])
        sp.append(tri.triangles[mask, (k + 1) % 3])
        sq.append(tri.triangles[mask, (k + 2) % 3])
    return (np.concatenate(pairs_i), np.concatenate(pairs_j),
            np.concatenate(sp), np.concatenate(sq))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def build_skeleton(area: AreaShape) -> SkeletonGraph:
    """Voronoi-edge subgraph inside the area, with per-edge clearances.

    Raises EmptySkeleton when no edge survives the containment filter.
    """
    tri = triangulate(area)
    centers, radii = circumcircles(tri.points, tri.triangles)
    finite = np.all(np.isfinite(centers), axis=1)
    inside = np.zeros(len(centers), dtype=bool)
    inside[finite] = points_in_area(centers[finite], area)

    ti, tj, sp, sq = _adjacent_pairs(tri)
    ok = inside[ti] & inside[tj]
    ti, tj, sp, sq = ti[ok], tj[ok], sp[ok], sq[ok]
    if len(ti) == 0:
        raise EmptySkeleton("no Voronoi edge between interior circumcenters")

    ci, cj = centers[ti], centers[tj]
    segs = np.stack([ci, cj], axis=1)
    lengths = np.hypot(*(cj - ci).T)

    # merge coincident circumcenters (cocircular quads) instead of keeping
    # zero-length Voronoi edges
    scale = max(area.bbox_diagonal, 1.0)
    degenerate = lengths <= 1e-12 * scale
    crosses = np.zeros(len(ti), dtype=bool)
    proper = ~degenerate
    crosses[proper] = segments_cross_boundary(segs[proper], area)
    keep = proper & ~crosses
    if not keep.any() and not degenerate.any():
        raise EmptySkeleton("every candidate Voronoi edge crosses the boundary")

    # clearances for surviving proper edges
    p = tri.points[sp[keep]]
    q = tri.points[sq[keep]]
    ca, cb = centers[ti[keep]], centers[tj[keep]]
    ra, rb = radii[ti[keep]], radii[tj[keep]]
    pq = q - p
    side_a = cross2(pq, ca - p)
    side_b = cross2(pq, cb - p)
    opposite = side_a * side_b < 0.0
    half_edge = 0.5 * np.hypot(pq[:, 0], pq[:, 1])
    min_radius = np.minimum(ra, rb)
    clearance = np.where(opposite, half_edge, min_radius)
    clearance = np.minimum(clearance, min_radius)

    # collapse coincident-center triangle pairs into single nodes
    uf = _UnionFind(len(tri.triangles))
    for i, j in zip(ti[degenerate], tj[degenerate]):
        uf.union(int(i), int(j))
    roots_u = np.fromiter((uf.find(int(i)) for i in ti[keep]), dtype=np.int64,
                          count=int(keep.sum()))
    roots_v = np.fromiter((uf.find(int(j)) for j in tj[keep]), dtype=np.int64,
                          count=int(keep.sum()))
    loop = roots_u == roots_v
    roots_u, roots_v = roots_u[~loop], roots_v[~loop]
    lengths_k = lengths[keep][~loop]
    clearance_k = clearance[~loop]
    if len(roots_u) == 0:
        raise EmptySkeleton("skeleton collapsed to isolated nodes")

    u = np.minimum(roots_u, roots_v)
    v = np.maximum(roots_u, roots_v)
    used = np.unique(np.concatenate([u, v]))
    remap = np.full(len(tri.triangles), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    edges = np.stack([remap[u], remap[v]], axis=1)

    # deduplicate parallel edges between the same merged pair, keeping the
    # larger clearance (both clearances are valid for the identical segment)
    order = np.lexsort((-clearance_k, edges[:, 1], edges[:, 0]))
    edges, lengths_k, clearance_k = edges[order], lengths_k[order], clearance_k[order]
    first = np.ones(len(edges), dtype=bool)
    first[1:] = np.any(edges[1:] != edges[:-1], axis=1)
    edges, lengths_k, clearance_k = edges[first], lengths_k[first], clearance_k[first]

    return SkeletonGraph(node_xy=centers[used], node_radius=radii[used],
                         edges=edges, edge_length=lengths_k,
                         edge_clearance=clearance_k)


def skeleton_to_geojson(graph: SkeletonGraph) -> dict:
    """Debug dump: each edge as a LineString feature with its clearance."""
    features = []
    for (u, v), clr, ln in zip(graph.edges, graph.edge_clearance, graph.edge_length):
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [list(map(float, graph.node_xy[u])),
                                list(map(float, graph.node_xy[v]))],
            },
            "properties": {"clearance": float(clr), "length": float(ln)},
        })
    return {"type": "FeatureCollection", "features": features}
