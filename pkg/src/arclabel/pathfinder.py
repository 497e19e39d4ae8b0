"""Candidate-path enumeration over the clearance-annotated skeleton.

Starting from the maximum edge clearance, the skeleton is pruned to edges at
or above the current threshold and the longest shortest path is approximated
with a double sweep (exact on trees): one Dijkstra from a per-component seed
gives the far nodes, a second multi-source Dijkstra from those gives the far
pair.  A path is reported when it is long enough to use the vertical space
the threshold promises (length >= 2 * threshold / aspect); otherwise the
threshold shrinks by sqrt(2), halving the implied label-box area.  Vertices
of reported paths stay in the source set so later searches are pushed away
from everything already found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .skeleton import SkeletonGraph

_SQRT2 = math.sqrt(2.0)
_SENTINEL = -9999


@dataclass(frozen=True)
class CandidatePath:
    """A skeleton walk together with the clearance threshold it was found at."""

    nodes: tuple[int, ...]
    length: float
    min_clearance: float
    threshold: float

    def positions(self, graph: SkeletonGraph) -> np.ndarray:
        return graph.node_xy[list(self.nodes)]


def prune_by_clearance(graph: SkeletonGraph, c: float) -> SkeletonGraph:
    """Subgraph with exactly the edges of clearance >= c (and their endpoints)."""
    if c < 0:
        raise ValueError("clearance threshold must be >= 0")
    return graph.subgraph_by_clearance(c)


def _csr(graph: SkeletonGraph) -> csr_matrix:
    n = graph.node_count
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    w = graph.edge_length
    return csr_matrix((np.concatenate([w, w]),
                       (np.concatenate([u, v]), np.concatenate([v, u]))),
                      shape=(n, n))


def _active_nodes(graph: SkeletonGraph) -> np.ndarray:
    return np.unique(graph.edges)


def farthest_from(graph: SkeletonGraph, sources,
                  _mat: csr_matrix | None = None) -> tuple[int, float, list[int]]:
    """Node maximizing the shortest-path distance from the nearest source.

    Returns (node, distance, path from its nearest source to the node).
    Unreachable nodes are ignored; distance ties break to the lowest node id.
    """
    sources = sorted(int(s) for s in sources)
    if not sources:
        raise ValueError("sources must be nonempty")
    if any(s < 0 or s >= graph.node_count for s in sources):
        raise ValueError("source id outside graph")
    mat = _csr(graph) if _mat is None else _mat
    dist, pred, _ = dijkstra(mat, directed=False, indices=sources,
                             return_predecessors=True, min_only=True)
    dist[~np.isfinite(dist)] = -np.inf
    far = int(np.argmax(dist))  # first max = lowest node id
    d = float(dist[far])
    if d < 0:
        # graph had no finite distance at all; fall back to the first source
        return sources[0], 0.0, [sources[0]]
    path = [far]
    node = far
    while pred[node] != _SENTINEL:
        node = int(pred[node])
        path.append(node)
    path.reverse()
    return far, d, path


def _component_far_nodes(graph: SkeletonGraph, mat: csr_matrix) -> list[int]:
    """One sweep per component: farthest node from the lowest-id seed of each."""
    active = _active_nodes(graph)
    if len(active) == 0:
        return []
    n_comp, labels = connected_components(mat, directed=False)
    # lowest active node id per component label
    seeds: dict[int, int] = {}
    for node in active:  # active is sorted ascending
        lab = int(labels[node])
        if lab not in seeds:
            seeds[lab] = int(node)
    seed_list = sorted(seeds.values())
    dist, _, src = dijkstra(mat, directed=False, indices=seed_list,
                            return_predecessors=True, min_only=True)
    finite = np.isfinite(dist)
    idx = np.nonzero(finite)[0]
    if len(idx) == 0:
        return seed_list
    # farthest per source tree, ties to the lowest node id
    order = np.lexsort((idx, -dist[idx], src[idx]))
    srcs_sorted = src[idx][order]
    nodes_sorted = idx[order]
    _, firsts = np.unique(srcs_sorted, return_index=True)
    return sorted(int(nodes_sorted[i]) for i in firsts)


def enumerate_paths(graph: SkeletonGraph, k: int, aspect: float,
                    floor_divisor: float = 2.0 ** 10) -> list[CandidatePath]:
    """Up to ``k`` diverse candidate paths via threshold-pruned double sweeps.

    May return fewer than ``k`` paths; returns [] on an edgeless graph.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if aspect <= 0:
        raise ValueError("aspect must be positive")
    if graph.edge_count == 0:
        return []

    max_clearance = float(graph.edge_clearance.max())
    threshold = max_clearance
    floor = max_clearance / floor_divisor
    reported: list[CandidatePath] = []
    seen: set[tuple[int, ...]] = set()
    start_set: set[int] = set()  # vertices of reported paths

    while len(reported) < k:
        sub = prune_by_clearance(graph, threshold)
        if sub.edge_count == 0:
            if threshold <= floor:
                break
            threshold /= _SQRT2
            continue
        mat = _csr(sub)
        sweep_sources = _component_far_nodes(sub, mat)
        sources = sorted(start_set.union(sweep_sources))
        _, dist, path = farthest_from(sub, sources, _mat=mat)
        l_min = 2.0 * threshold / aspect
        key = tuple(path)
        if dist >= l_min and len(path) >= 2 and key not in seen:
            reported.append(CandidatePath(
                nodes=key, length=dist,
                min_clearance=graph.path_min_clearance(path),
                threshold=threshold))
            seen.add(key)
            start_set.update(key)
        else:
            if threshold <= floor:
                break
            threshold /= _SQRT2
    return reported
