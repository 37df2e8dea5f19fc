"""Phase 2: greedy insertion of the next level's edges."""
from __future__ import annotations

from typing import Iterable

from .pslg import Pslg


def run_phase2(g: Pslg, edges: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Insert each edge (shortest first, as given) that keeps ``g`` planar.

    Returns the counts of accepted and rejected candidates.  Edges already in
    the graph count as neither.
    """
    accepted = rejected = 0
    for u, v in edges:
        if g.has_edge(u, v):
            continue
        if g.would_cross(u, v):
            rejected += 1
        else:
            g.insert_edge(u, v, check=False)
            accepted += 1
    return accepted, rejected


def verify_maximality(g: Pslg, adjacency: Iterable[tuple[int, int]]) -> bool:
    """Every absent candidate is blocked by an edge or a vertex of ``g``."""
    return all(g.has_edge(u, v) or g.would_cross(u, v) for u, v in adjacency)
