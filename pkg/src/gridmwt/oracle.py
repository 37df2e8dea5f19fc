"""Reference triangulations for small inputs.

Nothing here touches the grid or the planar-graph machinery; only the exact
predicates are shared with the main pipeline.
"""
from __future__ import annotations

import functools
import math

from .errors import DegenerateInputError, OracleScaleError
from .geom import (
    INF,
    compare_power_sums,
    convex_hull,
    orient,
    power_sum_float,
    segments_properly_intersect,
    squared_distance,
    to_integer_coords,
)

ORACLE_CAP = 10


def _weight(d2, q) -> float:
    if q == INF:
        return math.sqrt(d2)
    return float(d2) ** (q / 2)


def _value(ps, edges, q) -> float:
    """q-weight in the caller's own coordinates."""
    pts = list(ps)
    return power_sum_float([squared_distance(pts[a], pts[b]) for a, b in edges], q)


def _pairs_by_length(pts):
    n = len(pts)
    pairs = [(squared_distance(pts[a], pts[b]), a, b) for a in range(n) for b in range(a + 1, n)]
    pairs.sort()
    return pairs


def exact_mwt(ps, q=1) -> tuple[list[tuple[int, int]], float]:
    """Optimal triangulation under w'(T) = sum of |e|^q (bottleneck for q = inf).

    Depth-first search over edges in ascending length, including an edge before
    excluding it.  An edge may only be left out while some later candidate that
    crosses it is still available, so every leaf is a maximal planar graph.
    Equal-weight optima resolve to the lexicographically smaller sorted edge list;
    with q = inf the first optimum in search order is kept.
    """
    pts, _ = to_integer_coords(list(ps))
    n = len(pts)
    if n > ORACLE_CAP:
        raise OracleScaleError(f"oracle scale exceeded: n={n} > {ORACLE_CAP}")
    if n < 3:
        raise DegenerateInputError("degenerate input: fewer than 3 points")
    hull = convex_hull(pts)
    h = len(hull)
    m = 3 * n - 3 - h
    hull_edges = {tuple(sorted((hull[i], hull[(i + 1) % h]))) for i in range(h)}
    cands = [(d2, a, b) for d2, a, b in _pairs_by_length(pts) if (a, b) not in hull_edges]
    k = len(cands)
    segs = [(pts[a], pts[b]) for _, a, b in cands]
    cross = [0] * k
    for x in range(k):
        for y in range(x + 1, k):
            if segments_properly_intersect(segs[x], segs[y]):
                cross[x] |= 1 << y
                cross[y] |= 1 << x
    later = [0] * k
    for x in range(k):
        later[x] = cross[x] & ~((1 << (x + 1)) - 1)
    inf_q = q == INF
    # bottleneck search works on exact squared lengths
    wts = [d2 if inf_q else _weight(d2, q) for d2, _, _ in cands]
    need = m - h
    hull_d2 = [squared_distance(pts[a], pts[b]) for a, b in hull_edges]

    best = {"sel": None, "val": math.inf}

    def total(sel):
        return power_sum_float(hull_d2 + [cands[x][0] for x in sel], q)

    def better(sel) -> bool:
        if best["sel"] is None:
            return True
        cur = hull_d2 + [cands[x][0] for x in sel]
        old = hull_d2 + [cands[x][0] for x in best["sel"]]
        c = compare_power_sums(cur, old, q)
        if c != 0:
            return c < 0
        if inf_q:
            return False
        e1 = sorted((cands[x][1], cands[x][2]) for x in sel)
        e2 = sorted((cands[x][1], cands[x][2]) for x in best["sel"])
        return e1 < e2

    start = max(hull_d2) if inf_q else sum(_weight(d, q) for d in hull_d2)

    def bound_ok(partial, idx: int, blocked: int, missing: int) -> bool:
        if best["sel"] is None:
            return True
        lb = partial
        got = 0
        y = idx
        while got < missing and y < k:
            if not (blocked >> y) & 1:
                lb = max(lb, wts[y]) if inf_q else lb + wts[y]
                got += 1
            y += 1
        if inf_q:
            return lb < best["key"]
        return lb <= best["val"] * (1 + 1e-9)

    sel: list[int] = []

    def dfs(idx: int, blocked: int, partial: float):
        missing = need - len(sel)
        if missing == 0:
            if better(sel):
                best["sel"] = list(sel)
                best["val"] = total(sel)
                best["key"] = partial
            return
        if idx >= k:
            return
        avail = k - idx - bin(blocked >> idx).count("1")
        if avail < missing:
            return
        if not bound_ok(partial, idx, blocked, missing):
            return
        if (blocked >> idx) & 1:
            dfs(idx + 1, blocked, partial)
            return
        sel.append(idx)
        nxt = max(partial, wts[idx]) if inf_q else partial + wts[idx]
        dfs(idx + 1, blocked | cross[idx], nxt)
        sel.pop()
        if later[idx] & ~blocked:
            dfs(idx + 1, blocked, partial)

    dfs(0, 0, start)
    if best["sel"] is None:  # pragma: no cover - every point set has a triangulation
        raise AssertionError("no triangulation found")
    edges = sorted(hull_edges | {(cands[x][1], cands[x][2]) for x in best["sel"]})
    return edges, _value(ps, edges, q)


def _is_convex_chain(pts) -> int:
    """+1 or -1 for a strictly convex polygon in the given order, else 0."""
    n = len(pts)
    side = orient(pts[0], pts[1], pts[2])
    if side == 0:
        return 0
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for t in range(n):
            if t != i and t != (i + 1) % n and orient(a, b, pts[t]) != side:
                return 0
    return side


def convex_polygon_dp(ps, q=1) -> tuple[list[tuple[int, int]], float]:
    """Optimal triangulation of points given in convex-polygon order."""
    pts, _ = to_integer_coords(list(ps))
    n = len(pts)
    if n < 3 or _is_convex_chain(pts) == 0:
        raise DegenerateInputError("input is not a convex polygon in the given order")
    inf_q = q == INF

    def w(a, b):
        return _weight(squared_distance(pts[a], pts[b]), q)

    def combine(x, y):
        return max(x, y) if inf_q else x + y

    @functools.lru_cache(maxsize=None)
    def best(i, j):
        """Cost of triangulating the sub-polygon i..j, counting diagonal i-j but not sides."""
        if j - i < 2:
            return 0.0, -1
        out = None
        for k in range(i + 1, j):
            v = combine(best(i, k)[0], best(k, j)[0])
            if out is None or v < out[0]:
                out = (v, k)
        own = w(i, j) if not (i == 0 and j == n - 1) else 0.0
        return combine(out[0], own), out[1]

    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        edges.add((i, j))
        k = best(i, j)[1]
        stack.extend([(i, k), (k, j)])
    edges = sorted(edges)
    return edges, _value(ps, edges, q)


def greedy_triangulation(ps) -> list[tuple[int, int]]:
    """Classical greedy triangulation: shortest non-crossing pairs first."""
    pts, _ = to_integer_coords(list(ps))
    if len(pts) < 3:
        raise DegenerateInputError("degenerate input: fewer than 3 points")
    chosen: list[tuple[int, int]] = []
    for _, a, b in _pairs_by_length(pts):
        s = (pts[a], pts[b])
        if any(segments_properly_intersect(s, (pts[x], pts[y])) for x, y in chosen):
            continue
        chosen.append((a, b))
    return sorted(chosen)
