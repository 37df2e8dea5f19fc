"""Planar straight-line graphs with face walks and visibility queries.

The graph keeps, for every vertex, its neighbours in counter-clockwise order.
The face walk that keeps the face on the right follows the rule
``next(u -> v) = v -> w`` where ``w`` is the counter-clockwise successor of
``u`` around ``v``; walking every directed edge once this way yields the
boundary sequences of all faces.  Faces (including holes and isolated
vertices) are re-derived lazily after each insertion.
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ClassificationError, CrossingInsertionError, PreconditionError
from .geom import (
    convex_hull,
    orient,
    point_in_polygon,
    point_on_open_segment,
    segments_properly_intersect,
    signed_area2,
)


class Corner(enum.Enum):
    CONVEX = "convex"
    REFLEX = "reflex"


def pseudo_angle(dx, dy) -> Fraction:
    """Exact rational stand-in for atan2, monotone in angle over [0, 4)."""
    if dy >= 0:
        if dx >= 0:
            return Fraction(dy, dx + dy)
        return 1 + Fraction(-dx, dy - dx)
    if dx < 0:
        return 2 + Fraction(-dy, -dx - dy)
    return 3 + Fraction(dx, dx - dy)


@dataclass(frozen=True)
class FaceBoundary:
    """One boundary component of a face, walked with the face on the right.

    ``vertices[i]`` is the i-th occurrence; its incoming edge comes from
    ``vertices[i - 1]`` and its outgoing edge goes to ``vertices[i + 1]``
    (indices mod m).  ``convex`` is None for components with fewer than three
    occurrences, which cannot be classified.
    """

    face: int
    component: int
    vertices: tuple[int, ...]
    convex: tuple[bool, ...] | None = None

    def __len__(self):
        return len(self.vertices)

    def vertex(self, i: int) -> int:
        return self.vertices[i % len(self.vertices)]


@dataclass
class Face:
    id: int
    bounded: bool
    components: list[FaceBoundary] = field(default_factory=list)

    @property
    def signature(self) -> int:
        return sum(len(c) for c in self.components)

    @property
    def triangulated(self) -> bool:
        return self.bounded and len(self.components) == 1 and len(self.components[0]) == 3


class Pslg:
    def __init__(self, points: Sequence):
        self.points = [tuple(p) for p in points]
        self.n = len(self.points)
        self._nbrs: list[list[int]] = [[] for _ in range(self.n)]
        self._keys: list[list[Fraction]] = [[] for _ in range(self.n)]
        self._edges: set[tuple[int, int]] = set()
        self._edge_list: list[tuple[int, int]] = []
        self._faces: list[Face] | None = None

    # --- basic structure ---------------------------------------------------

    def copy(self) -> "Pslg":
        g = Pslg.__new__(Pslg)
        g.points = self.points
        g.n = self.n
        g._nbrs = [list(x) for x in self._nbrs]
        g._keys = [list(x) for x in self._keys]
        g._edges = set(self._edges)
        g._edge_list = list(self._edge_list)
        g._faces = self._faces
        return g

    def __len__(self):
        return len(self._edges)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def neighbors(self, v: int) -> list[int]:
        """Neighbours of ``v`` in counter-clockwise order."""
        return list(self._nbrs[v])

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    # --- planarity ---------------------------------------------------------

    def _blocked(self, a, b, skip=()) -> bool:
        """Does the open segment ab meet any edge or vertex of the graph?"""
        P = self.points
        ax, ay = a
        bx, by = b
        lox, hix = (ax, bx) if ax < bx else (bx, ax)
        loy, hiy = (ay, by) if ay < by else (by, ay)
        for x, y in self._edge_list:
            if (x, y) in skip:
                continue
            px, py = P[x]
            qx, qy = P[y]
            if (px < lox and qx < lox) or (px > hix and qx > hix):
                continue
            if (py < loy and qy < loy) or (py > hiy and qy > hiy):
                continue
            if segments_properly_intersect((a, b), (P[x], P[y])):
                return True
        for p in P:
            if lox <= p[0] <= hix and loy <= p[1] <= hiy:
                if point_on_open_segment(p, (a, b)):
                    return True
        return False

    def would_cross(self, u: int, v: int) -> bool:
        """Would segment uv cross an existing edge or run through a vertex?"""
        return self._blocked(self.points[u], self.points[v])

    def insert_edge(self, u: int, v: int, check: bool = True) -> None:
        if u == v:
            raise CrossingInsertionError(f"crossing insertion: loop at {u}")
        key = (min(u, v), max(u, v))
        if key in self._edges:
            raise CrossingInsertionError(f"crossing insertion: edge {key} already present")
        if check and self.would_cross(u, v):
            raise CrossingInsertionError(f"crossing insertion: edge {key} crosses the graph")
        for a, b in ((u, v), (v, u)):
            pa, pb = self.points[a], self.points[b]
            k = pseudo_angle(pb[0] - pa[0], pb[1] - pa[1])
            pos = bisect.bisect_left(self._keys[a], k)
            self._keys[a].insert(pos, k)
            self._nbrs[a].insert(pos, b)
        self._edges.add(key)
        self._edge_list.append(key)
        self._faces = None

    # --- face walks --------------------------------------------------------

    def next_half_edge(self, u: int, v: int) -> tuple[int, int]:
        nb = self._nbrs[v]
        i = nb.index(u)
        return v, nb[(i + 1) % len(nb)]

    def walks(self) -> list[tuple[int, ...]]:
        """All boundary walks, each rotated to start at its smallest directed edge."""
        seen: set[tuple[int, int]] = set()
        out = []
        for u in range(self.n):
            for v in self._nbrs[u]:
                if (u, v) in seen:
                    continue
                half = []
                cur = (u, v)
                while cur not in seen:
                    seen.add(cur)
                    half.append(cur)
                    cur = self.next_half_edge(*cur)
                start = min(range(len(half)), key=lambda i: half[i])
                half = half[start:] + half[:start]
                out.append(tuple(h[0] for h in half))
        return out

    def _components(self) -> list[int]:
        comp = [-1] * self.n
        c = 0
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            stack = [s]
            comp[s] = c
            while stack:
                x = stack.pop()
                for y in self._nbrs[x]:
                    if comp[y] < 0:
                        comp[y] = c
                        stack.append(y)
            c += 1
        return comp

    def is_connected(self) -> bool:
        return self.n > 0 and max(self._components()) == 0

    def faces(self) -> list[Face]:
        if self._faces is None:
            self._faces = self._build_faces()
        return self._faces

    def _build_faces(self) -> list[Face]:
        P = self.points
        comp = self._components()
        bounded_walks = []  # (area2, walk)
        outer_of = {}  # component -> its outer walk (or singleton for isolated vertex)
        for w in self.walks():
            a2 = signed_area2([P[v] for v in w])
            if a2 < 0:
                bounded_walks.append((a2, w))
            else:
                outer_of[comp[w[0]]] = w
        for v in range(self.n):
            if not self._nbrs[v]:
                outer_of[comp[v]] = (v,)
        # each bounded walk is a face; locate every component's outer walk
        holes: dict[int, list[tuple[int, ...]]] = {i: [] for i in range(len(bounded_walks))}
        unbounded: list[tuple[int, ...]] = []
        polys = [[P[v] for v in w] for _, w in bounded_walks]
        for c, w in outer_of.items():
            rep = P[w[0]]
            best = None
            for fi, (a2, bw) in enumerate(bounded_walks):
                if comp[bw[0]] == c:
                    continue
                if best is not None and -a2 >= -bounded_walks[best][0]:
                    continue
                if point_in_polygon(rep, polys[fi]) == 1:
                    best = fi
            if best is None:
                unbounded.append(w)
            else:
                holes[best].append(w)
        raw = [(True, [w] + holes[i]) for i, (_, w) in enumerate(bounded_walks)]
        if unbounded:
            raw.append((False, unbounded))
        for item in raw:
            item[1].sort()
        raw.sort(key=lambda item: item[1][0])
        faces = []
        for fid, (bounded, walks) in enumerate(raw):
            face = Face(fid, bounded)
            for ci, w in enumerate(walks):
                face.components.append(
                    FaceBoundary(fid, ci, w, self._classify_walk(w))
                )
            faces.append(face)
        return faces

    def _classify_walk(self, w):
        m = len(w)
        if m < 3:
            return None
        P = self.points
        out = []
        for i in range(m):
            a, b, c = w[i - 1], w[i], w[(i + 1) % m]
            out.append(a != c and orient(P[a], P[b], P[c]) < 0)
        return tuple(out)

    def face_boundaries(self, face) -> list[FaceBoundary]:
        fid = face.id if isinstance(face, Face) else face
        return list(self.faces()[fid].components)

    def outer_face(self) -> Face:
        for f in self.faces():
            if not f.bounded:
                return f
        raise PreconditionError("graph has no unbounded face")

    def signature(self, face) -> int:
        fid = face.id if isinstance(face, Face) else face
        return self.faces()[fid].signature

    # --- visibility --------------------------------------------------------

    def in_wedge(self, fb: FaceBoundary, i: int, target) -> bool:
        """Does the direction towards ``target`` leave occurrence ``i`` into the face?"""
        m = len(fb.vertices)
        if m == 1:
            return True
        x = self.points[fb.vertex(i)]
        pin = self.points[fb.vertex(i - 1)]
        pout = self.points[fb.vertex(i + 1)]
        a_in = pseudo_angle(pin[0] - x[0], pin[1] - x[1])
        a_out = pseudo_angle(pout[0] - x[0], pout[1] - x[1])
        a_d = pseudo_angle(target[0] - x[0], target[1] - x[1])
        rel_out = (a_out - a_in) % 4 or 4
        rel_d = (a_d - a_in) % 4
        return 0 < rel_d < rel_out

    def visible(self, fb: FaceBoundary, a: int, b: int) -> bool:
        """Occurrence-specific mutual visibility inside the face of ``fb``."""
        u = fb.vertex(a)
        v = fb.vertex(b)
        if u == v or self.has_edge(u, v):
            return False
        pu, pv = self.points[u], self.points[v]
        if not self.in_wedge(fb, a, pv) or not self.in_wedge(fb, b, pu):
            return False
        return not self._blocked(pu, pv)

    def edge_visible_to(self, fb: FaceBoundary, j: int, k: int) -> bool:
        """Is some point of boundary edge (v_k, v_k+1) visible from occurrence j?"""
        m = len(fb.vertices)
        j %= m
        k %= m
        if k == j or (k + 1) % m == j:
            return True
        x, a, b = fb.vertex(j), fb.vertex(k), fb.vertex(k + 1)
        if x in (a, b):
            return False
        P = self.points
        V, A, B = P[x], P[a], P[b]
        if orient(A, B, V) >= 0:
            return False
        dx, dy = B[0] - A[0], B[1] - A[1]
        ts = {Fraction(0), Fraction(1)}
        for w in range(self.n):
            if w == x:
                continue
            W = P[w]
            wx, wy = W[0] - V[0], W[1] - V[1]
            den = wx * dy - wy * dx
            if den == 0:
                continue
            t = -Fraction(wx * (A[1] - V[1]) - wy * (A[0] - V[0]), den)
            if 0 < t < 1:
                ts.add(t)
        ts = sorted(ts)
        skip = {(min(a, b), max(a, b))}
        for t0, t1 in zip(ts, ts[1:]):
            t = (t0 + t1) / 2
            q = (A[0] + t * dx, A[1] + t * dy)
            if self.in_wedge(fb, j, q) and not self._blocked(V, q, skip):
                return True
        return False


# --- occurrence classification and support lookups -----------------------------


def classify_occurrence(fb: FaceBoundary, i: int) -> Corner:
    if fb.convex is None:
        raise ClassificationError(f"unclassifiable: component of length {len(fb)}")
    return Corner.CONVEX if fb.convex[i % len(fb.convex)] else Corner.REFLEX


def _require_convex(fb: FaceBoundary):
    if fb.convex is None:
        raise ClassificationError(f"unclassifiable: component of length {len(fb)}")
    if not any(fb.convex):
        raise ClassificationError("all-reflex component")


def forward_convex(fb: FaceBoundary, j: int) -> int:
    """Next convex occurrence strictly after ``j`` (cyclically)."""
    _require_convex(fb)
    m = len(fb.convex)
    for d in range(1, m + 1):
        if fb.convex[(j + d) % m]:
            return (j + d) % m
    raise AssertionError("unreachable")


def forward_support(fb: FaceBoundary, j: int) -> int:
    return (forward_convex(fb, j) + 1) % len(fb.vertices)


def backward_convex(fb: FaceBoundary, j: int) -> int:
    """Previous convex occurrence strictly before reflex occurrence ``j``."""
    _require_convex(fb)
    m = len(fb.convex)
    if fb.convex[j % m]:
        raise ClassificationError(f"backward convex undefined at convex occurrence {j}")
    for d in range(1, m + 1):
        if fb.convex[(j - d) % m]:
            return (j - d) % m
    raise AssertionError("unreachable")


def backward_support(fb: FaceBoundary, j: int) -> int:
    return (backward_convex(fb, j) - 1) % len(fb.vertices)


# --- structural validators ------------------------------------------------------


def euler_signature_check(g: Pslg) -> bool:
    """Edge count against 3n - 6 - sum over all faces of (s(f) - 3)."""
    if g.num_edges == 0 or not g.is_connected() or any(g.degree(v) == 0 for v in range(g.n)):
        raise PreconditionError("identity applies to connected graphs")
    total = sum(f.signature - 3 for f in g.faces())
    return g.num_edges == 3 * g.n - 6 - total


def is_triangulation(g: Pslg, h: int | None = None) -> bool:
    if g.n < 3:
        return False
    hull = convex_hull(g.points)
    if h is None:
        h = len(hull)
    if g.num_edges != 3 * g.n - 3 - h:
        return False
    outer = None
    for f in g.faces():
        if f.bounded:
            if f.signature != 3:
                return False
        elif outer is not None:
            return False
        else:
            outer = f
    if outer is None or len(outer.components) != 1:
        return False
    walk = outer.components[0].vertices
    if len(walk) != len(hull):
        return False
    s = walk.index(hull[0])
    return tuple(walk[s:] + walk[:s]) == tuple(hull)
