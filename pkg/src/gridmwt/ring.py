"""Phase 1: the grid-driven ring heuristic on every non-triangulated face.

Positions along a boundary component are *unrolled* integers; the occurrence
at position ``p`` is ``p mod m``.  All visibility tests run against a frozen
copy of the graph as it was before the phase started, while edges go into
the live graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CrossingInsertionError, Phase1Error
from .geom import (
    compare_power_sums,
    orient,
    point_in_polygon,
    segments_properly_intersect,
    squared_distance,
)
from .grid import adjacent_xy
from .pslg import FaceBoundary, Pslg

PLAIN = "1b-plain"
EXTENDED = "1a+1b"
CLOSING = "1c"


@dataclass
class ChainRecord:
    position: int  # unrolled position of the processed occurrence
    start: int
    end: int
    step: str
    edges: list = field(default_factory=list)
    option: str | None = None

    def interior(self, m: int) -> set[int]:
        return {t % m for t in range(self.start + 1, self.end)}


@dataclass
class ComponentTrace:
    face: int
    component: int
    boundary: FaceBoundary
    start: int | None = None
    end_vertex: int | None = None
    chains: list[ChainRecord] = field(default_factory=list)
    skipped: int = 0
    note: str | None = None


@dataclass
class Phase1Trace:
    level: int
    components: list[ComponentTrace] = field(default_factory=list)
    snapshot: Pslg | None = None

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [e for c in self.components for ch in c.chains for e in ch.edges]

    def chains(self):
        for c in self.components:
            for ch in c.chains:
                yield c, ch


def select_start_vertex(fb: FaceBoundary) -> int:
    """Smallest backward support occurrence, or 0 when none exists."""
    conv = fb.convex
    if conv is None:
        return 0
    m = len(conv)
    # convex c followed by reflex c + 1 makes c - 1 the backward support of c + 1
    supports = [(c - 1) % m for c in range(m) if conv[c] and not conv[(c + 1) % m]]
    return min(supports, default=0)


class _Walker:
    """Processes one boundary component.  Holds the state of a single pass."""

    def __init__(self, live: Pslg, snap: Pslg, fb: FaceBoundary, cells,
                 improved: bool, q, ct: ComponentTrace):
        self.g = live
        self.snap = snap
        self.fb = fb
        self.m = len(fb.vertices)
        self.conv = fb.convex
        self.cells = cells
        self.improved = improved
        self.q = q
        self.ct = ct
        self.visited = [False] * self.m
        self.removed = [False] * self.m

    def v(self, p: int) -> int:
        return self.fb.vertices[p % self.m]

    def is_convex(self, p: int) -> bool:
        return self.conv[p % self.m]

    def near(self, a: int, b: int) -> bool:
        return adjacent_xy(self.cells[self.v(a)], self.cells[self.v(b)])

    def sees(self, a: int, b: int) -> bool:
        return self.snap.visible(self.fb, a % self.m, b % self.m)

    def fwd_convex(self, p: int) -> int:
        c = p + 1
        while not self.is_convex(c):
            c += 1
        return c

    def face_side(self, a: int, x: int) -> bool:
        """Is vertex x strictly on the face side of boundary edge a -> a + 1?"""
        P = self.g.points
        return orient(P[self.v(a)], P[self.v(a + 1)], P[self.v(x)]) < 0

    def fan_ok(self, apex: int, lo: int, hi: int) -> bool:
        """Fan triangles (t, t + 1, apex) for t in [lo, hi) all lie in the face."""
        return all(self.face_side(t, apex) for t in range(lo, hi))

    def one_chain(self, p: int, c: int, l: int) -> bool:
        """Guard: the chain from p to l really is a 1-chain around c.

        The gate implies this except next to a vertex repeated on the boundary,
        where the existing edge to the other occurrence breaks the implication,
        and on walks that wrap around a hull corner of the outer face, where
        the fan would land outside the face.
        """
        if any(not self.near(c, t) for t in range(p, l + 1)):
            return False
        if not self.fan_ok(l, p, l - 1):
            return False
        return all(self.sees(l, t) for t in range(p + 1, l - 1))

    def add(self, a: int, b: int, rec: ChainRecord, step: str):
        u, w = self.v(a), self.v(b)
        if u == w:
            raise Phase1Error("fan edge would be a loop", self.ct.face, rec.position, step)
        if self.g.has_edge(u, w):
            return
        try:
            self.g.insert_edge(u, w)
        except CrossingInsertionError as exc:
            raise Phase1Error(f"fan edge {(u, w)} breaks planarity: {exc}",
                              self.ct.face, rec.position, step) from None
        rec.edges.append((min(u, w), max(u, w)))

    def finish_chain(self, rec: ChainRecord):
        for t in range(rec.start, rec.end + 1):
            self.visited[t % self.m] = True
        for t in range(rec.start + 1, rec.end):
            self.removed[t % self.m] = True
        self.ct.chains.append(rec)

    def extension(self, p: int, l: int, j: int) -> int | None:
        """Step 1(a): last position s of the reflex run from l + 1, or None."""
        if self.is_convex(l + 1):
            return None
        qc = l if self.is_convex(l) else l - 1
        q = qc - 1
        s = None
        t = l + 1
        while not self.is_convex(t):
            if t > p + self.m - 1 or t > j + self.m or self.removed[t % self.m]:
                break
            if self.v(t) == self.v(p):
                break
            if not (self.near(qc, t) and self.sees(q, t)):
                break
            if not self.face_side(t - 1, p):
                break
            s = t
            t += 1
        return s

    def run(self, j: int) -> None:
        m = self.m
        k = 0
        while k <= m - 1:
            p = j + k
            c = self.fwd_convex(p)
            l = c + 1
            self.visited[p % m] = True
            if not (self.sees(p, l) and self.near(c, p)) or not self.one_chain(p, c, l):
                self.ct.skipped += 1
                k += 1
                continue
            if not self.visited[c % m]:
                s = self.extension(p, l, j)
                end = l if s is None else s
                rec = ChainRecord(p, p, end, PLAIN if s is None else EXTENDED)
                if s is None:
                    for t in range(p, l - 1):
                        self.add(l, t, rec, PLAIN)
                else:
                    self.apply_two_chain(p, c, l, s, rec)
                self.finish_chain(rec)
                self.ct.end_vertex = p % m
                k = end - j
                continue
            # step 1(c): the forward convex vertex was already visited
            if c % m not in (j % m, (j + 1) % m):
                raise Phase1Error("closing step reached an unexpected convex vertex",
                                  self.ct.face, p, CLOSING)
            jp = j + 1
            while self.removed[jp % m]:
                jp += 1
            jp += m
            if not self.fan_ok(jp, p, l - 1):
                self.ct.skipped += 1
                k += 1
                continue
            rec = ChainRecord(p, p, jp, CLOSING)
            for t in range(p, l - 1):
                self.add(jp, t, rec, CLOSING)
            self.finish_chain(rec)
            self.ct.end_vertex = p % m
            k = m

    # --- the two ways to triangulate an extended chain ---------------------------

    def option_edges(self, p, c, l, s, which: str) -> list[tuple[int, int]]:
        if which == "A":
            return [(l, t) for t in range(p, l - 1)] + [(p, t) for t in range(l + 1, s + 1)]
        return [(c, t) for t in range(l + 1, s + 1)] + [(s, t) for t in range(p, l - 1)]

    def option_valid(self, p, s, pos_edges) -> bool:
        P = self.g.points
        poly = [P[self.v(t)] for t in range(p, s + 1)]
        segs = []
        for a, b in pos_edges:
            u, w = self.v(a), self.v(b)
            if u == w:
                return False
            if not self.g.has_edge(u, w) and self.g.would_cross(u, w):
                return False
            if {a, b} != {p, s}:
                mid = ((P[u][0] + P[w][0]) / Fraction(2), (P[u][1] + P[w][1]) / Fraction(2))
                if point_in_polygon(mid, poly) != 1:
                    return False
            segs.append((P[u], P[w]))
        for x in range(len(segs)):
            for y in range(x + 1, len(segs)):
                if segments_properly_intersect(segs[x], segs[y]):
                    return False
        return True

    def option_cost(self, pos_edges) -> list:
        P = self.g.points
        return [squared_distance(P[self.v(a)], P[self.v(b)]) for a, b in pos_edges]

    def apply_two_chain(self, p, c, l, s, rec: ChainRecord):
        a_edges = self.option_edges(p, c, l, s, "A")
        choice = "A"
        if self.improved:
            choice = triangulate_2chain_best(self, p, c, l, s, self.q)
        chosen = a_edges if choice == "A" else self.option_edges(p, c, l, s, "B")
        rec.option = choice
        for a, b in chosen:
            self.add(a, b, rec, EXTENDED)


def triangulate_2chain_best(w: _Walker, p: int, c: int, l: int, s: int, q=1) -> str:
    """Pick "A" or "B" for the extended chain from p to s.

    Option A fans the support vertex over the head of the chain and the start
    over the tail; option B fans the far end over the head and the convex
    vertex over the tail.  The cheaper valid option wins; ties go to A.
    """
    a_edges = w.option_edges(p, c, l, s, "A")
    b_edges = w.option_edges(p, c, l, s, "B")
    a_ok = w.option_valid(p, s, a_edges)
    b_ok = w.option_valid(p, s, b_edges)
    if not a_ok and not b_ok:
        raise Phase1Error("neither triangulation of the extended chain is valid",
                          w.ct.face, p, EXTENDED)
    if not b_ok:
        return "A"
    if not a_ok:
        return "B"
    # both options contain the closing edge p-s; compare the rest
    if compare_power_sums(w.option_cost(b_edges), w.option_cost(a_edges), q) < 0:
        return "B"
    return "A"


def run_phase1(g: Pslg, level: int, cells, improved: bool = True, q=1) -> Phase1Trace:
    """Run the ring heuristic on ``g`` in place and return the trace.

    ``cells[v]`` is the (ix, iy) cell of vertex ``v`` at ``level``.
    """
    snap = g.copy()
    trace = Phase1Trace(level, snapshot=snap)
    if snap.num_edges == 0:
        return trace
    for face in snap.faces():
        if face.triangulated:
            continue
        for fb in face.components:
            ct = ComponentTrace(face.id, fb.component, fb)
            trace.components.append(ct)
            if fb.convex is None:
                ct.note = "too short"
                continue
            if not any(fb.convex):
                ct.note = "all-reflex component"
                continue
            ct.start = select_start_vertex(fb)
            _Walker(g, snap, fb, cells, improved, q, ct).run(ct.start)
    return trace


# --- validators ---------------------------------------------------------------


def is_one_chain(g: Pslg, fb: FaceBoundary, a: int, b: int, cells) -> bool:
    """Definitional test on the snapshot graph for the chain from a to b."""
    m = len(fb.vertices)
    if b - a < 2:
        return False
    conv = [fb.convex[t % m] for t in range(a + 1, b)]
    if sum(conv) != 1:
        return False
    c = a + 1 + conv.index(True)
    cc = cells[fb.vertex(c)]
    if not all(adjacent_xy(cells[fb.vertex(t)], cc) for t in range(a, b + 1)):
        return False
    for t in range(c + 1, b + 1):
        if not _sees_or_adjacent(g, fb, c - 1, t):
            return False
    for t in range(a, c):
        if not _sees_or_adjacent(g, fb, c + 1, t):
            return False
    return True


def _sees_or_adjacent(g: Pslg, fb: FaceBoundary, x: int, y: int) -> bool:
    m = len(fb.vertices)
    if (x - y) % m in (1, m - 1):
        return True  # consecutive occurrences share a boundary edge
    return g.visible(fb, x % m, y % m)


def is_two_chain(g: Pslg, fb: FaceBoundary, a: int, b: int, cells) -> bool:
    m = len(fb.vertices)
    conv = [fb.convex[t % m] for t in range(a + 1, b)]
    if sum(conv) != 2:
        return False
    c = a + 1 + conv.index(True)
    if not fb.convex[(c + 1) % m] or not (a + 1 < c + 1 < b):
        return False
    return is_one_chain(g, fb, a, c + 1, cells) and is_one_chain(g, fb, c, b, cells)


def classify_chain(g: Pslg, fb: FaceBoundary, a: int, b: int, cells) -> str | None:
    if is_one_chain(g, fb, a, b, cells):
        return "1-chain"
    if is_two_chain(g, fb, a, b, cells):
        return "2-chain"
    return None


def region_points(points, fb: FaceBoundary, a: int, b: int, candidates=None) -> list[int]:
    """Indices of points strictly inside the polygon closed by the chain and segment b-a."""
    poly = [points[fb.vertex(t)] for t in range(a, b + 1)]
    idx = range(len(points)) if candidates is None else candidates
    return [v for v in idx if point_in_polygon(points[v], poly) == 1]


def region_is_empty(points, fb: FaceBoundary, a: int, b: int) -> bool:
    return not region_points(points, fb, a, b)


def chains_interior_disjoint(ct: ComponentTrace) -> bool:
    m = len(ct.boundary.vertices)
    chains = ct.chains
    for x in range(len(chains)):
        for y in range(x + 1, len(chains)):
            if chains[x].interior(m) & chains[y].interior(m):
                if x == 0 and y == len(chains) - 1 and chains[y].step == CLOSING:
                    continue
                return False
    return True


def o2_holds(live: Pslg, snap: Pslg, ct: ComponentTrace, cells) -> bool:
    """The last vertex of a maximal reflex run is joined to its forward support
    whenever the gate holds and the chain between them is a 1-chain.

    Exempt are runs whose forward support was already cut off as the interior
    of another chain, and chains triangulated with option B, which by design
    omit that edge.
    """
    fb = ct.boundary
    if fb.convex is None or not any(fb.convex) or ct.start is None:
        return True
    m = len(fb.vertices)
    exempt = set()
    hidden = set()
    for ch in ct.chains:
        hidden |= ch.interior(m)
        if ch.option == "B":
            exempt.update(t % m for t in range(ch.start, ch.end))
    for t in range(m):
        if fb.convex[t] or not fb.convex[(t + 1) % m] or t in exempt:
            continue
        c, l = t + 1, t + 2
        if l % m in hidden:
            continue
        if fb.vertex(l) == fb.vertex(t):
            continue
        if not adjacent_xy(cells[fb.vertex(c)], cells[fb.vertex(t)]):
            continue
        P = snap.points
        if orient(P[fb.vertex(t)], P[fb.vertex(c)], P[fb.vertex(l)]) >= 0:
            continue  # the triangle would lie outside the face
        if not snap.visible(fb, t, l % m) or not is_one_chain(snap, fb, t, l, cells):
            continue
        if not live.has_edge(fb.vertex(t), fb.vertex(l)):
            return False
    return True


def edge_spans(cells, edges, limit: int = 3) -> bool:
    """Endpoints of every edge at most ``limit + 1`` cells apart."""
    for u, v in edges:
        a, b = cells[u], cells[v]
        if abs(a[0] - b[0]) > limit or abs(a[1] - b[1]) > limit:
            return False
    return True


def validate_trace(trace: Phase1Trace, live: Pslg, cells, points=None) -> list[str]:
    """Re-derive every structural property of a trace; return failure messages."""
    snap = trace.snapshot
    pts = points if points is not None else snap.points
    problems = []
    for ct in trace.components:
        fb = ct.boundary
        for ch in ct.chains:
            kind = classify_chain(snap, fb, ch.start, ch.end, cells)
            if kind is None:
                problems.append(f"face {ct.face}: chain {ch.start}..{ch.end} ({ch.step}) "
                                "is neither a 1-chain nor a 2-chain")
            if not region_is_empty(pts, fb, ch.start, ch.end):
                problems.append(f"face {ct.face}: region of chain {ch.start}..{ch.end} "
                                "contains a point")
        if not chains_interior_disjoint(ct):
            problems.append(f"face {ct.face}: chains overlap")
        if not o2_holds(live, snap, ct, cells):
            problems.append(f"face {ct.face}: reflex run end missing its support edge")
    if not edge_spans(cells, trace.edges):
        problems.append("an edge spans more than four cells")
    return problems
