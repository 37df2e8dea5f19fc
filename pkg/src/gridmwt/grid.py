"""Normalization, the random grid scale and the nested grid hierarchy.

Points live in a rational *frame*.  One normalized unit has squared length
``unit_sq`` in the frame; it is exactly 1 whenever the closest-pair distance
is rational, and otherwise a rational within 2**-40 of 1.  Cell indices are
computed exactly in both cases (floor of a rational over a square root is an
integer square root), so no decision in the hierarchy ever rounds.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DegenerateInputError, GridError
from .geom import Point, PointSet, closest_pair, diameter, squared_distance

_SQRT_DIGITS = 2 ** 48
GAMMA_RESOLUTION = 2 ** 32


@dataclass(frozen=True)
class Normalization:
    scale: Fraction
    translation: tuple[Fraction, Fraction]
    spread: int
    unit_sq: Fraction = Fraction(1)

    def to_frame(self, p) -> Point:
        return Point(
            (Fraction(p[0]) - self.translation[0]) * self.scale,
            (Fraction(p[1]) - self.translation[1]) * self.scale,
        )

    def to_original(self, p) -> Point:
        return Point(
            Fraction(p[0]) / self.scale + self.translation[0],
            Fraction(p[1]) / self.scale + self.translation[1],
        )


class CellCoord(NamedTuple):
    level: int
    ix: int
    iy: int


@dataclass(frozen=True)
class GridConfig:
    gamma: Fraction
    levels: int
    offset: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    unit_sq: Fraction = Fraction(1)

    def __post_init__(self):
        if not (Fraction(1, 3) < self.gamma < 1):
            raise GridError(f"gamma {self.gamma} outside (1/3, 1)")

    def side(self, level: int) -> Fraction:
        """Cell side at ``level`` in normalized units."""
        return self.gamma * Fraction(3) ** (level - 1)


def _exact_sqrt(x: Fraction):
    """Exact rational square root, or None when irrational."""
    a, b = x.numerator, x.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def normalize(ps) -> tuple[PointSet, Normalization]:
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    if len(ps) < 3:
        raise DegenerateInputError("degenerate input: fewer than 3 points")
    d2 = Fraction(closest_pair(ps)[2])
    root = _exact_sqrt(d2)
    if root is None:
        a, b = d2.numerator, d2.denominator
        root = Fraction(math.isqrt(a * b * _SQRT_DIGITS ** 2), b * _SQRT_DIGITS)
    scale = 1 / root
    unit_sq = d2 * scale * scale
    # frame minimum sits one frame unit above the origin on both axes
    tx = min(p.x for p in ps) - root
    ty = min(p.y for p in ps) - root
    spread = 1
    diam = Fraction(diameter(ps)) * scale * scale
    while diam > spread * spread * unit_sq:
        spread *= 3
    norm = Normalization(scale, (tx, ty), spread, unit_sq)
    frame = PointSet([norm.to_frame(p) for p in ps], validate=False)
    return frame, norm


def sample_gamma(seed: int) -> Fraction:
    """Deterministic draw from a uniform 2**32-point grid strictly inside (1/3, 1)."""
    k = random.Random(seed).getrandbits(32)
    return Fraction(1, 3) + Fraction(2, 3) * Fraction(k + 1, GAMMA_RESOLUTION + 1)


def levels_for_spread(spread: int) -> int:
    """Top level log3(9 * spread) + 1."""
    lg = 0
    s = spread
    while s > 1:
        s //= 3
        lg += 1
    return lg + 3


def _floor_over_sqrt(t: Fraction, unit_sq: Fraction) -> int:
    """floor(t / sqrt(unit_sq)) exactly."""
    if unit_sq == 1:
        return math.floor(t)
    z = t * t / unit_sq
    r = math.isqrt(z.numerator // z.denominator)
    if t >= 0:
        return r
    return -r if r * r == z else -(r + 1)


def _on_line(t: Fraction, unit_sq: Fraction) -> bool:
    """Is t / sqrt(unit_sq) an integer?"""
    z = t * t / unit_sq
    if z.denominator != 1:
        return False
    r = math.isqrt(z.numerator)
    return r * r == z.numerator


def _axis_ok(coords, off, gamma, levels, unit_sq) -> bool:
    for c in coords:
        for i in range(levels + 1):
            if _on_line((c - off) / (gamma * Fraction(3) ** (i - 1)), unit_sq):
                return False
    return True


def choose_origin_offset(ps, gamma, levels: int | None = None,
                         unit_sq=Fraction(1)) -> tuple[Fraction, Fraction]:
    """Smallest grid-origin nudge keeping every point off every grid line.

    Candidates are 0, eps, 2 eps, ... with eps = (gamma / 3) / (2 (T + 1)) and
    T = n (levels + 1).  Each (point, level) pair rules out at most one of the
    first T + 1 candidates, so the search ends within them.
    """
    gamma = Fraction(gamma)
    unit_sq = Fraction(unit_sq)
    pts = list(ps)
    if levels is None:
        spread = 1
        diam = Fraction(diameter(pts)) if len(pts) > 1 else Fraction(0)
        while diam > spread * spread * unit_sq:
            spread *= 3
        levels = levels_for_spread(spread)
    total = len(pts) * (levels + 1)
    eps = gamma / 3 / (2 * (total + 1))
    out = []
    for axis in (0, 1):
        coords = [Fraction(p[axis]) for p in pts]
        for k in range(total + 2):
            off = k * eps
            if _axis_ok(coords, off, gamma, levels, unit_sq):
                out.append(off)
                break
        else:  # pragma: no cover - excluded by the counting argument above
            raise GridError("no valid grid offset found")
    return out[0], out[1]


def make_grid(frame, norm: Normalization, gamma) -> GridConfig:
    gamma = Fraction(gamma)
    levels = levels_for_spread(norm.spread)
    offset = choose_origin_offset(frame, gamma, levels, norm.unit_sq)
    return GridConfig(gamma, levels, offset, norm.unit_sq)


def cell_of(p, level: int, cfg: GridConfig) -> CellCoord:
    side = cfg.side(level)
    tx = (Fraction(p[0]) - cfg.offset[0]) / side
    ty = (Fraction(p[1]) - cfg.offset[1]) / side
    if _on_line(tx, cfg.unit_sq) or _on_line(ty, cfg.unit_sq):
        raise GridError(f"offset violated: point {tuple(p)} on a level-{level} grid line")
    return CellCoord(level, _floor_over_sqrt(tx, cfg.unit_sq),
                     _floor_over_sqrt(ty, cfg.unit_sq))


def cells_adjacent(c1: CellCoord, c2: CellCoord) -> bool:
    if c1.level != c2.level:
        raise GridError(f"cells on different levels ({c1.level} vs {c2.level})")
    return abs(c1.ix - c2.ix) <= 1 and abs(c1.iy - c2.iy) <= 1


def edge_level(u, v, cfg: GridConfig) -> int:
    for i in range(1, cfg.levels + 1):
        if cells_adjacent(cell_of(u, i, cfg), cell_of(v, i, cfg)):
            return i
    raise GridError(f"points {tuple(u)} and {tuple(v)} never adjacent up to level {cfg.levels}")


def cell_table(points: Sequence, cfg: GridConfig) -> list[list[tuple[int, int]]]:
    """``table[i][p]`` is the (ix, iy) cell of point ``p`` at level ``i``, for i in 0..L."""
    table = []
    for i in range(cfg.levels + 1):
        table.append([tuple(cell_of(p, i, cfg))[1:] for p in points])
    return table


def adjacent_xy(a, b) -> bool:
    return abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


@dataclass
class LeveledEdgeIndex:
    """Every point pair filed under the first level at which it becomes adjacent."""

    levels: dict[int, list[tuple[int, int]]]
    sqlen: dict[tuple[int, int], Fraction]
    level_of: dict[tuple[int, int], int] = field(default_factory=dict)

    def pairs(self, level: int) -> list[tuple[int, int]]:
        return self.levels.get(level, [])

    def adjacency(self, level: int) -> list[tuple[int, int]]:
        """Edges of the adjacency graph at ``level`` (union of E_1 .. E_level)."""
        out = []
        for i in sorted(self.levels):
            if i <= level:
                out.extend(self.levels[i])
        return out

    def nonempty_levels(self) -> list[int]:
        return sorted(i for i, e in self.levels.items() if e)


def build_level_index(ps, cfg: GridConfig, cells=None) -> LeveledEdgeIndex:
    pts = list(ps)
    if cells is None:
        cells = cell_table(pts, cfg)
    n = len(pts)
    levels: dict[int, list[tuple[int, int]]] = {}
    sqlen: dict[tuple[int, int], Fraction] = {}
    level_of: dict[tuple[int, int], int] = {}
    for a in range(n):
        for b in range(a + 1, n):
            for i in range(1, cfg.levels + 1):
                if adjacent_xy(cells[i][a], cells[i][b]):
                    break
            else:
                raise GridError(f"pair {(a, b)} never adjacent up to level {cfg.levels}")
            d2 = Fraction(squared_distance(pts[a], pts[b])) / cfg.unit_sq
            sqlen[(a, b)] = d2
            level_of[(a, b)] = i
            levels.setdefault(i, []).append((a, b))
    for lst in levels.values():
        lst.sort(key=lambda e: (sqlen[e], e))
    return LeveledEdgeIndex(levels, sqlen, level_of)
