import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridmwt.errors import DegenerateInputError, GridError
from gridmwt.geom import squared_distance
from gridmwt.grid import (
    CellCoord,
    GridConfig,
    build_level_index,
    cell_of,
    cell_table,
    cells_adjacent,
    choose_origin_offset,
    edge_level,
    make_grid,
    normalize,
    sample_gamma,
)

from conftest import general_points

HALF = GridConfig(Fraction(1, 2), 4)
F = Fraction


def test_normalize_scales_by_closest_pair():
    frame, norm = normalize([(0, 0), (2, 0), (0, 2)])
    assert norm.scale == F(1, 2)
    assert norm.spread == 3
    assert norm.unit_sq == 1
    assert squared_distance(frame[1], frame[2]) == 2


def test_normalize_identity_scale():
    _, norm = normalize([(0, 0), (1, 0), (0, 1), (3, 3)])
    assert norm.scale == 1


def test_normalize_irrational_unit_stays_exact():
    frame, norm = normalize([(0, 0), (1, 1), (5, 0)])
    assert norm.unit_sq != 1
    assert abs(norm.unit_sq - 1) < F(1, 2**40)
    assert squared_distance(frame[0], frame[1]) == norm.unit_sq


def test_normalize_rejects_degenerate():
    with pytest.raises(DegenerateInputError, match="collinear"):
        normalize([(0, 0), (1, 0), (100, 0)])
    with pytest.raises(DegenerateInputError, match="duplicate"):
        normalize([(0, 0), (1, 0), (0, 0)])


def test_sample_gamma_range_and_determinism():
    for s in range(200):
        g = sample_gamma(s)
        assert F(1, 3) < g < 1
        assert sample_gamma(s) == g


def test_sample_gamma_mean():
    mean = sum(float(sample_gamma(s)) for s in range(10_000)) / 10_000
    assert abs(mean - 2 / 3) < 0.01


def _points_on_lines(pts, off, gamma, levels):
    hits = 0
    for p in pts:
        for i in range(levels + 1):
            side = gamma * F(3) ** (i - 1)
            for axis in (0, 1):
                if ((F(p[axis]) - off[axis]) / side).denominator == 1:
                    hits += 1
    return hits


def test_offset_zero_when_clear():
    pts = [(F(1, 7), F(2, 7)), (F(9, 7), F(1, 11)), (F(3, 13), F(20, 7))]
    assert choose_origin_offset(pts, F(1, 2), levels=4) == (0, 0)


def test_offset_moves_off_cell_corner():
    gamma = F(1, 2)
    pts = [(gamma, gamma), (F(9, 7), F(1, 11)), (F(3, 13), F(20, 7))]
    assert _points_on_lines(pts, (0, 0), gamma, 4) > 0
    off = choose_origin_offset(pts, gamma, levels=4)
    assert off != (0, 0)
    assert _points_on_lines(pts, off, gamma, 4) == 0
    assert choose_origin_offset(pts, gamma, levels=4) == off
    cfg = GridConfig(gamma, 4, off)
    for p in pts:
        for i in range(5):
            cell_of(p, i, cfg)


def test_cell_of_examples():
    assert cell_of((F(1, 10), F(1, 10)), 1, HALF) == CellCoord(1, 0, 0)
    assert cell_of((F(13, 10), F(1, 10)), 1, HALF) == CellCoord(1, 2, 0)
    assert cell_of((F(13, 10), F(1, 10)), 2, HALF) == CellCoord(2, 0, 0)


def test_cell_of_on_line_raises():
    with pytest.raises(GridError, match="offset violated"):
        cell_of((F(1, 2), F(1, 10)), 1, HALF)


def test_cells_adjacent_examples():
    assert cells_adjacent(CellCoord(1, 0, 0), CellCoord(1, 0, 0))
    assert cells_adjacent(CellCoord(1, 0, 0), CellCoord(1, 1, 1))
    assert not cells_adjacent(CellCoord(1, 0, 0), CellCoord(1, 2, 0))
    with pytest.raises(GridError):
        cells_adjacent(CellCoord(1, 0, 0), CellCoord(2, 0, 0))


def test_edge_level_examples():
    p, q = (F(1, 10), F(1, 10)), (F(13, 10), F(1, 10))
    assert edge_level(p, q, HALF) == 2
    assert edge_level(p, (F(2, 10), F(3, 10)), HALF) == 1


def test_two_points_one_level():
    idx = build_level_index([(F(1, 10), F(1, 10)), (F(13, 10), F(1, 10))], HALF)
    assert {i: e for i, e in idx.levels.items() if e} == {2: [(0, 1)]}


def _setup(pts, seed=0):
    frame, norm = normalize(pts)
    cfg = make_grid(frame, norm, sample_gamma(seed))
    return frame, cfg


def test_index_matches_edge_level_on_fixture():
    pts = [(0, 0), (7, 1), (3, 9), (12, 4), (6, 5), (1, 14), (9, 11), (15, 16)]
    frame, cfg = _setup(pts, 3)
    idx = build_level_index(frame, cfg)
    for a, b in combinations(range(len(pts)), 2):
        lvl = edge_level(frame[a], frame[b], cfg)
        assert (a, b) in idx.levels[lvl]


@given(general_points(3, 9, hi=500), st.integers(0, 1000))
def test_partition_sandwich_and_monotone(pts, seed):
    frame, cfg = _setup(pts, seed)
    cells = cell_table(frame, cfg)
    idx = build_level_index(frame, cfg, cells)
    n = len(pts)
    listed = [e for lst in idx.levels.values() for e in lst]
    assert sorted(listed) == list(combinations(range(n), 2))
    assert not idx.pairs(0)
    for i, lst in idx.levels.items():
        base = (cfg.gamma * F(3) ** (i - 2)) ** 2
        for e in lst:
            d2 = idx.sqlen[e]
            assert base <= d2 <= 72 * base
            for j in range(i, cfg.levels + 1):
                a, b = cells[j][e[0]], cells[j][e[1]]
                assert abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


@given(general_points(3, 9, hi=500))
def test_level_zero_adjacency_empty(pts):
    frame, cfg = _setup(pts)
    cells = cell_table(frame, cfg)
    for a, b in combinations(range(len(pts)), 2):
        ca, cb = cells[0][a], cells[0][b]
        assert max(abs(ca[0] - cb[0]), abs(ca[1] - cb[1])) > 1


def test_side_lengths():
    cfg = GridConfig(F(1, 2), 3)
    assert cfg.side(1) == F(1, 2)
    assert cfg.side(0) == F(1, 6)
    assert math.isclose(float(cfg.side(3)), 4.5)
