from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from gridmwt.driver import RunConfig, run
from gridmwt.greedy import run_phase2, verify_maximality
from gridmwt.pslg import Pslg, is_triangulation

from conftest import general_points

SQUARE = [(0, 0), (4, 0), (4, 4), (0, 4)]


def by_length(pts, pairs):
    def key(e):
        (ax, ay), (bx, by) = pts[e[0]], pts[e[1]]
        return ((ax - bx) ** 2 + (ay - by) ** 2, e)
    return sorted(pairs, key=key)


def test_triangle_all_inserted():
    g = Pslg([(0, 0), (3, 0), (0, 4)])
    assert run_phase2(g, [(0, 1), (0, 2), (1, 2)]) == (3, 0)
    assert g.num_edges == 3


def test_shorter_crossing_edge_wins():
    pts = [(0, 0), (4, 1), (5, 5), (0, 3)]
    g = Pslg(pts)
    acc, rej = run_phase2(g, by_length(pts, [(0, 2), (1, 3)]))
    assert g.edges() == [(1, 3)] and (acc, rej) == (1, 1)


def test_equal_length_tie_is_lexicographic():
    g = Pslg(SQUARE)
    run_phase2(g, by_length(SQUARE, [(1, 3), (0, 2)]))
    assert g.edges() == [(0, 2)]


def test_existing_edges_are_ignored():
    g = Pslg(SQUARE)
    g.insert_edge(0, 1)
    assert run_phase2(g, [(0, 1), (0, 1), (1, 2)]) == (1, 0)
    assert g.num_edges == 2


def test_maximality_examples():
    all_pairs = list(combinations(range(4), 2))
    g = Pslg(SQUARE)
    run_phase2(g, by_length(SQUARE, all_pairs))
    assert verify_maximality(g, all_pairs)
    cyc = Pslg(SQUARE)
    for i in range(4):
        cyc.insert_edge(i, (i + 1) % 4)
    assert not verify_maximality(cyc, all_pairs)


@given(general_points(3, 10))
def test_greedy_on_complete_graph_triangulates(pts):
    pairs = by_length(pts, list(combinations(range(len(pts)), 2)))
    g = Pslg(pts)
    run_phase2(g, pairs)
    assert is_triangulation(g)
    again = g.copy()
    assert run_phase2(again, pairs)[0] == 0
    assert again.edges() == g.edges()


@given(general_points(3, 15, hi=10**4), st.integers(0, 100))
def test_levels_grow_and_stay_maximal(pts, seed):
    r = run(pts, RunConfig(seed=seed, checks=frozenset({"maximality"})))
    assert r.ok
    sizes = []
    for rec in r.records:
        sizes += [rec.before, rec.after_phase1, rec.after_phase2]
    assert sizes == sorted(sizes)
    assert len(r.edges) == 3 * len(pts) - 3 - r.h
