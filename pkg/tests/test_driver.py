import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridmwt.driver import (
    CHECKS,
    RunConfig,
    check_invariant1,
    check_invariant2,
    cost,
    disc_count,
    run,
    trials,
)
from gridmwt.errors import DegenerateInputError
from gridmwt.geom import INF
from gridmwt.ring import ChainRecord, ComponentTrace, Phase1Trace

from conftest import general_points, random_points

TRI = [(0, 0), (3, 0), (0, 4)]
QUAD = [(0, 0), (4, 0), (5, 4), (-1, 5)]
TRI_CENTER = [(0, 0), (6, 0), (0, 6), (1, 2)]


def test_triangle_run():
    r = run(TRI)
    assert r.edges == [(0, 1), (0, 2), (1, 2)]
    assert r.cost.w == pytest.approx(12.0)
    assert r.ok


def test_convex_quad_has_five_edges():
    r = run(QUAD)
    assert len(r.edges) == 5 == 3 * 4 - 3 - 4


def test_interior_point_forces_six_edges():
    r = run(TRI_CENTER)
    assert r.edges == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_too_few_points():
    with pytest.raises(DegenerateInputError):
        run([(0, 0), (1, 1)])


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(gamma=Fraction(1, 4))
    with pytest.raises(ValueError):
        RunConfig(q=0)
    with pytest.raises(ValueError):
        RunConfig(checks=frozenset({"nope"}))
    assert RunConfig(gamma=Fraction(1, 2)).resolved_gamma() == Fraction(1, 2)


def test_cost_examples():
    edges = [(0, 1), (0, 2), (1, 2)]
    assert cost(edges, TRI, 1).w == pytest.approx(12.0)
    assert cost(edges, TRI, 2).wq == pytest.approx(50.0)
    assert cost(edges, TRI, INF).wq == pytest.approx(5.0)
    assert cost([], TRI, 1).w == 0


def test_cost_q2_separates_equal_weights():
    path = [(i, i + 1) for i in range(5)]
    a = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (6, 0)]
    b = [(0, 0), (Fraction(3, 2), 0), (3, 0), (4, 0), (5, 0), (6, 0)]
    ca, cb = cost(path, a, 2), cost(path, b, 2)
    assert ca.w == pytest.approx(cb.w)
    assert ca.wq == pytest.approx(8.0) and cb.wq == pytest.approx(7.5)


def _trace_with(edge):
    ct = ComponentTrace(0, 0, None, chains=[ChainRecord(0, 0, 2, "1b-plain", [edge])])
    return Phase1Trace(1, [ct])


def test_invariant1_examples():
    half = Fraction(1, 2)
    assert check_invariant1(Phase1Trace(1), 1, half, []).passed
    # squared bound at level 1 with gamma 1/2 is 32 / 4 = 8
    on_bound = check_invariant1(_trace_with((0, 1)), 1, half, [(0, 0), (2, 2)])
    assert on_bound.passed and on_bound.value == pytest.approx(4 * math.sqrt(2))
    too_long = check_invariant1(_trace_with((0, 1)), 1, half, [(0, 0), (2, 3)])
    assert too_long.passed is False and "(0, 1)" in too_long.detail


def test_invariant2_examples():
    g = Fraction(1, 2)
    assert disc_count([100, 200], g, 1) == 0
    assert check_invariant2({0: 0, 1: 0}, [100, 200], g).passed
    assert check_invariant2({5: 5}, [1, 1, 1, 1, 1], g).passed
    assert check_invariant2({5: 4}, [1, 1, 1, 1, 1], g).passed is False


def test_single_seed_trial_matches_run():
    pts = random_points(8, random.Random(4), 1000)
    rep = trials(pts, [3], RunConfig(oracle="exact"))
    r = run(pts, RunConfig(seed=3, oracle="exact"))
    assert rep.results[0].edges == r.edges
    assert rep.alphas[0] == pytest.approx(r.cost.alpha)


def test_forced_triangulation_has_unit_ratio():
    rep = trials(TRI_CENTER, range(10), RunConfig(oracle="exact"))
    assert rep.mean_alpha == pytest.approx(1.0) and rep.max_alpha == pytest.approx(1.0)


def test_greedy_reference():
    r = run(TRI_CENTER, RunConfig(oracle="greedy"))
    assert r.cost.alpha == pytest.approx(1.0)


def test_all_checks_on_small_instance():
    pts = random_points(9, random.Random(11), 500)
    r = run(pts, RunConfig(seed=2, checks=CHECKS))
    names = {c.name for c in r.checks}
    assert names == CHECKS | {"triangulation"}
    assert r.ok


@given(general_points(3, 25, hi=10**5), st.integers(0, 1000), st.sampled_from([1, 2, 3, INF]))
def test_monotone_growth_and_final_count(pts, seed, q):
    r = run(pts, RunConfig(seed=seed, q=q))
    seq = []
    for rec in r.records:
        seq += [rec.before, rec.after_phase1, rec.after_phase2]
    assert seq == sorted(seq)
    assert len(r.edges) == 3 * len(pts) - 3 - r.h
    assert r.ok


@given(general_points(3, 15, hi=10**4), st.integers(0, 100))
def test_deterministic(pts, seed):
    a = run(pts, RunConfig(seed=seed))
    b = run(pts, RunConfig(seed=seed))
    assert a.edges == b.edges and a.gamma == b.gamma
    assert [(r.before, r.after_phase1, r.after_phase2) for r in a.records] == \
           [(r.before, r.after_phase1, r.after_phase2) for r in b.records]
    assert a.cost == b.cost


@given(general_points(3, 15, hi=10**4), st.integers(0, 100),
       st.fractions(min_value=Fraction(1, 1000), max_value=1000).filter(lambda f: f > 0))
def test_scale_invariance(pts, seed, factor):
    scaled = [(x * factor, y * factor) for x, y in pts]
    assert run(pts, RunConfig(seed=seed)).edges == run(scaled, RunConfig(seed=seed)).edges
