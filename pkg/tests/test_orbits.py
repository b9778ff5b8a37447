import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exteria.core import Matrix, random_int_matrix, random_invertible, random_matrix, rank
from exteria.exterior import ExteriorPoint, compound
from exteria.orbits import (
    admissible_orbits,
    classify,
    describe_orbit,
    f_v_eval,
    infinitesimal_orbit_dim,
    normal_form,
    orbit_dimension,
    orbit_rank,
    same_fiber_high_rank,
    same_fiber_rank_t,
    small_rank,
)
from exteria.shapes import in_At_support, orbit_to_prime, shape_in_prime, shapes_up_to


CASES = [(4, 4, 2), (4, 5, 2), (5, 5, 3), (4, 6, 3)]


@pytest.mark.parametrize("m, n, t", CASES)
def test_orbit_dimension_matches_lie_algebra_rank(m, n, t):
    for u, k in admissible_orbits(m, n, t):
        assert orbit_dimension(u, k, m, n, t) == infinitesimal_orbit_dim(normal_form(u, k, m, n, t))


@pytest.mark.parametrize(
    "m, n, t, dims",
    [(4, 4, 2, [0, 9, 14, 15, 15, 16]), (5, 5, 3, [0, 13, 20, 21, 23, 24, 24, 25])],
)
def test_orbit_dimension_table(m, n, t, dims):
    assert [orbit_dimension(u, k, m, n, t) for u, k in admissible_orbits(m, n, t)] == dims


@pytest.mark.parametrize("m, n, t", CASES)
def test_extreme_orbits(m, n, t):
    orbits = admissible_orbits(m, n, t)
    assert orbits[:2] == [(0, None), (1, None)]
    assert orbit_dimension(t + 1, m - t, m, n, t) == m * n
    assert orbit_dimension(1, None, m, n, t) == (m - t) * t + (n - t) * t + 1
    assert len(orbits) == t * (m - t) + 2


@pytest.mark.parametrize("m, n, t", CASES)
def test_normal_form_rank_and_small_rank(m, n, t):
    for u, k in admissible_orbits(m, n, t):
        d = normal_form(u, k, m, n, t)
        if u >= 2:
            assert orbit_rank(u, k) == math.comb(u + k - 1, u - 1)
        assert d.rank() == orbit_rank(u, k)
        assert small_rank(d, "randomized", seed=1) == u
        assert small_rank(d, "certificate", seed=1) == u


@pytest.mark.parametrize("m, n, t", CASES)
def test_f_v_vanishing_table(m, n, t):
    for u, k in admissible_orbits(m, n, t):
        d = normal_form(u, k, m, n, t)
        for v in range(t + 1):
            assert (f_v_eval(d, v) == 0) == (u < t + 1 - v)


@pytest.mark.parametrize("seed", range(3))
def test_f_v_on_compound_of_matrix(seed):
    rng = random.Random(seed)
    B = random_int_matrix(rng, 4, 4)
    x = compound(B, 2)
    for v in range(3):
        # on compounds f_v is a power of a (t+1)-minor times a nonzero constant, up to v
        assert (f_v_eval(x, v) == 0) == (rank(Matrix([r[:3] for r in B.rows[:3]], 3)) < 3)


@pytest.mark.parametrize("m, n, t", CASES)
def test_small_rank_is_orbit_invariant(m, n, t):
    rng = random.Random(m + n + t)
    for u, k in admissible_orbits(m, n, t):
        d = normal_form(u, k, m, n, t).act(random_invertible(m, rng), random_invertible(n, rng))
        assert small_rank(d, seed=3) == u


@pytest.mark.parametrize("m, n, t", [(4, 4, 2), (5, 5, 2), (5, 5, 3)])
def test_closure_order_reverses_prime_inclusion(m, n, t):
    # 12 boxes are needed: (4,4,4) separates p0 from q5 when m = 5, t = 3
    support = [s for s in shapes_up_to(12, m) if in_At_support(s, t)]
    info = []
    for u, k in admissible_orbits(m, n, t):
        desc = describe_orbit(u, k, m, n, t)
        prime = orbit_to_prime(u, k, m, t)
        info.append((desc.dimension, {s for s in support if shape_in_prime(s, prime, t)}))
    for d1, s1 in info:
        for d2, s2 in info:
            if s1 < s2:
                assert d1 > d2


def test_describe_orbit_json():
    desc = describe_orbit(2, 1, 4, 4, 2)
    assert desc.to_json() == {"sr": 2, "rank": 2, "k": 1, "dim": 14, "prime": "p0+q4"}
    with pytest.raises(ValueError):
        describe_orbit(2, 3, 4, 4, 2)


def test_classify_compound_of_generic_matrix():
    x = compound(random_matrix(4, 5, 4, 2), 2)
    c = classify(x, seed=0)
    assert c.in_orbit_catalog and c.descriptor.dimension == 20


def test_classify_rejects_inadmissible_pair():
    # rank 1 restricted everywhere but total rank 2: two disjoint rank-one pieces
    x = ExteriorPoint.from_entries(4, 4, 2, {((1, 2), (1, 2)): 1, ((3, 4), (3, 4)): 1})
    c = classify(x)
    assert not c.in_orbit_catalog
    assert c.to_json()["verdict"] == "not in X_t"


def test_classify_rejects_point_violating_relations():
    rng = random.Random(5)
    rows = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(6)]
    c = classify(ExteriorPoint(4, 4, 2, Matrix(rows, 6)), seed=0)
    assert (c.sr, c.rank) == (3, 6)
    assert not c.in_orbit_catalog and "relation" in c.reason


def test_small_rank_unknown_strategy():
    with pytest.raises(ValueError):
        small_rank(normal_form(2, 1, 4, 4, 2), "guess")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_high_rank_fiber_is_plus_minus(seed, t):
    rng = random.Random(seed)
    f = random_matrix(4, 4, 4, seed)
    g = f.scale(rng.choice([1, -1]))
    expected = compound(f, t) == compound(g, t)
    assert same_fiber_high_rank(f, g, t) == expected
    h = f.scale(Fraction(rng.choice([2, 3, -2]), 1))
    assert not same_fiber_high_rank(f, h, t)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_t_fibers(seed):
    rng = random.Random(seed)
    t = 2
    f = random_matrix(4, 5, t, seed)
    P = random_invertible(5, rng)
    verdict = same_fiber_rank_t(f, f @ P, t)
    cf, cg = compound(f, t), compound(f @ P, t)
    assert verdict.proportional == any(
        cf.scale(c) == cg for c in {Fraction(cg.entry(I, J), v) for I, J, v in cf.nonzero_entries()}
    )
    if verdict.proportional:
        assert cf.scale(verdict.scalar) == cg
        assert verdict.equal == (cf == cg)


@pytest.mark.parametrize("m, n, t", [(3, 4, 2), (4, 5, 2), (4, 4, 3)])
def test_infinitesimal_orbit_dim_at_generic_compound(m, n, t):
    x = compound(random_matrix(m, n, m, 4), t)
    assert infinitesimal_orbit_dim(x) == m * n
    assert infinitesimal_orbit_dim(ExteriorPoint.zero(m, n, t)) == 0
