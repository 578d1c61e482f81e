from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dpflex.cover import (
    Coloring,
    Cover,
    WeightedRequest,
    enumerate_colorings,
    identity_cover,
    is_valid_coloring,
    request_value,
    total_weight,
)
from dpflex.errors import Disconnected, InputError, OutOfClass
from dpflex.fixtures import load_fixture
from dpflex.flexibility import (
    ColoringDistribution,
    Sampler,
    avoidance_checks,
    avoidance_probability,
    build_resolution,
    epsilon,
    exact_distribution,
    min_fixation_probability,
    sample_coloring,
    satisfy_request,
)
from dpflex.plane import build_plane_graph, class_membership

from helpers import corpus

VERTEX = build_plane_graph({0: []})
EDGE = build_plane_graph({0: [1], 1: [0]})


def setup(name):
    G = load_fixture(name).graph
    R = build_resolution(G)
    C = identity_cover(G)
    return G, R, C, exact_distribution(G, C, R)


@pytest.mark.parametrize("k,b,eps", [(4, 1, Fraction(1, 64)), (3, 1, Fraction(1, 9)), (4, 3, Fraction(1, 262144))])
def test_epsilon(k, b, eps):
    assert epsilon(k, b) == eps


def test_epsilon_domain():
    with pytest.raises(InputError):
        epsilon(4, 0)


# -- resolutions ------------------------------------------------------------------

def test_c5_resolution():
    R = build_resolution(load_fixture("c5").graph)
    assert [s.match.kind for s in R.all_blocks()] == ["RC1"] * 5
    assert R.b == 1 and R.epsilon == Fraction(1, 64)


def test_single_vertex_resolution():
    R = build_resolution(VERTEX)
    assert R.steps == [] and R.terminal.block == {0} and R.b == 1


def test_rc2_closed_resolution_starts_with_rc2():
    R = build_resolution(load_fixture("rc2_closed").graph)
    assert R.steps[0].match.kind == "RC2" and R.steps[0].match.block_size == 2
    assert R.b == 2


def test_resolution_levels_are_nested_and_blocks_partition():
    G = load_fixture("barrel").graph
    R = build_resolution(G)
    levels = R.levels()
    assert levels[0] == frozenset(G.vertices)
    assert all(b <= a for a, b in zip(levels, levels[1:]))
    blocks = [s.block for s in R.all_blocks()]
    assert sum(map(len, blocks)) == len(G.vertices)
    assert frozenset().union(*blocks) == frozenset(G.vertices)


def test_resolution_preconditions():
    with pytest.raises(OutOfClass):
        build_resolution(load_fixture("k4").graph)
    with pytest.raises(Disconnected):
        build_resolution(build_plane_graph({0: [], 1: []}))


# -- exact distribution -----------------------------------------------------------------

def test_single_vertex_uniform():
    R = build_resolution(VERTEX)
    D = exact_distribution(VERTEX, identity_cover(VERTEX), R)
    assert D.probabilities == (Fraction(1, 4),) * 4
    assert min_fixation_probability(D) == (Fraction(1, 4), (0, 0))
    assert avoidance_probability(D, [], 0) == 1
    assert avoidance_probability(D, [0], 2) == Fraction(3, 4)


def test_edge_two_stage_process():
    R = build_resolution(EDGE)
    first, last = R.steps[0].block, R.terminal.block
    assert first == {0} and last == {1}
    D = exact_distribution(EDGE, identity_cover(EDGE), R)
    # u=1 uniform over 4 colors, then v=0 uniform over the 3 colors left
    assert all(p == Fraction(1, 12) for p in D.probabilities) and len(D) == 12
    for c in range(4):
        assert D.marginal(1, c) == D.marginal(0, c) == Fraction(1, 4)


def test_c5_min_fixation():
    _, R, _, D = setup("c5")
    assert min_fixation_probability(D)[0] >= Fraction(1, 64)


def test_concentrated_distribution_has_zero_fixation():
    C = Cover({0: 2})
    D = ColoringDistribution((Coloring.of({0: 1}),), (Fraction(1),), C)
    assert min_fixation_probability(D) == (0, (0, 0))


@pytest.mark.parametrize("name", ["c5", "p4", "rc2_closed", "two_triangles", "four3_vertex"])
def test_distribution_invariants(name):
    G, R, C, D = setup(name)
    assert D.total() == 1
    marg = D.marginals()
    for v in G.vertices:
        assert sum(marg[(v, c)] for c in range(C.sizes[v])) == 1
    assert all(is_valid_coloring(G, C, phi) for phi in D.support)
    assert set(D.support) <= set(enumerate_colorings(G, C))
    assert min_fixation_probability(D)[0] >= R.epsilon


def test_avoidance_on_rc2_closed():
    G, R, C, D = setup("rc2_closed")
    checks = avoidance_checks(G, R, D)
    assert checks and all(c.ok for c in checks)
    assert {c.bound for c in checks if len(c.I) == 1} == {Fraction(1, 16)}


def test_non_identity_cover():
    G = load_fixture("c5").graph
    rng = random.Random(3)
    mats = {}
    for e in G.edges:
        perm = list(range(4))
        rng.shuffle(perm)
        mats[e] = {(i, perm[i]) for i in range(4)}
    C = Cover({v: 4 for v in G.vertices}, mats)
    R = build_resolution(G)
    D = exact_distribution(G, C, R)
    assert D.total() == 1 and set(D.support) == set(enumerate_colorings(G, C))
    assert min_fixation_probability(D)[0] >= R.epsilon


# -- sampling -----------------------------------------------------------------------------

def test_sampler_determinism():
    G, R, C, _ = setup("c5")
    a = Sampler(G, C, R).draw_many(5, 20)
    b = Sampler(G, C, R).draw_many(5, 20)
    assert a == b
    assert sample_coloring(G, C, R, 5, 3) == a[3]
    assert Sampler(G, C, R).draw_many(6, 20) != a


def test_single_vertex_sampler_frequencies():
    R = build_resolution(VERTEX)
    s = Sampler(VERTEX, identity_cover(VERTEX), R)
    n = 100_000
    counts = Counter(s.draw(11, i)[0] for i in range(n))
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert all(abs(counts[c] - n / 4) <= 3 * sigma for c in range(4))


def test_c5_samples_are_valid():
    G, R, C, D = setup("c5")
    draws = Sampler(G, C, R).draw_many(0, 2000)
    assert all(is_valid_coloring(G, C, phi) for phi in draws)
    assert set(draws) <= set(D.support)


# -- requests -------------------------------------------------------------------------------

def test_c5_indicator_request():
    G, R, C, D = setup("c5")
    res = satisfy_request(G, C, R, WeightedRequest({(2, 3): 1}), distribution=D)
    assert res.value == 1 and res.epsilon == Fraction(1, 64) and res.certified
    assert res.coloring[2] == 3


def test_satisfy_argmax_at_least_mean():
    G, R, C, D = setup("p4")
    rng = random.Random(0)
    for _ in range(20):
        w = WeightedRequest({(v, c): Fraction(rng.randint(0, 5), rng.randint(1, 4))
                             for v in G.vertices for c in range(4) if rng.random() < 0.4})
        res = satisfy_request(G, C, R, w, distribution=D)
        brute_mean = sum((p * request_value(w, phi) for phi, p in D.items()), Fraction(0))
        assert res.value >= res.expectation == brute_mean
        assert res.value >= res.epsilon * total_weight(w)
        assert res.value == max(request_value(w, phi) for phi in D.support)
        first = next(phi for phi in D.support if request_value(w, phi) == res.value)
        assert res.coloring == first


def test_sampled_fallback():
    G = load_fixture("c5").graph
    R = build_resolution(G)
    C = identity_cover(G)
    res = satisfy_request(G, C, R, WeightedRequest({(0, 1): 1}), budget=10, samples=50, seed=4)
    assert res.mode == "sampled" and res.samples == 50 and not res.certified
    assert is_valid_coloring(G, C, res.coloring)


def test_request_outside_cover_rejected():
    G, R, C, D = setup("c5")
    with pytest.raises(InputError):
        satisfy_request(G, C, R, WeightedRequest({(0, 7): 1}), distribution=D)


# -- properties on random small in-class graphs ------------------------------------------------

SMALL = [G for G in corpus(seed=5, size=150, max_n=6) if G.connected and class_membership(G).in_class]


@given(st.sampled_from(SMALL), st.integers(0, 2**32 - 1))
def test_random_graph_guarantees(G, seed):
    R = build_resolution(G)
    C = identity_cover(G)
    D = exact_distribution(G, C, R)
    assert D.total() == 1
    assert min_fixation_probability(D)[0] >= R.epsilon
    assert set(D.support) <= set(enumerate_colorings(G, C))
    phi = sample_coloring(G, C, R, seed)
    assert phi in set(D.support)
