from __future__ import annotations

import random

import pytest
from hypothesis import assume, given, strategies as st

from dpflex.cover import count_partial_injections, is_colorable
from dpflex.errors import InputError, OutOfClass
from dpflex.fixtures import load_fixture
from dpflex.plane import build_plane_graph, plane_graph_from_drawing
from dpflex.reducibility import (
    KINDS,
    NotFound,
    ReducibleMatch,
    all_covers_colorable,
    base_sizes,
    check_fix,
    check_forb,
    find_reducible,
    is_f_forbidding,
    iter_reducible,
    size_function,
    verify_match,
)

from helpers import corpus

C5 = build_plane_graph({i: [(i + 1) % 5, (i - 1) % 5] for i in range(5)})

# kind -> (fixture, expected |S \ B|)
RC_FIXTURES = {
    "RC1": ("c5", 1), "RC2": ("rc2", 2), "RC3": ("rc3", 4), "RC4": ("rc4", 5), "RC5": ("rc5", 5),
    "RC6": ("rc6", 5), "RC7": ("rc7", 9), "RC8": ("rc8", 10), "RC9": ("poor_i", 11),
}


def triangle_with_stubs(stubs: int):
    """Triangle u=0, v=1, w=2; u and v get ``stubs`` leaves each, w gets four."""
    pts = {0: (-1.0, -1.732), 1: (1.0, -1.732), 2: (0.0, 0.0)}
    edges = [(0, 1), (1, 2), (0, 2)]
    nxt = 3
    for base, (dx, dy) in ((0, (-1, -1)), (1, (1, -1))):
        for s in range(stubs):
            x, y = pts[base]
            pts[nxt] = (x + dx * (0.5 + 0.3 * s), y + dy * (0.8 - 0.3 * s))
            edges.append((base, nxt))
            nxt += 1
    for s in range(4):
        pts[nxt] = (-0.6 + 0.4 * s, 1.0)
        edges.append((2, nxt))
        nxt += 1
    return plane_graph_from_drawing(pts, edges)


# -- forbidding sets ----------------------------------------------------------------

def test_forbidding_examples():
    assert is_f_forbidding(C5, [])
    tri = load_fixture("rc2")
    assert not is_f_forbidding(tri.graph, [tri["u"], tri["v"]])


def test_c5_adjacent_pair_is_forbidding():
    # apex + two adjacent cycle vertices: one new triangle, no 4-cycle, nothing to intersect
    assert is_f_forbidding(C5, [0, 1])
    assert not is_f_forbidding(C5, [0, 2])  # apex-0-1-2 is a 4-cycle


def test_forbidding_rejects_unknown_vertices():
    with pytest.raises(InputError):
        is_f_forbidding(C5, [9])


# -- sizes -----------------------------------------------------------------------------

def test_size_function():
    F = load_fixture("rc2")
    S = {F["u"], F["v"], F["w"]}
    assert base_sizes(F.graph, {F["u"], F["v"]}) == {F["u"]: 2, F["v"]: 2}
    assert size_function(F.graph, S, {F["w"]}, fix=F["u"]) == {F["u"]: 1, F["v"]: 2}
    assert size_function(F.graph, S, {F["w"]}, I=[F["v"]]) == {F["u"]: 2, F["v"]: 1}


# -- FIX / FORB ----------------------------------------------------------------------------

def test_fix_examples():
    assert check_fix(C5, {0}, set()).ok
    F = load_fixture("rc2")
    assert check_fix(F.graph, {F["u"], F["v"], F["w"]}, {F["w"]}).ok


def test_forced_singleton_edge_fails_with_counterexample():
    edge = build_plane_graph({0: [1], 1: [0]})
    res = all_covers_colorable(edge, {0: 1, 1: 1})
    assert not res.ok
    assert res.counterexample.matching(0, 1) == {(0, 0)}
    assert not is_colorable(edge, res.counterexample)


def test_forb_examples():
    v = check_forb(C5, {0}, set())
    assert v.ok and v.cases == 2  # I = {} and I = {0}
    F = load_fixture("rc2")
    u, w, x = F["u"], F["v"], F["w"]
    res = check_forb(F.graph, {u, w, x}, {x})
    assert res.ok and (min(u, w), max(u, w)) in res.skipped


def test_forb_rc7_pair_on_path():
    F = load_fixture("rc7")
    m = find_reducible(F.graph, kinds=["RC7"])
    I = (F["v1"], F["v2"])
    assert is_f_forbidding(F.graph, I)
    sizes = size_function(F.graph, m.S, m.B, I=I)
    assert all_covers_colorable(F.graph, sizes).ok


def test_boundary_must_be_proper_subset():
    with pytest.raises(InputError):
        check_fix(C5, {0}, {0})


# -- negative controls ----------------------------------------------------------------

def test_rc2_pattern_with_degree_four_fails():
    G = triangle_with_stubs(2)
    assert G.degree(0) == G.degree(1) == 4
    v = verify_match(G, ReducibleMatch("RC2", frozenset({0, 1, 2}), frozenset({2})))
    assert not v.ok and not v.fix.ok
    assert v.fix.counterexample is not None
    assert not is_colorable(build_plane_graph({0: [1], 1: [0]}), v.fix.counterexample)


def test_rc2_pattern_with_degree_three_passes():
    G = triangle_with_stubs(1)
    assert verify_match(G, ReducibleMatch("RC2", frozenset({0, 1, 2}), frozenset({2}))).ok


def test_rc1_on_a_three_vertex_fails_forb():
    G = load_fixture("rc2_closed").graph
    v = verify_match(G, ReducibleMatch("RC1", frozenset({0}), frozenset()))
    assert v.fix.ok  # a single list of size one can always be used
    assert not v.forb.ok and v.forb.forbidden == (0,) and "empty list" in v.forb.reason


# -- matchers ---------------------------------------------------------------------------

def test_find_reducible_examples():
    m = find_reducible(C5)
    assert m.kind == "RC1" and m.anchor == (0,) and not m.B
    F = load_fixture("rc2")
    m = find_reducible(F.graph, kinds=["RC2"])
    assert m.B == {F["w"]} and m.Q == {F["u"], F["v"]}


def test_rc9_boundary_matches_construction():
    F = load_fixture("poor_i")
    m = find_reducible(F.graph, kinds=["RC9"])
    face = {F[f"v{i}"] for i in range(1, 6)}
    A1 = {F["u31"], F["u32"], F["u41"], F["u1"], F["u2"]}
    assert m.Q == face | A1 | {F["u"]}


def test_rc1_found_first_in_stubbed_figures():
    assert find_reducible(load_fixture("rc3").graph).kind == "RC1"


def test_not_found_when_filtered_kinds_are_absent():
    # the dodecahedron has no 3-faces, so neither RC2 nor RC9 can occur
    res = find_reducible(load_fixture("dodecahedron").graph, kinds=["RC2", "RC9"])
    assert isinstance(res, NotFound) and not res


def test_find_reducible_requires_class():
    with pytest.raises(OutOfClass):
        find_reducible(load_fixture("k4").graph)


def test_closed_fixtures_have_matches():
    for name in ("rc2_closed", "dodecahedron", "barrel"):
        assert find_reducible(load_fixture(name).graph)


def test_find_reducible_is_deterministic():
    G = load_fixture("poor_ii").graph
    assert list(iter_reducible(G)) == list(iter_reducible(G))


@pytest.mark.parametrize("kind", KINDS)
def test_every_configuration_verifies(kind):
    name, size = RC_FIXTURES[kind]
    G = load_fixture(name).graph
    m = find_reducible(G, kinds=[kind])
    assert m and m.kind == kind and m.block_size == size
    v = verify_match(G, m)
    assert v.ok, (v.fix.reason, v.forb.reason)
    assert v.min_size >= 2


def test_poor_ii_verifies():
    G = load_fixture("poor_ii").graph
    assert verify_match(G, find_reducible(G, kinds=["RC9"])).ok


def test_all_matches_on_fixtures_verify():
    for name in ("rc3", "rc7", "case_2_1", "case_1_2_1", "poor_i_special"):
        G = load_fixture(name).graph
        for m in iter_reducible(G):
            assert verify_match(G, m).ok, (name, m)


# -- reduced quantifier vs literal enumeration -----------------------------------------------

@pytest.mark.parametrize("kind", ["RC1", "RC2", "RC3"])
def test_reduced_agrees_with_naive_on_small_configurations(kind):
    name, _ = RC_FIXTURES[kind]
    G = load_fixture(name).graph
    m = find_reducible(G, kinds=[kind])
    red = verify_match(G, m, mode="reduced")
    nav = verify_match(G, m, mode="naive")
    assert red.ok == nav.ok is True
    assert red.forb.skipped == nav.forb.skipped


GRAPHS = [G for G in corpus(seed=7, size=120, max_n=5) if G.edges]


@given(st.sampled_from(GRAPHS), st.integers(0, 10**6))
def test_reduced_agrees_with_naive_on_random_instances(G, seed):
    rng = random.Random(seed)
    sizes = {v: rng.randint(1, 3) for v in G.vertices}
    total = 1
    for u, v in G.edges:
        total *= count_partial_injections(sizes[u], sizes[v])
    assume(total <= 20000)
    red = all_covers_colorable(G, sizes)
    nav = all_covers_colorable(G, sizes, mode="naive")
    assert red.ok == nav.ok
    if not red.ok:
        assert not is_colorable(G, red.counterexample)


def test_unknown_mode():
    with pytest.raises(InputError):
        all_covers_colorable(C5, {0: 2}, mode="fast")
