from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from dpflex.errors import EmbeddingInconsistent, InputError, NotA5Face, NotSimple, NotSymmetric, OutOfClass
from dpflex.fixtures import fixture_names, fixture_text, load_fixture
from dpflex.plane import (
    build_plane_graph,
    class_membership,
    classify_5_face,
    classify_vertex,
    distance,
    format_pg,
    parse_pg,
    pendent_3_structure,
    plane_graph_from_drawing,
    weakly_incident,
)

from helpers import brute_has_c4, brute_has_intersecting, corpus, random_drawing


def cycle(n):
    return build_plane_graph({i: [(i + 1) % n, (i - 1) % n] for i in range(n)})


def the_5_face(F):
    target = {F[f"v{i}"] for i in range(1, 6)}
    return next(i for i, f in enumerate(F.graph.faces) if set(f.boundary) == target and f.length == 5)


# -- construction -------------------------------------------------------------

def test_c5_faces():
    G = cycle(5)
    assert len(G.vertices) == 5 and len(G.edges) == 5
    assert [f.length for f in G.faces] == [5, 5]


def test_k4_has_four_triangular_faces():
    G = load_fixture("k4").graph
    assert sorted(f.length for f in G.faces) == [3, 3, 3, 3]


def test_asymmetric_table_rejected():
    with pytest.raises(NotSymmetric):
        build_plane_graph({0: [1], 1: []})


def test_loops_and_multi_edges_rejected():
    with pytest.raises(NotSimple):
        build_plane_graph({0: [0]})
    with pytest.raises(NotSimple):
        build_plane_graph({0: [1, 1], 1: [0, 0]})


def test_nonplanar_rotation_rejected():
    # K4 where one vertex has the mirrored order: traces a torus embedding
    K4 = load_fixture("k4").graph
    rot = {v: list(K4.rotations[v]) for v in K4.vertices}
    rot[0].reverse()
    with pytest.raises(EmbeddingInconsistent):
        build_plane_graph(rot)


def test_isolated_vertex_and_single_edge():
    G = load_fixture("single_vertex").graph
    assert len(G.faces) == 1 and G.faces[0].length == 0
    E = load_fixture("edge").graph
    assert [f.length for f in E.faces] == [2]


def test_disconnected_euler_per_component():
    G = build_plane_graph({0: [1], 1: [0], 2: [3], 3: [2]})
    assert len(G.components) == 2 and not G.connected


@pytest.mark.parametrize("name", fixture_names())
def test_face_tracing_invariants(name):
    G = load_fixture(name).graph
    darts = [d for f in G.faces for d in f.darts]
    assert len(darts) == len(set(darts)) == 2 * len(G.edges)
    assert sum(f.length for f in G.faces) == 2 * len(G.edges)
    if G.connected:
        assert len(G.vertices) - len(G.edges) + len(G.faces) == 2


@given(st.integers(0, 10**6), st.integers(1, 12))
def test_random_drawings_satisfy_euler(seed, n):
    G = random_drawing(random.Random(seed), n, 3 * n)
    # faces are traced per component, so each component keeps its own outer face
    c = len(G.components)
    assert len(G.vertices) - len(G.edges) + len(G.faces) == 2 * c


# -- distance -------------------------------------------------------------------

def test_distance_examples():
    G = cycle(5)
    assert distance(G, 0, 1) == 1
    assert distance(G, 0, 2) == 2
    assert distance(G, 3, 3) == 0


# -- class membership -----------------------------------------------------------

def test_class_examples():
    k4 = class_membership(load_fixture("k4").graph)
    assert k4.intersecting_triangles is not None and not k4.in_class
    bow = class_membership(load_fixture("bowtie").graph)
    assert bow.intersecting_triangles is not None and bow.four_cycle is None
    assert class_membership(load_fixture("two_triangles").graph).in_class


def test_witnesses_are_real():
    adj = load_fixture("k4").graph.adjacency
    rep = class_membership(adj)
    a, b, c, d = rep.four_cycle
    assert b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]
    s, t = rep.intersecting_triangles
    assert set(s) & set(t)
    for tri in (s, t):
        x, y, z = tri
        assert y in adj[x] and z in adj[y] and x in adj[z]


def test_class_detector_agrees_with_brute_force_on_corpus():
    for G in corpus(seed=1, size=200, max_n=9):
        adj = G.adjacency
        rep = class_membership(adj)
        assert (rep.four_cycle is not None) == brute_has_c4(adj)
        assert (rep.intersecting_triangles is not None) == brute_has_intersecting(adj)


# -- pendent structure & classes ---------------------------------------------------

def test_pendent_structure_of_k2_vertex():
    F = load_fixture("k2_vertex")
    P = pendent_3_structure(F.graph, F["v"])
    assert len(P.faces) == F.graph.degree(F["v"]) - 3 == 2
    assert P.neighbors == {F["v1"], F["v2"]}


def test_c5_has_no_pendent_faces():
    P = pendent_3_structure(cycle(5), 0)
    assert not P.faces and not P.neighbors


def test_third_neighbour_sees_pendent_triangle():
    F = load_fixture("face_344")
    G = F.graph
    P = pendent_3_structure(G, F["x"])
    tri = next(i for i, f in enumerate(G.faces) if f.length == 3)
    assert P.faces == {tri} and P.neighbors == {F["u"]}


@pytest.mark.parametrize("name,vertex,tag,label", [
    ("four3_vertex", "v", "four3", "4_3"),
    ("k2_vertex", "v", "k2", "5_2"),
    ("k1_vertex", "v", "k1", "5_1"),
    ("poor_i_special", "u", "special", "special"),
    ("poor_i", "v3", "heavy", "heavy"),
    ("poor_i", "v2", "k1", "4_1"),
    ("case_1_2_1", "v2", "k2", "4_2"),
])
def test_classify_vertex(name, vertex, tag, label):
    F = load_fixture(name)
    c = classify_vertex(F.graph, F[vertex])
    assert c.tag == tag and c.label == label


def test_degree5_without_pendent_faces_is_special():
    G = plane_graph_from_drawing({0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (-1, 0), 4: (0, -1), 5: (1, 1)},
                                 [(0, i) for i in range(1, 6)])
    c = classify_vertex(G, 0)
    assert c.tag == "special" and c.rich


def test_classify_vertex_preconditions():
    with pytest.raises(OutOfClass):
        classify_vertex(load_fixture("k4").graph, 0)
    with pytest.raises(OutOfClass):
        classify_vertex(cycle(5), 0)  # degree 2


def test_poor_faces():
    left = load_fixture("poor_i")
    fi = the_5_face(left)
    fc = classify_5_face(left.graph, fi)
    assert fc.tag == "poor-i" and left["u"] in fc.weakly_incident
    right = load_fixture("poor_ii")
    assert classify_5_face(right.graph, the_5_face(right)).tag == "poor-ii"
    assert classify_5_face(cycle(5), 0).tag == "plain"


def test_weakly_incident_uses_shared_edges():
    F = load_fixture("poor_i")
    assert weakly_incident(F.graph, the_5_face(F)) == {F["u"], F["x"]}


def test_classify_5_face_rejects_other_lengths():
    with pytest.raises(NotA5Face):
        classify_5_face(load_fixture("two_triangles").graph, 0)


def test_rich_is_special_or_heavy():
    for name in fixture_names():
        G = load_fixture(name).graph
        if not class_membership(G).in_class:
            continue
        for v in G.vertices:
            if G.degree(v) >= 3:
                c = classify_vertex(G, v)
                assert c.rich == (c.tag in ("special", "heavy"))


# -- .pg format -------------------------------------------------------------------

@pytest.mark.parametrize("name", fixture_names())
def test_pg_round_trip_is_bit_exact(name):
    text = fixture_text(name)
    assert format_pg(parse_pg(text)) == text


def test_pg_comments_and_blank_lines():
    G = parse_pg("# hello\n\nplanar 2\n0: 1   # trailing\n\n1: 0\n")
    assert G.comments == ("hello",) and G.edges == ((0, 1),)


@pytest.mark.parametrize("text", ["", "planar x\n", "planar 2\n0: 1\n", "planar 1\n0 1\n", "planar 2\n0: 1\n0: 1\n"])
def test_pg_malformed(text):
    with pytest.raises(InputError):
        parse_pg(text)
