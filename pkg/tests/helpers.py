"""Shared graph generators and brute-force oracles for the tests."""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from dpflex.errors import InputError
from dpflex.plane import PlaneGraph, build_plane_graph, plane_graph_from_drawing


def _cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 1e-12) - (v < -1e-12)
    return orient(p, q, r) * orient(p, q, s) < 0 and orient(r, s, p) * orient(r, s, q) < 0


def random_drawing(rng: random.Random, n: int, attempts: int) -> PlaneGraph:
    """Straight-line plane graph: random points, random non-crossing segments."""
    pts = {i: (rng.random(), rng.random()) for i in range(n)}
    edges: list[tuple[int, int]] = []
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    for u, v in pairs[:attempts]:
        if any(len({u, v, a, b}) == 4 and _cross(pts[u], pts[v], pts[a], pts[b]) for a, b in edges):
            continue
        edges.append((u, v))
    return plane_graph_from_drawing(pts, edges)


def random_rotation_system(rng: random.Random, n: int, p: float) -> PlaneGraph | None:
    """Random graph with random cyclic orders; ``None`` unless it embeds in the plane."""
    nb = {v: [] for v in range(n)}
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            nb[u].append(v)
            nb[v].append(u)
    for v in nb:
        rng.shuffle(nb[v])
    try:
        return build_plane_graph(nb)
    except InputError:
        return None


def corpus(seed: int = 0, size: int = 300, max_n: int = 8) -> list[PlaneGraph]:
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        n = rng.randint(1, max_n)
        if rng.random() < 0.5:
            out.append(random_drawing(rng, n, rng.randint(0, 3 * n)))
        else:
            G = random_rotation_system(rng, n, rng.uniform(0.2, 0.6))
            if G is not None:
                out.append(G)
    return out


def brute_has_c4(adj) -> bool:
    for quad in combinations(sorted(adj), 4):
        a = quad[0]
        for b, c, d in permutations(quad[1:]):
            if b < d and b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
                return True
    return False


def brute_triangles(adj) -> list[frozenset[int]]:
    return [frozenset(t) for t in combinations(sorted(adj), 3)
            if t[1] in adj[t[0]] and t[2] in adj[t[0]] and t[2] in adj[t[1]]]


def brute_has_intersecting(adj) -> bool:
    tri = brute_triangles(adj)
    return any(s & t for s, t in combinations(tri, 2))


def brute_list_colorings(G, lists) -> set[tuple[tuple[int, object], ...]]:
    """Proper list colourings by color *name*, straight product."""
    vs = sorted(G.vertices)
    out = set()
    for pick in product(*(sorted(lists[v]) for v in vs)):
        col = dict(zip(vs, pick))
        if all(col[u] != col[v] for u, v in G.edges):
            out.add(tuple(sorted(col.items())))
    return out

