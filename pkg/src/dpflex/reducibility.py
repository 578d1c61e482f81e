"""Boundary-reducible blocks: the FIX/FORB quantifier over all covers, the
forbidding-set test, and structural matchers for the nine configurations.

The quantifier "every cover with these list sizes is colorable" is decided
exactly, without listing every cover, using three facts:

* a vertex whose list is longer than its degree can always be colored last,
  so such vertices are peeled off repeatedly and only the remaining core
  matters;
* adding pairs to a matching can only destroy colorings, so it suffices to
  examine covers whose matchings are all of maximum size ``min(a, b)``;
* relabelling a list does not change colorability, so along a spanning
  forest each child's labels can be normalised against its parent's.

A counterexample found on the core is extended by empty matchings and
re-checked with the plain coloring oracle before being reported.  The
``mode="naive"`` path enumerates every cover literally and is kept for
cross-checking on small blocks.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .cover import Cover, enumerate_covers, is_colorable, partial_injections
from .errors import BudgetExceeded, InputError, OutOfClass
from .plane import PlaneGraph, class_membership, pendent_3_structure, _vertex_class, classify_5_face

MAX_BLOCK = 12
DEFAULT_COVER_BUDGET = 10**7

KINDS = tuple(f"RC{i}" for i in range(1, 10))


def cover_budget() -> int:
    return int(os.environ.get("DPFLEX_COVER_BUDGET", DEFAULT_COVER_BUDGET))


# -- forbidding sets and size functions ---------------------------------------

def is_f_forbidding(G: PlaneGraph | Mapping[int, Iterable[int]], I: Iterable[int]) -> bool:
    """True iff ``G`` plus an apex joined to exactly ``I`` has no 4-cycle and
    no two triangles sharing a vertex."""
    adj = G.adjacency if isinstance(G, PlaneGraph) else G
    I = set(I)
    if not I <= set(adj):
        raise InputError(f"{sorted(I - set(adj))} not in graph")
    apex = max(adj, default=-1) + 1
    aug = {v: set(nb) | ({apex} if v in I else set()) for v, nb in adj.items()}
    aug[apex] = set(I)
    return class_membership(aug).in_class


def base_sizes(G: PlaneGraph, Q: Iterable[int], k: int = 4) -> dict[int, int]:
    """``k - d_G(v) + d_Q(v)`` on the vertices of ``Q``."""
    Q = set(Q)
    return {v: k - G.degree(v) + len(G.neighbors(v) & Q) for v in sorted(Q)}


def size_function(
    G: PlaneGraph, S: Iterable[int], B: Iterable[int], k: int = 4,
    fix: int | None = None, I: Iterable[int] = (),
) -> dict[int, int]:
    Q = set(S) - set(B)
    sizes = base_sizes(G, Q, k)
    if fix is not None:
        sizes[fix] = 1
    for v in I:
        sizes[v] -= 1
    return sizes


# -- the cover quantifier -----------------------------------------------------

@dataclass
class QuantResult:
    ok: bool
    counterexample: Cover | None = None
    covers_checked: int = 0
    core: tuple[int, ...] = ()
    reason: str = ""


def _block_edges(adj: Mapping[int, Iterable[int]], Q: Iterable[int]) -> list[tuple[int, int]]:
    Q = set(Q)
    return sorted((u, v) for u in Q for v in adj[u] if v in Q and u < v)


def _peel(nbrs: dict[int, set[int]], sizes: Mapping[int, int]) -> list[int]:
    alive = set(nbrs)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if sizes[v] > len(nbrs[v] & alive):
                alive.discard(v)
                changed = True
    return sorted(alive)


def _colorable(order, sizes, back) -> bool:
    """Backtracking over ``order``; ``back[v]`` lists (earlier nbr, idx map)."""
    n = len(order)
    choice: dict[int, int] = {}

    def rec(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        banned = set()
        for a, mp in back[v]:
            j = mp.get(choice[a])
            if j is not None:
                banned.add(j)
        for c in range(sizes[v]):
            if c not in banned:
                choice[v] = c
                if rec(i + 1):
                    return True
        return False

    return rec(0)


def all_covers_colorable(
    adj: Mapping[int, Iterable[int]] | PlaneGraph,
    sizes: Mapping[int, int],
    *,
    mode: str = "reduced",
    budget: int | None = None,
) -> QuantResult:
    """Decide whether every cover of the graph induced on ``sizes``' keys,
    with those list sizes, admits a coloring."""
    if isinstance(adj, PlaneGraph):
        adj = adj.adjacency
    budget = cover_budget() if budget is None else budget
    Q = sorted(sizes)
    bad = [v for v in Q if sizes[v] < 1]
    if bad:
        return QuantResult(False, None, 0, (), f"empty list forced at {bad}")
    if mode == "naive":
        return _naive(adj, sizes, budget)
    if mode != "reduced":
        raise InputError(f"unknown mode {mode!r}")
    Qs = set(Q)
    nbrs = {v: set(adj[v]) & Qs for v in Q}
    core = _peel(nbrs, sizes)
    if not core:
        return QuantResult(True, None, 0, ())
    cs = set(core)
    cn = {v: nbrs[v] & cs for v in core}
    order: list[int] = []
    parent: dict[int, int | None] = {}
    for root in core:
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(cn[x]):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
    pos = {v: i for i, v in enumerate(order)}
    tree = [(parent[c], c) for c in order if parent[c] is not None]
    tree_set = {frozenset(e) for e in tree}
    extra = [
        (u, v) if pos[u] < pos[v] else (v, u)
        for u, v in _block_edges(cn, core)
        if frozenset((u, v)) not in tree_set
    ]
    options: list[list[dict[int, int]]] = []
    total = 1
    for p, c in tree:
        m = min(sizes[p], sizes[c])
        opts = [{L[t]: t for t in range(m)} for L in combinations(range(sizes[p]), m)]
        options.append(opts)
        total *= len(opts)
    for u, v in extra:
        m = min(sizes[u], sizes[v])
        opts = [dict(pi) for pi in partial_injections(sizes[u], sizes[v], sizes_only=[m])]
        options.append(opts)
        total *= len(opts)
    if total > budget:
        raise BudgetExceeded(f"{total} reduced covers exceed the cover budget {budget}")
    edges = tree + extra
    checked = 0
    for mats in product(*options):
        checked += 1
        back: dict[int, list] = {v: [] for v in order}
        for (a, b), mp in zip(edges, mats):
            back[b].append((a, mp))
        if not _colorable(order, sizes, back):
            cover = Cover(
                dict(sizes),
                {(a, b): frozenset(mp.items()) for (a, b), mp in zip(edges, mats)},
            )
            sub = _SubGraph(Q, _block_edges(adj, Q))
            if is_colorable(sub, cover):  # pragma: no cover - internal consistency guard
                raise AssertionError("reduced counterexample failed re-check")
            return QuantResult(False, cover, checked, tuple(core), "uncolorable cover")
    return QuantResult(True, None, checked, tuple(core))


@dataclass(frozen=True)
class _SubGraph:
    vertices: tuple
    edges: tuple

    def __init__(self, vertices, edges):
        object.__setattr__(self, "vertices", tuple(sorted(vertices)))
        object.__setattr__(self, "edges", tuple(edges))


def _naive(adj, sizes, budget) -> QuantResult:
    sub = _SubGraph(sizes, _block_edges(adj, sizes))
    checked = 0
    for cover in enumerate_covers(sub, sizes, budget=budget):
        checked += 1
        if not is_colorable(sub, cover):
            return QuantResult(False, cover, checked, sub.vertices, "uncolorable cover")
    return QuantResult(True, None, checked, sub.vertices)


# -- FIX / FORB ---------------------------------------------------------------

@dataclass
class Verdict:
    clause: str
    ok: bool
    counterexample: Cover | None = None
    fixed: int | None = None
    forbidden: tuple[int, ...] | None = None
    sizes: dict[int, int] | None = None
    reason: str = ""
    covers_checked: int = 0
    cases: int = 0
    skipped: list[tuple[int, ...]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _check_block(S, B) -> list[int]:
    S, B = set(S), set(B)
    if not B < S:
        raise InputError("boundary must be a proper subset of the block")
    Q = sorted(S - B)
    if len(Q) > MAX_BLOCK:
        raise BudgetExceeded(f"|S \\ B| = {len(Q)} exceeds {MAX_BLOCK}")
    return Q


def check_fix(G: PlaneGraph, S, B, k: int = 4, *, mode: str = "reduced") -> Verdict:
    Q = _check_block(S, B)
    out = Verdict("FIX", True)
    for v in Q:
        sizes = size_function(G, S, B, k, fix=v)
        res = all_covers_colorable(G, sizes, mode=mode)
        out.cases += 1
        out.covers_checked += res.covers_checked
        if not res.ok:
            out.ok = False
            out.counterexample, out.fixed, out.sizes, out.reason = res.counterexample, v, sizes, res.reason
            return out
    return out


def check_forb(
    G: PlaneGraph, S, B, k: int = 4, *, context: PlaneGraph | None = None, mode: str = "reduced"
) -> Verdict:
    """FORB over every forbidding ``I`` with ``|I| <= k-2`` (the empty set included).

    Forbidding is decided in ``context`` (default ``G``, the graph that
    contains the block)."""
    Q = _check_block(S, B)
    ctx = G if context is None else context
    ctx_adj = ctx.adjacency
    out = Verdict("FORB", True)
    for r in range(0, max(k - 2, 0) + 1):
        for I in combinations(Q, r):
            if not is_f_forbidding(ctx_adj, I):
                out.skipped.append(I)
                continue
            sizes = size_function(G, S, B, k, I=I)
            res = all_covers_colorable(G, sizes, mode=mode)
            out.cases += 1
            out.covers_checked += res.covers_checked
            if not res.ok:
                out.ok = False
                out.counterexample, out.forbidden, out.sizes, out.reason = (
                    res.counterexample, I, sizes, res.reason)
                return out
    return out


# -- matches ------------------------------------------------------------------

@dataclass(frozen=True)
class ReducibleMatch:
    kind: str
    S: frozenset[int]
    B: frozenset[int]
    anchor: tuple[int, ...] = ()
    context: str = "G0"

    @property
    def Q(self) -> frozenset[int]:
        return self.S - self.B

    @property
    def block_size(self) -> int:
        return len(self.S) - len(self.B)


@dataclass
class MatchVerdict:
    match: ReducibleMatch
    fix: Verdict
    forb: Verdict
    min_size: int

    @property
    def ok(self) -> bool:
        return self.fix.ok and self.forb.ok

    def __bool__(self) -> bool:
        return self.ok


def verify_match(G: PlaneGraph, m: ReducibleMatch, k: int = 4, *, mode: str = "reduced",
                 context: PlaneGraph | None = None) -> MatchVerdict:
    fix = check_fix(G, m.S, m.B, k, mode=mode)
    forb = check_forb(G, m.S, m.B, k, context=context, mode=mode)
    sizes = base_sizes(G, m.Q, k)
    return MatchVerdict(m, fix, forb, min(sizes.values()))


@dataclass
class NotFound:
    scanned: dict[str, int]

    def __bool__(self) -> bool:
        return False


class _Context:
    """Per-graph cached structure used by the matchers."""

    def __init__(self, G: PlaneGraph):
        self.G = G
        self.pend = {v: pendent_3_structure(G, v) for v in G.vertices}
        self._cls = {}

    def cls(self, v):
        if v not in self._cls:
            self._cls[v] = _vertex_class(self.G, v)
        return self._cls[v]

    def pendent_faces_vertices(self, vs) -> set[int]:
        out: set[int] = set()
        for v in vs:
            for fi in self.pend[v].faces:
                out.update(self.G.faces[fi].boundary)
        return out

    def closed_nbhd(self, vs) -> set[int]:
        out = set(vs)
        for v in vs:
            out |= self.G.neighbors(v)
        return out


def _rc1(c: _Context):
    for v in c.G.vertices:
        if c.G.degree(v) <= 2:
            yield (v,), {v}, set()


def _rc2(c: _Context):
    G = c.G
    for fi in G.three_faces():
        tri = sorted(set(G.faces[fi].boundary))
        if len(tri) != 3:
            continue
        for u, v in combinations(tri, 2):
            if G.degree(u) == 3 and G.degree(v) == 3:
                (w,) = set(tri) - {u, v}
                yield (u, v, w), {u, v, w}, {w}


def _orientations(boundary):
    n = len(boundary)
    for s in range(n):
        yield tuple(boundary[(s + i) % n] for i in range(n))
        yield tuple(boundary[(s - i) % n] for i in range(n))


def _tri_at(G, v):
    ts = G.three_faces_at(v)
    return set(G.faces[ts[0]].boundary) if ts else None


def _rc3(c: _Context):
    G = c.G
    for f in G.faces:
        if f.length != 5 or len(set(f.boundary)) != 5:
            continue
        for v1, v2, v3, v4, v5 in _orientations(f.boundary):
            if (G.degree(v1), G.degree(v2), G.degree(v3), G.degree(v4)) != (3, 4, 4, 3):
                continue
            t2, t3 = _tri_at(G, v2), _tri_at(G, v3)
            if t2 is None or t3 is None:
                continue
            fv = {v1, v2, v3, v4, v5}
            S = fv | t2 | t3
            B = {v5} | ((t2 | t3) - fv)
            yield (v1, v2, v3, v4, v5), S, B


def _star(c: _Context, v):
    G = c.G
    A = {u for u in G.neighbors(v) if G.degree(u) == 3}
    S = {v} | G.neighbors(v)
    return A, S, G.neighbors(v) - A


def _rc4(c: _Context):
    G = c.G
    for v in G.vertices:
        d = G.degree(v)
        if d >= 3:
            A, S, B = _star(c, v)
            if len(A) >= d - 1:
                yield (v,), S, B


def _rc5(c: _Context):
    G = c.G
    for v in G.vertices:
        d = G.degree(v)
        if d >= 3 and G.three_faces_at(v):
            A, S, B = _star(c, v)
            if len(A) >= d - 2:
                yield (v,), S, B


def _rc6(c: _Context):
    G = c.G
    for v in G.vertices:
        d = G.degree(v)
        if d >= 3 and len(c.pend[v].faces) >= d - 2:
            A = c.pendent_faces_vertices([v])
            A1 = {x for x in A if G.degree(x) == 3}
            S = {v} | G.neighbors(v) | A
            B = (G.neighbors(v) | A) - A1
            yield (v,), S, B


def _path_block(c: _Context, P, extra=()):
    """S and B for the path configurations (and the poor-face one)."""
    G = c.G
    core = list(P) + list(extra)
    A = c.pendent_faces_vertices(core)
    A1 = {x for x in A if G.degree(x) == 3}
    S: set[int] = set(A)
    for v in core:
        S |= G.neighbors(v)
    S |= set(core)
    B = S - (A1 | set(core))
    return S, B


def _enough_pendent(c: _Context, v, P) -> bool:
    return len(c.pend[v].neighbors - set(P)) >= c.G.degree(v) - 3


def _rc7(c: _Context):
    G = c.G
    for v2 in G.vertices:
        if G.degree(v2) < 3:
            continue
        for v1 in sorted(G.neighbors(v2)):
            for v3 in sorted(G.neighbors(v2)):
                if v1 == v3 or G.degree(v1) < 3 or G.degree(v3) < 4:
                    continue
                P = (v1, v2, v3)
                if all(_enough_pendent(c, v, P) for v in P):
                    S, B = _path_block(c, P)
                    yield P, S, B


def _rc8(c: _Context):
    G = c.G
    for v2 in G.vertices:
        if G.degree(v2) != 4 or not G.three_faces_at(v2):
            continue
        for v1 in sorted(G.neighbors(v2)):
            for v3 in sorted(G.neighbors(v2)):
                if v1 == v3:
                    continue
                for v4 in sorted(G.neighbors(v3)):
                    if v4 in (v1, v2):
                        continue
                    P = (v1, v2, v3, v4)
                    if min(G.degree(v1), G.degree(v3), G.degree(v4)) < 3:
                        continue
                    if all(_enough_pendent(c, v, P) for v in (v1, v3, v4)):
                        S, B = _path_block(c, P)
                        yield P, S, B


def _rc9(c: _Context):
    G = c.G
    for fi, f in enumerate(G.faces):
        if f.length != 5 or len(set(f.boundary)) != 5:
            continue
        fc = classify_5_face(G, fi, check_class=False)
        if fc.tag == "plain":
            continue
        if any(c.cls(x).tag == "special" for x in fc.weakly_incident):
            continue
        v1 = fc.three_vertex
        tri = _tri_at(G, v1)
        if tri is None:
            continue
        b = f.boundary
        i = b.index(v1)
        left, right = b[(i - 1) % 5], b[(i + 1) % 5]
        if right in tri:
            order = tuple(b[(i - t) % 5] for t in range(5))  # v5 = right
        elif left in tri:
            order = tuple(b[(i + t) % 5] for t in range(5))  # v5 = left
        else:
            continue
        v5 = order[4]
        (u,) = tri - {v1, v5}
        S, B = _path_block(c, order, extra=(u,))
        yield order, S, B


_MATCHERS = {
    "RC1": _rc1, "RC2": _rc2, "RC3": _rc3, "RC4": _rc4, "RC5": _rc5,
    "RC6": _rc6, "RC7": _rc7, "RC8": _rc8, "RC9": _rc9,
}


def iter_reducible(G: PlaneGraph, k: int = 4, kinds: Iterable[str] | None = None,
                   context: str = "G0", *, check_class: bool = True) -> Iterator[ReducibleMatch]:
    """All structural matches, in priority order and then by anchor tuple."""
    if check_class:
        rep = class_membership(G)
        if not rep.in_class:
            raise OutOfClass(f"graph not in class: {rep}")
    wanted = KINDS if kinds is None else tuple(kinds)
    for kd in wanted:
        if kd not in _MATCHERS:
            raise InputError(f"unknown configuration {kd!r}")
    c = _Context(G)
    for kd in KINDS:
        if kd not in wanted:
            continue
        found = sorted(_MATCHERS[kd](c), key=lambda t: t[0])
        seen = set()
        for anchor, S, B in found:
            key = (frozenset(S), frozenset(B))
            if key in seen:
                continue
            seen.add(key)
            yield ReducibleMatch(kd, frozenset(S), frozenset(B), tuple(anchor), context)


def find_reducible(G: PlaneGraph, k: int = 4, kinds: Iterable[str] | None = None,
                   context: str = "G0") -> ReducibleMatch | NotFound:
    scanned: dict[str, int] = {}
    for m in iter_reducible(G, k, kinds, context):
        return m
    for kd in (KINDS if kinds is None else kinds):
        scanned[kd] = 0
    scanned["vertices"] = len(G.vertices)
    scanned["faces"] = len(G.faces)
    return NotFound(scanned)
