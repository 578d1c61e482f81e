"""DP-covers, colorings and weighted requests, with an exact backtracking
coloring oracle.

Colors are positions ``0..h(v)-1`` in each vertex's list.  A cover stores, for
every edge ``(u, v)`` with ``u < v``, a partial injection given as a set of
pairs ``(i, j)`` meaning "color ``i`` of ``u`` conflicts with color ``j`` of
``v``".  Edges without an entry carry the empty matching.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import BudgetExceeded, InputError

DEFAULT_COLORING_BUDGET = 10**7

Pair = tuple[int, int]


def coloring_budget() -> int:
    return int(os.environ.get("DPFLEX_COLORING_BUDGET", DEFAULT_COLORING_BUDGET))


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Cover:
    sizes: Mapping[int, int]
    matchings: Mapping[tuple[int, int], frozenset[Pair]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        sizes = {v: int(h) for v, h in sorted(self.sizes.items())}
        for v, h in sizes.items():
            if h < 1:
                raise InputError(f"list size of {v} must be positive, got {h}")
        mats: dict[tuple[int, int], frozenset[Pair]] = {}
        for (u, v), pairs in self.matchings.items():
            if u == v or u not in sizes or v not in sizes:
                raise InputError(f"matching on invalid pair ({u}, {v})")
            pairs = frozenset((int(i), int(j)) for i, j in pairs)
            if u > v:
                u, v = v, u
                pairs = frozenset((j, i) for i, j in pairs)
            if (u, v) in mats:
                raise InputError(f"matching for ({u}, {v}) given twice")
            left = [i for i, _ in pairs]
            right = [j for _, j in pairs]
            if len(set(left)) != len(left) or len(set(right)) != len(right):
                raise InputError(f"matching on ({u}, {v}) is not injective")
            if any(not 0 <= i < sizes[u] for i in left) or any(not 0 <= j < sizes[v] for j in right):
                raise InputError(f"matching on ({u}, {v}) uses an index outside the lists")
            if pairs:
                mats[(u, v)] = pairs
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "matchings", dict(sorted(mats.items())))

    def __hash__(self) -> int:
        return hash((tuple(self.sizes.items()), tuple(self.matchings.items())))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cover)
            and self.sizes == other.sizes
            and self.matchings == other.matchings
        )

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.sizes)

    def matching(self, u: int, v: int) -> frozenset[Pair]:
        """Pairs oriented as (index at ``u``, index at ``v``)."""
        pairs = self.matchings.get(_edge_key(u, v), frozenset())
        return pairs if u < v else frozenset((j, i) for i, j in pairs)

    def check_against(self, edges: Iterable[tuple[int, int]], vertices: Iterable[int]) -> None:
        edges = {_edge_key(u, v) for u, v in edges}
        if set(self.sizes) != set(vertices):
            raise InputError("cover vertex set differs from graph vertex set")
        stray = [e for e in self.matchings if e not in edges]
        if stray:
            raise InputError(f"matchings on non-edges: {stray}")


def identity_cover(G, k: int = 4) -> Cover:
    """Every list of size ``k``, every edge matched ``i <-> i``."""
    full = frozenset((i, i) for i in range(k))
    return Cover({v: k for v in G.vertices}, {e: full for e in G.edges})


@dataclass(frozen=True)
class Coloring:
    items: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, choice: Mapping[int, int]) -> "Coloring":
        return cls(tuple(sorted(choice.items())))

    def __getitem__(self, v: int) -> int:
        for x, c in self.items:
            if x == v:
                return c
        raise KeyError(v)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def canonical_cover_from_lists(G, lists: Mapping[int, Iterable[Hashable]]) -> Cover:
    """Cover of a list assignment: pair equal color names across each edge.

    Sequences keep their order; sets are sorted so the indexing is stable.
    """
    order: dict[int, list] = {}
    for v in G.vertices:
        names = lists[v]
        seq = list(names) if isinstance(names, (list, tuple, str)) else sorted(names, key=repr)
        if not seq:
            raise InputError(f"empty list at vertex {v}")
        order[v] = seq
    mats = {}
    for u, v in G.edges:
        pos_v = {c: j for j, c in enumerate(order[v])}
        mats[(u, v)] = frozenset((i, pos_v[c]) for i, c in enumerate(order[u]) if c in pos_v)
    return Cover({v: len(order[v]) for v in G.vertices}, mats)


def _vertices_edges(G) -> tuple[list[int], list[tuple[int, int]]]:
    return list(G.vertices), list(G.edges)


def _conflicts(C: Cover, vertices: Sequence[int], edges: Sequence[tuple[int, int]]):
    """For each vertex, a list of (earlier neighbour, table index -> banned set)."""
    pos = {v: i for i, v in enumerate(vertices)}
    back: dict[int, list[tuple[int, dict[int, set[int]]]]] = {v: [] for v in vertices}
    for u, v in edges:
        a, b = (u, v) if pos[u] < pos[v] else (v, u)
        table: dict[int, set[int]] = {}
        for i, j in C.matching(a, b):
            table.setdefault(i, set()).add(j)
        back[b].append((a, table))
    return back


def iter_colorings(G, C: Cover, budget: int | None = None) -> Iterator[Coloring]:
    """Valid colorings in lexicographic order (vertices ascending)."""
    vertices, edges = _vertices_edges(G)
    budget = coloring_budget() if budget is None else budget
    back = _conflicts(C, vertices, edges)
    n = len(vertices)
    choice: dict[int, int] = {}
    states = 0

    def rec(idx: int):
        nonlocal states
        if idx == n:
            yield Coloring(tuple((v, choice[v]) for v in vertices))
            return
        v = vertices[idx]
        banned: set[int] = set()
        for a, table in back[v]:
            banned |= table.get(choice[a], set())
        for c in range(C.sizes[v]):
            if c in banned:
                continue
            states += 1
            if states > budget:
                raise BudgetExceeded(f"coloring search exceeded {budget} partial states")
            choice[v] = c
            yield from rec(idx + 1)
        choice.pop(v, None)

    yield from rec(0)


def enumerate_colorings(G, C: Cover, budget: int | None = None) -> list[Coloring]:
    return list(iter_colorings(G, C, budget))


def is_colorable(G, C: Cover, budget: int | None = None) -> bool:
    return next(iter(iter_colorings(G, C, budget)), None) is not None


def find_coloring(G, C: Cover, budget: int | None = None) -> Coloring | None:
    return next(iter(iter_colorings(G, C, budget)), None)


def is_valid_coloring(G, C: Cover, phi: Coloring | Mapping[int, int]) -> bool:
    choice = phi.as_dict() if isinstance(phi, Coloring) else dict(phi)
    if set(choice) != set(G.vertices):
        return False
    if any(not 0 <= choice[v] < C.sizes[v] for v in choice):
        return False
    return all((choice[u], choice[v]) not in C.matching(u, v) for u, v in G.edges)


# -- cover enumeration --------------------------------------------------------

def count_partial_injections(a: int, b: int) -> int:
    return sum(comb(a, j) * comb(b, j) * factorial(j) for j in range(min(a, b) + 1))


def partial_injections(a: int, b: int, *, sizes_only: Iterable[int] | None = None) -> list[frozenset[Pair]]:
    """All partial injections from ``range(a)`` to ``range(b)``, smallest first.

    ``sizes_only`` restricts the matching sizes produced.
    """
    wanted = range(min(a, b) + 1) if sizes_only is None else sorted(sizes_only)
    out = []
    for j in wanted:
        for left in combinations(range(a), j):
            for right in permutations(range(b), j):
                out.append(frozenset(zip(left, right)))
    return out


def _canonical_form(sizes: Mapping[int, int], edges, mats) -> tuple:
    """Lexicographically least relabelling under per-list index permutations."""
    verts = list(sizes)
    best = None
    for perms in product(*(permutations(range(sizes[v])) for v in verts)):
        p = dict(zip(verts, perms))
        key = tuple(
            tuple(sorted((p[u][i], p[v][j]) for i, j in m)) for (u, v), m in zip(edges, mats)
        )
        if best is None or key < best:
            best = key
    return best


def enumerate_covers(
    S, sizes: Mapping[int, int], *, dedupe: bool = False, budget: int | None = None
) -> Iterator[Cover]:
    """Every cover of ``S`` with the given list sizes, in a fixed order.

    With ``dedupe`` only one representative per orbit under relabelling of
    each list is produced (brute-force canonical form; tiny inputs only).
    """
    vertices, edges = _vertices_edges(S)
    for v in vertices:
        if sizes[v] < 1:
            raise InputError(f"list size of {v} must be positive")
    options = [partial_injections(sizes[u], sizes[v]) for u, v in edges]
    total = 1
    for o in options:
        total *= len(o)
    limit = budget if budget is not None else int(os.environ.get("DPFLEX_COVER_BUDGET", 10**7))
    if total > limit:
        raise BudgetExceeded(f"{total} covers exceed the cover budget {limit}")
    if dedupe:
        perms = 1
        for v in vertices:
            perms *= factorial(sizes[v])
        if perms * total > limit:
            raise BudgetExceeded("deduplication too expensive for the cover budget")
    seen: set = set()
    sz = {v: sizes[v] for v in vertices}
    for mats in product(*options):
        if dedupe:
            key = _canonical_form(sz, edges, mats)
            if key in seen:
                continue
            seen.add(key)
        yield Cover(sz, {e: m for e, m in zip(edges, mats)})


# -- weighted requests --------------------------------------------------------

@dataclass(frozen=True)
class WeightedRequest:
    weights: Mapping[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        w = {}
        for key, val in self.weights.items():
            val = Fraction(val)
            if val < 0:
                raise InputError(f"negative weight at {key}")
            w[(int(key[0]), int(key[1]))] = val
        object.__setattr__(self, "weights", dict(sorted(w.items())))

    def check_against(self, C: Cover) -> None:
        for v, c in self.weights:
            if v not in C.sizes or not 0 <= c < C.sizes[v]:
                raise InputError(f"request on ({v}, {c}) lies outside the cover")

    def get(self, v: int, c: int) -> Fraction:
        return self.weights.get((v, c), Fraction(0))


def request_value(w: WeightedRequest, phi: Coloring) -> Fraction:
    return sum((w.get(v, c) for v, c in phi.items), Fraction(0))


def total_weight(w: WeightedRequest) -> Fraction:
    return sum(w.weights.values(), Fraction(0))


# -- text formats -------------------------------------------------------------

def format_cover(C: Cover) -> str:
    lines = ["sizes " + " ".join(f"{v}:{h}" for v, h in C.sizes.items())]
    for (u, v), pairs in C.matchings.items():
        lines.append(f"match {u} {v}: " + " ".join(f"{i}-{j}" for i, j in sorted(pairs)))
    return "\n".join(lines) + "\n"


def parse_cover(text: str) -> Cover:
    sizes: dict[int, int] = {}
    mats: dict[tuple[int, int], set[Pair]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("sizes"):
                for tok in line.split()[1:]:
                    v, h = tok.split(":")
                    sizes[int(v)] = int(h)
            elif line.startswith("match"):
                head, rest = line[len("match"):].split(":", 1)
                u, v = (int(x) for x in head.split())
                pairs = set()
                for tok in rest.split():
                    i, j = tok.split("-")
                    pairs.add((int(i), int(j)) if u < v else (int(j), int(i)))
                mats.setdefault(_edge_key(u, v), set()).update(pairs)
            else:
                raise ValueError("expected 'sizes' or 'match'")
        except ValueError as exc:
            raise InputError(f"cover line {lineno}: {exc}") from None
    return Cover(sizes, {e: frozenset(p) for e, p in mats.items()})


def format_request(w: WeightedRequest) -> str:
    return "".join(f"{v} {c} {x}\n" for (v, c), x in w.weights.items())


def parse_request(text: str) -> WeightedRequest:
    weights: dict[tuple[int, int], Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"request line {lineno}: expected 'v c weight'")
        try:
            key = (int(parts[0]), int(parts[1]))
            weights[key] = weights.get(key, Fraction(0)) + Fraction(parts[2])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"request line {lineno}: {exc}") from None
    return WeightedRequest(weights)
