"""Embedded simple plane graphs given by rotation systems, plus the structural
queries used by the reducible configurations and the discharging rules.

Rotation convention: ``rotations[v]`` lists the neighbours of ``v`` in
counterclockwise order.  Faces are traced dart by dart: after traversing
``u -> v`` the walk continues along ``v -> w`` where ``w`` is the neighbour
immediately clockwise of ``u`` around ``v`` (its predecessor in the ccw list).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmbeddingInconsistent,
    InputError,
    NotA5Face,
    NotSimple,
    NotSymmetric,
    OutOfClass,
)

__all__ = [
    "Face",
    "PlaneGraph",
    "ClassReport",
    "Pendent3",
    "VertexClass",
    "FaceClass",
    "build_plane_graph",
    "plane_graph_from_drawing",
    "distance",
    "class_membership",
    "find_four_cycle",
    "find_intersecting_triangles",
    "pendent_3_structure",
    "classify_vertex",
    "classify_5_face",
    "parse_pg",
    "format_pg",
    "read_pg",
    "write_pg",
]


@dataclass(frozen=True)
class Face:
    """A traced face.  ``darts`` is the closed boundary walk; ``boundary`` its
    vertex sequence.  An isolated vertex owns a single face with no darts."""

    darts: tuple[tuple[int, int], ...]
    boundary: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.darts)

    def __contains__(self, v: object) -> bool:
        return v in self.boundary


class PlaneGraph:
    """Immutable plane graph.  Build through :func:`build_plane_graph`."""

    def __init__(self, rotations: Mapping[int, Sequence[int]], comments: Sequence[str] = ()):
        self.rotations: dict[int, tuple[int, ...]] = {
            v: tuple(rotations[v]) for v in sorted(rotations)
        }
        self.comments = tuple(comments)
        self.vertices: tuple[int, ...] = tuple(self.rotations)
        self._adj = {v: frozenset(nb) for v, nb in self.rotations.items()}
        self.edges: tuple[tuple[int, int], ...] = tuple(
            sorted((u, v) for u in self.vertices for v in self.rotations[u] if u < v)
        )
        self.faces: tuple[Face, ...]
        self._dart_face: dict[tuple[int, int], int]
        self.faces, self._dart_face = _trace_faces(self.rotations)
        self.components: tuple[frozenset[int], ...] = _components(self._adj)
        self.connected = len(self.components) <= 1
        tri: dict[int, list[int]] = {v: [] for v in self.vertices}
        for i, f in enumerate(self.faces):
            if f.length == 3:
                for v in set(f.boundary):
                    tri[v].append(i)
        self._three_faces_at = {v: tuple(fs) for v, fs in tri.items()}

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PlaneGraph) and self.rotations == other.rotations

    def __hash__(self) -> int:
        return hash(tuple(self.rotations.items()))

    def __repr__(self) -> str:
        return f"PlaneGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, |F|={len(self.faces)})"

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    @property
    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def face_of_dart(self, u: int, v: int) -> int:
        return self._dart_face[(u, v)]

    def faces_at(self, v: int) -> list[int]:
        """Indices of faces incident to ``v``, one entry per occurrence on a boundary."""
        out = []
        for i, f in enumerate(self.faces):
            out.extend(i for x in f.boundary if x == v)
        return out

    def three_faces_at(self, v: int) -> tuple[int, ...]:
        return self._three_faces_at[v]

    def three_faces(self) -> list[int]:
        return [i for i, f in enumerate(self.faces) if f.length == 3]

    def edge_adjacent_faces(self, fi: int) -> list[int]:
        """Faces sharing at least one edge with face ``fi`` (excluding itself)."""
        out: list[int] = []
        for u, v in self.faces[fi].darts:
            g = self._dart_face[(v, u)]
            if g != fi and g not in out:
                out.append(g)
        return out

    def induced(self, keep: Iterable[int]) -> "PlaneGraph":
        """Induced subgraph with the restricted (still planar) rotation system."""
        keep = set(keep)
        return PlaneGraph(
            {v: tuple(u for u in self.rotations[v] if u in keep) for v in self.vertices if v in keep}
        )

    def without(self, drop: Iterable[int]) -> "PlaneGraph":
        drop = set(drop)
        return self.induced(v for v in self.vertices if v not in drop)


def _trace_faces(rot: dict[int, tuple[int, ...]]):
    pos = {v: {u: i for i, u in enumerate(nb)} for v, nb in rot.items()}
    dart_face: dict[tuple[int, int], int] = {}
    faces: list[Face] = []
    for v in rot:
        if not rot[v]:
            faces.append(Face((), (v,)))
    for start in sorted((u, v) for u in rot for v in rot[u]):
        if start in dart_face:
            continue
        darts = []
        d = start
        while d not in dart_face:
            dart_face[d] = len(faces)
            darts.append(d)
            u, v = d
            nb = rot[v]
            d = (v, nb[(pos[v][u] - 1) % len(nb)])
        faces.append(Face(tuple(darts), tuple(a for a, _ in darts)))
    return tuple(faces), dart_face


def _components(adj: Mapping[int, frozenset[int]]) -> tuple[frozenset[int], ...]:
    seen: set[int] = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return tuple(comps)


def build_plane_graph(table: Mapping[int, Sequence[int]], comments: Sequence[str] = ()) -> PlaneGraph:
    """Validate a rotation table and trace its faces.

    Raises NotSimple, NotSymmetric or EmbeddingInconsistent.  Disconnected
    input is accepted; check ``G.connected``.  Euler's formula is verified
    per component (each component traced as its own sphere).
    """
    for v, nb in table.items():
        if not isinstance(v, int) or v < 0:
            raise InputError(f"vertex labels must be nonnegative integers, got {v!r}")
        if v in nb:
            raise NotSimple(f"loop at vertex {v}")
        if len(set(nb)) != len(nb):
            raise NotSimple(f"repeated neighbour in rotation of {v}")
        for u in nb:
            if u not in table:
                raise NotSymmetric(f"{v} lists unknown vertex {u}")
            if v not in table[u]:
                raise NotSymmetric(f"{v} lists {u} but {u} does not list {v}")
    G = PlaneGraph(table, comments)
    for comp in G.components:
        n = len(comp)
        m = sum(G.degree(v) for v in comp) // 2
        f = len({G._dart_face[(u, w)] for u in comp for w in G.rotations[u]}) if m else 1
        if n - m + f != 2:
            raise EmbeddingInconsistent(
                f"component containing {min(comp)}: |V|-|E|+|F| = {n}-{m}+{f} = {n - m + f} != 2"
            )
    return G


def plane_graph_from_drawing(
    coords: Mapping[int, tuple[float, float]], edges: Iterable[tuple[int, int]], comments: Sequence[str] = ()
) -> PlaneGraph:
    """Rotation system of a straight-line drawing (neighbours sorted by angle)."""
    nbrs: dict[int, set[int]] = {v: set() for v in coords}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)

    def angle(v: int, u: int) -> float:
        (x0, y0), (x1, y1) = coords[v], coords[u]
        return math.atan2(y1 - y0, x1 - x0)

    table = {v: sorted(nb, key=lambda u, v=v: angle(v, u)) for v, nb in nbrs.items()}
    return build_plane_graph(table, comments)


def distance(G: PlaneGraph, u: int, v: int) -> int:
    """Shortest-path distance; ``math.inf`` if ``u`` and ``v`` lie in different components."""
    if u == v:
        return 0
    seen = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in G.neighbors(x):
            if y not in seen:
                seen[y] = seen[x] + 1
                if y == v:
                    return seen[y]
                queue.append(y)
    return math.inf  # type: ignore[return-value]


# -- class membership (embedding-free) -------------------------------------

def find_four_cycle(adj: Mapping[int, Iterable[int]]) -> tuple[int, int, int, int] | None:
    """A 4-cycle ``(a, b, c, d)`` as a subgraph, or None."""
    nb = {v: set(adj[v]) for v in adj}
    verts = sorted(nb)
    for i, a in enumerate(verts):
        for c in verts[i + 1:]:
            common = sorted(nb[a] & nb[c])
            if len(common) >= 2:
                return (a, common[0], c, common[1])
    return None


def _triangles(nb: Mapping[int, set[int]]) -> list[tuple[int, int, int]]:
    out = []
    for a in sorted(nb):
        for b in sorted(x for x in nb[a] if x > a):
            for c in sorted(x for x in nb[a] & nb[b] if x > b):
                out.append((a, b, c))
    return out


def find_intersecting_triangles(
    adj: Mapping[int, Iterable[int]],
) -> tuple[tuple[int, int, int], tuple[int, int, int]] | None:
    nb = {v: set(adj[v]) for v in adj}
    first: dict[int, tuple[int, int, int]] = {}
    for t in _triangles(nb):
        for v in t:
            if v in first:
                return (first[v], t)
        for v in t:
            first[v] = t
    return None


@dataclass(frozen=True)
class ClassReport:
    four_cycle: tuple[int, int, int, int] | None
    intersecting_triangles: tuple[tuple[int, int, int], tuple[int, int, int]] | None

    @property
    def in_class(self) -> bool:
        return self.four_cycle is None and self.intersecting_triangles is None


def class_membership(G: PlaneGraph | Mapping[int, Iterable[int]]) -> ClassReport:
    adj = G.adjacency if isinstance(G, PlaneGraph) else G
    return ClassReport(find_four_cycle(adj), find_intersecting_triangles(adj))


def require_in_class(G: PlaneGraph) -> None:
    rep = class_membership(G)
    if not rep.in_class:
        raise OutOfClass(f"graph not in class: {rep}")


# -- pendent structure and classification ----------------------------------

@dataclass(frozen=True)
class Pendent3:
    faces: frozenset[int]
    neighbors: frozenset[int]


def pendent_3_structure(G: PlaneGraph, v: int) -> Pendent3:
    """3-faces not through ``v`` that contain a 3-vertex adjacent to ``v``."""
    faces: set[int] = set()
    nbrs: set[int] = set()
    for u in G.neighbors(v):
        if G.degree(u) != 3:
            continue
        for fi in G.three_faces_at(u):
            if v not in G.faces[fi]:
                faces.add(fi)
                nbrs.add(u)
    return Pendent3(frozenset(faces), frozenset(nbrs))


VERTEX_TAGS = ("three-vertex", "k1", "k2", "four3", "heavy", "special", "other")


@dataclass(frozen=True)
class VertexClass:
    tag: str
    degree: int
    incident_3_faces: int
    pendent_3_faces: int

    @property
    def rich(self) -> bool:
        return self.tag in ("heavy", "special")

    @property
    def label(self) -> str:
        """Short name such as ``4_1`` or ``5_2``."""
        if self.tag == "k1":
            return f"{self.degree}_1"
        if self.tag == "k2":
            return f"{self.degree}_2"
        if self.tag == "four3":
            return "4_3"
        return self.tag


def _vertex_class(G: PlaneGraph, v: int) -> VertexClass:
    d = G.degree(v)
    t = len(G.three_faces_at(v))
    p = len(pendent_3_structure(G, v).faces)
    if d <= 2:
        tag = "other"
    elif d == 3:
        tag = "three-vertex"
    elif p == d - 3:
        tag = "k1" if t else "k2"
    elif d == 4 and p == 0:
        tag = "four3" if t else "heavy"
    elif d >= 5 and p == d - 4:
        tag = "heavy"
    elif d >= 5 and p <= d - 5:
        tag = "special"
    else:
        tag = "other"
    return VertexClass(tag, d, t, p)


def classify_vertex(G: PlaneGraph, v: int, *, check_class: bool = True) -> VertexClass:
    if G.degree(v) < 3:
        raise OutOfClass(f"vertex {v} has degree {G.degree(v)} < 3")
    if check_class:
        require_in_class(G)
    return _vertex_class(G, v)


@dataclass(frozen=True)
class FaceClass:
    tag: str  # poor-i, poor-ii or plain
    weakly_incident: frozenset[int]
    three_vertex: int | None = None


def _is_41(c: VertexClass) -> bool:
    return c.tag == "k1" and c.degree == 4


def _is_43(c: VertexClass) -> bool:
    return c.tag == "four3"


def _minus4(c: VertexClass) -> bool:
    return c.degree >= 4 and c.pendent_3_faces == c.degree - 4


def _minus3(c: VertexClass) -> bool:
    return c.degree >= 4 and c.pendent_3_faces == c.degree - 3


_POOR_ROLES = {
    "poor-i": (_is_41, _is_41, _is_43, _minus4),
    "poor-ii": (_is_43, _is_43, _is_41, _minus3),
}


def weakly_incident(G: PlaneGraph, fi: int) -> frozenset[int]:
    f = G.faces[fi]
    out = set()
    for g in G.edge_adjacent_faces(fi):
        if G.faces[g].length == 3:
            out.update(x for x in G.faces[g].boundary if x not in f)
    return frozenset(out)


def classify_5_face(G: PlaneGraph, f: int | Face, *, check_class: bool = True) -> FaceClass:
    """Poor-face test.  When a face satisfies both (i) and (ii), (i) is reported."""
    fi = G.faces.index(f) if isinstance(f, Face) else f
    face = G.faces[fi]
    if face.length != 5:
        raise NotA5Face(f"face {fi} has length {face.length}")
    if check_class:
        require_in_class(G)
    weak = weakly_incident(G, fi)
    threes = [v for v in face.boundary if G.degree(v) == 3]
    if len(threes) != 1 or any(G.degree(v) < 3 for v in face.boundary):
        return FaceClass("plain", weak)
    others = [_vertex_class(G, v) for v in face.boundary if G.degree(v) != 3]
    for tag, roles in _POOR_ROLES.items():
        for perm in permutations(others):
            if all(pred(c) for pred, c in zip(roles, perm)):
                return FaceClass(tag, weak, threes[0])
    return FaceClass("plain", weak, threes[0])


# -- .pg text format ---------------------------------------------------------

def parse_pg(text: str) -> PlaneGraph:
    comments: list[str] = []
    header: int | None = None
    table: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None:
                comments.append(line[1:].strip())
            continue
        line = line.split("#", 1)[0].strip()
        if header is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "planar" or not parts[1].isdigit():
                raise InputError(f"line {lineno}: expected 'planar <n>'")
            header = int(parts[1])
            continue
        if ":" not in line:
            raise InputError(f"line {lineno}: expected 'v: n1 n2 ...'")
        head, rest = line.split(":", 1)
        try:
            v = int(head)
            nb = [int(x) for x in rest.split()]
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if v in table:
            raise InputError(f"line {lineno}: vertex {v} listed twice")
        table[v] = nb
    if header is None:
        raise InputError("missing 'planar <n>' header")
    if len(table) != header:
        raise InputError(f"header declares {header} vertices, found {len(table)}")
    return build_plane_graph(table, comments)


def format_pg(G: PlaneGraph) -> str:
    lines = [f"# {c}" if c else "#" for c in G.comments]
    lines.append(f"planar {len(G.vertices)}")
    for v in G.vertices:
        lines.append(f"{v}: " + " ".join(map(str, G.rotations[v])) if G.rotations[v] else f"{v}:")
    return "\n".join(lines) + "\n"


def read_pg(path) -> PlaneGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_pg(fh.read())


def write_pg(G: PlaneGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pg(G))
