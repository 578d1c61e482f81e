"""Regenerate the shipped ``.pg`` fixtures from straight-line drawings.

Open half-edges of the configuration drawings are realised as leaf vertices.
Run from the repository root:  python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from dpflex.plane import format_pg, plane_graph_from_drawing  # noqa: E402

OUT = ROOT / "src" / "dpflex" / "fixtures"


class Drawing:
    def __init__(self, description: str):
        self.description = description
        self.coords: dict[int, tuple[float, float]] = {}
        self.ids: dict[tuple[float, float], int] = {}
        self.names: dict[str, int] = {}
        self.edges: list[tuple[int, int]] = []

    def node(self, name: str, x: float, y: float) -> int:
        i = self.p((x, y))
        self.names[name] = i
        return i

    def p(self, pt) -> int:
        if isinstance(pt, str):
            return self.names[pt]
        if isinstance(pt, int):
            return pt
        key = (round(pt[0], 4), round(pt[1], 4))
        if key not in self.ids:
            self.ids[key] = len(self.coords)
            self.coords[self.ids[key]] = key
        return self.ids[key]

    def path(self, *pts) -> None:
        ids = [self.p(q) for q in pts]
        for a, b in zip(ids, ids[1:]):
            e = (min(a, b), max(a, b))
            if e not in self.edges:
                self.edges.append(e)

    def cycle(self, *pts) -> None:
        self.path(*pts, pts[0])

    def xy(self, pt) -> tuple[float, float]:
        return self.coords[self.p(pt)]

    def stub(self, base, angle: float, r: float = 0.6) -> int:
        x, y = self.xy(base)
        t = math.radians(angle)
        leaf = self.p((x + r * math.cos(t), y + r * math.sin(t)))
        self.path(base, leaf)
        return leaf

    def arm(self, base, angle: float, r: float = 1.2, side: float = 0.8, name: str | None = None) -> int:
        """Edge from ``base`` to a new vertex on its own triangle further out."""
        x, y = self.xy(base)
        t = math.radians(angle)
        ax, ay = x + r * math.cos(t), y + r * math.sin(t)
        a = self.node(name, ax, ay) if name else self.p((ax, ay))
        pts = []
        for off in (-25, 25):
            s = math.radians(angle + off)
            pts.append(self.p((ax + side * math.cos(s), ay + side * math.sin(s))))
        self.path(base, a)
        self.cycle(a, pts[0], pts[1])
        return a

    def graph(self):
        comments = [self.description]
        if self.names:
            comments.append("names: " + " ".join(f"{k}={v}" for k, v in self.names.items()))
        return plane_graph_from_drawing(self.coords, self.edges, comments)


def pentagon(d: Drawing, r: float = 2.0) -> None:
    for i in range(5):
        t = math.radians(90 - 72 * i)
        d.node(f"v{i + 1}", r * math.cos(t), r * math.sin(t))
    d.cycle("v1", "v2", "v3", "v4", "v5")


def outward(i: int) -> float:
    return 90 - 72 * (i - 1)


# -- configuration drawings --------------------------------------------------

def rc2():
    d = Drawing("RC2: 3-face uvw with d(u)=d(v)=3; w carries four open edges")
    d.node("w", 0, 0); d.node("u", -1, -1.732); d.node("v", 1, -1.732)
    d.cycle("w", "u", "v")
    for q in [(-0.5, 0.866), (-0.2, 0.980), (0.2, 0.980), (0.5, 0.866)]:
        d.path("w", q)
    d.path("u", (-1.5, -2.598)); d.path("v", (1.5, -2.598))
    return d


def rc3():
    d = Drawing("RC3: 5-face of degrees (3,4,4,3,*) with the two 4-vertices on 3-faces")
    d.node("v5", 0, 0); d.node("v1", 1.214, -0.882); d.node("v2", 0.750, -2.308)
    d.node("v3", -0.750, -2.308); d.node("v4", -1.214, -0.882)
    d.cycle("v5", "v1", "v2", "v3", "v4")
    for q in [(-0.375, 0.650), (-0.15, 0.735), (0.15, 0.735), (0.375, 0.650)]:
        d.path("v5", q)
    d.path("v1", (1.821, -0.441)); d.path("v4", (-1.821, -0.441))
    d.cycle("v2", (1.66, -2.90), (1.04, -3.36))
    d.cycle("v3", (-1.66, -2.90), (-1.04, -3.36))
    return d


def _fan(d: Drawing, tips: bool):
    d.node("v", 0, 0)
    arms = {"v1": (1, -1.732), "v2": (2.5, -1.732), "v3": (-1, -1.732), "v4": (-2.5, -1.732)}
    ends = {"v1": [(0.5, -3), (1.5, -3)], "v2": [(2, -3), (3, -3)],
            "v3": [(-0.5, -3), (-1.5, -3)], "v4": [(-2, -3), (-3, -3)]}
    for name, q in arms.items():
        d.node(name, *q)
        d.path("v", name)
        for e in ends[name]:
            d.path(name, e)
        if tips:
            d.path(*ends[name])


def rc4():
    d = Drawing("RC4: vertex v with all but one neighbour of degree 3")
    _fan(d, tips=False)
    d.path("v", (0, 1.5))
    return d


def rc5():
    d = Drawing("RC5: vertex v on a 3-face with all but two neighbours of degree 3")
    _fan(d, tips=False)
    d.cycle("v", (0.9, 1.4), (-0.9, 1.4))
    return d


def rc6():
    d = Drawing("RC6: vertex v with all but two neighbours pendent 3-neighbours")
    _fan(d, tips=True)
    d.path("v", (0.9, 1.2)); d.path("v", (-0.9, 1.2))
    return d


def _tri(d: Drawing, base: str, a, b):
    d.cycle(base, a, b)


def rc7():
    d = Drawing("RC7: path v1 v2 v3, each with d-3 pendent 3-neighbours off the path")
    for n, q in {"v2": (0, 0), "v1": (-3.2, 0), "v3": (3.2, 0), "u21": (0.9, -1.6), "u22": (-0.9, -1.6),
                 "u31": (2.3, -1.6), "u32": (4.1, -1.6), "u11": (-2.3, -1.6), "u12": (-4.1, -1.6)}.items():
        d.node(n, *q)
    d.path("v1", "v2", "v3")
    d.path("v2", (0, 1)); d.path("v3", (2.5, 0.9)); d.path("v3", (3.9, 0.9))
    d.path("v1", (-2.5, 0.9)); d.path("v1", (-3.9, 0.9))
    for a, b in [("v2", "u21"), ("v2", "u22"), ("v3", "u31"), ("v3", "u32"), ("v1", "u11"), ("v1", "u12")]:
        d.path(a, b)
    _tri(d, "u21", (0.45, -2.8), (1.35, -2.8)); _tri(d, "u22", (-0.45, -2.8), (-1.35, -2.8))
    _tri(d, "u31", (1.85, -2.8), (2.75, -2.8)); _tri(d, "u32", (3.65, -2.8), (4.55, -2.8))
    _tri(d, "u11", (-1.85, -2.8), (-2.75, -2.8)); _tri(d, "u12", (-3.65, -2.8), (-4.55, -2.8))
    return d


def rc8():
    d = Drawing("RC8: path v1 v2 v3 v4 with v2 a 4-vertex on a 3-face")
    for n, q in {"v3": (1.6, 0), "v2": (-1.6, 0), "v1": (-4.8, 0), "v4": (4.8, 0), "u31": (2.5, -1.6),
                 "u32": (0.7, -1.6), "u41": (3.9, -1.6), "u42": (5.7, -1.6), "u11": (-3.9, -1.6),
                 "u12": (-5.7, -1.6)}.items():
        d.node(n, *q)
    d.path("v1", "v2", "v3", "v4")
    d.path("v3", (1.6, 1)); d.path("v4", (4.1, 0.9)); d.path("v4", (5.5, 0.9))
    d.path("v1", (-4.1, 0.9)); d.path("v1", (-5.5, 0.9))
    d.cycle("v2", (-0.9, 1), (-2.3, 1))
    for a, b in [("v4", "u41"), ("v4", "u42"), ("v3", "u31"), ("v3", "u32"), ("v1", "u11"), ("v1", "u12")]:
        d.path(a, b)
    _tri(d, "u31", (2.05, -2.8), (2.95, -2.8)); _tri(d, "u32", (1.15, -2.8), (0.25, -2.8))
    _tri(d, "u41", (3.45, -2.8), (4.35, -2.8)); _tri(d, "u42", (5.25, -2.8), (6.15, -2.8))
    _tri(d, "u11", (-3.45, -2.8), (-4.35, -2.8)); _tri(d, "u12", (-5.25, -2.8), (-6.15, -2.8))
    return d


def _two_arms(d: Drawing):
    d.node("v", 0, 0); d.node("v1", 1, -1.6); d.node("v2", -1, -1.6)
    d.path("v", "v1"); d.path("v", "v2")
    _tri(d, "v1", (0.35, -2.8), (1.65, -2.8)); _tri(d, "v2", (-0.35, -2.8), (-1.65, -2.8))


def k1_vertex():
    d = Drawing("k1-vertex (k=5): on one 3-face with k-3 pendent 3-faces")
    _two_arms(d)
    d.path("v", (-1.6, 0))
    d.cycle("v", (0.9, 1.4), (-0.9, 1.4))
    return d


def k2_vertex():
    d = Drawing("k2-vertex (k=5): on no 3-face with k-3 pendent 3-faces")
    _two_arms(d)
    for q in [(0, 1.6), (0.9, 1.4), (-0.9, 1.4)]:
        d.path("v", q)
    return d


def four3_vertex():
    d = Drawing("4_3-vertex: a 4-vertex on a 3-face with no pendent 3-face")
    d.node("v", 0, -0.5)
    d.path("v", (1, -2.1)); d.path("v", (-1, -2.1))
    d.cycle("v", (0.9, 0.9), (-0.9, 0.9))
    return d


def _poor_frame(d: Drawing, special_u: bool = False):
    for n, q in {"v1": (2, 0), "v2": (3.236, -3.804), "v3": (0, -6.15), "v4": (-3.236, -3.804),
                 "v5": (-2, 0), "u": (0, 2)}.items():
        d.node(n, *q)
    d.cycle("v1", "v2", "v3", "v4", "v5")
    d.path("u", "v1"); d.path("u", "v5"); d.path((-4.5, 1.3), "v5")
    if special_u:
        for q in [(2.5, 3.3), (-2.5, 3.3), (0, 4)]:
            d.path("u", q)
    else:
        d.node("u1", 1.5, 4); d.node("u2", -1.5, 4)
        d.path("u", (2.5, 3.3)); d.path("u", "u1"); _tri(d, "u1", (0.75, 5.5), (2.25, 5.5))
        d.path("u", (-2.5, 3.3)); d.path("u", "u2"); _tri(d, "u2", (-0.75, 5.5), (-2.25, 5.5))
    _tri(d, "v2", (5.64, -3.16), (4.80, -5.74))
    d.node("u31", 1.5, -8); d.node("u32", -1.5, -8)
    d.path("v3", "u31"); _tri(d, "u31", (0.75, -9.5), (2.25, -9.5))
    d.path("v3", "u32"); _tri(d, "u32", (-0.75, -9.5), (-2.25, -9.5))
    d.path("v3", (2.5, -7))


def poor_i(special_u: bool = False):
    if special_u:
        d = Drawing("poor 5-face of type (i) whose weakly incident vertex u is special")
    else:
        d = Drawing("RC9: poor 5-face of type (i) with no special weakly incident vertex")
    _poor_frame(d, special_u)
    d.node("u41", -4.55, -4.76)
    d.path("v4", "u41"); _tri(d, "u41", (-6.17, -4.96), (-5.24, -6.24))
    d.node("x", -2.79, -6.6)
    d.path("v3", "x", "v4")
    return d


def poor_ii():
    d = Drawing("RC9: poor 5-face of type (ii) with no special weakly incident vertex")
    _poor_frame(d)
    _tri(d, "v4", (-5.64, -3.16), (-4.80, -5.74))
    return d


# -- closed and auxiliary graphs ----------------------------------------------

def polygon(n: int, desc: str, close: bool = True):
    d = Drawing(desc)
    for i in range(n):
        t = 2 * math.pi * i / n
        d.node(f"c{i}", math.cos(t), math.sin(t))
    names = [f"c{i}" for i in range(n)]
    (d.cycle if close else d.path)(*names)
    return d


def k4():
    d = Drawing("K4: four mutually adjacent vertices")
    for n, q in {"a": (0, 0), "b": (4, 0), "c": (2, 3), "d": (2, 1)}.items():
        d.node(n, *q)
    for a, b in ["ab", "ac", "ad", "bc", "bd", "cd"]:
        d.path(a, b)
    return d


def bowtie():
    d = Drawing("two triangles sharing one vertex")
    d.node("h", 0, 0)
    d.cycle("h", (-2, 1), (-2, -1)); d.cycle("h", (2, 1), (2, -1))
    return d


def two_triangles():
    d = Drawing("two vertex-disjoint triangles joined by one edge")
    d.node("a", 0, 0); d.node("b", 2, 0)
    d.cycle("a", (-1, 1), (-1, -1)); d.cycle("b", (3, 1), (3, -1))
    d.path("a", "b")
    return d


def single_vertex():
    d = Drawing("a single vertex")
    d.node("v", 0, 0)
    return d


def edge():
    d = Drawing("a single edge")
    d.node("u", 0, 0); d.node("v", 1, 0); d.path("u", "v")
    return d


def rc2_closed():
    """Truncate three vertices of K4: cubic, three disjoint 3-faces."""
    d = Drawing("cubic graph: K4 with three vertices truncated to 3-faces (first reducible block is RC2)")
    d.node("x", 0, 0)
    centres = {}
    for name, ang in (("A", 90), ("B", 210), ("C", 330)):
        t = math.radians(ang)
        centres[name] = (3 * math.cos(t), 3 * math.sin(t))

    def toward(c, target, r=0.8):
        cx, cy = centres[c]
        tx, ty = target
        n = math.hypot(tx - cx, ty - cy)
        return (cx + r * (tx - cx) / n, cy + r * (ty - cy) / n)

    corners = {}
    for c in "ABC":
        others = [o for o in "ABC" if o != c]
        corners[c] = [toward(c, (0, 0))] + [toward(c, centres[o]) for o in others]
        d.cycle(*corners[c])
        d.path("x", corners[c][0])
    d.path(corners["A"][1], corners["B"][1])
    d.path(corners["B"][2], corners["C"][2])
    d.path(corners["C"][1], corners["A"][2])
    return d


def dodecahedron():
    d = Drawing("dodecahedron (Schlegel diagram)")
    for i in range(5):
        t = math.radians(90 + 72 * i)
        h = t + math.radians(36)
        d.node(f"o{i}", 4 * math.cos(t), 4 * math.sin(t))
        d.node(f"m{2 * i}", 2.5 * math.cos(t), 2.5 * math.sin(t))
        d.node(f"m{2 * i + 1}", 2.5 * math.cos(h), 2.5 * math.sin(h))
        d.node(f"n{i}", 1.2 * math.cos(h), 1.2 * math.sin(h))
    d.cycle(*[f"o{i}" for i in range(5)])
    d.cycle(*[f"n{i}" for i in range(5)])
    d.cycle(*[f"m{i}" for i in range(10)])
    for i in range(5):
        d.path(f"o{i}", f"m{2 * i}")
        d.path(f"n{i}", f"m{2 * i + 1}")
    return d


def barrel():
    d = Drawing("cubic barrel: two 3-faces, a central hexagon and six 5-faces")
    for i in range(3):
        th = math.radians(90 + 120 * i)
        tn = th + math.radians(60)
        d.node(f"t{i}", 4 * math.cos(th), 4 * math.sin(th))
        d.node(f"m{i}", 2.5 * math.cos(th), 2.5 * math.sin(th))
        d.node(f"n{i}", 2.5 * math.cos(tn), 2.5 * math.sin(tn))
        d.node(f"b{i}", math.cos(tn), math.sin(tn))
    d.cycle("t0", "t1", "t2"); d.cycle("b0", "b1", "b2")
    d.cycle("m0", "n0", "m1", "n1", "m2", "n2")
    for i in range(3):
        d.path(f"t{i}", f"m{i}"); d.path(f"b{i}", f"n{i}")
    return d


# -- discharging branch fixtures ----------------------------------------------

def face_344():
    d = Drawing("3-face with degrees (3,4,4); the 3-vertex's outside neighbour has degree 4")
    d.node("u", 0, 0); d.node("v", 2, 0); d.node("w", 1, 1.6); d.node("x", 0, -1.5)
    d.cycle("u", "v", "w")
    d.path("u", "x")
    for ang in (-150, -90, -30):
        d.stub("x", ang)
    d.stub("v", -30); d.stub("v", 20); d.stub("w", 60); d.stub("w", 120)
    return d


def hexagon_threes():
    d = polygon(6, "6-face on six 3-vertices")
    for i in range(6):
        d.stub(f"c{i}", 60 * i)
    return d


def four3_balanced():
    d = Drawing("4_3-vertex v on one 3-face and three 5-faces")
    for n, q in {"v": (0, 0), "a": (-1, 1), "b": (1, 1), "c": (-1, -1), "d": (1, -1)}.items():
        d.node(n, *q)
    d.cycle("v", "a", "b")
    d.path("v", "c"); d.path("v", "d")
    d.path("a", (-2, 1), (-2, -1), "c")
    d.path("c", (-1, -2), (1, -2), "d")
    d.path("d", (2, -1), (2, 1), "b")
    return d


def case_2_1():
    d = Drawing("5-face (3, 4_3, 5_1, 5_1, 4_3); the 5_1-vertices share a 3-face")
    pentagon(d)
    d.stub("v1", outward(1))
    d.cycle("v2", d.p(_off(d, "v2", outward(2) - 20, 1.0)), d.p(_off(d, "v2", outward(2) + 20, 1.0)))
    d.cycle("v5", d.p(_off(d, "v5", outward(5) - 20, 1.0)), d.p(_off(d, "v5", outward(5) + 20, 1.0)))
    d.node("x", 0, -2.6)
    d.path("v3", "x", "v4")
    d.stub("x", -90, 0.8)
    d.arm("v3", -70); d.arm("v3", 10)
    d.arm("v4", -110); d.arm("v4", 170)
    return d


def case_1_2_1():
    d = Drawing("5-face (3, 4_2, 3, 5_2, 5_2) with no 3-face on its edges")
    pentagon(d)
    d.stub("v1", outward(1))
    d.arm("v2", 0); d.stub("v2", 45)
    d.stub("v3", outward(3))
    d.arm("v4", -160); d.arm("v4", -92); d.stub("v4", -126)
    d.arm("v5", 130); d.arm("v5", 194); d.stub("v5", 162)
    return d


def _off(d: Drawing, base: str, angle: float, r: float):
    x, y = d.xy(base)
    t = math.radians(angle)
    return (x + r * math.cos(t), y + r * math.sin(t))


BUILDERS = {
    "rc2": rc2, "rc3": rc3, "rc4": rc4, "rc5": rc5, "rc6": rc6, "rc7": rc7, "rc8": rc8,
    "k1_vertex": k1_vertex, "k2_vertex": k2_vertex, "four3_vertex": four3_vertex,
    "poor_i": poor_i, "poor_ii": poor_ii, "poor_i_special": lambda: poor_i(special_u=True),
    "c5": lambda: polygon(5, "cycle on five vertices"),
    "p4": lambda: polygon(4, "path on four vertices", close=False),
    "k4": k4, "bowtie": bowtie, "two_triangles": two_triangles,
    "single_vertex": single_vertex, "edge": edge,
    "rc2_closed": rc2_closed, "dodecahedron": dodecahedron, "barrel": barrel,
    "face_344": face_344, "hexagon_threes": hexagon_threes, "four3_balanced": four3_balanced,
    "case_2_1": case_2_1, "case_1_2_1": case_1_2_1,
}


def build_all() -> dict[str, str]:
    return {name: format_pg(fn().graph()) for name, fn in BUILDERS.items()}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, text in build_all().items():
        (OUT / f"{name}.pg").write_text(text, encoding="utf-8")
        print(f"wrote {name}.pg")


if __name__ == "__main__":
    main()
