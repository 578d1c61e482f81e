"""Charges d(v) - 2 on vertices and -2 on faces, the four redistribution
rules, and an audit of final charges.  Everything is exact rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .errors import Disconnected, OutOfClass
from .plane import PlaneGraph, VertexClass, _vertex_class, class_membership, pendent_3_structure
from .reducibility import iter_reducible

THIRD, TWO_THIRDS, NINTH = Q(1, 3), Q(2, 3), Q(1, 9)
ALLOWED_AMOUNTS = frozenset({Q(1, 3), Q(2, 3), Q(1, 9), Q(5, 12), Q(4, 9), Q(7, 15), Q(1, 2), Q(5, 9)})


@dataclass(frozen=True)
class Transfer:
    sender: int  # vertex
    receiver: int  # face index
    amount: Q
    rule: str


@dataclass
class ChargeLedger:
    vertex_charge: dict[int, Q]
    face_charge: dict[int, Q]
    transfers: list[Transfer] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def total(self) -> Q:
        return sum(self.vertex_charge.values(), Q(0)) + sum(self.face_charge.values(), Q(0))


def initial_charges(G: PlaneGraph) -> ChargeLedger:
    if not G.connected:
        raise Disconnected(f"graph has {len(G.components)} components")
    L = ChargeLedger(
        {v: Q(G.degree(v) - 2) for v in G.vertices},
        {i: Q(-2) for i in range(len(G.faces))},
    )
    assert L.total == -4, L.total
    return L


def r4_amount(c: VertexClass) -> Q | None:
    """What a vertex of class ``c`` gives each incident 5+-face."""
    if c.tag == "k1":
        return Q(1, 3) if c.degree == 4 else Q(5, 12)
    if c.tag == "k2":
        return Q(5, 12) if c.degree == 4 else Q(7, 15)
    return {"four3": Q(4, 9), "heavy": Q(1, 2), "special": Q(5, 9)}.get(c.tag)


def pendent_5_faces(G: PlaneGraph, v: int) -> list[int]:
    """5-faces sharing an edge with a 3-face through ``v`` and avoiding ``v``."""
    out: list[int] = []
    for t in G.three_faces_at(v):
        for g in G.edge_adjacent_faces(t):
            if G.faces[g].length == 5 and v not in G.faces[g] and g not in out:
                out.append(g)
    return out


def rule_transfers(G: PlaneGraph) -> tuple[list[Transfer], list[str]]:
    warnings = []
    low = [v for v in G.vertices if G.degree(v) < 3]
    if low:
        warnings.append(f"vertices of degree < 3 present (excluded in a minimal counterexample): {low}")
    out: list[Transfer] = []
    for v in G.vertices:
        d = G.degree(v)
        cls = _vertex_class(G, v)
        if d == 3:
            out.extend(Transfer(v, fi, THIRD, "R1") for fi in G.faces_at(v))
        if d >= 4:
            out.extend(Transfer(v, fi, TWO_THIRDS, "R2") for fi in G.three_faces_at(v))
            out.extend(Transfer(v, fi, THIRD, "R2") for fi in sorted(pendent_3_structure(G, v).faces))
        if cls.tag == "special":
            out.extend(Transfer(v, fi, NINTH, "R3") for fi in pendent_5_faces(G, v))
        amt = r4_amount(cls) if d >= 3 else None
        if amt is not None:
            out.extend(Transfer(v, fi, amt, "R4") for fi in G.faces_at(v) if G.faces[fi].length >= 5)
    return out, warnings


def apply_rules(G: PlaneGraph, L0: ChargeLedger | None = None) -> ChargeLedger:
    """All rules at once, each reading only pre-discharge classes."""
    rep = class_membership(G)
    if not rep.in_class:
        raise OutOfClass(f"graph not in class: {rep}")
    L0 = initial_charges(G) if L0 is None else L0
    transfers, warnings = rule_transfers(G)
    vc, fc = dict(L0.vertex_charge), dict(L0.face_charge)
    for t in transfers:
        vc[t.sender] -= t.amount
        fc[t.receiver] += t.amount
    return ChargeLedger(vc, fc, transfers, L0.warnings + warnings)


# -- audit --------------------------------------------------------------------

def face_case(G: PlaneGraph, fi: int) -> str:
    """Which branch of the face analysis covers face ``fi``."""
    f = G.faces[fi]
    n = f.length
    if n == 3:
        return "3-face"
    if n >= 6:
        return "6+-face"
    if n != 5:
        return f"{n}-face"
    b = f.boundary
    threes = [i for i in range(5) if G.degree(b[i]) == 3]
    if len(threes) >= 2:
        if any((i + 1) % 5 in threes for i in threes):
            return "5-face case 1.1"
        i, j = threes[0], threes[1]
        mid = (i + 1) % 5 if (i + 2) % 5 == j else (j + 1) % 5
        across = [G.face_of_dart(b[(mid + s) % 5], b[mid]) for s in (-1, 1)]
        across += [G.face_of_dart(b[mid], b[(mid + s) % 5]) for s in (-1, 1)]
        if any(g != fi and G.faces[g].length == 3 for g in across):
            return "5-face case 1.2.2"
        return "5-face case 1.2.1"
    if len(threes) == 1:
        classes = [_vertex_class(G, v) for v in b if G.degree(v) != 3]
        if sum(c.rich for c in classes) >= 2:
            return "5-face case 2 (two rich)"
        big = sum(c.degree >= 5 for c in classes)
        return {0: "5-face case 2.3", 1: "5-face case 2.2"}.get(big, "5-face case 2.1")
    return "5-face case 3"


@dataclass(frozen=True)
class ElementRow:
    kind: str  # "vertex" or "face"
    ident: int
    initial: Q
    received: Q
    sent: Q
    final: Q
    case: str
    excused_by: str | None = None


@dataclass
class AuditReport:
    rows: list[ElementRow]
    ledger: ChargeLedger
    initial_total: Q
    final_total: Q

    @property
    def conserved(self) -> bool:
        return self.initial_total == self.final_total == -4

    @property
    def negatives(self) -> list[ElementRow]:
        return [r for r in self.rows if r.final < 0]

    @property
    def unexcused(self) -> list[ElementRow]:
        return [r for r in self.negatives if r.excused_by is None]

    def row(self, kind: str, ident: int) -> ElementRow:
        for r in self.rows:
            if r.kind == kind and r.ident == ident:
                return r
        raise KeyError((kind, ident))


def audit(G: PlaneGraph, *, excuse: bool = True) -> AuditReport:
    """Final charge of every vertex and face.

    A negative element is *excused* when it lies in (vertex) or touches (face)
    the deletable part of some reducible configuration: the final-charge
    argument only applies to graphs containing none of them.
    """
    L0 = initial_charges(G)
    L = apply_rules(G, L0)
    recv: dict[int, Q] = {i: Q(0) for i in L.face_charge}
    sent: dict[int, Q] = {v: Q(0) for v in L.vertex_charge}
    for t in L.transfers:
        sent[t.sender] += t.amount
        recv[t.receiver] += t.amount
    owner: dict[int, str] = {}
    has_negative = any(x < 0 for x in L.vertex_charge.values()) or any(
        x < 0 for x in L.face_charge.values()
    )
    if excuse and has_negative:
        for m in iter_reducible(G, check_class=False):
            for v in m.Q:
                owner.setdefault(v, f"{m.kind}@{list(m.anchor)}")
    rows = []
    for v in G.vertices:
        ex = owner.get(v) if L.vertex_charge[v] < 0 else None
        c = _vertex_class(G, v)
        rows.append(ElementRow("vertex", v, L0.vertex_charge[v], Q(0), sent[v],
                               L.vertex_charge[v], f"degree {G.degree(v)} {c.label}", ex))
    for i, f in enumerate(G.faces):
        ex = None
        if L.face_charge[i] < 0:
            ex = next((owner[v] for v in f.boundary if v in owner), None)
        rows.append(ElementRow("face", i, L0.face_charge[i], recv[i], Q(0),
                               L.face_charge[i], face_case(G, i), ex))
    return AuditReport(rows, L, L0.total, L.total)
