"""Resolutions and the block-by-block random coloring they support.

A resolution peels verified reducible blocks off the graph until a final
block with empty boundary remains.  Colorings are then built in the reverse
order: the final block is colored uniformly at random, and every earlier
block is colored uniformly among the colorings compatible with what has
already been fixed around it.  The exact law of this process is computed
with rationals; a seeded sampler realises the same law.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cover import Coloring, Cover, WeightedRequest, request_value, total_weight
from .errors import BudgetExceeded, Disconnected, InputError, NoExtension, OutOfClass, Stuck
from .plane import PlaneGraph, class_membership
from .reducibility import (
    MAX_BLOCK,
    MatchVerdict,
    ReducibleMatch,
    is_f_forbidding,
    iter_reducible,
    verify_match,
)

DEFAULT_OUTCOME_BUDGET = 10**6
DEFAULT_SAMPLES = 1000


def epsilon(k: int, b: int) -> Fraction:
    if k < 3 or b < 1:
        raise InputError("need k >= 3 and b >= 1")
    return Fraction(1, k**b) ** (k - 1)


# -- resolutions --------------------------------------------------------------

@dataclass(frozen=True)
class ResolutionStep:
    match: ReducibleMatch
    residual: frozenset[int]  # vertex set of the graph the block was found in
    verdict: MatchVerdict | None = None

    @property
    def block(self) -> frozenset[int]:
        return self.match.Q


@dataclass
class Resolution:
    graph: PlaneGraph
    k: int
    steps: list[ResolutionStep]
    terminal: ResolutionStep | None
    skipped: list[tuple[str, ReducibleMatch]] = field(default_factory=list)

    @property
    def b(self) -> int:
        blocks = [s.match.block_size for s in self.all_blocks()]
        return max(blocks, default=1)

    def all_blocks(self) -> list[ResolutionStep]:
        return self.steps + ([self.terminal] if self.terminal else [])

    @property
    def epsilon(self) -> Fraction:
        return epsilon(self.k, self.b)

    def levels(self) -> list[frozenset[int]]:
        """Vertex sets of G_0, G_1, ..., G_M."""
        out = [s.residual for s in self.steps]
        if self.terminal is not None:
            out.append(self.terminal.residual)
        return out


def build_resolution(G: PlaneGraph, k: int = 4, *, mode: str = "reduced",
                     require_connected: bool = True) -> Resolution:
    if require_connected and not G.connected:
        raise Disconnected(f"graph has {len(G.components)} components")
    rep = class_membership(G)
    if not rep.in_class:
        raise OutOfClass(f"graph not in class: {rep}")
    steps: list[ResolutionStep] = []
    skipped: list[tuple[str, ReducibleMatch]] = []
    residual = G
    while residual.vertices:
        level = len(steps)
        V = frozenset(residual.vertices)
        chosen = None
        for m in iter_reducible(residual, k, context=f"G{level}", check_class=False):
            if m.block_size > MAX_BLOCK:
                skipped.append((f"G{level}", m))
                continue
            verdict = verify_match(residual, m, k, mode=mode)
            if verdict.ok:
                chosen = ResolutionStep(m, V, verdict)
                break
            skipped.append((f"G{level}", m))
        if chosen is None:
            if len(V) <= MAX_BLOCK:
                m = ReducibleMatch("terminal", V, frozenset(), tuple(sorted(V)), f"G{level}")
                verdict = verify_match(residual, m, k, mode=mode)
                if verdict.ok:
                    return Resolution(G, k, steps, ResolutionStep(m, V, verdict), skipped)
            raise Stuck(residual)
        if chosen.match.Q == V:
            return Resolution(G, k, steps, chosen, skipped)
        steps.append(chosen)
        residual = residual.without(chosen.match.Q)
    return Resolution(G, k, steps, None, skipped)


# -- the coloring process -----------------------------------------------------

class _Plan:
    """Blocks in coloring order with cached extension lists."""

    def __init__(self, G: PlaneGraph, C: Cover, R: Resolution):
        C.check_against(G.edges, G.vertices)
        self.G, self.C = G, C
        blocks = [s.block for s in reversed(R.all_blocks())]
        self.order: list[int] = []
        self.blocks = []
        done: set[int] = set()
        for Q in blocks:
            qv = sorted(Q)
            outside = sorted({u for y in qv for u in G.neighbors(y) if u in done})
            inner = [(a, b) for a, b in G.edges if a in Q and b in Q]
            self.blocks.append((qv, outside, inner))
            self.order.extend(qv)
            done |= Q
        if done != set(G.vertices):
            raise InputError("resolution does not cover the graph")
        self.pos = {v: i for i, v in enumerate(self.order)}
        self.cache: list[dict[tuple, list[tuple[int, ...]]]] = [dict() for _ in self.blocks]

    def extensions(self, bi: int, state: Sequence[int]) -> list[tuple[int, ...]]:
        qv, outside, inner = self.blocks[bi]
        key = tuple(state[self.pos[u]] for u in outside)
        hit = self.cache[bi].get(key)
        if hit is not None:
            return hit
        psi = dict(zip(outside, key))
        G, C = self.G, self.C
        allowed = []
        for y in qv:
            bad = set()
            for u in G.neighbors(y):
                if u in psi:
                    bad |= {i for i, j in C.matching(y, u) if j == psi[u]}
            allowed.append([c for c in range(C.sizes[y]) if c not in bad])
        idx = {y: i for i, y in enumerate(qv)}
        back: list[list[tuple[int, frozenset]]] = [[] for _ in qv]
        for a, b in inner:
            back[idx[b]].append((idx[a], C.matching(a, b)))
        out: list[tuple[int, ...]] = []
        cur: list[int] = []

        def rec(i: int) -> None:
            if i == len(qv):
                out.append(tuple(cur))
                return
            for c in allowed[i]:
                if all((cur[j], c) not in m for j, m in back[i]):
                    cur.append(c)
                    rec(i + 1)
                    cur.pop()

        rec(0)
        if not out:
            raise NoExtension(f"block {qv} admits no extension given {psi}")
        self.cache[bi][key] = out
        return out

    def to_coloring(self, state: Sequence[int]) -> Coloring:
        return Coloring(tuple(sorted(zip(self.order, state))))


@dataclass
class ColoringDistribution:
    support: tuple[Coloring, ...]
    probabilities: tuple[Fraction, ...]
    cover: Cover

    def __post_init__(self) -> None:
        den = lcm(*(p.denominator for p in self.probabilities)) if self.probabilities else 1
        self._den = den
        self._num = [p.numerator * (den // p.denominator) for p in self.probabilities]
        self._index = {v: i for i, v in enumerate(self.cover.sizes)}
        self._rows = [tuple(c for _, c in phi.items) for phi in self.support]
        self._marginals: dict[tuple[int, int], Fraction] | None = None
        self._array: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.support)

    def items(self):
        return zip(self.support, self.probabilities)

    def total(self) -> Fraction:
        return Fraction(sum(self._num), self._den)

    def probability(self, pred) -> Fraction:
        return Fraction(sum(n for n, row in zip(self._num, self._rows) if pred(row)), self._den)

    def marginal(self, v: int, c: int) -> Fraction:
        i = self._index[v]
        return self.probability(lambda row: row[i] == c)

    def marginals(self) -> dict[tuple[int, int], Fraction]:
        if self._marginals is None:
            acc = {(v, c): 0 for v, h in self.cover.sizes.items() for c in range(h)}
            verts = list(self.cover.sizes)
            for n, row in zip(self._num, self._rows):
                for v, c in zip(verts, row):
                    acc[(v, c)] += n
            self._marginals = {key: Fraction(n, self._den) for key, n in acc.items()}
        return dict(self._marginals)

    def expectation(self, w: WeightedRequest) -> Fraction:
        """By linearity: sum of weight times marginal."""
        marg = self.marginals()
        return sum((x * marg.get(key, Fraction(0)) for key, x in w.weights.items()), Fraction(0))

    def best_for(self, w: WeightedRequest) -> tuple[Coloring, Fraction]:
        """First support coloring of maximum request value."""
        den = lcm(*(x.denominator for x in w.weights.values())) if w.weights else 1
        scaled = {key: int(x * den) for key, x in w.weights.items()}
        hmax = max(self.cover.sizes.values())
        if max(scaled.values(), default=0) * max(len(self._index), 1) < 2**62:
            if self._array is None:
                self._array = np.array(self._rows, dtype=np.int64).reshape(len(self._rows), -1)
            W = np.zeros((len(self._index), hmax), dtype=np.int64)
            for (v, c), x in scaled.items():
                W[self._index[v], c] = x
            vals = W[np.arange(len(self._index)), self._array].sum(axis=1)
            i = int(np.argmax(vals))
        else:  # weights too large for machine integers
            vals = [sum(scaled.get((v, c), 0) for v, c in phi.items) for phi in self.support]
            i = max(range(len(vals)), key=lambda j: (vals[j], -j))
        phi = self.support[i]
        return phi, request_value(w, phi)


def exact_distribution(G: PlaneGraph, C: Cover, R: Resolution,
                       budget: int | None = None) -> ColoringDistribution:
    budget = int(os.environ.get("DPFLEX_OUTCOME_BUDGET", DEFAULT_OUTCOME_BUDGET)) if budget is None else budget
    plan = _Plan(G, C, R)
    states: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    for bi in range(len(plan.blocks)):
        nxt = []
        for state, p in states:
            exts = plan.extensions(bi, state)
            q = p / len(exts)
            nxt.extend((state + e, q) for e in exts)
            if len(nxt) > budget:
                raise BudgetExceeded(f"more than {budget} outcomes")
        states = nxt
    pairs = sorted(((plan.to_coloring(s), p) for s, p in states), key=lambda t: t[0].items)
    return ColoringDistribution(tuple(c for c, _ in pairs), tuple(p for _, p in pairs), C)


def min_fixation_probability(D: ColoringDistribution) -> tuple[Fraction, tuple[int, int]]:
    """Smallest ``Prob[phi(v) = c]`` over all vertices and list positions."""
    marg = D.marginals()
    key = min(marg, key=lambda k: (marg[k], k))
    return marg[key], key


def avoidance_probability(D: ColoringDistribution, I: Iterable[int],
                          c: Mapping[int, int] | int) -> Fraction:
    """Probability that every ``v`` in ``I`` avoids its designated color."""
    I = list(I)
    if not I:
        return Fraction(1)
    cols = {v: c for v in I} if isinstance(c, int) else dict(c)
    idx = [(D._index[v], cols[v]) for v in I]
    return D.probability(lambda row: all(row[i] != x for i, x in idx))


@dataclass(frozen=True)
class AvoidanceCheck:
    level: int
    I: tuple[int, ...]
    colors: tuple[int, ...]
    probability: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.probability >= self.bound


def avoidance_checks(G: PlaneGraph, R: Resolution, D: ColoringDistribution,
                     max_size: int = 2) -> list[AvoidanceCheck]:
    """Every forbidding ``I`` (``|I| <= min(max_size, k-2)``) of every residual
    level, against every choice of one avoided color per vertex."""
    p = Fraction(1, R.k ** R.b)
    out = []
    for lvl, V in enumerate(R.levels()):
        adj = G.induced(V).adjacency
        for r in range(1, min(max_size, R.k - 2) + 1):
            for I in combinations(sorted(V), r):
                if not is_f_forbidding(adj, I):
                    continue
                for cols in product(*(range(D.cover.sizes[v]) for v in I)):
                    prob = avoidance_probability(D, I, dict(zip(I, cols)))
                    out.append(AvoidanceCheck(lvl, I, cols, prob, p ** r))
    return out


# -- sampling -----------------------------------------------------------------

class Sampler:
    """Seeded realisation of the process; draw ``index`` of stream ``seed`` is a
    pure function of both."""

    def __init__(self, G: PlaneGraph, C: Cover, R: Resolution):
        self.plan = _Plan(G, C, R)

    def _raw(self, seed: int, index: int) -> tuple[int, ...]:
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))
        state: tuple[int, ...] = ()
        for bi in range(len(self.plan.blocks)):
            exts = self.plan.extensions(bi, state)
            state = state + exts[int(rng.integers(len(exts)))]
        return state

    def draw(self, seed: int, index: int = 0) -> Coloring:
        return self.plan.to_coloring(self._raw(seed, index))

    def draw_many(self, seed: int, n: int) -> list[Coloring]:
        return [self.draw(seed, i) for i in range(n)]


def sample_coloring(G: PlaneGraph, C: Cover, R: Resolution, seed: int, index: int = 0) -> Coloring:
    return Sampler(G, C, R).draw(seed, index)


# -- requests -----------------------------------------------------------------

@dataclass
class SatisfyResult:
    coloring: Coloring
    value: Fraction
    total: Fraction
    epsilon: Fraction
    b: int
    mode: str  # "exact" or "sampled"
    expectation: Fraction | None = None
    samples: int = 0

    @property
    def certified(self) -> bool:
        """Exact mode proves value >= epsilon * total; sampling does not."""
        return self.mode == "exact" and self.value >= self.epsilon * self.total


def satisfy_request(G: PlaneGraph, C: Cover, R: Resolution, w: WeightedRequest, *,
                    budget: int | None = None, samples: int | None = None, seed: int = 0,
                    distribution: ColoringDistribution | None = None) -> SatisfyResult:
    """Best coloring for ``w``: exact argmax over the support when the
    distribution fits in the outcome budget, else the best of seeded samples."""
    w.check_against(C)
    total = total_weight(w)
    eps = R.epsilon
    try:
        D = distribution if distribution is not None else exact_distribution(G, C, R, budget)
    except BudgetExceeded:
        D = None
    if D is not None:
        best, best_val = D.best_for(w)
        return SatisfyResult(best, best_val, total, eps, R.b, "exact", D.expectation(w))
    n = samples if samples is not None else int(os.environ.get("DPFLEX_SAMPLES", DEFAULT_SAMPLES))
    sampler = Sampler(G, C, R)
    best, best_val = None, None
    for i in range(n):
        phi = sampler.draw(seed, i)
        val = request_value(w, phi)
        if best_val is None or val > best_val:
            best, best_val = phi, val
    return SatisfyResult(best, best_val, total, eps, R.b, "sampled", None, n)
