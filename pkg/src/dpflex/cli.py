"""Command-line front end.

Exit status: 0 success or verified, 1 verification failure / negative finding,
2 input error.  ``--format structured`` prints sorted-key JSON in which every
rational appears as ``{"exact": "p/q", "decimal": "..."}``.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from .cover import (
    Cover,
    WeightedRequest,
    enumerate_colorings,
    format_cover,
    identity_cover,
    parse_cover,
    parse_request,
)
from .discharging import audit
from .errors import BudgetExceeded, DPFlexError, InputError, NoExtension, Stuck
from .fixtures import fixture_names, fixture_text
from .flexibility import (
    avoidance_checks,
    exact_distribution,
    min_fixation_probability,
    Sampler,
    build_resolution,
    satisfy_request,
)
from .plane import PlaneGraph, class_membership, parse_pg
from .reducibility import KINDS, ReducibleMatch, iter_reducible, verify_match

COMMANDS = ("check", "find-reducible", "verify", "resolve", "sample", "satisfy", "discharge", "enumerate")
BUDGET_ENV = {
    "cover_budget": "DPFLEX_COVER_BUDGET",
    "coloring_budget": "DPFLEX_COLORING_BUDGET",
    "outcome_budget": "DPFLEX_OUTCOME_BUDGET",
    "samples": "DPFLEX_SAMPLES",
}


@dataclass
class RunConfig:
    command: str
    graph: str
    cover: str | None = None
    request: str | None = None
    seed: int = 0
    n: int = 10
    k: int = 4
    kinds: list[str] | None = None
    all: bool = False
    avoidance: bool = False
    log: str | None = None
    limit: int = 20
    budgets: dict[str, int] = field(default_factory=dict)
    format: str = "human"


@dataclass
class Report:
    status: int
    data: dict[str, Any]
    lines: list[str]


# -- rendering ------------------------------------------------------------------

def rat(x: Fraction | int) -> dict[str, str]:
    x = Fraction(x)
    exact = f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return {"exact": exact, "decimal": f"{float(x):.12g}"}


def _r(x: Fraction | int) -> str:
    return rat(x)["exact"]


def _coloring(phi) -> dict[str, int]:
    return {str(v): c for v, c in phi.items}


def _match(m: ReducibleMatch) -> dict[str, Any]:
    return {"kind": m.kind, "S": sorted(m.S), "B": sorted(m.B), "anchor": list(m.anchor),
            "block_size": m.block_size, "context": m.context}


def _verdict(v) -> dict[str, Any]:
    out: dict[str, Any] = {"ok": v.ok, "cases": v.cases, "covers_checked": v.covers_checked}
    if not v.ok:
        out["fixed"] = v.fixed
        out["forbidden"] = list(v.forbidden) if v.forbidden is not None else None
        out["reason"] = v.reason
        out["sizes"] = {str(a): b for a, b in sorted((v.sizes or {}).items())}
        out["counterexample"] = format_cover(v.counterexample) if v.counterexample is not None else None
    return out


# -- loading ----------------------------------------------------------------------

def load_graph(spec: str) -> PlaneGraph:
    """A ``.pg`` path, or ``fixture:NAME`` for a shipped example."""
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        if name not in fixture_names():
            raise InputError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
        return parse_pg(fixture_text(name))
    return parse_pg(_read(spec))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def load_cover(cfg: RunConfig, G: PlaneGraph) -> Cover:
    C = parse_cover(_read(cfg.cover)) if cfg.cover else identity_cover(G, cfg.k)
    C.check_against(G.edges, G.vertices)
    return C


def load_request(cfg: RunConfig) -> WeightedRequest:
    if not cfg.request:
        raise InputError("satisfy needs --request")
    return parse_request(_read(cfg.request))


@contextlib.contextmanager
def budget_env(budgets: dict[str, int]):
    saved = {}
    for key, val in budgets.items():
        if val is None:
            continue
        if val <= 0:
            raise InputError(f"--{key.replace('_', '-')} must be positive")
        env = BUDGET_ENV[key]
        saved[env] = os.environ.get(env)
        os.environ[env] = str(val)
    try:
        yield
    finally:
        for env, old in saved.items():
            if old is None:
                os.environ.pop(env, None)
            else:
                os.environ[env] = old


# -- commands -----------------------------------------------------------------

def cmd_check(cfg: RunConfig, G: PlaneGraph) -> Report:
    rep = class_membership(G)
    data = {
        "vertices": len(G.vertices), "edges": len(G.edges), "faces": len(G.faces),
        "face_lengths": sorted(f.length for f in G.faces), "components": len(G.components),
        "in_class": rep.in_class,
        "four_cycle": list(rep.four_cycle) if rep.four_cycle else None,
        "intersecting_triangles": [list(t) for t in rep.intersecting_triangles] if rep.intersecting_triangles else None,
    }
    lines = [f"V={data['vertices']} E={data['edges']} F={data['faces']} components={data['components']}",
             f"face lengths: {data['face_lengths']}"]
    if rep.in_class:
        lines.append("in class: no 4-cycle, no intersecting triangles")
    else:
        if rep.four_cycle:
            lines.append(f"NOT in class: 4-cycle {list(rep.four_cycle)}")
        if rep.intersecting_triangles:
            lines.append(f"NOT in class: intersecting triangles {data['intersecting_triangles']}")
    return Report(0 if rep.in_class else 1, data, lines)


def _matches(cfg: RunConfig, G: PlaneGraph):
    it = iter_reducible(G, cfg.k, kinds=cfg.kinds)
    return list(it) if cfg.all else list(itertools.islice(it, 1))


def cmd_find(cfg: RunConfig, G: PlaneGraph) -> Report:
    found = _matches(cfg, G)
    rows, lines, status = [], [], 0
    for m in found:
        v = verify_match(G, m, cfg.k)
        rows.append({**_match(m), "fix": _verdict(v.fix), "forb": _verdict(v.forb), "verified": v.ok})
        lines.append(f"{m.kind} anchor={list(m.anchor)} S={sorted(m.S)} B={sorted(m.B)} "
                     f"|S\\B|={m.block_size} {'verified' if v.ok else 'FAILED'}")
        lines += _failure_lines(v)
        status = status or (0 if v.ok else 1)
    if not found:
        lines.append("no reducible configuration found")
        status = 1
    return Report(status, {"matches": rows}, lines)


def _failure_lines(v) -> list[str]:
    out = []
    for part in (v.fix, v.forb):
        if not part.ok:
            out.append(f"  {part.clause} fails: {part.reason or 'uncolorable cover'}"
                       f" fixed={part.fixed} forbidden={part.forbidden}")
            if part.counterexample is not None:
                out += ["  " + s for s in format_cover(part.counterexample).splitlines()]
    return out


def cmd_verify(cfg: RunConfig, G: PlaneGraph) -> Report:
    cfg.all = True
    rep = cmd_find(cfg, G)
    n = len(rep.data["matches"])
    bad = sum(not r["verified"] for r in rep.data["matches"])
    rep.lines.append(f"{n - bad}/{n} matches verified")
    return rep


def cmd_resolve(cfg: RunConfig, G: PlaneGraph) -> Report:
    R = build_resolution(G, cfg.k)
    C = load_cover(cfg, G)
    D = exact_distribution(G, C, R)
    fix, (fv, fc) = min_fixation_probability(D)
    eps = R.epsilon
    data: dict[str, Any] = {
        "b": R.b, "k": R.k, "epsilon": rat(eps),
        "steps": [_match(s.match) for s in R.steps],
        "terminal": _match(R.terminal.match) if R.terminal else None,
        "outcomes": len(D.support), "total_probability": rat(D.total()),
        "min_fixation_probability": rat(fix), "min_fixation_at": [fv, fc],
        "clause_i": fix >= eps,
    }
    lines = [f"resolution: {len(R.steps)} steps + terminal, b = {R.b}, epsilon = {_r(eps)}"]
    for s in R.all_blocks():
        lines.append(f"  {s.match.kind} block {sorted(s.match.Q)} (residual {len(s.residual)})")
    lines.append(f"outcomes = {len(D.support)}, total probability = {_r(D.total())}")
    lines.append(f"min fixation probability = {_r(fix)} at vertex {fv} color {fc} "
                 f"({'>=' if fix >= eps else '<'} epsilon)")
    ok = fix >= eps
    if cfg.avoidance:
        checks = avoidance_checks(G, R, D)
        failing = [c for c in checks if not c.ok]
        worst = min(checks, key=lambda c: c.probability - c.bound) if checks else None
        data["clause_ii"] = {"checks": len(checks), "failing": len(failing),
                             "worst": None if worst is None else {
                                 "level": worst.level, "I": list(worst.I), "colors": list(worst.colors),
                                 "probability": rat(worst.probability), "bound": rat(worst.bound)}}
        lines.append(f"avoidance: {len(checks) - len(failing)}/{len(checks)} checks pass")
        ok = ok and not failing
    return Report(0 if ok else 1, data, lines)


def cmd_sample(cfg: RunConfig, G: PlaneGraph) -> Report:
    R = build_resolution(G, cfg.k)
    C = load_cover(cfg, G)
    draws = Sampler(G, C, R).draw_many(cfg.seed, cfg.n)
    data = {"seed": cfg.seed, "n": cfg.n, "samples": [_coloring(p) for p in draws]}
    lines = [" ".join(f"{v}:{c}" for v, c in p.items) for p in draws]
    return Report(0, data, lines)


def cmd_satisfy(cfg: RunConfig, G: PlaneGraph) -> Report:
    R = build_resolution(G, cfg.k)
    C = load_cover(cfg, G)
    w = load_request(cfg)
    res = satisfy_request(G, C, R, w, seed=cfg.seed)
    data = {"b": res.b, "epsilon": rat(res.epsilon), "value": rat(res.value), "total": rat(res.total),
            "mode": res.mode, "certified": res.certified, "coloring": _coloring(res.coloring),
            "expectation": rat(res.expectation) if res.expectation is not None else None}
    lines = [f"b = {res.b}, epsilon = {_r(res.epsilon)}",
             f"value = {_r(res.value)} of total {_r(res.total)} ({res.mode})",
             "coloring: " + " ".join(f"{v}:{c}" for v, c in res.coloring.items)]
    if res.expectation is not None:
        lines.insert(2, f"expectation = {_r(res.expectation)}")
    bad = res.mode == "exact" and not res.certified
    return Report(1 if bad else 0, data, lines)


def cmd_discharge(cfg: RunConfig, G: PlaneGraph) -> Report:
    rep = audit(G)
    rows = [{"kind": r.kind, "id": r.ident, "initial": rat(r.initial), "received": rat(r.received),
             "sent": rat(r.sent), "final": rat(r.final), "case": r.case, "excused_by": r.excused_by}
            for r in rep.rows]
    data = {"rows": rows, "initial_total": rat(rep.initial_total), "final_total": rat(rep.final_total),
            "conserved": rep.conserved, "negatives": len(rep.negatives), "unexcused": len(rep.unexcused),
            "warnings": rep.ledger.warnings}
    lines = [f"{r.kind:6s} {r.ident:4d} initial={_r(r.initial):>6s} received={_r(r.received):>7s} "
             f"sent={_r(r.sent):>7s} final={_r(r.final):>7s}  {r.case}"
             + (f"  [excused: {r.excused_by}]" if r.excused_by else "") for r in rep.rows]
    lines += [f"warning: {w}" for w in rep.ledger.warnings]
    lines.append(f"total = {_r(rep.final_total)}")
    lines.append(f"negative elements: {len(rep.negatives)}, unexcused: {len(rep.unexcused)}")
    if cfg.log:
        log = "sender,receiver,amount,rule\n" + "".join(
            f"{t.sender},{t.receiver},{_r(t.amount)},{t.rule}\n" for t in rep.ledger.transfers)
        if cfg.log == "-":
            lines += log.rstrip("\n").splitlines()
            data["transfers"] = log
        else:
            Path(cfg.log).write_text(log, encoding="utf-8")
    status = 1 if rep.unexcused or not rep.conserved else 0
    return Report(status, data, lines)


def cmd_enumerate(cfg: RunConfig, G: PlaneGraph) -> Report:
    C = load_cover(cfg, G)
    cols = enumerate_colorings(G, C)
    shown = cols[: cfg.limit]
    data = {"count": len(cols), "shown": [_coloring(p) for p in shown]}
    lines = [f"{len(cols)} colorings"] + [" ".join(f"{v}:{c}" for v, c in p.items) for p in shown]
    return Report(0, data, lines)


DISPATCH: dict[str, Callable[[RunConfig, PlaneGraph], Report]] = {
    "check": cmd_check, "find-reducible": cmd_find, "verify": cmd_verify, "resolve": cmd_resolve,
    "sample": cmd_sample, "satisfy": cmd_satisfy, "discharge": cmd_discharge, "enumerate": cmd_enumerate,
}


def run(cfg: RunConfig) -> Report:
    try:
        with budget_env(cfg.budgets):
            if cfg.kinds:
                unknown = sorted(set(cfg.kinds) - set(KINDS))
                if unknown:
                    raise InputError(f"unknown kinds {unknown}")
            G = load_graph(cfg.graph)
            rep = DISPATCH[cfg.command](cfg, G)
    except (InputError, ValueError) as e:
        return Report(2, {"error": type(e).__name__, "message": str(e)}, [f"input error: {e}"])
    except (Stuck, NoExtension, BudgetExceeded) as e:
        return Report(1, {"error": type(e).__name__, "message": str(e)}, [f"{type(e).__name__}: {e}"])
    except DPFlexError as e:  # disconnected or out-of-class input for this command
        return Report(2, {"error": type(e).__name__, "message": str(e)}, [f"{type(e).__name__}: {e}"])
    rep.data = {"command": cfg.command, "status": rep.status, **rep.data}
    return rep


def render(rep: Report, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(rep.data, sort_keys=True, indent=1)
    return "\n".join(rep.lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dpflex", description="DP-coloring flexibility toolkit for plane graphs")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, help=".pg file, or fixture:NAME")
    common.add_argument("--format", choices=["human", "structured"], default="human")
    common.add_argument("--k", type=int, default=4, help="list size (default 4)")
    common.add_argument("--cover", help=".cover file (default: identity k-cover)")
    common.add_argument("--cover-budget", type=int)
    common.add_argument("--coloring-budget", type=int)
    common.add_argument("--outcome-budget", type=int)
    common.add_argument("--samples", type=int)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("find-reducible", "verify"):
            sp.add_argument("--kinds", nargs="+", metavar="RCn")
        if name == "find-reducible":
            sp.add_argument("--all", action="store_true", help="report every match, not just the first")
        if name == "resolve":
            sp.add_argument("--avoidance", action="store_true", help="also check avoidance bounds")
        if name in ("sample", "satisfy"):
            sp.add_argument("--seed", type=int, default=0)
        if name == "sample":
            sp.add_argument("--n", type=int, default=10)
        if name == "satisfy":
            sp.add_argument("--request", required=True)
        if name == "discharge":
            sp.add_argument("--log", nargs="?", const="-", help="transfer log as CSV (to FILE or stdout)")
        if name == "enumerate":
            sp.add_argument("--limit", type=int, default=20)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, graph=ns.graph, cover=ns.cover, request=getattr(ns, "request", None),
        seed=getattr(ns, "seed", 0), n=getattr(ns, "n", 10), k=ns.k, kinds=getattr(ns, "kinds", None),
        all=getattr(ns, "all", False), avoidance=getattr(ns, "avoidance", False),
        log=getattr(ns, "log", None), limit=getattr(ns, "limit", 20), format=ns.format,
        budgets={k: getattr(ns, k) for k in BUDGET_ENV},
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    rep = run(cfg)
    out = sys.stdout if rep.status != 2 else sys.stderr
    print(render(rep, cfg.format), file=out)
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
