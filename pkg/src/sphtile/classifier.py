"""Exhaustive search for closed square/rhombus tilings at given angles.

The search glues quadrilaterals along half-edges. At every node it picks a
boundary vertex and its free outgoing half-edge ``h`` and either attaches a
new tile across ``h`` (square, rhombus with beta at the vertex, rhombus with
gamma at the vertex) or glues ``h`` to another free half-edge on the same
boundary component. Restricting gluings to one component keeps the patch of
genus zero, and every sphere tiling is reached by following its own
adjacencies, so the enumeration is complete up to the tile bound.

A vertex whose corners already form an admissible type is closed at once;
partial vertices must be sub-multisets of an admissible type.
"""

from __future__ import annotations

import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .combinatorics import (
    TOL_VERTEX,
    Avc,
    VertexType,
    enumerate_degree3_seeds,
    enumerate_vertices,
    feasible_tile_counts,
)
from .errors import BudgetExceeded, DomainError
from .geometry import (
    CUBE_GAMMA,
    FAMILY_SYSTEMS,
    AngleSet,
    earth_map_angles,
    family_point,
    solve_vertex_system,
)
from .tiling import RHOMBUS, SQUARE, Tiling, canonical_code, is_isomorphic, nxt, prv, verify

DEFAULT_NODE_CAP = 10**8
SPLIT_DEPTH = 10
_KINDS = (SQUARE, RHOMBUS)
_LETTERS = "abc"


def default_node_cap() -> int:
    env = os.environ.get("SPHTILE_NODE_CAP")
    if env:
        try:
            cap = int(float(env))
        except ValueError:
            raise DomainError(f"SPHTILE_NODE_CAP must be an integer, got {env!r}") from None
        if cap < 1:
            raise DomainError("SPHTILE_NODE_CAP must be positive")
        return cap
    return DEFAULT_NODE_CAP


@dataclass
class RunReport:
    nodes: int = 0
    prunes: Counter = field(default_factory=Counter)
    tilings_found: int = 0
    monohedral_discarded: int = 0
    chiral: list[str] = field(default_factory=list)
    cases: list[dict] = field(default_factory=list)
    wall_time: float = 0.0
    node_cap: int = DEFAULT_NODE_CAP

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "prunes": dict(sorted(self.prunes.items())),
            "tilings_found": self.tilings_found,
            "monohedral_discarded": self.monohedral_discarded,
            "chiral": self.chiral,
            "cases": self.cases,
            "wall_time": round(self.wall_time, 3),
            "node_cap": self.node_cap,
        }


# -- search state -------------------------------------------------------------------


class _Search:
    """Mutable gluing state with undo by explicit reversal."""

    def __init__(self, avc: Avc, max_f: int, node_cap: int):
        self.entries = {tuple(v) for v in avc.entries}
        self.sub = set()
        for a, b, c in self.entries:
            for s in product(range(a + 1), range(b + 1), range(c + 1)):
                self.sub.add(s)
        self.max_f = max_f
        self.node_cap = node_cap
        self.kinds: list[int] = []
        self.labels: list[int] = []
        self.twin: list[int] = []
        self.nodes = 0
        self.prunes: Counter = Counter()
        self.found: dict[bytes, Tiling] = {}
        self.monohedral = 0
        self.items: list | None = None  # set when splitting into work items
        self.split_depth = 0

    # state ---------------------------------------------------------------

    def snapshot(self):
        return (tuple(self.kinds), tuple(self.labels), tuple(self.twin))

    def restore(self, snap):
        self.kinds, self.labels, self.twin = list(snap[0]), list(snap[1]), list(snap[2])

    def add_face(self, kind: int, label_at_u: int) -> int:
        base = len(self.labels)
        self.kinds.append(kind)
        if kind == 0:
            self.labels.extend((0, 0, 0, 0))
        else:
            other = 3 - label_at_u
            self.labels.extend((other, label_at_u, other, label_at_u))
        self.twin.extend((-1, -1, -1, -1))
        return base

    def pop_face(self):
        self.kinds.pop()
        del self.labels[-4:]
        del self.twin[-4:]

    def glue(self, h: int, e: int):
        self.twin[h] = e
        self.twin[e] = h

    def unglue(self, h: int, e: int):
        self.twin[h] = -1
        self.twin[e] = -1

    # vertex reads --------------------------------------------------------

    def chain(self, h_out: int):
        """Corner counts at the origin of a free half-edge, and the free incoming half-edge there."""
        cnt = [0, 0, 0]
        g = h_out
        twin, labels = self.twin, self.labels
        while True:
            cnt[labels[g]] += 1
            p = prv(g)
            t = twin[p]
            if t < 0:
                return (cnt[0], cnt[1], cnt[2]), p
            g = t

    def vertex_ok(self, h: int) -> bool:
        """Check the vertex at the origin of ``h``: admissible corners, no face met twice."""
        twin, labels = self.twin, self.labels
        g = h
        while True:
            t = twin[g]
            if t < 0:
                break
            g = nxt(t)
            if g == h:
                break
        # g is now the free outgoing half-edge, or h itself for a closed vertex
        closed = twin[g] >= 0
        cnt = [0, 0, 0]
        faces = set()
        x = g
        while True:
            cnt[labels[x]] += 1
            f = x >> 2
            if f in faces:
                self.prunes["face_repeated_at_vertex"] += 1
                return False
            faces.add(f)
            p = prv(x)
            t = twin[p]
            if t < 0 or t == g:
                break
            x = t
        counts = (cnt[0], cnt[1], cnt[2])
        if closed:
            if counts in self.entries:
                return True
            self.prunes["closed_vertex"] += 1
            return False
        if counts in self.sub:
            return True
        self.prunes["partial_vertex"] += 1
        return False

    def boundary_of(self, h: int) -> list[int]:
        twin = self.twin
        out = [h]
        g = h
        while True:
            g = nxt(g)
            while twin[g] >= 0:
                g = nxt(twin[g])
            if g == h:
                return out
            out.append(g)

    # search ---------------------------------------------------------------

    def emit(self):
        kinds = {self.kinds[i] for i in range(len(self.kinds))}
        if len(kinds) < 2:
            self.monohedral += 1
            return
        t = Tiling([_KINDS[k] for k in self.kinds], [_LETTERS[x] for x in self.labels], self.twin)
        if not _simple(t):
            self.prunes["multiple_edge"] += 1
            return
        code = canonical_code(t)
        if code not in self.found:
            self.found[code] = t

    def run(self, depth: int = 0):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded(f"node cap {self.node_cap} exceeded", nodes=self.nodes)
        if self.items is not None and depth >= self.split_depth:
            self.items.append(self.snapshot())
            return
        twin = self.twin
        best = None
        for h in range(len(twin)):
            if twin[h] >= 0:
                continue
            counts, p = self.chain(h)
            if counts in self.entries:
                # the vertex is complete: close it
                if p == h:
                    self.prunes["loop_edge"] += 1
                    return
                self.glue(h, p)
                if self.vertex_ok(h) and self.vertex_ok(p):
                    self.run(depth + 1)
                self.unglue(h, p)
                return
            a, b, c = counts
            n_opts = ((a + 1, b, c) in self.sub) + ((a, b + 1, c) in self.sub) + ((a, b, c + 1) in self.sub)
            key = (n_opts, h)
            if best is None or key < best[0]:
                best = (key, h, counts)
        if best is None:
            self.emit()
            return
        _, h, (a, b, c) = best
        if len(self.kinds) < self.max_f:
            for kind, lab in ((0, 0), (1, 1), (1, 2)):
                nxt_counts = (a + (lab == 0), b + (lab == 1), c + (lab == 2))
                if nxt_counts not in self.sub:
                    continue
                base = self.add_face(kind, lab)
                self.glue(h, base)
                if all(self.vertex_ok(base + k) for k in range(4)):
                    self.run(depth + 1)
                self.unglue(h, base)
                self.pop_face()
        else:
            self.prunes["tile_budget"] += 1
        for e in self.boundary_of(h)[1:]:
            self.glue(h, e)
            if self.vertex_ok(h) and self.vertex_ok(e):
                self.run(depth + 1)
            self.unglue(h, e)


def _simple(t: Tiling) -> bool:
    """No two edges join the same pair of vertices (geodesics shorter than pi are unique)."""
    o = t.origin
    seen = set()
    for h in range(t.n_half_edges):
        key = (o[h], o[t.twin[h]])
        if key in seen:
            return False
        seen.add(key)
    return True


def _start(avc: Avc, max_f: int, node_cap: int) -> _Search:
    s = _Search(avc, max_f, node_cap)
    s.add_face(0, 0)
    return s


def _run_item(args):
    avc_entries, max_f, node_cap, snap = args
    s = _Search(Avc(frozenset(avc_entries)), max_f, node_cap)
    s.restore(snap)
    s.run()
    return s.nodes, dict(s.prunes), s.monohedral, {code: t.to_dict() for code, t in s.found.items()}


def _work_items(avc: Avc, max_f: int, node_cap: int, split_depth: int):
    s = _start(avc, max_f, node_cap)
    s.items = []
    s.split_depth = split_depth
    s.run()
    return s


def _run_items(avc: Avc, max_f: int, node_cap: int, items, jobs: int, pool=None):
    args = [(tuple(sorted(avc.entries)), max_f, node_cap, snap) for snap in items]
    if jobs <= 1 or len(args) <= 1:
        return [_run_item(a) for a in args]
    if pool is not None:
        return list(pool.map(_run_item, args, chunksize=max(1, len(args) // (4 * jobs))))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run_item, args, chunksize=max(1, len(args) // (4 * jobs))))


def classify(angles: AngleSet, avc: Avc | None = None, max_f: int = 30, jobs: int = 1,
             node_cap: int | None = None, report: RunReport | None = None,
             tol_vertex: float = TOL_VERTEX, _pool=None) -> list[Tiling]:
    """All dihedral tilings with at most ``max_f`` tiles whose vertices lie in ``avc``.

    Output is deduplicated up to isomorphism (reflections allowed) and sorted
    by canonical code, so it does not depend on ``jobs``.
    """
    if max_f < 6:
        raise DomainError(f"max_f must be >= 6, got {max_f}")
    if jobs < 1:
        raise DomainError("jobs must be >= 1")
    if avc is None:
        avc = enumerate_vertices(angles, tol_vertex=tol_vertex)
    node_cap = default_node_cap() if node_cap is None else node_cap
    report = report if report is not None else RunReport(node_cap=node_cap)
    report.node_cap = node_cap
    t0 = time.perf_counter()
    bad = [v for v in avc.entries if abs(v.angle_sum(angles) - 2 * math.pi) > tol_vertex]
    if bad:
        raise DomainError("AVC entries do not sum to 2pi at these angles: " + ", ".join(map(str, bad)))
    case = {"angles": angles.to_dict(), "avc": avc.to_strings(), "max_f": max_f}
    f_ok = feasible_tile_counts(avc, max_f)
    if not any(v.a for v in avc.entries) or not f_ok:
        case.update(nodes=0, found=0, skipped="no feasible tile count")
        report.cases.append(case)
        return []
    bound = max(f_ok)
    try:
        splitter = _work_items(avc, bound, node_cap, SPLIT_DEPTH)
        results = _run_items(avc, bound, node_cap, splitter.items, jobs, _pool)
    except BudgetExceeded as exc:
        report.nodes += exc.nodes or 0
        report.wall_time += time.perf_counter() - t0
        case.update(nodes=exc.nodes, found=None, budget_exceeded=True)
        report.cases.append(case)
        raise BudgetExceeded(f"node cap {node_cap} exceeded in one search subtree", report, exc.nodes) from None
    found = dict(splitter.found)
    nodes, prunes, mono = splitter.nodes, Counter(splitter.prunes), splitter.monohedral
    for n, pr, mo, tiles in results:
        nodes += n
        prunes.update(pr)
        mono += mo
        for code, d in tiles.items():
            found.setdefault(code, Tiling.from_dict(d))
    report.nodes += nodes
    report.prunes.update(prunes)
    report.monohedral_discarded += mono
    if nodes > node_cap:
        report.wall_time += time.perf_counter() - t0
        raise BudgetExceeded(f"node cap {node_cap} exceeded ({nodes} nodes)", report, nodes)
    out = []
    for code in sorted(found):
        t = found[code]
        rep = verify(t, angles, tol_vertex=tol_vertex)
        if not rep.passed:  # pragma: no cover - soundness guard
            raise AssertionError(f"search emitted an invalid tiling: {rep.failed()}")
        out.append(t)
    case.update(nodes=nodes, found=len(out))
    report.cases.append(case)
    report.tilings_found += len(out)
    report.wall_time += time.perf_counter() - t0
    return out


# -- classification over all angle cases --------------------------------------------


@dataclass(frozen=True)
class Case:
    label: str
    angles: AngleSet
    avc: Avc


def _key(a: AngleSet) -> tuple:
    return tuple(round(v, 9) for v in a.as_tuple())


def angle_cases(max_f: int, tol_vertex: float = TOL_VERTEX) -> list[Case]:
    """Angle points that can carry a dihedral tiling with at most ``max_f`` tiles.

    Such a tiling has a degree 3 vertex. Either every vertex has the same type,
    which forces ``alpha beta gamma`` (a curve, sampled once), or a second,
    independent type pins the angles to isolated points.
    """
    if max_f < 6:
        raise DomainError(f"max_f must be >= 6, got {max_f}")
    cases: dict[tuple, Case] = {}

    def consider(label, pt):
        if not pt.is_admissible():
            return
        k = _key(pt)
        if k in cases:
            return
        avc = enumerate_vertices(pt, tol_vertex=tol_vertex)
        if not any(v.a for v in avc.entries) or not any(v.b or v.c for v in avc.entries):
            return
        if not feasible_tile_counts(avc, max_f):
            return
        cases[k] = Case(label, pt, avc)

    cube_pt = family_point("cube")
    consider(f"curve a^1 b^1 c^1 at gamma={CUBE_GAMMA / math.pi:.2f}pi", cube_pt)
    # a vertex of degree h forces f >= h + 3; alpha, beta > pi/2 cap their counts
    max_deg = max_f - 3
    for s in enumerate_degree3_seeds():
        for a, b in product(range(4), range(4)):
            for c in range(0, max_deg - a - b + 1):
                v2 = VertexType(a, b, c)
                if v2.degree < 3 or v2 == s:
                    continue
                sol = solve_vertex_system([s, v2])
                if sol.kind != "point":
                    continue
                for pt in sol.points:
                    consider(f"{s} + {v2}", pt)
    c = 2
    while 8 * c - 2 <= max_f:
        consider(f"earth map c={c}", earth_map_angles(c))
        c += 1
    return [cases[k] for k in sorted(cases)]


def classify_all(max_f: int, jobs: int = 1, node_cap: int | None = None,
                 report: RunReport | None = None, tol_vertex: float = TOL_VERTEX) -> list[tuple[Case, Tiling]]:
    """Every dihedral tiling with at most ``max_f`` tiles, one per isomorphism class."""
    node_cap = default_node_cap() if node_cap is None else node_cap
    report = report if report is not None else RunReport(node_cap=node_cap)
    t0 = time.perf_counter()
    cases = angle_cases(max_f, tol_vertex)
    merged: dict[bytes, tuple[Case, Tiling]] = {}
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for case in cases:
            before = len(report.cases)
            tiles = classify(case.angles, case.avc, max_f, jobs=jobs, node_cap=node_cap,
                             report=report, tol_vertex=tol_vertex, _pool=pool)
            for entry in report.cases[before:]:
                entry["label"] = case.label
            for t in tiles:
                merged.setdefault(canonical_code(t), (case, t))
    finally:
        if pool is not None:
            pool.shutdown()
    out = [merged[k] for k in sorted(merged)]
    report.tilings_found = len(out)
    report.chiral = [f"{n}" for n, (_, t) in enumerate(out) if not is_isomorphic(t, t.mirrored(), False)]
    report.wall_time = time.perf_counter() - t0
    return out


def identify(t: Tiling, max_c: int = 10) -> str | None:
    """Catalog id of a tiling, or None if it is not in the catalog."""
    from .catalog import build, catalog_ids

    code = canonical_code(t)
    for fid in catalog_ids(max_c):
        if fid.tag == "earth_map" and 8 * fid.c - 2 != t.f:
            continue
        if canonical_code(build(fid)) == code:
            return str(fid)
    return None


__all__ = ["RunReport", "Case", "classify", "classify_all", "angle_cases", "identify", "default_node_cap",
           "FAMILY_SYSTEMS"]
