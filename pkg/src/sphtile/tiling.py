"""Labeled half-edge meshes of quadrilaterals on the sphere.

Half-edges are numbered so that face ``i`` owns ``4i .. 4i+3`` in loop order;
``next`` and ``prev`` are therefore implicit. Half-edge ``h`` carries the
label of the corner of its face at its origin. Labels are ``"a"``, ``"b"``,
``"c"`` for alpha, beta, gamma.
"""

from __future__ import annotations

import json
import math
import struct
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .combinatorics import TOL_VERTEX, Avc, TilingStats, VertexType, enumerate_vertices
from .errors import StructuralError
from .geometry import TWO_PI, AngleSet

SCHEMA = "sphtile-tiling/1"
SQUARE, RHOMBUS = "square", "rhombus"
LABELS = ("a", "b", "c")
TOL_AREA = 1e-6

_KIND_CODE = {SQUARE: 0, RHOMBUS: 1}
_LABEL_CODE = {"a": 0, "b": 1, "c": 2}


def nxt(h: int) -> int:
    return h - h % 4 + (h + 1) % 4


def prv(h: int) -> int:
    return h - h % 4 + (h + 3) % 4


class Tiling:
    """Immutable labeled quadrilateral mesh."""

    def __init__(self, kinds: Sequence[str], labels: Sequence[str], twin: Sequence[int], name: str = ""):
        self.kinds = tuple(kinds)
        self.labels = tuple(labels)
        self.twin = tuple(int(t) for t in twin)
        self.name = name
        if len(self.labels) != 4 * len(self.kinds) or len(self.twin) != len(self.labels):
            raise StructuralError("need exactly four half-edges per face")

    # -- basic access ------------------------------------------------------

    @property
    def f(self) -> int:
        return len(self.kinds)

    @property
    def n_half_edges(self) -> int:
        return len(self.twin)

    def face(self, h: int) -> int:
        return h // 4

    def next(self, h: int) -> int:
        return nxt(h)

    def prev(self, h: int) -> int:
        return prv(h)

    def face_labels(self, i: int) -> tuple[str, ...]:
        return self.labels[4 * i:4 * i + 4]

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<Tiling{tag} f={self.f}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Tiling) and (self.kinds, self.labels, self.twin) == (
            other.kinds, other.labels, other.twin)

    def __hash__(self) -> int:
        return hash((self.kinds, self.labels, self.twin))

    # -- structure ---------------------------------------------------------

    def _twin_problems(self) -> list[str]:
        bad = []
        n = self.n_half_edges
        for h, t in enumerate(self.twin):
            if not (0 <= t < n):
                bad.append(f"half-edge {h} has no twin")
            elif t == h:
                bad.append(f"half-edge {h} is its own twin")
            elif self.twin[t] != h:
                bad.append(f"twin of twin of {h} is not {h}")
        return bad

    @cached_property
    def vertex_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Outgoing half-edges around each vertex, in rotation order."""
        if self._twin_problems():
            raise StructuralError("; ".join(self._twin_problems()[:3]))
        seen = [False] * self.n_half_edges
        orbits = []
        for h0 in range(self.n_half_edges):
            if seen[h0]:
                continue
            orbit, h = [], h0
            while not seen[h]:
                seen[h] = True
                orbit.append(h)
                h = nxt(self.twin[h])
            orbits.append(tuple(orbit))
        return tuple(orbits)

    @cached_property
    def origin(self) -> tuple[int, ...]:
        out = [0] * self.n_half_edges
        for vid, orbit in enumerate(self.vertex_orbits):
            for h in orbit:
                out[h] = vid
        return tuple(out)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_orbits)

    @property
    def n_edges(self) -> int:
        return self.n_half_edges // 2

    def structural_problems(self) -> list[str]:
        """Violations of the half-edge and sphere invariants (labels excluded)."""
        bad = self._twin_problems()
        if bad:
            return bad
        if self.f < 2:
            bad.append(f"need at least two faces, have {self.f}")
        for k in self.kinds:
            if k not in _KIND_CODE:
                bad.append(f"unknown face kind {k!r}")
                break
        for vid, orbit in enumerate(self.vertex_orbits):
            if len(orbit) < 3:
                bad.append(f"vertex {vid} has degree {len(orbit)} < 3")
        if not self._connected():
            bad.append("mesh is not connected")
        euler = self.n_vertices - self.n_edges + self.f
        if euler != 2:
            bad.append(f"Euler characteristic {euler} != 2")
        return bad

    def _connected(self) -> bool:
        if self.f == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for h in range(4 * i, 4 * i + 4):
                j = self.twin[h] // 4
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return len(seen) == self.f

    def label_problems(self) -> list[str]:
        bad = []
        for i, kind in enumerate(self.kinds):
            lab = self.face_labels(i)
            if any(x not in _LABEL_CODE for x in lab):
                bad.append(f"face {i}: unknown corner label in {lab}")
            elif kind == SQUARE and lab != ("a",) * 4:
                bad.append(f"face {i}: square corners {''.join(lab)} != aaaa")
            elif kind == RHOMBUS and lab not in (("b", "c", "b", "c"), ("c", "b", "c", "b")):
                bad.append(f"face {i}: rhombus corners {''.join(lab)} do not alternate b,c")
        return bad

    def check_structure(self) -> None:
        bad = self.structural_problems()
        if bad:
            raise StructuralError("; ".join(bad[:5]))

    # -- combinatorial reads -------------------------------------------------

    def vertex_type(self, vid: int) -> VertexType:
        cnt = Counter(self.labels[h] for h in self.vertex_orbits[vid])
        return VertexType(cnt["a"], cnt["b"], cnt["c"])

    def vertex_types(self) -> list[VertexType]:
        return [self.vertex_type(v) for v in range(self.n_vertices)]

    def is_monohedral(self) -> bool:
        return len(set(self.kinds)) < 2

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_faces(cls, faces: Iterable[tuple[str, Sequence[Hashable], Sequence[str]]], name: str = "",
                   orient: bool = True) -> "Tiling":
        """Build from ``(kind, vertex cycle, corner labels)`` triples.

        Faces are reoriented coherently (the first face keeps its direction);
        a non-orientable or non-manifold input raises :class:`StructuralError`.
        """
        faces = [(k, list(vs), list(ls)) for k, vs, ls in faces]
        for k, vs, ls in faces:
            if len(vs) != 4 or len(ls) != 4:
                raise StructuralError("every face needs four vertices and four labels")
        if orient:
            faces = _orient(faces)
        where: dict[tuple, int] = {}
        for i, (_, vs, _) in enumerate(faces):
            for k in range(4):
                key = (vs[k], vs[(k + 1) % 4])
                if key in where:
                    raise StructuralError(f"directed edge {key} used twice")
                where[key] = 4 * i + k
        twin = [-1] * (4 * len(faces))
        for (u, v), h in where.items():
            t = where.get((v, u))
            if t is None:
                raise StructuralError(f"edge {(u, v)} has no partner; the mesh is open")
            twin[h] = t
        kinds = [k for k, _, _ in faces]
        labels = [x for _, _, ls in faces for x in ls]
        return cls(kinds, labels, twin, name)

    def relabeled(self, face_perm: Sequence[int], rotations: Sequence[int] | None = None) -> "Tiling":
        """Same tiling with faces renumbered (face ``i`` moves to ``face_perm[i]``) and loops rotated."""
        f = self.f
        rotations = rotations or [0] * f
        new_of = [0] * self.n_half_edges
        for i in range(f):
            for k in range(4):
                new_of[4 * i + k] = 4 * face_perm[i] + (k - rotations[i]) % 4
        kinds = [None] * f
        labels = [None] * self.n_half_edges
        twin = [0] * self.n_half_edges
        for i in range(f):
            kinds[face_perm[i]] = self.kinds[i]
        for h in range(self.n_half_edges):
            labels[new_of[h]] = self.labels[h]
            twin[new_of[h]] = new_of[self.twin[h]]
        return Tiling(kinds, labels, twin, self.name)

    def mirrored(self) -> "Tiling":
        """The mirror image: every face loop reversed."""
        # new half-edge 4i+k runs opposite to old 4i+(3-k)
        def new_of(h):
            return h - h % 4 + (3 - h % 4)

        labels = [None] * self.n_half_edges
        twin = [0] * self.n_half_edges
        for h in range(self.n_half_edges):
            g = new_of(h)
            labels[g] = self.labels[nxt(h)]
            twin[g] = new_of(self.twin[h])
        return Tiling(self.kinds, labels, twin, self.name)

    def with_labels(self, labels: Sequence[str]) -> "Tiling":
        return Tiling(self.kinds, labels, self.twin, self.name)

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "faces": [
                {"id": i, "kind": self.kinds[i], "corners": list(self.face_labels(i)),
                 "half_edges": list(range(4 * i, 4 * i + 4))}
                for i in range(self.f)
            ],
            "twins": [[h, t] for h, t in enumerate(self.twin) if h < t],
            "vertices": [list(orbit) for orbit in self.vertex_orbits],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Tiling":
        if data.get("schema") != SCHEMA:
            raise StructuralError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA!r}")
        faces = sorted(data["faces"], key=lambda fc: fc["id"])
        compact: dict[int, int] = {}
        kinds, labels = [], []
        for i, fc in enumerate(faces):
            hes, corners = fc["half_edges"], fc["corners"]
            if len(hes) != 4 or len(corners) != 4:
                raise StructuralError(f"face {fc['id']} is not a quadrilateral")
            kinds.append(fc["kind"])
            labels.extend(corners)
            for k, h in enumerate(hes):
                if h in compact:
                    raise StructuralError(f"half-edge {h} appears in two faces")
                compact[h] = 4 * i + k
        twin = [-1] * len(compact)
        for h, t in data["twins"]:
            if h not in compact or t not in compact:
                raise StructuralError(f"twin pair ({h}, {t}) names an unknown half-edge")
            a, b = compact[h], compact[t]
            if twin[a] != -1 or twin[b] != -1:
                raise StructuralError(f"half-edge in twin pair ({h}, {t}) already paired")
            twin[a], twin[b] = b, a
        t = cls(kinds, labels, twin, data.get("name", ""))
        problems = t._twin_problems()
        if problems:
            raise StructuralError("; ".join(problems[:5]))
        if "vertices" in data:
            given = sorted(sorted(compact[h] for h in orbit) for orbit in data["vertices"])
            if given != sorted(sorted(o) for o in t.vertex_orbits):
                raise StructuralError("vertex list disagrees with the half-edge structure")
        return t

    @classmethod
    def from_json(cls, text: str) -> "Tiling":
        return cls.from_dict(json.loads(text))


def _orient(faces):
    """Flip face loops so every interior edge is traversed once in each direction."""
    edge_faces: dict[frozenset, list[int]] = {}
    for i, (_, vs, _) in enumerate(faces):
        for k in range(4):
            key = frozenset((vs[k], vs[(k + 1) % 4]))
            edge_faces.setdefault(key, []).append(i)
    for key, fs in edge_faces.items():
        if len(fs) != 2:
            raise StructuralError(f"edge {tuple(key)} borders {len(fs)} faces")
    sign = [0] * len(faces)
    out = [list(f) for f in faces]

    def directed(i):
        vs = out[i][1]
        return {(vs[k], vs[(k + 1) % 4]) for k in range(4)}

    for root in range(len(faces)):
        if sign[root]:
            continue
        sign[root] = 1
        queue = deque([root])
        while queue:
            i = queue.popleft()
            di = directed(i)
            for (u, v) in di:
                j = next(x for x in edge_faces[frozenset((u, v))] if x != i)
                if sign[j]:
                    if (u, v) in directed(j):
                        raise StructuralError("faces cannot be oriented coherently")
                    continue
                sign[j] = 1
                if (u, v) in directed(j):
                    kind, vs, ls = out[j]
                    # reverse the loop, keeping each label on its vertex
                    out[j] = (kind, [vs[0]] + vs[:0:-1], [ls[0]] + ls[:0:-1])
                queue.append(j)
    return [tuple(f) for f in out]


# -- statistics and verification ----------------------------------------------


def stats(t: Tiling) -> TilingStats:
    t.check_structure()
    degrees = Counter(len(o) for o in t.vertex_orbits)
    kinds = Counter(t.kinds)
    return TilingStats(t.f, kinds[SQUARE], kinds[RHOMBUS], dict(sorted(degrees.items())))


def realized_avc(t: Tiling) -> Avc:
    t.check_structure()
    return Avc(frozenset(t.vertex_types()), "realized")


def vertex_multiplicities(t: Tiling) -> dict[VertexType, int]:
    return dict(sorted(Counter(t.vertex_types()).items()))


_ANGLE = {"a": "alpha", "b": "beta", "c": "gamma"}


def face_excess(t: Tiling, i: int, angles: AngleSet) -> float:
    return sum(getattr(angles, _ANGLE[x]) for x in t.face_labels(i)) - TWO_PI


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}

    def __str__(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
                 for c in self.checks]
        return "\n".join(lines)


def verify(t: Tiling, angles: AngleSet, tol_vertex: float = TOL_VERTEX, tol_area: float = TOL_AREA) -> VerificationReport:
    """Run every structural, counting and angle check; failures are report entries."""
    rep = VerificationReport()
    problems = t.structural_problems()
    rep.checks.append(Check("structure", not problems, "; ".join(problems[:3])))
    if problems:
        return rep
    euler = t.n_vertices - t.n_edges + t.f
    rep.checks.append(Check("euler", euler == 2, f"V-E+F = {t.n_vertices}-{t.n_edges}+{t.f} = {euler}"))
    lab = t.label_problems()
    rep.checks.append(Check("corner_labels", not lab, "; ".join(lab[:3])))
    st = stats(t)
    bad = st.check()
    rep.checks.append(Check("counting_identities", not bad, "; ".join(bad)))
    rep.checks.append(Check("dihedral", st.n_square > 0 and st.n_rhombus > 0,
                            f"{st.n_square} squares, {st.n_rhombus} rhombi"))
    worst = max(abs(v.angle_sum(angles) - TWO_PI) for v in t.vertex_types())
    rep.checks.append(Check("vertex_angle_sums", worst < tol_vertex, f"max |sum - 2pi| = {worst:.3g}"))
    area = sum(face_excess(t, i, angles) for i in range(t.f))
    rep.checks.append(Check("total_area", abs(area - 4 * math.pi) < tol_area, f"area = {area / math.pi:.9f}pi"))
    allowed = enumerate_vertices(angles, max_degree=max(len(o) for o in t.vertex_orbits) + 1, tol_vertex=tol_vertex)
    real = realized_avc(t)
    extra = real.entries - allowed.entries
    rep.checks.append(Check("avc_admissible", not extra,
                            "extra: " + ", ".join(v.pretty for v in sorted(extra)) if extra else str(real)))
    return rep


# -- isomorphism ----------------------------------------------------------------


def _view(t: Tiling, reflect: bool):
    """Successor map, labels and face kinds of ``t`` read in one of its two orientations."""
    if not reflect:
        succ = [nxt(h) for h in range(t.n_half_edges)]
        lab = list(t.labels)
    else:
        succ = [prv(h) for h in range(t.n_half_edges)]
        lab = [t.labels[nxt(h)] for h in range(t.n_half_edges)]
    kinds = [t.kinds[h // 4] for h in range(t.n_half_edges)]
    return succ, lab, kinds


def _match_from(t1: Tiling, t2: Tiling, v2, h1: int, h2: int) -> bool:
    succ2, lab2, kind2 = v2
    phi = {h1: h2}
    used = {h2}
    queue = deque([h1])
    while queue:
        a = queue.popleft()
        b = phi[a]
        if t1.labels[a] != lab2[b] or t1.kinds[a // 4] != kind2[b]:
            return False
        for a2, b2 in ((nxt(a), succ2[b]), (t1.twin[a], t2.twin[b])):
            if a2 in phi:
                if phi[a2] != b2:
                    return False
            else:
                if b2 in used:
                    return False
                phi[a2] = b2
                used.add(b2)
                queue.append(a2)
    return len(phi) == t1.n_half_edges


def is_isomorphic(t1: Tiling, t2: Tiling, allow_reflection: bool = True) -> bool:
    """Whether a bijection of half-edges preserves incidence, face kinds and corner labels."""
    t1.check_structure()
    t2.check_structure()
    if t1.f != t2.f or Counter(t1.kinds) != Counter(t2.kinds) or Counter(t1.labels) != Counter(t2.labels):
        return False
    if sorted(len(o) for o in t1.vertex_orbits) != sorted(len(o) for o in t2.vertex_orbits):
        return False
    views = [_view(t2, False)] + ([_view(t2, True)] if allow_reflection else [])
    for v2 in views:
        for h2 in range(t2.n_half_edges):
            if _match_from(t1, t2, v2, 0, h2):
                return True
    return False


def _bfs_code(t: Tiling, succ, lab, start: int) -> tuple:
    index = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for g in (succ[h], t.twin[h]):
            if g not in index:
                index[g] = len(order)
                order.append(g)
    code = []
    for h in order:
        code.append((_KIND_CODE[t.kinds[h // 4]], _LABEL_CODE[lab[h]], index[succ[h]], index[t.twin[h]]))
    return tuple(code)


def canonical_code(t: Tiling) -> bytes:
    """Start- and orientation-independent serialization of a labeled mesh.

    Minimum over every starting half-edge and both orientations of a
    breadth-first trace recording face kind, corner label, successor and
    twin. Equal codes hold exactly for tilings isomorphic with reflections
    allowed.
    """
    t.check_structure()
    best = None
    for reflect in (False, True):
        succ, lab, _ = _view(t, reflect)
        key0 = min((_KIND_CODE[t.kinds[h // 4]], _LABEL_CODE[lab[h]]) for h in range(t.n_half_edges))
        for s in range(t.n_half_edges):
            if (_KIND_CODE[t.kinds[s // 4]], _LABEL_CODE[lab[s]]) != key0:
                continue
            code = _bfs_code(t, succ, lab, s)
            if best is None or code < best:
                best = code
    out = bytearray(struct.pack(">H", t.f))
    for k, l, s, w in best:
        out += struct.pack(">BBHH", k, l, s, w)
    return bytes(out)


def chirality(t: Tiling) -> bool:
    """True if the tiling is not isomorphic to its mirror image by an orientation-preserving map."""
    return not is_isomorphic(t, t.mirrored(), allow_reflection=False)
