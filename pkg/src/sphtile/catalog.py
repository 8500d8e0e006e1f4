"""Constructors for every dihedral square/rhombus tiling of the sphere.

Each builder writes down faces as vertex cycles with corner labels and lets
:meth:`Tiling.from_faces` glue them. The fusions and the subdivision start
from coordinates of the snub cube and truncated octahedron; the others are
incidence tables.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DomainError
from .tiling import RHOMBUS, SQUARE, Tiling, canonical_code

SQ = ("a", "a", "a", "a")
BC = ("b", "c", "b", "c")
TAGS = ("cube", "earth_map", "fusion1", "fusion2", "quad_subdivision", "sporadic1", "sporadic2")


@dataclass(frozen=True)
class FamilyId:
    tag: str
    c: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f"unknown family {self.tag!r}")
        if (self.tag == "earth_map") != (self.c is not None):
            raise DomainError("c is required for earth_map and only for earth_map")
        if self.c is not None and (not isinstance(self.c, int) or isinstance(self.c, bool) or self.c < 2):
            raise DomainError(f"earth_map needs an integer c >= 2, got {self.c!r}")

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        """Read a CLI id such as ``cube``, ``earth-map:3`` or ``fusion:2``."""
        m = re.fullmatch(r"earth-map:(\d+)", text)
        if m:
            return cls("earth_map", int(m.group(1)))
        names = {"cube": "cube", "fusion:1": "fusion1", "fusion:2": "fusion2",
                 "quad-subdivision": "quad_subdivision", "sporadic:1": "sporadic1", "sporadic:2": "sporadic2"}
        if text not in names:
            raise DomainError(f"unknown catalog id {text!r}")
        return cls(names[text])

    def __str__(self) -> str:
        if self.tag == "earth_map":
            return f"earth-map:{self.c}"
        return {"cube": "cube", "fusion1": "fusion:1", "fusion2": "fusion:2",
                "quad_subdivision": "quad-subdivision", "sporadic1": "sporadic:1",
                "sporadic2": "sporadic:2"}[self.tag]

    @property
    def angle_family(self) -> str:
        """Key into :data:`sphtile.geometry.FAMILY_SYSTEMS` (or ``earth_map``)."""
        return {"fusion1": "fusion", "fusion2": "fusion", "sporadic1": "sporadic",
                "sporadic2": "sporadic"}.get(self.tag, self.tag)


def catalog_ids(max_c: int = 4) -> list[FamilyId]:
    fixed = [FamilyId(t) for t in TAGS if t != "earth_map"]
    return fixed + [FamilyId("earth_map", c) for c in range(2, max_c + 1)]


def build(fid: FamilyId | str) -> Tiling:
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    if fid.tag == "earth_map":
        return earth_map(fid.c)
    t = {"cube": cube, "fusion1": lambda: fusion(1), "fusion2": lambda: fusion(2),
         "quad_subdivision": quad_subdivision, "sporadic1": sporadic1, "sporadic2": sporadic2}[fid.tag]()
    return t


# -- cube -------------------------------------------------------------------------


def cube() -> Tiling:
    """Two squares joined by a band of four rhombi; every vertex is alpha beta gamma."""
    faces = [(SQUARE, [("t", i) for i in range(4)], SQ),
             (SQUARE, [("b", i) for i in range(3, -1, -1)], SQ)]
    for i in range(4):
        j = (i + 1) % 4
        faces.append((RHOMBUS, [("t", j), ("t", i), ("b", i), ("b", j)], ("c", "b", "c", "b")))
    return Tiling.from_faces(faces, name="cube")


# -- earth map -----------------------------------------------------------------


@dataclass(frozen=True)
class Strip:
    """One timezone: ``2c-1`` rhombi between a gamma^c end and a gamma^(c-1) end.

    ``faces`` use local vertex names: ``"N"`` (the gamma^c end), ``"S"``
    (the gamma^(c-1) end), ``("u", k)`` for ``k = -1 .. c-1`` and
    ``("m", k)`` for ``k = 0 .. c-1``.
    """

    c: int
    faces: tuple

    @property
    def gamma_c_end(self):
        return "N"

    @property
    def gamma_c_minus_1_end(self):
        return "S"

    @property
    def boundary(self) -> tuple:
        """Boundary cycle of the strip as local vertex names."""
        return _boundary_cycle(self.faces)

    def __len__(self) -> int:
        return len(self.faces)


def _boundary_cycle(faces) -> tuple:
    directed = set()
    for _, vs, _ in faces:
        for k in range(4):
            directed.add((vs[k], vs[(k + 1) % 4]))
    border = {(u, v) for (u, v) in directed if (v, u) not in directed}
    succ = {}
    for u, v in border:
        succ[v] = u  # walk the boundary against the face direction
    start = min(succ, key=repr)
    cyc, v = [start], succ[start]
    while v != start:
        cyc.append(v)
        v = succ[v]
    return tuple(cyc)


def timezone_strip(c: int) -> Strip:
    if not isinstance(c, int) or c < 2:
        raise DomainError(f"timezone strip needs an integer c >= 2, got {c!r}")
    faces = []
    for k in range(c):
        # fan of c rhombi around N: gamma at N and at m_k
        faces.append((RHOMBUS, ["N", ("u", k - 1), ("m", k), ("u", k)], ("c", "b", "c", "b")))
    for k in range(c - 1):
        # c-1 rhombi around S: gamma at S and at u_k
        faces.append((RHOMBUS, ["S", ("m", k + 1), ("u", k), ("m", k)], ("c", "b", "c", "b")))
    return Strip(c, tuple(faces))


def earth_map(c: int) -> Tiling:
    """Four timezones glued around two squares; ``f = 8c - 2``."""
    strip = timezone_strip(c)

    def place(i, v):
        if v == "N":
            return ("q", i)
        if v == "S":
            return ("s", i)
        kind, k = v
        if kind == "u" and k == c - 1:
            return ("q", (i + 1) % 4)
        if kind == "u" and k == -1:
            return place((i - 1) % 4, ("m", c - 1))
        if kind == "m" and k == 0:
            return ("s", (i - 1) % 4)
        return (kind, i, k)

    faces = [(SQUARE, [("q", i) for i in range(3, -1, -1)], SQ),
             (SQUARE, [("s", i) for i in range(4)], SQ)]
    for i in range(4):
        for kind, vs, labels in strip.faces:
            faces.append((kind, [place(i, v) for v in vs], labels))
    return Tiling.from_faces(faces, name=f"earth-map:{c}")


# -- sporadic tilings -----------------------------------------------------------
# Planar drawings with the last listed square as the unbounded face. Coordinates
# are in units of half an edge of the central square.


def _rot(p, quarter):
    x, y = p
    for _ in range(quarter % 4):
        x, y = -y, x
    return (x, y)


def sporadic1() -> Tiling:
    faces = [(SQUARE, [(-1, -1), (1, -1), (1, 1), (-1, 1)], SQ)]
    for q in range(4):
        r = lambda p: _rot(p, q)
        faces.append((SQUARE, [r((1, -1)), r((3, -1)), r((3, 1)), r((1, 1))], SQ))
        faces.append((RHOMBUS, [r((1, 1)), r((3, 1)), r((3, 3)), r((1, 3))], ("c", "b", "c", "b")))
        faces.append((SQUARE, [r((3, 3)), r((1, 3)), r((-1, 3)), r((-3, 3))], SQ))
    faces.append((SQUARE, [(3, 3), (-3, 3), (-3, -3), (3, -3)], SQ))
    return Tiling.from_faces(faces, name="sporadic:1")


def sporadic2() -> Tiling:
    def half(sign):
        s = lambda p: (sign * p[0], sign * p[1])
        return [
            (SQUARE, [s((0, -1)), s((2, -1)), s((2, 1)), s((0, 1))], SQ),          # A
            (SQUARE, [s((0, -3)), s((2, -3)), s((2, -1)), s((0, -1))], SQ),        # B
            (RHOMBUS, [s((2, -3)), s((4, -3)), s((4, -1)), s((2, -1))], ("b", "c", "b", "c")),  # C
            (SQUARE, [s((2, 1)), s((2, -1)), s((4, -1)), s((4, 3))], SQ),          # D
            (RHOMBUS, [s((0, 1)), s((2, 1)), s((4, 3)), s((0, 3))], ("c", "b", "c", "b")),      # E
            (SQUARE, [s((-4, 3)), s((-2, 3)), s((0, 3)), s((4, 3))], SQ),          # F
            (SQUARE, [s((4, 3)), s((4, -1)), s((4, -3)), s((-4, 3))], SQ),         # G
        ]

    return Tiling.from_faces(half(1) + half(-1), name="sporadic:2")


# -- polyhedra from coordinates ------------------------------------------------


def _polyhedron_faces(points: np.ndarray) -> list[list[int]]:
    """Faces of a convex polyhedron as vertex cycles, counterclockwise from outside."""
    hull = ConvexHull(points)
    groups: dict[tuple, set] = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq, 6))
        groups.setdefault(key, set()).update(int(i) for i in simplex)
    faces = []
    for key, idx in sorted(groups.items()):
        normal = np.array(key[:3])
        idx = sorted(idx)
        ctr = points[idx].mean(axis=0)
        e1 = points[idx[0]] - ctr
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        ang = {i: np.arctan2((points[i] - ctr) @ e2, (points[i] - ctr) @ e1) for i in idx}
        cyc = sorted(idx, key=lambda i: ang[i])
        k = cyc.index(min(cyc))
        faces.append(cyc[k:] + cyc[:k])
    return sorted(faces)


@lru_cache(maxsize=None)
def snub_cube() -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """Coordinates and faces (6 squares, 32 triangles) of the snub cube."""
    t = np.roots([1, -1, -1, -1]).real.max()  # tribonacci constant
    base = (1.0, 1.0 / t, t)
    pts = []
    for perm in itertools.permutations(range(3)):
        even = perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1))
        for signs in itertools.product((1, -1), repeat=3):
            minus = signs.count(-1)
            if (minus % 2 == 0) == even:
                pts.append(tuple(signs[k] * base[perm[k]] for k in range(3)))
    pts = np.array(sorted(pts))
    faces = _polyhedron_faces(pts)
    return pts, tuple(tuple(f) for f in faces)


@lru_cache(maxsize=None)
def truncated_octahedron() -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    pts = set()
    for perm in itertools.permutations((0, 1, 2)):
        for s1, s2 in itertools.product((1, -1), repeat=2):
            p = [0, 0, 0]
            p[perm[1]], p[perm[2]] = s1 * 1, s2 * 2
            pts.add(tuple(p))
    pts = np.array(sorted(pts), dtype=float)
    return pts, tuple(tuple(f) for f in _polyhedron_faces(pts))


# -- quadrilateral subdivision ---------------------------------------------------------


def quad_subdivision() -> Tiling:
    """Truncated octahedron with each hexagon cut into three rhombi at a beta^3 centre."""
    pts, faces = truncated_octahedron()
    squares = [f for f in faces if len(f) == 4]
    hexes = [f for f in faces if len(f) == 6]
    # each original vertex must be a spoke end in exactly one of its two hexagons
    for phases in itertools.product((0, 1), repeat=len(hexes)):
        spoke_count = np.zeros(len(pts), dtype=int)
        for h, ph in zip(hexes, phases):
            for k in range(ph, 6, 2):
                spoke_count[h[k]] += 1
        if (spoke_count == 1).all():
            break
    else:  # pragma: no cover - the truncated octahedron always admits one
        raise RuntimeError("no consistent spoke pattern")
    out = [(SQUARE, list(f), SQ) for f in squares]
    for n, (h, ph) in enumerate(zip(hexes, phases)):
        ctr = ("centre", n)
        for j in range(3):
            k = ph + 2 * j
            out.append((RHOMBUS, [ctr, h[k % 6], h[(k + 1) % 6], h[(k + 2) % 6]], ("b", "c", "b", "c")))
    return Tiling.from_faces(out, name="quad-subdivision")


# -- triangular fusions of the snub cube -------------------------------------------------


def _triangle_pairs():
    pts, faces = snub_cube()
    tris = [f for f in faces if len(f) == 3]
    edge_tris: dict[frozenset, list[int]] = {}
    for i, t in enumerate(tris):
        for k in range(3):
            edge_tris.setdefault(frozenset((t[k], t[(k + 1) % 3])), []).append(i)
    adj = {frozenset(ts): e for e, ts in edge_tris.items() if len(ts) == 2}
    return tris, adj


def _perfect_matchings(n: int, adj: dict):
    nbrs = {i: sorted(j for p in adj for j in p if i in p and j != i) for i in range(n)}

    def rec(free: frozenset, acc):
        if not free:
            yield tuple(sorted(acc))
            return
        i = min(free)
        for j in nbrs[i]:
            if j in free:
                yield from rec(free - {i, j}, acc + [(i, j)])

    yield from rec(frozenset(range(n)), [])


def _fuse(tris, adj, matching, name="") -> Tiling:
    pts, faces = snub_cube()
    out = [(SQUARE, list(f), SQ) for f in faces if len(f) == 4]
    for i, j in matching:
        u, v = sorted(adj[frozenset((i, j))])
        ti = tris[i]
        w1 = next(x for x in ti if x not in (u, v))
        w2 = next(x for x in tris[j] if x not in (u, v))
        k = ti.index(u)
        # drop the shared edge from the two counterclockwise triangles
        cyc = [v, w1, u, w2] if ti[(k + 1) % 3] == v else [u, w1, v, w2]
        out.append((RHOMBUS, cyc, ("b", "c", "b", "c")))
    return Tiling.from_faces(out, name=name)


@lru_cache(maxsize=None)
def fusion_variants() -> tuple[tuple[tuple, Tiling], ...]:
    """Every grouping of the 32 snub-cube triangles into adjacent pairs whose
    fusion has no vertex without a beta, with the fused tiling."""
    tris, adj = _triangle_pairs()
    out = []
    for m in _perfect_matchings(len(tris), adj):
        t = _fuse(tris, adj, m)
        if all(v.b > 0 for v in t.vertex_types()):
            out.append((m, t))
    return tuple(out)


def _has_marked_square(t: Tiling) -> bool:
    """A square all of whose corners are followed (in rotation) by a beta then two gammas."""
    for i, kind in enumerate(t.kinds):
        if kind != SQUARE:
            continue
        ok = True
        for h in range(4 * i, 4 * i + 4):
            seq, g = [], h
            for _ in range(4):
                seq.append(t.labels[g])
                g = t.next(t.twin[g])
            if seq != ["a", "b", "c", "c"]:
                ok = False
                break
        if ok:
            return True
    return False


@lru_cache(maxsize=None)
def fusion_classes() -> tuple[tuple[bytes, tuple[int, ...]], ...]:
    """Isomorphism classes of fusions: canonical code and member indices into
    :func:`fusion_variants`. The class with a fully marked square comes first."""
    variants = fusion_variants()
    classes: dict[bytes, list[int]] = {}
    for n, (_, t) in enumerate(variants):
        classes.setdefault(canonical_code(t), []).append(n)

    def marked(item):
        code, members = item
        t = variants[members[0]][1]
        return (not (_has_marked_square(t) or _has_marked_square(t.mirrored())), code)

    return tuple((code, tuple(m)) for code, m in sorted(classes.items(), key=marked))


def fusion(k: int) -> Tiling:
    if k not in (1, 2):
        raise DomainError(f"fusion index must be 1 or 2, got {k!r}")
    classes = fusion_classes()
    if len(classes) != 2:  # pragma: no cover - guarded by tests
        raise RuntimeError(f"expected two fusion classes, found {len(classes)}")
    _, members = classes[k - 1]
    t = fusion_variants()[members[0]][1]
    return Tiling(t.kinds, t.labels, t.twin, name=f"fusion:{k}")
