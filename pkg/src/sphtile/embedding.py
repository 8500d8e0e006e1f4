"""Coordinates on the unit sphere, and SVG / OFF / CSV exports.

Faces are laid out breadth-first from a seed face. Knowing both ends of one
edge of a face, the rest of the face follows by walking edges of length
``x`` and turning by the labeled corner angles. A vertex reached twice must
land in the same place; otherwise the angle data are inconsistent.
"""

from __future__ import annotations

import io
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ClosureFailure, DomainError
from .geometry import AngleSet, c_of_gamma
from .tiling import SQUARE, Tiling, nxt, prv

TOL_EMBED = 1e-8
EDGE_SAMPLES = 32
_ANGLE = {"a": "alpha", "b": "beta", "c": "gamma"}


@dataclass
class Embedding:
    coordinates: np.ndarray  # (V, 3), row i is vertex i of the tiling
    closure_residual: float  # max over edges of |length - x|
    max_angle_residual: float  # max over corners of |measured - labeled|
    revisit_residual: float  # max distance between two placements of one vertex
    seed_face: int

    def vertex(self, vid: int) -> np.ndarray:
        return self.coordinates[vid]


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _tangent(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Unit tangent at ``q`` pointing along the geodesic to ``p``."""
    return _unit(p - (p @ q) * q)


def _step(p: np.ndarray, q: np.ndarray, theta: float, x: float) -> np.ndarray:
    """Vertex after ``q`` when walking ``p -> q`` with the face on the left and interior angle ``theta`` at ``q``."""
    t = _tangent(q, p)
    # rotate clockwise (seen from outside) about q by theta
    t = t * math.cos(theta) - np.cross(q, t) * math.sin(theta)
    return _unit(math.cos(x) * q + math.sin(x) * t)


def _rotation_to_z(v: np.ndarray) -> np.ndarray:
    """A rotation matrix taking unit vector ``v`` to +z."""
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(v, z)
    s, c = np.linalg.norm(axis), float(v @ z)
    if s < 1e-15:
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    k = axis / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    ang = math.atan2(s, c)
    return np.eye(3) + math.sin(ang) * kx + (1 - math.cos(ang)) * kx @ kx


def corner_angle(t: Tiling, angles: AngleSet, h: int) -> float:
    return getattr(angles, _ANGLE[t.labels[h]])


def _seed_face(t: Tiling) -> int:
    for i, k in enumerate(t.kinds):
        if k == SQUARE:
            return i
    return 0


def measured_corner(coords: np.ndarray, t: Tiling, h: int) -> float:
    o = t.origin
    q = coords[o[h]]
    tr = _tangent(q, coords[o[nxt(h)]])
    tp = _tangent(q, coords[o[prv(h)]])
    return math.atan2(float(np.cross(tr, tp) @ q), float(tr @ tp)) % (2 * math.pi)


def embed(t: Tiling, angles: AngleSet, tol_embed: float = TOL_EMBED, rotation: np.ndarray | None = None) -> Embedding:
    """Place every vertex on the unit sphere; raise :class:`ClosureFailure` if the faces do not fit."""
    t.check_structure()
    x = angles.x
    o = t.origin
    coords: list[np.ndarray | None] = [None] * t.n_vertices
    worst = 0.0
    seed = _seed_face(t)
    h0 = 4 * seed

    # seed pose: the first edge of the seed face starts at +z, then recentre the face
    coords[o[h0]] = np.array([0.0, 0.0, 1.0])
    coords[o[nxt(h0)]] = np.array([math.sin(x), 0.0, math.cos(x)])
    visited = [False] * t.f
    queue = deque([h0])
    visited[seed] = True
    while queue:
        h = queue.popleft()
        p, q = coords[o[h]], coords[o[nxt(h)]]
        g = nxt(h)
        for _ in range(3):
            r = _step(p, q, corner_angle(t, angles, g), x)
            g = nxt(g)
            vid = o[g]
            if coords[vid] is None:
                coords[vid] = r
            else:
                gap = float(np.linalg.norm(coords[vid] - r))
                worst = max(worst, gap)
                if gap > tol_embed:
                    raise ClosureFailure(
                        f"vertex {vid} placed twice {gap:.3g} apart (face {g // 4})", residual=gap)
            p, q = q, coords[vid]
        for k in range(4):
            e = 4 * (h // 4) + k
            j = t.twin[e] // 4
            if not visited[j]:
                visited[j] = True
                queue.append(t.twin[e])

    xyz = np.array(coords)
    centre = _unit(xyz[[o[4 * seed + k] for k in range(4)]].sum(axis=0))
    xyz = xyz @ _rotation_to_z(centre).T
    if rotation is not None:
        xyz = xyz @ np.asarray(rotation, dtype=float).T
    xyz /= np.linalg.norm(xyz, axis=1)[:, None]

    lengths = [math.acos(max(-1.0, min(1.0, float(xyz[o[h]] @ xyz[o[t.twin[h]]])))) for h in range(t.n_half_edges)]
    edge_res = max(abs(L - x) for L in lengths)
    ang_res = max(abs(measured_corner(xyz, t, h) - corner_angle(t, angles, h)) for h in range(t.n_half_edges))
    if max(edge_res, ang_res) > tol_embed:
        raise ClosureFailure(f"embedding residual {max(edge_res, ang_res):.3g} exceeds {tol_embed}",
                             residual=max(edge_res, ang_res))
    return Embedding(xyz, edge_res, ang_res, worst, seed)


def face_areas(e: Embedding, t: Tiling) -> np.ndarray:
    """Spherical excess of each face from its measured corner angles."""
    out = np.zeros(t.f)
    for h in range(t.n_half_edges):
        out[h // 4] += measured_corner(e.coordinates, t, h)
    return out - 2 * math.pi


def face_polygon(e: Embedding, t: Tiling, i: int) -> np.ndarray:
    return e.coordinates[[t.origin[h] for h in range(4 * i, 4 * i + 4)]]


def contains(e: Embedding, t: Tiling, i: int, q: np.ndarray) -> bool:
    """Whether unit vector ``q`` lies inside face ``i`` (faces are convex and counterclockwise)."""
    poly = face_polygon(e, t, i)
    return all(float(np.cross(poly[k], poly[(k + 1) % 4]) @ q) > 0 for k in range(4))


# -- exports --------------------------------------------------------------------------


def _slerp(p: np.ndarray, q: np.ndarray, n: int) -> np.ndarray:
    om = math.acos(max(-1.0, min(1.0, float(p @ q))))
    ts = np.linspace(0.0, 1.0, n + 1)[:-1]
    return (np.sin((1 - ts) * om)[:, None] * p + np.sin(ts * om)[:, None] * q) / math.sin(om)


def default_pole(e: Embedding, t: Tiling) -> np.ndarray:
    return _unit(face_polygon(e, t, e.seed_face).sum(axis=0))


def project(points: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Stereographic projection from ``pole`` onto the plane through the centre."""
    r = _rotation_to_z(_unit(np.asarray(pole, dtype=float)))
    pts = points @ r.T
    return pts[:, :2] / (1.0 - pts[:, 2])[:, None]


def export_svg(e: Embedding, t: Tiling, projection_pole=None, size: int = 600) -> str:
    """SVG of the stereographic image; squares gray, rhombi white.

    The face containing the pole becomes the unbounded region and is painted
    as the background.
    """
    pole = default_pole(e, t) if projection_pole is None else _unit(np.asarray(projection_pole, dtype=float))
    d = np.linalg.norm(e.coordinates - pole, axis=1)
    if d.min() < 1e-6:
        raise DomainError("projection pole coincides with a tiling vertex")
    outer = next((i for i in range(t.f) if contains(e, t, i, pole)), None)
    paths = []
    for i in range(t.f):
        if i == outer:
            continue
        poly = face_polygon(e, t, i)
        arc = np.vstack([_slerp(poly[k], poly[(k + 1) % 4], EDGE_SAMPLES) for k in range(4)])
        paths.append((i, project(arc, pole)))
    allpts = np.vstack([p for _, p in paths]) if paths else np.zeros((1, 2))
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    scale = size / (span + 2 * pad)

    def xy(p):
        return (p[0] - lo[0] + pad) * scale, (hi[1] - p[1] + pad) * scale

    fill = {SQUARE: "#b0b0b0"}
    buf = io.StringIO()
    buf.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    buf.write(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
              f'viewBox="0 0 {size} {size}">\n')
    if t.name:
        buf.write(f"<title>{t.name}</title>\n")
    bg = fill.get(t.kinds[outer], "#ffffff") if outer is not None else "#ffffff"
    if outer is not None:
        buf.write(f'<rect class="face {t.kinds[outer]} background" data-face="{outer}" x="0" y="0" '
                  f'width="{size}" height="{size}" fill="{bg}"/>\n')
    for i, pts in paths:
        coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in map(xy, pts))
        buf.write(f'<polygon class="face {t.kinds[i]}" data-face="{i}" points="{coords}" '
                  f'fill="{fill.get(t.kinds[i], "#ffffff")}" stroke="#000000" stroke-width="1"/>\n')
    buf.write("</svg>\n")
    return buf.getvalue()


def export_off(e: Embedding, t: Tiling) -> str:
    """Faceted (flat-quad, chordal) model; vertices lie on the sphere, faces do not."""
    lines = ["OFF", f"{t.n_vertices} {t.f} {t.n_edges}"]
    lines += [f"{p[0]:.12f} {p[1]:.12f} {p[2]:.12f}" for p in e.coordinates]
    for i in range(t.f):
        lines.append("4 " + " ".join(str(t.origin[h]) for h in range(4 * i, 4 * i + 4)))
    return "\n".join(lines) + "\n"


def export_csv_cgamma(gamma_from: float = 0.005, gamma_to: float = 0.4995, steps: int = 1000) -> str:
    """Rows ``gamma_over_pi,c_value`` of c(gamma) on an evenly spaced grid in gamma/pi."""
    if steps < 2:
        raise DomainError("steps must be >= 2")
    if not (0.0 < gamma_from < gamma_to <= 0.5):
        raise DomainError("need 0 < from < to <= 0.5 (in units of pi)")
    out = ["gamma_over_pi,c_value"]
    for g in np.linspace(gamma_from, gamma_to, steps):
        out.append(f"{g:.10f},{c_of_gamma(g * math.pi):.12f}")
    return "\n".join(out) + "\n"
