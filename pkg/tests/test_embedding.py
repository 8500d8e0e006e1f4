from __future__ import annotations

import math
import re

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from conftest import built, point_for
from sphtile.catalog import FamilyId, catalog_ids
from sphtile.embedding import (
    contains,
    default_pole,
    embed,
    export_csv_cgamma,
    export_off,
    export_svg,
    face_areas,
    face_polygon,
    measured_corner,
    project,
)
from sphtile.errors import ClosureFailure, DomainError
from sphtile.geometry import AngleSet, family_point
from sphtile.tiling import RHOMBUS


def _embedded(name):
    fid = FamilyId.parse(name)
    return built(name), embed(built(name), point_for(fid))


@pytest.mark.parametrize("fid", catalog_ids(10), ids=str)
def test_closure(fid):
    e = embed(built(str(fid)), point_for(fid))
    assert e.closure_residual < 1e-8
    assert e.max_angle_residual < 1e-8
    assert e.revisit_residual < 1e-8
    assert np.allclose(np.linalg.norm(e.coordinates, axis=1), 1.0, atol=1e-12)


def test_edge_compatibility_violation_detected():
    a = family_point("cube")
    bad = AngleSet(a.alpha, a.beta + 1e-2, a.gamma, a.x)
    with pytest.raises(ClosureFailure) as info:
        embed(built("cube"), bad)
    assert info.value.residual > 1e-8


def test_wrong_family_angles_fail():
    with pytest.raises(ClosureFailure):
        embed(built("fusion:1"), family_point("sporadic"))


def test_areas_sum_to_sphere(catalog):
    for name, t, a in catalog:
        e = embed(t, a)
        areas = face_areas(e, t)
        assert abs(areas.sum() - 4 * math.pi) < 1e-6, name
        assert (areas > 0).all()


def test_rhombus_opposite_corners_equal(catalog):
    for name, t, a in catalog:
        e = embed(t, a)
        for i, k in enumerate(t.kinds):
            if k != RHOMBUS:
                continue
            m = [measured_corner(e.coordinates, t, h) for h in range(4 * i, 4 * i + 4)]
            assert abs(m[0] - m[2]) < 1e-8 and abs(m[1] - m[3]) < 1e-8, name


def test_pose_equivariance():
    t = built("earth-map:3")
    a = point_for(FamilyId("earth_map", 3))
    r = Rotation.random(random_state=11).as_matrix()
    base = embed(t, a).coordinates
    turned = embed(t, a, rotation=r).coordinates
    assert np.allclose(turned, base @ r.T, atol=1e-12)


def test_faces_cover_sphere_once():
    t, e = _embedded("sporadic:2")
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(500, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    for q in pts:
        assert sum(contains(e, t, i, q) for i in range(t.f)) == 1


def _polygons(svg):
    out = []
    for m in re.finditer(r'<polygon class="face (\w+)" data-face="(\d+)" points="([^"]+)"', svg):
        pts = np.array([[float(v) for v in p.split(",")] for p in m.group(3).split()])
        out.append((m.group(1), int(m.group(2)), pts))
    return out


def _inside(poly, p):
    x, y = p
    hit = False
    n = len(poly)
    for k in range(n):
        (x1, y1), (x2, y2) = poly[k], poly[(k + 1) % n]
        if (y1 > y) != (y2 > y) and x < x1 + (y - y1) * (x2 - x1) / (y2 - y1):
            hit = not hit
    return hit


def test_svg_cube():
    t, e = _embedded("cube")
    svg = export_svg(e, t)
    polys = _polygons(svg)
    background = re.findall(r'<rect class="face (\w+) background"', svg)
    assert len(polys) + len(background) == 6
    shaded = svg.count('fill="#b0b0b0"')
    assert shaded == 2
    assert sum(k == "square" for k, _, _ in polys) + background.count("square") == 2
    assert svg.startswith("<?xml") and 'version="1.1"' in svg


def test_svg_earth_map_and_overlap():
    t, e = _embedded("earth-map:3")
    svg = export_svg(e, t)
    polys = _polygons(svg)
    background = re.findall(r'<rect class="face (\w+) background"', svg)
    assert len(polys) + len(background) == 22
    assert all(len(p) == 4 * 32 for _, _, p in polys)
    # sample interior points of every drawn face and check nobody else claims them
    to_svg = _svg_transform(e, t, polys)
    for _, i, _ in polys:
        corners = face_polygon(e, t, i)
        for w in ([1, 1, 1, 1], [3, 1, 1, 1], [1, 3, 1, 1], [1, 1, 3, 1], [1, 1, 1, 3]):
            q = np.asarray(w, float) @ corners
            q /= np.linalg.norm(q)
            owners = [j for _, j, other in polys if _inside(other, to_svg(q))]
            assert owners == [i]


def _svg_transform(e, t, polys):
    """Sphere point to SVG coordinates, recovering the drawing's scale and shift from one edge."""
    pole = default_pole(e, t)
    _, j, pts = polys[0]
    a, b = project(face_polygon(e, t, j)[:2], pole)
    pa, pb = pts[0], pts[32]
    scale = np.linalg.norm(pb - pa) / np.linalg.norm(b - a)
    flip = np.array([1.0, -1.0])

    def to_svg(q):
        return pa + scale * (project(q[None, :], pole)[0] - a) * flip

    return to_svg


def test_svg_pole_on_vertex():
    t, e = _embedded("cube")
    with pytest.raises(DomainError):
        export_svg(e, t, projection_pole=e.coordinates[3])


def test_off_cube():
    t, e = _embedded("cube")
    lines = export_off(e, t).splitlines()
    assert lines[0] == "OFF"
    assert lines[1].split()[:2] == ["8", "6"]
    assert len(lines) == 2 + 8 + 6
    assert all(ln.startswith("4 ") for ln in lines[10:])


def test_csv_curve():
    text = export_csv_cgamma(0.005, 0.5, 1000)
    rows = text.strip().splitlines()
    assert rows[0] == "gamma_over_pi,c_value"
    vals = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert len(vals) == 1000
    assert abs(vals[-1, 0] - 0.5) < 1e-12 and abs(vals[-1, 1] - 1.228) < 1e-3
    assert (np.diff(vals[:, 1]) < 0).all()


@pytest.mark.parametrize("args", [(0.2, 0.1, 10), (0.0, 0.3, 10), (0.1, 0.6, 10), (0.1, 0.3, 1)])
def test_csv_rejects_bad_grid(args):
    with pytest.raises(DomainError):
        export_csv_cgamma(*args)
