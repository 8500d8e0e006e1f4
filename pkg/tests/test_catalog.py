from __future__ import annotations

import itertools

import pytest

from conftest import built, point_for
from sphtile.catalog import (
    FamilyId,
    build,
    catalog_ids,
    fusion_classes,
    fusion_variants,
    snub_cube,
    timezone_strip,
)
from sphtile.combinatorics import integer_feasibility, vt, Avc
from sphtile.errors import DomainError
from sphtile.geometry import family_point
from sphtile.tiling import RHOMBUS, canonical_code, is_isomorphic, realized_avc, stats, verify

COUNTS = {
    "cube": (2, 4),
    "fusion:1": (6, 16),
    "fusion:2": (6, 16),
    "quad-subdivision": (6, 24),
    "sporadic:1": (10, 4),
    "sporadic:2": (10, 4),
}


@pytest.mark.parametrize("text", ["cube", "earth-map:3", "fusion:2", "quad-subdivision", "sporadic:1"])
def test_id_round_trip(text):
    assert str(FamilyId.parse(text)) == text


@pytest.mark.parametrize("bad", [("earth_map", None), ("earth_map", 1), ("cube", 2), ("dodecahedron", None),
                                 ("earth_map", True)])
def test_invalid_ids(bad):
    with pytest.raises(DomainError):
        FamilyId(*bad)


@pytest.mark.parametrize("text", ["earth-map:1", "earth-map:x", "fusion:3", "Cube"])
def test_invalid_cli_ids(text):
    with pytest.raises(DomainError):
        build(text)


def test_tile_counts():
    for name, (s, r) in COUNTS.items():
        st = stats(built(name))
        assert (st.n_square, st.n_rhombus, st.f) == (s, r, s + r), name


@pytest.mark.parametrize("c", range(2, 11))
def test_earth_map(c):
    fid = FamilyId("earth_map", c)
    t = build(fid)
    st = stats(t)
    assert (st.f, st.n_square, st.n_rhombus) == (8 * c - 2, 2, 4 * (2 * c - 1))
    assert verify(t, point_for(fid)).passed
    mult = {}
    for v in t.vertex_types():
        mult[v] = mult.get(v, 0) + 1
    assert mult == {vt(0, 2, 1): 8 * c - 8, vt(1, 1, c): 8}


def test_earth_map_counts_from_linear_solve():
    for c in (2, 3, 4):
        avc = Avc(frozenset({vt(0, 2, 1), vt(1, 1, c)}))
        sols = integer_feasibility(avc, 8 * c - 2)
        assert {(s.multiplicities[vt(0, 2, 1)], s.multiplicities[vt(1, 1, c)]) for s in sols} == {(8 * c - 8, 8)}


def test_named_avcs():
    assert realized_avc(built("fusion:1")).entries == {vt(1, 2, 0), vt(1, 1, 2)}
    assert realized_avc(built("fusion:2")).entries == {vt(1, 2, 0), vt(1, 1, 2)}
    assert realized_avc(built("sporadic:2")).entries == {vt(2, 1, 0), vt(3, 0, 1)}
    assert realized_avc(built("quad-subdivision")).entries == {vt(1, 1, 2), vt(0, 3, 0)}


def test_every_builder_verifies(catalog):
    for name, t, a in catalog:
        rep = verify(t, a)
        assert rep.passed, (name, rep.failed())


def test_builders_are_deterministic():
    for fid in catalog_ids(3):
        assert build(fid) == build(fid)


def test_pairwise_non_isomorphic(catalog):
    for (n1, t1, _), (n2, t2, _) in itertools.combinations(catalog, 2):
        assert not is_isomorphic(t1, t2), (n1, n2)


@pytest.mark.parametrize("c,n", [(2, 3), (3, 5), (5, 9)])
def test_timezone_strip_size(c, n):
    s = timezone_strip(c)
    assert len(s) == n
    assert all(kind == RHOMBUS for kind, _, _ in s.faces)


@pytest.mark.parametrize("c", [2, 3, 4])
def test_timezone_strip_ends(c):
    s = timezone_strip(c)
    gammas = {s.gamma_c_end: 0, s.gamma_c_minus_1_end: 0}
    for _, vs, labels in s.faces:
        for v, lab in zip(vs, labels):
            if v in gammas:
                assert lab == "c"
                gammas[v] += 1
    assert gammas == {"N": c, "S": c - 1}
    assert {"N", "S"} <= set(s.boundary)
    # the strip is a hexagon: N, two shared corners, S, two shared corners
    assert len(s.boundary) == 6
    assert s.boundary.index("S") == 3


def test_timezone_strip_rejects_small_c():
    for bad in (1, 0, 2.5):
        with pytest.raises(DomainError):
            timezone_strip(bad)


def test_snub_cube_shape():
    pts, faces = snub_cube()
    assert len(pts) == 24
    assert sorted(len(f) for f in faces) == [3] * 32 + [4] * 6


def test_fusion_matchings():
    variants = fusion_variants()
    assert len(variants) == 9
    for _, t in variants:
        assert realized_avc(t).entries == {vt(1, 2, 0), vt(1, 1, 2)}
        assert verify(t, family_point("fusion")).passed
    sizes = sorted(len(m) for _, m in fusion_classes())
    assert sizes == [3, 6]
    assert canonical_code(built("fusion:1")) == fusion_classes()[0][0]
    assert canonical_code(built("fusion:2")) == fusion_classes()[1][0]


def test_fusions_differ():
    assert not is_isomorphic(built("fusion:1"), built("fusion:2"), allow_reflection=True)


def test_equivalent_groupings():
    # two different pairings of the snub-cube triangles give the same tiling
    variants = fusion_variants()
    _, members = fusion_classes()[0]
    (m1, t1), (m2, t2) = variants[members[0]], variants[members[1]]
    assert m1 != m2
    assert t1 != t2
    assert is_isomorphic(t1, t2, allow_reflection=True)
