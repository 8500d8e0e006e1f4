from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphtile.combinatorics import (
    Avc,
    TilingStats,
    VertexType,
    counting_lemma_filter,
    default_max_degree,
    enumerate_degree3_seeds,
    enumerate_vertices,
    feasible_tile_counts,
    integer_feasibility,
    remainder,
    vt,
)
from sphtile.errors import DomainError
from sphtile.geometry import earth_map_angles, family_point

PI = math.pi


def brute_avc(angles, max_degree, tol=1e-6):
    """Plain triple loop over every corner count."""
    out = set()
    for a, b, c in itertools.product(range(max_degree + 1), repeat=3):
        if 3 <= a + b + c <= max_degree and abs(a * angles.alpha + b * angles.beta + c * angles.gamma - 2 * PI) < tol:
            out.add(VertexType(a, b, c))
    return out


def test_vertex_type_text():
    v = vt(1, 1, 2)
    assert str(v) == "a^1 b^1 c^2"
    assert v.pretty == "αβγ^2"
    assert VertexType.parse("a^1 b^1 c^2") == v
    assert VertexType.parse("a b c^3") == vt(1, 1, 3)
    assert v.degree == 4
    with pytest.raises(DomainError):
        VertexType.parse("d^2")


@given(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9))
def test_vertex_string_round_trip(a, b, c):
    if a + b + c == 0:
        return
    v = vt(a, b, c)
    assert VertexType.parse(str(v)) == v


def test_degree3_seeds_and_exclusions():
    seeds, excluded = enumerate_degree3_seeds(with_reasons=True)
    assert seeds == [vt(3, 0, 0), vt(2, 1, 0), vt(1, 2, 0), vt(1, 1, 1), vt(0, 3, 0), vt(0, 2, 1)]
    assert set(excluded) == {vt(2, 0, 1), vt(1, 0, 2), vt(0, 1, 2), vt(0, 0, 3)}
    assert all("alpha+beta+gamma" in r for r in excluded.values())


@pytest.mark.parametrize("family,expected", [
    ("cube", {vt(1, 1, 1)}),
    ("fusion", {vt(1, 2, 0), vt(1, 1, 2), vt(1, 0, 4)}),
    ("quad_subdivision", {vt(0, 3, 0), vt(1, 1, 2)}),
    ("sporadic", {vt(2, 1, 0), vt(3, 0, 1)}),
])
def test_enumerate_vertices_families(family, expected):
    a = family_point(family)
    got = enumerate_vertices(a)
    assert got.entries == expected
    assert got.entries == brute_avc(a, default_max_degree(a))


@pytest.mark.parametrize("c", [2, 3, 5])
def test_enumerate_vertices_earth_map(c):
    a = earth_map_angles(c)
    got = enumerate_vertices(a)
    # alpha^2 gamma^(2c-1) is the sum of two alpha beta gamma^c minus beta^2 gamma
    assert got.entries == {vt(0, 2, 1), vt(1, 1, c), vt(2, 0, 2 * c - 1)}
    assert got.entries == brute_avc(a, default_max_degree(a))


def test_enumerate_vertices_entries_have_zero_remainder():
    a = family_point("sporadic")
    for v in enumerate_vertices(a):
        assert abs(remainder(v, a)) < 1e-9


def test_enumerate_vertices_bad_degree():
    with pytest.raises(DomainError):
        enumerate_vertices(family_point("cube"), max_degree=2)


def test_avc_container():
    avc = Avc(frozenset({vt(2, 1, 0), vt(3, 0, 1)}))
    assert (2, 1, 0) in avc
    assert len(avc) == 2
    assert list(avc) == [vt(2, 1, 0), vt(3, 0, 1)]
    assert avc.to_strings() == ["a^2 b^1 c^0", "a^3 b^0 c^1"]
    assert Avc(frozenset({vt(2, 1, 0)}), "realized") <= avc
    with pytest.raises(DomainError):
        Avc(frozenset(), "maybe")


def test_counting_lemma_filter():
    avc = Avc(frozenset({vt(1, 1, 2), vt(0, 1, 1), vt(1, 1, 1)}))
    assert counting_lemma_filter(avc).entries == {vt(0, 1, 1), vt(1, 1, 1)}
    with_surplus = Avc(frozenset({vt(0, 2, 1), vt(1, 1, 2)}))
    assert counting_lemma_filter(with_surplus) == with_surplus


def test_integer_feasibility_sporadic():
    sols = integer_feasibility({vt(2, 1, 0), vt(3, 0, 1)}, 14)
    assert len(sols) == 1
    (s,) = sols
    assert s.multiplicities == {vt(2, 1, 0): 8, vt(3, 0, 1): 8}
    assert (s.stats.n_square, s.stats.n_rhombus) == (10, 4)


def test_integer_feasibility_cube():
    (s,) = integer_feasibility({vt(1, 1, 1)}, 6)
    assert s.multiplicities == {vt(1, 1, 1): 8}
    assert (s.stats.n_square, s.stats.n_rhombus) == (2, 4)


@pytest.mark.parametrize("c", [2, 3, 4])
def test_integer_feasibility_earth_map(c):
    f = 8 * c - 2
    sols = integer_feasibility({vt(0, 2, 1), vt(1, 1, c)}, f)
    # 8c vertices; two squares give 8 alphas, one per alpha beta gamma^c
    assert [s.multiplicities for s in sols] == [{vt(0, 2, 1): 8 * c - 8, vt(1, 1, c): 8}]


def test_integer_feasibility_requires_both_tiles():
    assert integer_feasibility({vt(3, 0, 0)}, 6) == []
    with pytest.raises(DomainError):
        integer_feasibility({vt(1, 1, 1)}, 1)


def test_feasible_tile_counts():
    assert feasible_tile_counts(Avc(frozenset({vt(0, 2, 1), vt(1, 1, 2)})), 40) == [14]
    assert feasible_tile_counts(Avc(frozenset({vt(1, 1, 1)})), 30) == [6]
    assert feasible_tile_counts(Avc(frozenset()), 30) == []


@given(st.sampled_from(["fusion", "quad_subdivision", "sporadic", "cube"]), st.integers(6, 30))
@settings(max_examples=40, deadline=None)
def test_feasibility_agrees_with_tile_counts(family, f):
    avc = enumerate_vertices(family_point(family))
    sols = integer_feasibility(avc, f)
    assert bool(sols) == (f in feasible_tile_counts(avc, f))
    for s in sols:
        assert s.stats.check() == []
        assert sum(s.multiplicities.values()) == f + 2


def test_tiling_stats_check():
    assert TilingStats(6, 2, 4, {3: 8}).check() == []
    bad = TilingStats(6, 2, 4, {3: 7})
    assert "V = f + 2" in bad.check()
