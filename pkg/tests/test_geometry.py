from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphtile.errors import DomainError, IllConditioned
from sphtile.geometry import (
    CUBE_GAMMA,
    AngleSet,
    T_of_gamma,
    _find_roots,
    angles_for_family,
    c_of_gamma,
    earth_map_angles,
    edge_length,
    eq5_residual,
    existence_residual,
    family_point,
    gamma_of_c,
    solve_vertex_system,
)

PI = math.pi

# Reference values from a 40-digit mpmath solve of the same systems, in units of pi.
REF = {
    "quad_subdivision": (0.535844819668352, 2 / 3, 0.398744256832491, 0.205912726442678),
    "fusion": (0.551379432842264, 0.724310283578868, 0.362155141789434, 0.242726483931532),
    "sporadic": (0.580430623255166, 0.839138753489668, 0.258708130234501, 0.295167235300867),
}
GAMMA_C = {2: 0.256955536233153, 3: 0.155816897844861, 4: 0.111618200383361, 10: 0.0412283202000392}


@pytest.mark.parametrize("family", sorted(REF))
def test_point_systems_match_reference(family):
    a = angles_for_family(family).point
    got = np.array([a.alpha, a.beta, a.gamma, a.x]) / PI
    assert np.allclose(got, REF[family], atol=1e-12)
    assert a.is_admissible()


def test_fusion_beta_is_twice_gamma():
    a = family_point("fusion")
    assert abs(a.beta - 2 * a.gamma) < 1e-12


@pytest.mark.parametrize("system", [[(3, 0, 0), (0, 2, 1)], [(2, 1, 0), (0, 2, 1)], [(3, 0, 0), (1, 1, 1)]])
def test_inconsistent_systems_are_empty(system):
    sol = solve_vertex_system(system)
    assert sol.kind == "empty" and sol.is_empty


def test_dependent_rows_are_empty():
    assert solve_vertex_system([(1, 1, 1), (2, 2, 2)]).is_empty


def test_cube_curve():
    sol = angles_for_family("cube")
    assert sol.kind == "curve"
    (a,) = sol.parameterization.sample(CUBE_GAMMA)
    assert abs(a.alpha + a.beta + a.gamma - 2 * PI) < 1e-12
    assert abs(eq5_residual(a.alpha, a.beta, a.gamma)) < 1e-12
    assert a.alpha / PI == pytest.approx(0.68953924777054, abs=1e-12)


def test_curve_grid_points_are_admissible():
    sol = angles_for_family("cube")
    pts = sol.parameterization.grid(50)
    assert len(pts) > 10
    for a in pts:
        assert a.is_admissible()


def test_edge_length_from_alpha():
    assert edge_length(2 * PI / 3) == pytest.approx(math.acos(1 / 3))
    with pytest.raises(DomainError):
        edge_length(PI / 2)


def test_edge_compatibility_domain():
    with pytest.raises(DomainError):
        eq5_residual(PI, 1.0, 1.0)


def test_angle_set_violations():
    good = family_point("sporadic")
    assert good.violations() == []
    swapped = AngleSet.from_angles(good.alpha, good.gamma, good.beta)
    assert "ordering 0 < gamma < alpha < beta < pi" in swapped.violations()
    off = AngleSet.from_angles(good.alpha, good.beta + 1e-3, good.gamma)
    assert any("edge compatibility" in v for v in off.violations())


def test_c_of_gamma_values():
    assert c_of_gamma(PI / 2) == pytest.approx(1.22811332754775, abs=1e-12)
    assert T_of_gamma(PI / 2) == pytest.approx(0.57185887020121, abs=1e-12)
    # limit of T at 0+ is arctan(1/sqrt 2)
    assert T_of_gamma(1e-6) == pytest.approx(math.atan(1 / math.sqrt(2)), abs=1e-9)


@pytest.mark.parametrize("c", sorted(GAMMA_C))
def test_gamma_of_c_reference(c):
    assert gamma_of_c(c) / PI == pytest.approx(GAMMA_C[c], abs=1e-13)


@given(st.integers(min_value=2, max_value=50))
@settings(max_examples=30, deadline=None)
def test_gamma_of_c_round_trip(c):
    g = gamma_of_c(c)
    assert abs(c_of_gamma(g) - c) < 1e-10
    assert abs(existence_residual(g, c)) < 1e-9


@given(st.integers(min_value=2, max_value=30))
@settings(max_examples=20, deadline=None)
def test_earth_map_angles_solve_both_vertices(c):
    a = earth_map_angles(c)
    assert abs(2 * a.beta + a.gamma - 2 * PI) < 1e-12
    assert abs(a.alpha + a.beta + c * a.gamma - 2 * PI) < 1e-12
    assert abs(eq5_residual(a.alpha, a.beta, a.gamma)) < 1e-9
    assert a.is_admissible()


@pytest.mark.parametrize("bad", [1, 2.5, -3])
def test_gamma_of_c_rejects_bad_c(bad):
    with pytest.raises(DomainError):
        gamma_of_c(bad)


def test_c_of_gamma_domain():
    with pytest.raises(DomainError):
        c_of_gamma(0.0)
    with pytest.raises(DomainError):
        c_of_gamma(PI / 2 + 1e-3)


def test_c_of_gamma_decreasing():
    g = np.linspace(0.001, 0.5, 10_000) * PI
    c = np.array([c_of_gamma(v) for v in g])
    assert np.all(np.diff(c) < 0)


def test_tangential_root_is_ill_conditioned():
    with pytest.raises(IllConditioned):
        _find_roots(lambda t: t * t, -1.0, 1.0, n=101)


def test_family_point_unknown():
    with pytest.raises(DomainError):
        family_point("dodecahedron")
