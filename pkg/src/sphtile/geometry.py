"""Continuous side of the problem: prototile angles and the equations they obey.

Angles are radians throughout. A square has four corners ``alpha``; a rhombus
has corners ``beta, gamma, beta, gamma``. Both share the edge length ``x``.

Vertex equations are passed around as integer triples ``(a, b, c)`` meaning
``a*alpha + b*beta + c*gamma = 2*pi``; :class:`sphtile.combinatorics.VertexType`
is such a triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, IllConditioned

TWO_PI = 2.0 * math.pi

TOL_EQ5 = 1e-9
TOL_EQ5_PRINTED = 1e-3
TOL_ROOT = 1e-12

_SCAN_POINTS = 4000
_BOUNDARY_GAP = 1e-7


@dataclass(frozen=True)
class AngleSet:
    """Angles of the square/rhombus pair and their common edge length."""

    alpha: float
    beta: float
    gamma: float
    x: float

    @classmethod
    def from_angles(cls, alpha: float, beta: float, gamma: float) -> "AngleSet":
        return cls(alpha, beta, gamma, edge_length(alpha))

    def violations(self, tol_eq5: float = TOL_EQ5) -> list[str]:
        """Names of the invariants this angle set breaks (empty when admissible)."""
        a, b, g = self.alpha, self.beta, self.gamma
        bad = []
        if not (0.0 < g < a < b < math.pi):
            bad.append("ordering 0 < gamma < alpha < beta < pi")
        if not (a > math.pi / 2 and b + g > math.pi):
            bad.append("positive excess: alpha > pi/2 and beta + gamma > pi")
        if not bad and abs(eq5_residual(a, b, g)) > tol_eq5:
            bad.append("edge compatibility tan^2(alpha/2) = tan(beta/2) tan(gamma/2)")
        if not (0.0 < self.x < math.pi / 2):
            bad.append("edge length 0 < x < pi/2")
        elif a > math.pi / 2 and abs(math.cos(self.x) - 1.0 / math.tan(a / 2) ** 2) > tol_eq5:
            bad.append("cos x = cot^2(alpha/2)")
        return bad

    def is_admissible(self, tol_eq5: float = TOL_EQ5) -> bool:
        return not self.violations(tol_eq5)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def in_pi(self, digits: int = 6) -> dict[str, str]:
        return {k: f"{getattr(self, k) / math.pi:.{digits}f}pi" for k in ("alpha", "beta", "gamma", "x")}

    def to_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "x": self.x}


def edge_length(alpha: float) -> float:
    """Common edge length from the square angle: ``cos x = cot^2(alpha/2)``."""
    if not (math.pi / 2 < alpha < math.pi):
        raise DomainError(f"alpha must lie in (pi/2, pi), got {alpha!r}")
    return math.acos(1.0 / math.tan(alpha / 2) ** 2)


def eq5_residual(alpha: float, beta: float, gamma: float) -> float:
    """``tan^2(alpha/2) - tan(beta/2) tan(gamma/2)``; zero iff square and rhombus share an edge length."""
    for name, value in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not (0.0 < value < math.pi):
            raise DomainError(f"{name} must lie in (0, pi), got {value!r}")
    return math.tan(alpha / 2) ** 2 - math.tan(beta / 2) * math.tan(gamma / 2)


@dataclass(frozen=True)
class CurveParameterization:
    """A one-parameter family of angle sets, sampled by its free variable."""

    variable: str
    interval: tuple[float, float]
    sampler: Callable[[float], list[AngleSet]] = field(repr=False, compare=False)

    def sample(self, value: float) -> list[AngleSet]:
        return self.sampler(value)

    def grid(self, n: int = 50) -> list[AngleSet]:
        lo, hi = self.interval
        out = []
        for t in np.linspace(lo, hi, n + 2)[1:-1]:
            out.extend(self.sampler(float(t)))
        return out


@dataclass(frozen=True)
class SolutionSet:
    kind: str  # "empty" | "point" | "curve"
    points: tuple[AngleSet, ...] = ()
    parameterization: CurveParameterization | None = None

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def point(self) -> AngleSet:
        if self.kind != "point" or len(self.points) != 1:
            raise DomainError(f"expected a single point, have kind={self.kind} with {len(self.points)} points")
        return self.points[0]


EMPTY = SolutionSet("empty")


def _as_triple(v) -> tuple[int, int, int]:
    a, b, c = (int(t) for t in v)
    if min(a, b, c) < 0:
        raise DomainError(f"vertex counts must be nonnegative, got {v!r}")
    return a, b, c


def _find_roots(fun: Callable[[float], float], lo: float, hi: float, n: int = _SCAN_POINTS,
                vfun: Callable[[np.ndarray], np.ndarray] | None = None) -> list[float]:
    """All sign-change roots of ``fun`` in the open interval ``(lo, hi)``.

    ``vfun``, if given, evaluates ``fun`` on an array for the initial scan.
    """
    width = hi - lo
    margin = 1e-9 * width
    ts = np.linspace(lo + margin, hi - margin, n)
    if vfun is not None:
        with np.errstate(all="ignore"):
            vals = vfun(ts)
    else:
        vals = np.array([fun(float(t)) for t in ts])
    roots = []
    for i in range(n - 1):
        v0, v1 = vals[i], vals[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)):
            continue
        if v0 == 0.0:
            if 0 < i:
                roots.append(float(ts[i]))
        elif v0 * v1 < 0.0:
            roots.append(brentq(fun, ts[i], ts[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
        elif 0 < i and abs(v0) < 1e-9 and abs(v0) <= abs(vals[i - 1]) and abs(v0) <= abs(v1):
            # touches zero without crossing inside the interval
            raise IllConditioned(f"tangential root near t={ts[i]:.6g}; cannot bracket")
    return roots


def _admissible_interval(p0: np.ndarray, d: np.ndarray) -> tuple[float, float] | None:
    """Parameter range of ``p0 + t d`` satisfying the strict linear angle invariants."""
    # rows: coefficient vector k with k . (alpha, beta, gamma) > bound
    rows = [
        ((0, 0, 1), 0.0),            # gamma > 0
        ((1, 0, -1), 0.0),           # alpha > gamma
        ((-1, 1, 0), 0.0),           # beta > alpha
        ((0, -1, 0), -math.pi),      # beta < pi
        ((1, 0, 0), math.pi / 2),    # alpha > pi/2
        ((0, 1, 1), math.pi),        # beta + gamma > pi
    ]
    lo, hi = -math.inf, math.inf
    for k, bound in rows:
        k = np.array(k, dtype=float)
        slope = float(k @ d)
        offset = float(k @ p0) - bound
        if abs(slope) < 1e-15:
            if offset <= 0.0:
                return None
            continue
        t = -offset / slope
        if slope > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if not lo < hi - 1e-12:
        return None
    return lo, hi


def _solve_point_system(rows: list[tuple[int, int, int]], tol_eq5: float) -> SolutionSet:
    m = np.array(rows, dtype=float)
    rhs = np.full(2, TWO_PI)
    d = np.cross(m[0], m[1])
    d /= np.linalg.norm(d)
    p0 = np.linalg.lstsq(m, rhs, rcond=None)[0]
    interval = _admissible_interval(p0, d)
    if interval is None:
        return EMPTY

    def residual(t: float) -> float:
        a, b, g = p0 + t * d
        try:
            return eq5_residual(a, b, g)
        except DomainError:  # rounding at the ends of the range
            return math.nan

    def residuals(ts: np.ndarray) -> np.ndarray:
        a, b, g = (p0[k] + ts * d[k] for k in range(3))
        out = np.tan(a / 2) ** 2 - np.tan(b / 2) * np.tan(g / 2)
        inside = (a > 0) & (a < math.pi) & (b > 0) & (b < math.pi) & (g > 0) & (g < math.pi)
        return np.where(inside, out, np.nan)

    lo, hi = interval
    points = []
    for t in _find_roots(residual, lo, hi, vfun=residuals):
        if min(t - lo, hi - t) < _BOUNDARY_GAP:
            # double root sitting on the boundary of the open range (e.g. the regular cube)
            continue
        cand = AngleSet.from_angles(*(float(v) for v in p0 + t * d))
        if cand.is_admissible(tol_eq5):
            points.append(cand)
    if not points:
        return EMPTY
    return SolutionSet("point", tuple(points))


def _curve_sampler(row: tuple[int, int, int], tol_eq5: float) -> tuple[str, Callable[[float], list[AngleSet]]]:
    a, b, c = row

    if a == 0 and b == 0:
        gamma = TWO_PI / c

        def sample_beta(beta: float) -> list[AngleSet]:
            if not (0 < beta < math.pi and 0 < gamma < math.pi):
                return []
            alpha = 2 * math.atan(math.sqrt(math.tan(beta / 2) * math.tan(gamma / 2)))
            cand = AngleSet.from_angles(alpha, beta, gamma) if math.pi / 2 < alpha < math.pi else None
            return [cand] if cand is not None and cand.is_admissible(tol_eq5) else []

        return "beta", sample_beta

    def sample_gamma(gamma: float) -> list[AngleSet]:
        if not (0 < gamma < math.pi):
            return []
        rest = TWO_PI - c * gamma
        out = []
        if b == 0:
            alpha = rest / a
            if not (math.pi / 2 < alpha < math.pi):
                return []
            beta = 2 * math.atan(math.tan(alpha / 2) ** 2 / math.tan(gamma / 2))
            candidates = [(alpha, beta)]
        elif a == 0:
            beta = rest / b
            if not (0 < beta < math.pi):
                return []
            alpha = 2 * math.atan(math.sqrt(math.tan(beta / 2) * math.tan(gamma / 2)))
            candidates = [(alpha, beta)]
        else:
            # alpha = (rest - b beta) / a; scan beta over the range keeping alpha in (pi/2, pi)
            lo = max(gamma, (rest - a * math.pi) / b)
            hi = min(math.pi, (rest - a * math.pi / 2) / b)
            if not lo < hi:
                return []

            def res(beta: float) -> float:
                return eq5_residual((rest - b * beta) / a, beta, gamma)

            def vres(bs: np.ndarray) -> np.ndarray:
                al = (rest - b * bs) / a
                ok = (al > 0) & (al < math.pi) & (bs > 0) & (bs < math.pi)
                return np.where(ok, np.tan(al / 2) ** 2 - np.tan(bs / 2) * np.tan(gamma / 2), np.nan)

            try:
                betas = _find_roots(res, lo, hi, n=400, vfun=vres)
            except IllConditioned:
                betas = []
            candidates = [((rest - b * beta) / a, beta) for beta in betas]
        for alpha, beta in candidates:
            if math.pi / 2 < alpha < math.pi:
                cand = AngleSet.from_angles(alpha, beta, gamma)
                if cand.is_admissible(tol_eq5):
                    out.append(cand)
        return out

    return "gamma", sample_gamma


def _solve_curve(row: tuple[int, int, int], tol_eq5: float) -> SolutionSet:
    variable, sampler = _curve_sampler(row, tol_eq5)
    ts = np.linspace(0.0, math.pi, 2001)[1:-1]
    ok = [bool(sampler(float(t))) for t in ts]
    if not any(ok):
        return EMPTY
    first = ok.index(True)
    last = len(ok) - 1 - ok[::-1].index(True)

    def edge(inside: float, outside: float) -> float:
        # bisect the admissibility boundary between a good and a bad sample
        for _ in range(60):
            mid = 0.5 * (inside + outside)
            if sampler(mid):
                inside = mid
            else:
                outside = mid
        return inside

    lo = edge(float(ts[first]), float(ts[first - 1]) if first > 0 else 0.0)
    hi = edge(float(ts[last]), float(ts[last + 1]) if last + 1 < len(ts) else math.pi)
    param = CurveParameterization(variable, (lo, hi), sampler)
    mid = param.sample(0.5 * (lo + hi))
    return SolutionSet("curve", tuple(mid), param)


def solve_vertex_system(equations: Sequence, tol_eq5: float = TOL_EQ5) -> SolutionSet:
    """Solve vertex angle sums together with the edge compatibility equation.

    One equation leaves a curve of solutions, two distinct equations fix
    isolated points. An inconsistent system is an ``empty`` result, not an
    error.
    """
    rows = []
    for v in equations:
        t = _as_triple(v)
        if sum(t) == 0:
            raise DomainError("a vertex needs at least one angle")
        if t not in rows:
            rows.append(t)
    if len(rows) == 1:
        return _solve_curve(rows[0], tol_eq5)
    if len(rows) == 2:
        if np.linalg.matrix_rank(np.array(rows, dtype=float)) < 2:
            return EMPTY
        return _solve_point_system(rows, tol_eq5)
    if len(rows) == 0:
        raise DomainError("need at least one vertex equation")
    # over-determined: solve the first two and keep points satisfying the rest
    base = _solve_point_system(rows[:2], tol_eq5)
    keep = tuple(
        p for p in base.points
        if all(abs(r[0] * p.alpha + r[1] * p.beta + r[2] * p.gamma - TWO_PI) < 1e-9 for r in rows[2:])
    )
    return SolutionSet("point", keep) if keep else EMPTY


# -- earth map existence function --------------------------------------------


def _check_gamma(gamma: float) -> None:
    if not (0.0 < gamma <= math.pi / 2):
        raise DomainError(f"gamma must lie in (0, pi/2], got {gamma!r}")


def T_of_gamma(gamma: float) -> float:
    """``arctan sqrt(tan(gamma/4) / tan(gamma/2))``."""
    _check_gamma(gamma)
    return math.atan(math.sqrt(math.tan(gamma / 4) / math.tan(gamma / 2)))


def c_of_gamma(gamma: float) -> float:
    """Number of gammas at the ``alpha beta gamma^c`` vertex, as a real function of gamma."""
    _check_gamma(gamma)
    return 2.0 / gamma * T_of_gamma(gamma) + 0.5


def existence_residual(gamma: float, c: float) -> float:
    """``2 tan^2((2c-1) gamma/4) + tan^2(gamma/4) - 1``."""
    return 2 * math.tan((2 * c - 1) * gamma / 4) ** 2 + math.tan(gamma / 4) ** 2 - 1


def gamma_of_c(c: int) -> float:
    """The unique gamma in (0, pi/2) with ``c_of_gamma(gamma) == c``.

    Only the branch ``k = 0`` with the plus sign of the general solution
    survives the angle inequalities; the others are never generated.
    """
    if int(c) != c or c < 2:
        raise DomainError(f"c must be an integer >= 2, got {c!r}")
    c = int(c)
    hi = math.pi / 2
    lo = hi
    while c_of_gamma(lo) <= c:
        lo /= 2
    gamma = brentq(lambda g: c_of_gamma(g) - c, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(c_of_gamma(gamma) - c) >= TOL_ROOT:
        raise IllConditioned(f"bisection for c={c} stalled at residual {c_of_gamma(gamma) - c:.3g}")
    return gamma


def earth_map_angles(c: int) -> AngleSet:
    gamma = gamma_of_c(c)
    return AngleSet.from_angles(math.pi - (c - 0.5) * gamma, math.pi - 0.5 * gamma, gamma)


# -- families -----------------------------------------------------------------

FAMILY_SYSTEMS: dict[str, tuple[tuple[int, int, int], ...]] = {
    "cube": ((1, 1, 1),),
    "fusion": ((1, 2, 0), (1, 1, 2)),
    "quad_subdivision": ((0, 3, 0), (1, 1, 2)),
    "sporadic": ((2, 1, 0), (3, 0, 1)),
}

# Sample on the cube curve chosen so that no vertex type besides alpha beta gamma
# sums to 2 pi there.
CUBE_GAMMA = 0.47 * math.pi


@lru_cache(maxsize=64)
def angles_for_family(family_id: str, c: int | None = None) -> SolutionSet:
    """Angle solutions for a named family of the classification."""
    family_id = family_id.replace("-", "_")
    if family_id == "earth_map":
        if c is None:
            raise DomainError("earth_map needs c")
        return SolutionSet("point", (earth_map_angles(c),))
    if family_id not in FAMILY_SYSTEMS:
        raise DomainError(f"unknown family {family_id!r}")
    return solve_vertex_system(FAMILY_SYSTEMS[family_id])


def family_point(family_id: str, c: int | None = None) -> AngleSet:
    """One concrete angle set per family; the cube uses :data:`CUBE_GAMMA` on its curve."""
    sol = angles_for_family(family_id, c)
    if sol.kind == "curve":
        return sol.parameterization.sample(CUBE_GAMMA)[0]
    return sol.point
