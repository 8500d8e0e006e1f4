"""Vertex types, anglewise vertex combinations (AVCs) and counting constraints."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import DomainError
from .geometry import TWO_PI, AngleSet

TOL_VERTEX = 1e-6


class VertexType(NamedTuple):
    """Counts of alpha, beta and gamma corners meeting at a vertex."""

    a: int
    b: int
    c: int

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c

    def angle_sum(self, angles: AngleSet) -> float:
        return self.a * angles.alpha + self.b * angles.beta + self.c * angles.gamma

    def __str__(self) -> str:
        return f"a^{self.a} b^{self.b} c^{self.c}"

    @property
    def pretty(self) -> str:
        parts = []
        for sym, n in zip("αβγ", self):
            if n == 1:
                parts.append(sym)
            elif n > 1:
                parts.append(f"{sym}^{n}")
        return "".join(parts) or "∅"

    @classmethod
    def parse(cls, text: str) -> "VertexType":
        """Read ``"a^1 b^2 c^0"``; missing letters count zero, a bare letter counts one."""
        counts = {"a": 0, "b": 0, "c": 0}
        text = text.strip()
        if not text:
            raise DomainError("empty vertex string")
        for tok in text.split():
            m = re.fullmatch(r"([abc])(?:\^(\d+))?", tok)
            if m is None:
                raise DomainError(f"cannot parse vertex token {tok!r}")
            counts[m.group(1)] += int(m.group(2) or 1)
        return cls(counts["a"], counts["b"], counts["c"])


def vt(a: int, b: int, c: int) -> VertexType:
    return VertexType(a, b, c)


@dataclass(frozen=True)
class Avc:
    """A finite set of vertex types.

    ``exactness`` is ``"constraint_set"`` for the admissible types at some
    angles and ``"realized"`` for the types actually present in a tiling.
    """

    entries: frozenset[VertexType] = field(default_factory=frozenset)
    exactness: str = "constraint_set"

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(VertexType(*e) for e in self.entries))
        if self.exactness not in ("constraint_set", "realized"):
            raise DomainError(f"bad exactness {self.exactness!r}")

    def __iter__(self) -> Iterator[VertexType]:
        return iter(sorted(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, v) -> bool:
        return VertexType(*v) in self.entries

    def __le__(self, other: "Avc") -> bool:
        return self.entries <= other.entries

    def sorted(self) -> list[VertexType]:
        return sorted(self.entries)

    def __str__(self) -> str:
        sym = "≡" if self.exactness == "realized" else "="
        return f"AVC {sym} {{" + ", ".join(v.pretty for v in self.sorted()) + "}"

    def to_strings(self) -> list[str]:
        return [str(v) for v in self.sorted()]


@dataclass
class TilingStats:
    f: int
    n_square: int
    n_rhombus: int
    v: dict[int, int]

    @property
    def n_vertices(self) -> int:
        return sum(self.v.values())

    @property
    def n_edges(self) -> int:
        return 2 * self.f

    def check(self) -> list[str]:
        """Counting identities for quadrilateral tilings of the sphere that fail."""
        bad = []
        v3 = self.v.get(3, 0)
        if v3 != 8 + sum((h - 4) * n for h, n in self.v.items() if h >= 4):
            bad.append("v3 = 8 + sum (h-4) v_h")
        if self.f != 6 + sum((h - 3) * n for h, n in self.v.items() if h >= 4):
            bad.append("f = 6 + sum (h-3) v_h")
        if self.n_square + self.n_rhombus != self.f:
            bad.append("n_square + n_rhombus = f")
        if self.n_vertices != self.f + 2:
            bad.append("V = f + 2")
        if any(h < 3 for h in self.v):
            bad.append("vertex degree >= 3")
        return bad


def remainder(v, angles: AngleSet) -> float:
    """``2 pi`` minus the angle sum of the (partial) vertex ``v``."""
    a, b, c = v
    return TWO_PI - (a * angles.alpha + b * angles.beta + c * angles.gamma)


_ORDER = {"b": 2, "a": 1, "c": 0}  # beta > alpha > gamma


def _dominated(v: VertexType) -> bool:
    """True if the sum of ``v`` is forced below alpha+beta+gamma by beta > alpha > gamma."""
    ranks = sorted([_ORDER["a"]] * v.a + [_ORDER["b"]] * v.b + [_ORDER["c"]] * v.c, reverse=True)
    ref = [2, 1, 0]
    return all(r <= s for r, s in zip(ranks, ref)) and ranks != ref


def enumerate_degree3_seeds(with_reasons: bool = False):
    """Degree 3 vertex types compatible with the symbolic angle inequalities.

    A type whose corners can be matched one-to-one against beta, alpha, gamma
    with each corner no larger (one strictly smaller) has angle sum below
    alpha+beta+gamma, hence below 2 pi by the alpha beta ... vertex; it is
    excluded.
    """
    seeds, excluded = [], {}
    for a in range(3, -1, -1):
        for b in range(3 - a, -1, -1):
            v = VertexType(a, b, 3 - a - b)
            if _dominated(v):
                excluded[v] = (
                    f"{v.pretty}: angle sum < alpha+beta+gamma <= 2pi under beta > alpha > gamma"
                )
            else:
                seeds.append(v)
    seeds.sort(key=lambda v: (-v.a, -v.b))
    if with_reasons:
        return seeds, excluded
    return seeds


def default_max_degree(angles: AngleSet) -> int:
    return int(math.floor(TWO_PI / angles.gamma)) + 1


def enumerate_vertices(angles: AngleSet, max_degree: int | None = None, tol_vertex: float = TOL_VERTEX) -> Avc:
    """All vertex types of degree in ``[3, max_degree]`` whose angles sum to 2 pi."""
    if max_degree is None:
        max_degree = default_max_degree(angles)
    if max_degree < 3:
        raise DomainError("max_degree must be >= 3")
    out = set()
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            rest = TWO_PI - a * angles.alpha - b * angles.beta
            if rest < -tol_vertex:
                break
            c = round(rest / angles.gamma)
            for cc in (c - 1, c, c + 1):
                if cc < 0 or a + b + cc < 3 or a + b + cc > max_degree:
                    continue
                v = VertexType(a, b, cc)
                if abs(remainder(v, angles)) < tol_vertex:
                    out.add(v)
    return Avc(frozenset(out), "constraint_set")


def counting_lemma_filter(avc: Avc) -> Avc:
    """If no type has more betas than gammas, only types with equal counts survive."""
    if all(v.b <= v.c for v in avc.entries):
        return Avc(frozenset(v for v in avc.entries if v.b == v.c), avc.exactness)
    return avc


@dataclass(frozen=True)
class Feasible:
    multiplicities: dict[VertexType, int]
    stats: TilingStats


def _multiplicity_vectors(entries: list[VertexType], f: int) -> Iterator[tuple[int, ...]]:
    total = f + 2
    alpha_cap, rhombus_cap = 4 * (f - 1), 2 * (f - 1)
    k = len(entries)

    def rec(i, left, sa, sb, sc, acc):
        if i == k - 1:
            v = entries[i]
            sa2, sb2, sc2 = sa + v.a * left, sb + v.b * left, sc + v.c * left
            if sa2 <= alpha_cap and sb2 <= rhombus_cap and sc2 <= rhombus_cap:
                yield acc + (left,)
            return
        v = entries[i]
        for m in range(left + 1):
            na, nb, nc = sa + v.a * m, sb + v.b * m, sc + v.c * m
            if na > alpha_cap or nb > rhombus_cap or nc > rhombus_cap:
                break
            yield from rec(i + 1, left - m, na, nb, nc, acc + (m,))

    if k:
        yield from rec(0, total, 0, 0, 0, ())


def integer_feasibility(avc: Avc | Iterable, f: int) -> list[Feasible]:
    """Vertex multiplicities consistent with global corner counts for ``f`` tiles.

    Every square brings four alphas and every rhombus two betas and two gammas;
    both prototiles must occur. Returned in lexicographic order of the
    multiplicity vector over the sorted entries.
    """
    if f < 2:
        raise DomainError("f must be >= 2")
    entries = sorted(avc.entries if isinstance(avc, Avc) else {VertexType(*v) for v in avc})
    out = []
    for ms in _multiplicity_vectors(entries, f):
        sa = sum(m * v.a for m, v in zip(ms, entries))
        sb = sum(m * v.b for m, v in zip(ms, entries))
        sc = sum(m * v.c for m, v in zip(ms, entries))
        if sa % 4 or sb != sc or sb % 2:
            continue
        ns, nr = sa // 4, sb // 2
        if ns + nr != f or ns == 0 or nr == 0:
            continue
        degrees: dict[int, int] = {}
        for m, v in zip(ms, entries):
            if m:
                degrees[v.degree] = degrees.get(v.degree, 0) + m
        stats = TilingStats(f, ns, nr, dict(sorted(degrees.items())))
        if stats.check():
            continue
        out.append(Feasible({v: m for v, m in zip(entries, ms) if m}, stats))
    return out


def feasible_tile_counts(avc: Avc, max_f: int) -> list[int]:
    """Tile counts ``f <= max_f`` admitting some integer-feasible vertex assignment."""
    entries = sorted(avc.entries)
    if not entries:
        return []
    # reachable (n_vertices, alphas, betas, gammas) over nonnegative combinations
    cap_v = max_f + 2
    states = {(0, 0, 0, 0)}
    for v in entries:
        grown = set(states)
        frontier = set(states)
        while frontier:
            nxt = set()
            for n, sa, sb, sc in frontier:
                s = (n + 1, sa + v.a, sb + v.b, sc + v.c)
                if s[0] <= cap_v and s[1] <= 4 * max_f and s[2] <= 2 * max_f and s[3] <= 2 * max_f and s not in grown:
                    grown.add(s)
                    nxt.add(s)
            frontier = nxt
        states = grown
    counts = set()
    for n, sa, sb, sc in states:
        if sa % 4 or sb != sc or sb % 2 or sa == 0 or sb == 0:
            continue
        f = sa // 4 + sb // 2
        if n == f + 2 and f <= max_f:
            counts.add(f)
    return sorted(counts)
