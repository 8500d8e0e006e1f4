"""
Which vertices can occur?
=========================

At fixed angles, a vertex is a multiset of corners summing to 2 pi. The
admissible vertex combinations (AVC) bound what any tiling can look like,
and double counting over faces bounds the tile counts.
"""

from sphtile import Avc, enumerate_degree3_seeds, enumerate_vertices, family_point, feasible_tile_counts
from sphtile import integer_feasibility, vt

# %%
# Every tiling has a degree 3 vertex; these are the candidates.
print("degree 3 seeds:", ", ".join(v.pretty for v in enumerate_degree3_seeds()))

# %%
# At the fusion angles only two vertex types survive.
a = family_point("fusion")
avc = enumerate_vertices(a)
print("fusion AVC:", ", ".join(v.pretty for v in avc), f"({avc.exactness})")
print("tile counts up to 40:", feasible_tile_counts(avc, 40))

# %%
# For an earth map with c = 3 the vertex counts are forced: 8 of type
# alpha beta gamma^c and 8c - 8 of type beta^2 gamma.
c = 3
earth = Avc(frozenset({vt(0, 2, 1), vt(1, 1, c)}))
for sol in integer_feasibility(earth, 8 * c - 2):
    print({v.pretty: m for v, m in sol.multiplicities.items()}, sol.stats)
