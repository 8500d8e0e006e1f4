"""
Solving for prototile angles
============================

A square with angle alpha and a rhombus with angles beta, gamma share one
edge length x. Edge compatibility ties the three angles together, so two
independent vertex types are enough to pin them down.
"""

import math

from sphtile import solve_vertex_system, vt
from sphtile.geometry import FAMILY_SYSTEMS

# %%
# Each named family is a pair of vertex types (counts of alpha, beta, gamma).
for family, types in FAMILY_SYSTEMS.items():
    sol = solve_vertex_system([vt(*k) for k in types])
    print(f"{family:17s} {sol.kind:6s}", end=" ")
    if sol.kind == "point":
        print(sol.point.in_pi())
    else:
        print("one free parameter")

# %%
# The fusion angles satisfy beta = 2 gamma: a rhombus splits into two of the
# snub cube's triangles.
a = solve_vertex_system([vt(1, 2, 0), vt(1, 1, 2)]).point
print("beta - 2 gamma =", a.beta - 2 * a.gamma)

# %%
# Some pairs of vertices cannot coexist at all.
for pair in ([vt(3, 0, 0), vt(0, 2, 1)], [vt(2, 1, 0), vt(0, 2, 1)]):
    print(" + ".join(v.pretty for v in pair), "->", solve_vertex_system(pair).kind)

# %%
# A single vertex type leaves a curve. The cube lives on the alpha beta gamma curve.
curve = solve_vertex_system([vt(1, 1, 1)]).parameterization
for g in (0.40, 0.45, 0.47, 0.49):
    pt = curve.sample(g * math.pi)[0]
    print(f"gamma = {g:.2f}pi  alpha = {pt.alpha / math.pi:.6f}pi  beta = {pt.beta / math.pi:.6f}pi")
