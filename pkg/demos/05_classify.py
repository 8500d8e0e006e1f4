"""
Classifying by search
=====================

The classifier glues tiles edge to edge, keeping every closed vertex in the
AVC, until the sphere closes. Repeating this over every angle case that
has a degree 3 vertex re-derives the classification up to a tile bound.
"""

from sphtile import RunReport, classify, classify_all, family_point, identify
from sphtile.combinatorics import Avc, vt

# %%
# A single angle case: the sporadic angles admit exactly two tilings.
avc = Avc(frozenset({vt(2, 1, 0), vt(3, 0, 1)}))
for t in classify(family_point("sporadic"), avc, max_f=14):
    print(identify(t), t.f)

# %%
# All cases together, with a run report.
report = RunReport()
for case, t in classify_all(22, report=report):
    print(f"{identify(t):12s} f={t.f:2d}  found at: {case.label}")
print(f"{report.nodes} search nodes, {len(report.cases)} angle cases, {report.wall_time:.1f} s")
