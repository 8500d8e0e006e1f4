"""
The catalog
===========

Every tiling of the classification has a builder. Each one is checked
against its own angles: Euler's formula, corner labels, vertex sums and
total area.
"""

from sphtile import build, catalog_ids, family_point, realized_avc, stats, verify
from sphtile.tiling import chirality

for fid in catalog_ids(max_c=5):
    t = build(fid)
    st = stats(t)
    rep = verify(t, family_point(fid.angle_family, fid.c))
    avc = ", ".join(v.pretty for v in realized_avc(t))
    print(f"{str(fid):17s} f={st.f:2d} squares={st.n_square:2d} rhombi={st.n_rhombus:2d} "
          f"verified={rep.passed}  chiral={chirality(t)}  vertices: {avc}")

# %%
# A full report lists each check.
print(verify(build("quad-subdivision"), family_point("quad_subdivision")))

# %%
# Tilings serialize to a small JSON document.
text = build("cube").to_json()
print(text[:200], "...")
