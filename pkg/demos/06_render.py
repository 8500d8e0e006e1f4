"""
Putting tilings on the sphere
=============================

Embedding walks each face with edge length x, turning by the labeled
corners. If the angles are inconsistent, some vertex is reached twice at
different places and the embedding fails.
"""

from pathlib import Path

from sphtile import AngleSet, ClosureFailure, build, embed, export_off, export_svg, family_point
from sphtile.embedding import face_areas

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

# %%
# Earth map with c = 3: 22 faces, closure residual near machine precision.
t = build("earth-map:3")
e = embed(t, family_point("earth_map", 3))
print(f"closure {e.closure_residual:.1e}, total area {face_areas(e, t).sum():.12f}")
(out / "earth-map-3.svg").write_text(export_svg(e, t))
(out / "earth-map-3.off").write_text(export_off(e, t))

# %%
# Every catalog picture.
for name, fam in [("cube", "cube"), ("sporadic:1", "sporadic"), ("sporadic:2", "sporadic"),
                  ("fusion:1", "fusion"), ("fusion:2", "fusion"), ("quad-subdivision", "quad_subdivision")]:
    t = build(name)
    (out / f"{name.replace(':', '-')}.svg").write_text(export_svg(embed(t, family_point(fam)), t))
print("wrote", sorted(p.name for p in out.glob("*.svg")))

# %%
# Nudging beta breaks edge compatibility and the cube no longer closes.
a = family_point("cube")
try:
    embed(build("cube"), AngleSet(a.alpha, a.beta + 1e-2, a.gamma, a.x))
except ClosureFailure as exc:
    print("rejected:", exc)
