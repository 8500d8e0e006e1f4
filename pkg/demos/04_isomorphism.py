"""
Telling tilings apart
=====================

Two labeled tilings are the same if a bijection of faces and corners
preserves kinds, labels and adjacency, optionally reversing orientation.
A canonical code turns this into byte comparison.
"""

import random

from sphtile import build, canonical_code, is_isomorphic
from sphtile.catalog import fusion_classes, fusion_variants

# %%
# Renumbering faces and rotating their corner lists leaves the code unchanged.
t = build("earth-map:3")
rnd = random.Random(1)
perm = list(range(t.f))
rnd.shuffle(perm)
u = t.relabeled(perm, [rnd.randrange(4) for _ in range(t.f)])
print("same code after relabeling:", canonical_code(u) == canonical_code(t))

# %%
# Grouping the 32 snub-cube triangles into adjacent pairs can be done in 9
# ways. They fall into two classes: the two triangular fusions.
variants = fusion_variants()
for code, members in fusion_classes():
    print(f"class of {len(members)} groupings, code {code.hex()[:16]}...")
print("fusion:1 vs fusion:2 isomorphic:", is_isomorphic(build("fusion:1"), build("fusion:2")))

# %%
# Different groupings in one class give the same tiling.
_, members = fusion_classes()[0]
g1, g2 = variants[members[0]][1], variants[members[1]][1]
print("two groupings of one class isomorphic:", is_isomorphic(g1, g2))
