"""
The earth-map existence curve
=============================

The earth map with parameter c needs a vertex alpha beta gamma^c. Solving
for gamma gives a real function c(gamma); the tiling exists exactly when
c(gamma) hits the integer c.
"""

import math
from pathlib import Path

from sphtile import c_of_gamma, earth_map_angles, export_csv_cgamma, gamma_of_c

print(f"c(pi/2) = {c_of_gamma(math.pi / 2):.6f}")
for c in (2, 3, 4, 10, 50):
    g = gamma_of_c(c)
    a = earth_map_angles(c)
    print(f"c = {c:2d}  gamma = {g / math.pi:.6f}pi  alpha = {a.alpha / math.pi:.6f}pi  "
          f"round trip error {abs(c_of_gamma(g) - c):.1e}")

# %%
# The whole curve as CSV, ready for any plotting tool.
out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)
(out / "c_of_gamma.csv").write_text(export_csv_cgamma(0.005, 0.4995, 1000))
print("wrote", out / "c_of_gamma.csv")
