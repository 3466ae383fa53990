# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# ## A distribution with no moments and a working MGF
# The standard Frechet law has CDF exp(-1/x) on x > 0.  Its mean is already
# infinite, yet E[exp(tX)] is finite for every t <= 0.

# +
import math

import numpy as np
from scipy import special

from mgfconv import Frechet, mgf
from mgfconv.mgf import mgf_via_density, mgf_via_tail
# -

frechet = Frechet()

# For t < 0 there is a Bessel-function closed form, 2 sqrt(-t) K_1(2 sqrt(-t)).
# Compare it with both numerical routes.

print(f"{'t':>6} {'density':>14} {'tail':>14} {'bessel':>14}")
for t in (-4.0, -2.0, -1.0, -0.5, -0.1):
    s = 2 * math.sqrt(-t)
    bessel = s * special.k1(s)
    d = mgf_via_density(frechet, t)
    tl = mgf_via_tail(frechet, t)
    print(f"{t:6.2f} {d.value:14.10f} {tl.value:14.10f} {bessel:14.10f}")

# At t = 0 the answer is 1 by definition, and for any t > 0 the integrand
# exp(tx - 1/x) / x^2 grows without bound.

for t in (0.0, 0.01, 0.1, 1.0):
    v = mgf(frechet, t)
    print(f"t = {t:<5} {v.status.value:<10} {v.diagnostics}")

# Moments, on the other hand, are all infinite: the density decays like x^-2.

x = np.geomspace(1, 1e8, 9)
print(np.column_stack([x, x * frechet.density(x)]))
