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

# ## Standardized exponential sums
# Z_n = (S_n - n) / sqrt(n), where S_n is a sum of n unit exponentials, has
# M_n(t) = exp(-t sqrt(n)) (1 - t/sqrt(n))^-n for t < sqrt(n).  The limit is
# the standard normal MGF exp(+t^2/2).

# +
import math

from mgfconv import make_family, sample
from mgfconv.distributions import CltExponential, clt_exponential_mgf
from mgfconv.montecarlo import empirical_cdf_distance, empirical_mgf
# -

ts = (-0.5, -0.25, 0.25, 0.5)
for n in (25, 100, 400, 1600):
    gap = max(abs(clt_exponential_mgf(n, t).value - math.exp(t * t / 2)) for t in ts)
    print(f"n = {n:5d}  max |M_n - exp(t^2/2)| = {gap:.4e}   x sqrt(n) = {gap * math.sqrt(n):.4f}")

# The error times sqrt(n) settles, so the rate is 1/sqrt(n).  The family
# carries a note about the sign of the limiting exponent:

print(make_family("clt_exponential").notes[0])

# A seeded Monte Carlo run agrees with the exact law.

batch = sample(CltExponential(25), 200_000, seed=1)
print("KS distance:", empirical_cdf_distance(batch, CltExponential(25)))
est = empirical_mgf(batch, 0.5)
print(f"M_25(0.5): {est.value:.5f} +/- {est.error_estimate:.5f} "
      f"(exact {clt_exponential_mgf(25, 0.5).value:.5f})")
