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

# ## The MGF as a tail integral
# Y = exp(tX) is positive, so E[Y] is the integral of P(Y > y) over y > 0.
# With G(t, y) = P(exp(tX) <= y) this gives M(t) without a density.  When the
# F_n are continuous, G_n(t, .) converges to G(t, .) uniformly.

# +
import math

from mgfconv import make_family, theorem2_demo, transformed_cdf
from mgfconv.distributions import Frechet, PointMass
from mgfconv.mgf import mgf_via_tail
# -

# For t < 0 dividing by t flips the inequality, so G(t, y) = P(X >= ln(y)/t).

print(transformed_cdf(Frechet(), -1.0, 0.5), 1 - math.exp(-1 / math.log(2)))

table = theorem2_demo(make_family("pareto_to_frechet"), -1.0, n_set=[1, 10, 100, 1000])
print(f"{'n':>5} {'sup|G_n - G|':>14} {'tail M_n':>14} {'density M_n':>14} {'gap':>9}")
for r in table.rows:
    print(f"{r.n:5d} {r.sup_distance:14.6e} {r.tail_mgf.value:14.10f} "
          f"{r.density_mgf.value:14.10f} {r.route_gap:9.1e}")
print("limit:", table.limit_tail_mgf.value)

# The tail route needs only a CDF, so it also handles atoms, where the left
# limit of F matters for t < 0.

print(mgf_via_tail(PointMass(-3.0), -0.5).value, math.exp(1.5))
