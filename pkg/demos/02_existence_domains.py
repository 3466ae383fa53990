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

# ## Where does the MGF exist?
# `existence_scan` labels each t on a grid as finite, divergent or
# inconclusive.  Divergence is decided from the growth of truncated integrals,
# never from a single large number.

# +
import numpy as np

from mgfconv import existence_scan
from mgfconv.distributions import Exponential, Frechet, Lognormal, Normal, ParetoSeq, Uniform
# -

grid = np.round(np.linspace(-2, 2, 9), 12)
models = [Frechet(), Lognormal(), ParetoSeq(3), Exponential(), Normal(), Uniform()]

print(f"{'model':>24} " + " ".join(f"{t:>5g}" for t in grid))
for m in models:
    scan = existence_scan(m, grid)
    print(f"{m.model_id:>24} " + " ".join(f"{s.value[:3]:>5}" for s in scan.values()))

# Heavy right tails (Frechet, lognormal, Pareto) confine the domain to t <= 0.
# The exponential law stops at its rate, t < 1.  Light tails and bounded
# support give the whole line.
