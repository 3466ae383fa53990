"""Frozen oracle values.

Each constant was computed independently of the package before the code it
checks was written, with mpmath at 30 digits:

* Frechet MGF at t < 0: 2 sqrt(-t) K_1(2 sqrt(-t)), cross-checked against
  brute-force mpmath.quad of x^-2 exp(-1/x + t x) over (0, inf).
* Pareto member n=1 at t=-1: exp(-1) - E_1(1), cross-checked by mpmath.quad.
* Pareto-member gaps |M_n(t) - M(t)|: mpmath.quad of the member density.
* CLT gaps: exact closed forms in mpmath.
* Sup-distances: numpy grid search over 2*10^5 linear + geometric points.
"""

import math

import pytest

FRECHET_MGF = {
    -2.0: 0.139667474015293142857519612486,
    -1.0: 0.279731763633044854569197614071,
    -0.5: 0.444342523632236041339078102861,
}
PARETO1_MGF_AT_MINUS1 = 0.148495506775922047918359994701

# |M_n(t) - M_frechet(t)| for n = 10, 100, 1000
PARETO_GAPS = {
    -2.0: (0.013755515, 0.001394817, 0.00013964915),
    -1.0: (0.014043983, 0.0013993761, 0.00013987319),
    -0.5: (0.011248132, 0.0011123096, 0.00011110022),
}

# max over t in {-0.5, -0.25, 0.25, 0.5} of |M_n(t) - exp(t^2/2)|
CLT_MAX_GAP = {25: 0.01025910666, 100: 0.004916532061, 400: 0.002408449573}
CLT_BOUND_400 = 2.5e-3

SUP_F1_FRECHET = math.exp(-1.0)
SUP_F1000_FRECHET = 0.0002707608196193534
SUP_PARETO_VS_NORMAL_1000 = 0.5824875315154806


@pytest.fixture(scope="session")
def frechet():
    from mgfconv.distributions import Frechet
    return Frechet()
