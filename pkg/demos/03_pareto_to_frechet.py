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

# ## Pareto maxima approach the Frechet law, MGFs included
# F_n(x) = (1 - 1/(n x))^n on x > 1/n is the law of the scaled maximum of n
# unit Pareto variables.  It converges to exp(-1/x), and for t < 0 the MGFs
# converge too.

# +
from mgfconv import make_family, mgf, sup_distance
from mgfconv.distributions import Frechet
# -

family = make_family("pareto_to_frechet")
limit = Frechet()
ts = (-2.0, -1.0, -0.5)

print(f"{'n':>6} {'sup|F_n - F|':>14} " + " ".join(f"{'gap t=' + str(t):>14}" for t in ts))
for n in family.index_set:
    member = family.member(n)
    d = sup_distance(member, limit)
    gaps = [abs(mgf(member, t).value - mgf(limit, t).value) for t in ts]
    print(f"{n:6d} {d.value:14.6e} " + " ".join(f"{g:14.6e}" for g in gaps))

# Both columns shrink roughly like 1/n.  Each tenfold increase in n buys one
# digit.
