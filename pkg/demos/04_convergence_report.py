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

# ## Boundedness plus weak convergence, graded
# `theorem1_report` tabulates M_n(t) on an interval, grades the two
# hypotheses (bounded M_n, weak convergence to a limit with a finite MGF) and
# MGF convergence itself, then checks that the three grades agree.

# +
from mgfconv import make_family, theorem1_report
from mgfconv.distributions import Normal


def summary(report):
    print(f"family {report.family} on ({report.interval.a}, {report.interval.b})")
    for name in ("condition_a", "condition_b", "mgf_convergence"):
        v = getattr(report, name)
        print(f"  {name:<16} {v.status.value:<10} {v.note}")
    print(f"  consistency      {report.consistency.value}")
# -

# A family where everything works:

summary(theorem1_report(make_family("pareto_to_frechet"), (-1, 0)))

# Point masses at -n run off to minus infinity.  For t < 0, M_n(t) = exp(-t n)
# explodes and there is no proper limit.

summary(theorem1_report(make_family("degenerate_drift"), (-1, 0)))

# Declaring the wrong limit breaks the weak-convergence grade while the MGFs
# still stay bounded.

wrong = make_family("pareto_to_frechet", {"declared_limit": Normal()})
summary(theorem1_report(wrong, (-1, 0)))
