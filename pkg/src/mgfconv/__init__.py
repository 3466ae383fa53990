"""Numerical one-sided moment generating functions and their convergence."""

from .convergence import (
    ConditionVerdict,
    ConvergenceReport,
    LabConfig,
    Verdict,
    check_condition_a,
    check_condition_b,
    sup_distance,
    theorem1_report,
    theorem2_demo,
)
from .distributions import (
    CltExponential,
    DistributionFamily,
    DistributionModel,
    Frechet,
    Lognormal,
    Normal,
    ParetoSeq,
    PointMass,
    Uniform,
    clt_exponential_mgf,
    frechet_cdf,
    load_tabulated,
    make_family,
    pareto_seq_cdf,
    quantile,
)
from .mgf import Interval, existence_scan, mgf, mgf_via_density, mgf_via_tail, transformed_cdf
from .montecarlo import empirical_cdf_distance, empirical_mgf, sample
from .quadrature import IntegralOutcome, QuadratureConfig, Status, detect_divergence, integrate
from .values import MgfValue, Route

__version__ = "0.1.0"
