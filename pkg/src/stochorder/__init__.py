"""Exact stochastic orders, boundedness criteria and distances for discrete laws."""

from .dist import (ClosedFormDist, DiscreteDist, InvalidDistribution, QuantileCurve, cdf,
                   dist_from_isf, hl_maximal, isf, mean, moment, moment_via_isf, point_mass,
                   power, quantile, sample, survival)
from .families import BuiltinFamily, FiniteFamily, Report, Verdict, diagnose
from .metrics import prohorov, prohorov_bruteforce, wasserstein, wasserstein_lp_oracle
from .orders import (comonotone_coupling, hl_st_check, icx_le, icx_le_quantile_oracle,
                     least_icx_upper_bound, least_st_upper_bound, st_le)

__all__ = [
    "ClosedFormDist", "DiscreteDist", "InvalidDistribution", "QuantileCurve", "cdf",
    "dist_from_isf", "hl_maximal", "isf", "mean", "moment", "moment_via_isf", "point_mass",
    "power", "quantile", "sample", "survival",
    "BuiltinFamily", "FiniteFamily", "Report", "Verdict", "diagnose",
    "prohorov", "prohorov_bruteforce", "wasserstein", "wasserstein_lp_oracle",
    "comonotone_coupling", "hl_st_check", "icx_le", "icx_le_quantile_oracle",
    "least_icx_upper_bound", "least_st_upper_bound", "st_le",
]
