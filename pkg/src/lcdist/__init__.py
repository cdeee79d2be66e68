"""Exact statistical distances and comparison inequalities for discrete log-concave pmfs."""

__version__ = "0.1.0"

from .errors import AssumptionError, InstanceTooLarge, PmfError, SupportViolation
from .pmf import (
    DiscretePmf,
    MomentProfile,
    bernoulli,
    binomial,
    cdf,
    dirac,
    discrete_uniform,
    discretized_gaussian,
    geometric,
    is_centered,
    make_pmf,
    moments,
    poisson,
    quantile,
    symmetric_geometric_unit_variance,
    symmetric_poisson_unit_variance,
)
from .logconcave import abs_value_transform, difference_pmf, is_log_concave, random_log_concave
from .distances import (
    bounded_lipschitz,
    chi2,
    f_divergence,
    kl,
    kyfan,
    levy_prokhorov,
    maximal_coupling,
    tv_sum,
    wasserstein,
)
