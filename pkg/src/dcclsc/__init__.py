"""Pricing equilibria for dual-channel closed-loop supply chains.

A single manufacturer sells new items directly and through one retailer,
and used items flow back for remanufacturing under one of three recycling
frameworks: manufacturer-led (M), retailer-led (R), or joint (MR). The
package evaluates the published closed-form Stackelberg equilibria of the
three frameworks, recomputes them independently by numeric backward
induction and Monte Carlo choice simulation, and audits every published
ordering, monotonicity, threshold, and uniqueness claim numerically.
"""

from .closed_form import (
    DEFAULT_GUARD,
    MRHelpers,
    decision_values,
    equilibrium,
    equilibrium_m,
    equilibrium_mr,
    equilibrium_r,
    limits,
    mr_helpers,
    retailer_reaction_m,
    singularity_distance,
)
from .errors import BoxBoundary, DcclscError, NonConcave, OutOfDomain, Singularity
from .market import (
    DemandProfile,
    Equilibrium,
    MrDemandVariant,
    ProfitProfile,
    ValidityReport,
    demand,
    profits,
    utilities,
    validity,
)
from .oracle import (
    MonteCarloDemand,
    OracleConfig,
    SocReport,
    best_response_retailer,
    certify_mr_variant,
    check_soc,
    monte_carlo_demand,
    solve_stackelberg_numeric,
    stationarity_residuals,
)
from .params import DecisionSet, ModelId, Params, decision_fields, validate_params

__version__ = "0.1.0"

__all__ = [
    "BoxBoundary",
    "DEFAULT_GUARD",
    "DcclscError",
    "DecisionSet",
    "DemandProfile",
    "Equilibrium",
    "ModelId",
    "MonteCarloDemand",
    "MRHelpers",
    "MrDemandVariant",
    "NonConcave",
    "OracleConfig",
    "OutOfDomain",
    "Params",
    "ProfitProfile",
    "Singularity",
    "SocReport",
    "ValidityReport",
    "best_response_retailer",
    "certify_mr_variant",
    "check_soc",
    "decision_fields",
    "decision_values",
    "demand",
    "equilibrium",
    "equilibrium_m",
    "equilibrium_mr",
    "equilibrium_r",
    "limits",
    "monte_carlo_demand",
    "mr_helpers",
    "profits",
    "retailer_reaction_m",
    "singularity_distance",
    "solve_stackelberg_numeric",
    "stationarity_residuals",
    "utilities",
    "validate_params",
    "validity",
]
