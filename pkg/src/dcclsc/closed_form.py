"""Closed-form Stackelberg equilibria for the three recycling models.

The expressions here are evaluated exactly as published. For models M and R
they coincide with the true backward-induction solution (the numeric solver
in :mod:`dcclsc.oracle` confirms this independently). For the joint model MR
the published expressions carry known transcription defects; they are still
evaluated verbatim, and each constructed MR equilibrium records whether a
stationarity check certifies it under either segment-3 demand variant. The
numeric oracle, not this module, is the ground truth for MR.

One deliberate correction is applied: the published reaction of the retailer
in model M is inconsistent with both the equilibrium expressions and their
endpoint values, so :func:`retailer_reaction_m` implements the maximizer of
the retailer profit derived directly from its first-order condition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import market
from .errors import Singularity
from .market import Equilibrium, MrDemandVariant, make_equilibrium
from .params import DecisionSet, ModelId, Params

#: Default half-width of the guard band around denominator roots of alpha.
DEFAULT_GUARD = 1e-6

#: Real roots of the MR denominator 2*a^3 + 3*a^2 - 17*a + 4 (ascending).
MR_DENOMINATOR_ROOTS: tuple[float, ...] = tuple(
    sorted(float(r.real) for r in np.roots([2.0, 3.0, -17.0, 4.0]) if abs(r.imag) < 1e-12)
)

#: The single MR denominator root inside (0, 1), near 0.2465.
MR_UNIT_ROOT = next(r for r in MR_DENOMINATOR_ROOTS if 0.0 < r < 1.0)


def singularity_distance(model: ModelId, alpha: float) -> float:
    """Distance from alpha to the nearest denominator root of the model."""
    model = ModelId(model)
    if model is ModelId.M:
        return abs(alpha - 4.0)
    if model is ModelId.R:
        return abs(alpha - 2.0 / 9.0)
    return min(abs(alpha - r) for r in MR_DENOMINATOR_ROOTS)


def _guard(model: ModelId, alpha: float, guard: float) -> float:
    dist = singularity_distance(model, alpha)
    if dist < guard:
        raise Singularity(f"model {ModelId(model).value} equilibrium", alpha, dist, guard)
    return dist


def retailer_reaction_m(w: float, p_m: float, params: Params) -> float:
    """Retailer's optimal price in model M given the leader's (w, p_m).

    This is the unique maximizer of the retailer profit, p_r = (1 - alpha +
    p_m + w) / 2. It reproduces both the equilibrium price expression and
    its alpha -> 0 endpoint, which the published reaction form does not.
    """
    return (1.0 - params.alpha + p_m + w) / 2.0


def decision_values_m(alpha: float, c_m: float, delta: float, s: float) -> dict[str, float]:
    """Model-M equilibrium decisions as a function of raw primitives.

    Defined for any alpha except 4, so it doubles as the endpoint-limit
    evaluator at alpha = 0 and alpha = 1.
    """
    den = alpha - 4.0
    p_m = -(2.0 * alpha + 2.0 * c_m + delta * alpha - alpha * c_m + alpha * s) / den
    w = -(4.0 * c_m - alpha + 2.0 * delta * alpha - 2.0 * alpha * c_m
          + 2.0 * alpha * s + alpha ** 2 + 4.0) / (2.0 * den)
    b_m = -(2.0 * delta + alpha - c_m + 2.0 * s) / den
    p_r = -(8.0 * c_m - 7.0 * alpha + 4.0 * delta * alpha - 4.0 * alpha * c_m
            + 4.0 * alpha * s + 3.0 * alpha ** 2 + 12.0) / (4.0 * den)
    return {"p_m": p_m, "p_r": p_r, "w": w, "b_m": b_m}


def decision_values_r(alpha: float, c_m: float, delta: float, s: float) -> dict[str, float]:
    """Model-R equilibrium decisions (poles at alpha = 2/9)."""
    p_m = (2.0 * delta * alpha - 2.0 * c_m - alpha + 8.0 * alpha * c_m
           + 2.0 * alpha * s + 9.0 * alpha ** 2) / (18.0 * alpha - 4.0)
    w = (5.0 * alpha - c_m + delta * alpha + 4.0 * alpha * c_m + alpha * s - 1.0) / (9.0 * alpha - 2.0)
    b_r = alpha * (2.0 * delta - c_m + 2.0 * s + 1.0) / (9.0 * alpha - 2.0)
    p_r = (4.0 * delta + 29.0 * alpha - 6.0 * c_m + 4.0 * s + 18.0 * alpha * c_m
           - 9.0 * alpha ** 2 - 4.0) / (36.0 * alpha - 8.0)
    t = -(4.0 * delta + alpha - 2.0 * c_m + 4.0 * s - 20.0 * delta * alpha
          + 10.0 * alpha * c_m - 20.0 * alpha * s - 9.0 * alpha ** 2) / (4.0 * (9.0 * alpha - 2.0))
    return {"p_m": p_m, "p_r": p_r, "w": w, "b_r": b_r, "t": t}


@dataclass(frozen=True)
class MRHelpers:
    """The three aggregation terms entering the MR equilibrium expressions."""

    x1: float
    x2: float
    x3: float


def mr_helper_values(alpha: float, c_m: float, delta: float, s: float) -> MRHelpers:
    a = alpha
    x1 = (3.0 * delta * a - 2.0 * c_m + 7.0 * a * c_m + 3.0 * a * s
          - 5.0 * delta * a ** 2 + 2.0 * delta * a ** 3 + a ** 2 * c_m
          - 2.0 * a ** 3 * c_m - 5.0 * a ** 2 * s + 2.0 * a ** 3)
    x2 = 2.0 * delta - c_m + 2.0 * s - 10.0 * delta * a + 5.0 * a * c_m
    x3 = -10.0 * a * s + 4.0 * delta * a ** 2 - 2.0 * a ** 2 * c_m + 4.0 * a ** 2 * s
    return MRHelpers(x1=x1, x2=x2, x3=x3)


def mr_helpers(params: Params) -> MRHelpers:
    """Aggregation terms evaluated at validated parameters."""
    return mr_helper_values(params.alpha, params.c_m, params.delta, params.s)


def decision_values_mr(alpha: float, c_m: float, delta: float, s: float) -> dict[str, float]:
    """Model-MR equilibrium decisions, evaluated verbatim as published.

    The common denominator 2a^3 + 3a^2 - 17a + 4 has a root near a = 0.2465;
    callers are expected to guard it. These expressions are known not to be
    stationary points of the joint profits under either demand variant; see
    the certification carried by :func:`equilibrium_mr`.
    """
    a = alpha
    h = mr_helper_values(alpha, c_m, delta, s)
    den = 3.0 * a ** 2 - 17.0 * a + 2.0 * a ** 3 + 4.0
    p_m = -(h.x1 - 2.0 * a + 12.0 * a ** 2 - 6.0 * a ** 3) / den
    w = -(17.0 * a + 2.0 * h.x1 + 4.0 * a ** 2 - 11.0 * a ** 3 + 2.0 * a ** 4 - 4.0) / (2.0 * den)
    b_m = (2.0 * h.x2 + h.x3 - 19.0 * a + 8.0 * delta * a - 18.0 * a * c_m
           + 18.0 * a * s - 4.0 * a ** 2 + 11.0 * a ** 3 + 4.0) / (2.0 * den)
    b_r = a * (5.0 * a + h.x2 - h.x3 + 3.0 * a ** 2 - 4.0 * a ** 3) / den
    p_r = (4.0 * delta + 23.0 * a + 4.0 * s + h.x1 + delta * a - 5.0 * a ** 2
           - 9.0 * a ** 3 + 3.0 * a ** 4 - 4.0) / (2.0 * den)
    t = (a + 1.0) * (a + h.x2 + h.x3 - 6.0 * a ** 2 + 3.0 * a ** 3) / den
    return {"p_m": p_m, "p_r": p_r, "w": w, "b_m": b_m, "b_r": b_r, "t": t}


_VALUE_FUNCTIONS = {
    ModelId.M: decision_values_m,
    ModelId.R: decision_values_r,
    ModelId.MR: decision_values_mr,
}


def decision_values(model: ModelId, alpha: float, c_m: float, delta: float,
                    s: float) -> dict[str, float]:
    """Equilibrium decision values for any model at raw primitives."""
    return _VALUE_FUNCTIONS[ModelId(model)](alpha, c_m, delta, s)


def limits(model: ModelId, params: Params) -> dict[str, tuple[float, float]]:
    """Endpoint limits of each decision variable as alpha -> 0 and alpha -> 1.

    Exposed as explicit evaluators because alpha = 0 and alpha = 1 lie
    outside the admissible parameter domain; the rational expressions
    themselves are continuous there for every model.
    """
    model = ModelId(model)
    f = _VALUE_FUNCTIONS[model]
    at0 = f(0.0, params.c_m, params.delta, params.s)
    at1 = f(1.0, params.c_m, params.delta, params.s)
    return {name: (at0[name], at1[name]) for name in at0}


def equilibrium_m(params: Params, guard: float = DEFAULT_GUARD) -> Equilibrium:
    """Model-M equilibrium with outcome and validity attached.

    Never singular on (0, 1): the only denominator root is alpha = 4.
    """
    dist = _guard(ModelId.M, params.alpha, guard)
    values = decision_values_m(params.alpha, params.c_m, params.delta, params.s)
    decisions = DecisionSet(model=ModelId.M, **values)
    return make_equilibrium(ModelId.M, decisions, params, "closed_form", dist)


def equilibrium_r(params: Params, guard: float = DEFAULT_GUARD) -> Equilibrium:
    """Model-R equilibrium; raises Singularity within ``guard`` of alpha = 2/9."""
    dist = _guard(ModelId.R, params.alpha, guard)
    values = decision_values_r(params.alpha, params.c_m, params.delta, params.s)
    decisions = DecisionSet(model=ModelId.R, **values)
    return make_equilibrium(ModelId.R, decisions, params, "closed_form", dist)


def equilibrium_mr(params: Params, guard: float = DEFAULT_GUARD,
                   variant: MrDemandVariant = MrDemandVariant.ADOPTED,
                   certify: bool = True) -> Equilibrium:
    """Model-MR equilibrium from the published expressions.

    The attached outcome is computed under ``variant`` (utility-consistent
    segment-3 form by default). When ``certify`` is true, a finite-difference
    stationarity check runs under both demand variants and the equilibrium
    records which variant, if any, it satisfies; "none" means the published
    expressions maximize neither profit system and the numeric oracle should
    be treated as authoritative.
    """
    dist = _guard(ModelId.MR, params.alpha, guard)
    values = decision_values_mr(params.alpha, params.c_m, params.delta, params.s)
    decisions = DecisionSet(model=ModelId.MR, **values)
    certified = None
    if certify:
        from . import oracle

        certified = oracle.certify_mr_variant(decisions, params)
    return make_equilibrium(ModelId.MR, decisions, params, "closed_form", dist,
                            variant=variant, certified_demand_variant=certified)


def equilibrium(model: ModelId, params: Params, guard: float = DEFAULT_GUARD,
                variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> Equilibrium:
    """Dispatch to the model-specific closed-form equilibrium."""
    model = ModelId(model)
    if model is ModelId.M:
        return equilibrium_m(params, guard)
    if model is ModelId.R:
        return equilibrium_r(params, guard)
    return equilibrium_mr(params, guard, variant)
