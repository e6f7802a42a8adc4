"""Choice-model primitives: utilities, segment demands, profits, validity.

Segment indices follow a fixed convention. Segment 1 is primary demand in
the manufacturer's direct channel, segment 2 is primary demand through the
retailer, segment 3 is trade-in volume collected under the manufacturer's
subsidy (M, MR) or the retailer's subsidy (R), and segment 4 (MR only) is
trade-in volume collected under the retailer's subsidy.

Demands are the closed-form masses implied by utility maximization over
valuations v, u ~ Uniform[0, 1] and are returned UNCLAMPED: the equilibrium
algebra downstream is derived from the unclamped linear forms, and silent
clamping would mask validity violations. Range membership is reported via
``ValidityReport`` instead.

For the joint model the segment-3 mass has two published variants that
contradict each other; the utility-consistent form is the default and the
other is kept behind an explicit ``MrDemandVariant.AS_PRINTED`` switch so
numeric audits can adjudicate between them.

The ``segment_masses`` and ``profit_values`` kernels accept scalars or numpy
arrays; the numeric solver evaluates them over whole search grids at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import OutOfDomain, Singularity, Violation
from .params import DecisionSet, ModelId, Params

#: Guard on alpha * (1 - alpha) below which segment masses are not evaluated.
ALPHA_PRODUCT_GUARD = 1e-12


class MrDemandVariant(str, Enum):
    """Which segment-3 mass the joint model uses.

    ADOPTED:    q3 = (b_m - b_r) / (1 - alpha), the form consistent with the
                utility thresholds (and the only one nonnegative at b_m = b_r).
    AS_PRINTED: q3 = 1 - (b_m - b_r) / (1 - alpha), the conflicting published
                variant, retained for adjudication only.
    """

    ADOPTED = "adopted"
    AS_PRINTED = "as_printed"


@dataclass(frozen=True)
class DemandProfile:
    """Unclamped segment masses; q4 is present only for the joint model."""

    q1: float
    q2: float
    q3: float
    q4: float | None = None

    def as_dict(self) -> dict[str, float]:
        out = {"q1": self.q1, "q2": self.q2, "q3": self.q3}
        if self.q4 is not None:
            out["q4"] = self.q4
        return out


@dataclass(frozen=True)
class ProfitProfile:
    """Manufacturer and retailer profits; the chain profit is their exact sum."""

    pi_m: float
    pi_r: float

    @property
    def pi_s(self) -> float:
        return self.pi_m + self.pi_r

    def as_dict(self) -> dict[str, float]:
        return {"pi_m": self.pi_m, "pi_r": self.pi_r, "pi_s": self.pi_s}


@dataclass(frozen=True)
class ValidityCheck:
    """One constraint with its signed slack (positive = strictly satisfied)."""

    name: str
    slack: float
    informational: bool = False

    @property
    def ok(self) -> bool:
        return self.slack > 0.0


@dataclass(frozen=True)
class ValidityReport:
    """All per-constraint flags for one decision set.

    ``interior`` is True iff every non-informational check holds strictly;
    margin checks are informational and never gate interiority.
    """

    checks: tuple[ValidityCheck, ...]

    @property
    def interior(self) -> bool:
        return all(c.ok for c in self.checks if not c.informational)

    def check(self, name: str) -> ValidityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failing(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.informational and not c.ok)

    def as_dict(self) -> dict:
        return {
            "interior": self.interior,
            "checks": {c.name: {"ok": c.ok, "slack": c.slack, "informational": c.informational}
                       for c in self.checks},
        }


def utilities(model: ModelId, decisions: DecisionSet, v: float, u: float,
              params: Params) -> dict[str, float]:
    """Per-segment utilities of a (v, u) customer pair.

    v is the primary customer's valuation, u the replacement customer's
    return-cost valuation; both must lie in [0, 1].
    """
    violations = []
    if not 0.0 <= v <= 1.0:
        violations.append(Violation("v", v, "valuations live on [0, 1]"))
    if not 0.0 <= u <= 1.0:
        violations.append(Violation("u", u, "valuations live on [0, 1]"))
    if violations:
        raise OutOfDomain(violations)
    model = ModelId(model)
    a = params.alpha
    out = {"U1": a * v - decisions.p_m, "U2": v - decisions.p_r}
    if model is ModelId.M:
        out["U3"] = decisions.b_m - u
    elif model is ModelId.R:
        out["U3"] = decisions.b_r - a * u
    else:
        out["U3"] = decisions.b_m - u
        out["U4"] = decisions.b_r - a * u
    return out


def choice_segment(model: ModelId, decisions: DecisionSet, v: float, u: float,
                   params: Params) -> tuple[int, int]:
    """Resolve the choice of one (v, u) pair: (primary segment, trade-in segment).

    Returns segment 0 for non-participation. Tie-breaking is fixed for
    determinism: channel indifference resolves to the direct channel,
    subsidy indifference to the manufacturer's subsidy, and zero-utility
    customers participate.
    """
    us = utilities(model, decisions, v, u, params)
    if us["U1"] >= us["U2"] and us["U1"] >= 0.0:
        primary = 1
    elif us["U2"] > us["U1"] and us["U2"] >= 0.0:
        primary = 2
    else:
        primary = 0
    model = ModelId(model)
    if model is ModelId.MR:
        if us["U3"] >= us["U4"] and us["U3"] >= 0.0:
            tradein = 3
        elif us["U4"] > us["U3"] and us["U4"] >= 0.0:
            tradein = 4
        else:
            tradein = 0
    else:
        tradein = 3 if us["U3"] >= 0.0 else 0
    return primary, tradein


def segment_masses(model: ModelId, p_m, p_r, b_m, b_r, alpha: float,
                   variant: MrDemandVariant = MrDemandVariant.ADOPTED):
    """Raw segment-mass kernel; broadcasts over array-valued decisions.

    Returns (q1, q2, q3, q4) with q4 = None outside the joint model.
    """
    model = ModelId(model)
    ap = alpha * (1.0 - alpha)
    if ap < ALPHA_PRODUCT_GUARD:
        raise Singularity("alpha*(1-alpha) in segment masses", alpha, ap, ALPHA_PRODUCT_GUARD)
    q1 = (alpha * p_r - p_m) / ap
    q2 = 1.0 - (p_r - p_m) / (1.0 - alpha)
    if model is ModelId.M:
        return q1, q2, b_m, None
    if model is ModelId.R:
        return q1, q2, b_r / alpha, None
    gap = (b_m - b_r) / (1.0 - alpha)
    q3 = gap if MrDemandVariant(variant) is MrDemandVariant.ADOPTED else 1.0 - gap
    q4 = (b_r - alpha * b_m) / ap
    return q1, q2, q3, q4


def profit_values(model: ModelId, p_m, p_r, w, b_m, b_r, t, params: Params,
                  variant: MrDemandVariant = MrDemandVariant.ADOPTED,
                  clamp: bool = False):
    """Raw profit kernel; broadcasts over array-valued decisions.

    Returns (pi_m, pi_r). With ``clamp`` the segment masses are clipped to
    [0, 1] before entering the profit terms (never the default; clamping is
    an explicit mode of the numeric solver only).
    """
    model = ModelId(model)
    q1, q2, q3, q4 = segment_masses(model, p_m, p_r, b_m, b_r, params.alpha, variant)
    if clamp:
        q1 = np.clip(q1, 0.0, 1.0)
        q2 = np.clip(q2, 0.0, 1.0)
        q3 = np.clip(q3, 0.0, 1.0)
        q4 = np.clip(q4, 0.0, 1.0) if q4 is not None else None
    c_m, delta, s = params.c_m, params.delta, params.s
    base_m = (p_m - c_m) * q1 + (w - c_m) * q2
    base_r = (p_r - w) * q2
    if model is ModelId.M:
        return base_m + (delta + s + p_m - c_m - b_m) * q3, base_r
    if model is ModelId.R:
        pi_m = base_m + (delta + s + w - c_m - t) * q3
        pi_r = base_r + (p_r + t - w - b_r) * q3
        return pi_m, pi_r
    pi_m = (base_m
            + (delta + s + p_m - c_m - b_m) * q3
            + (delta + s + w - c_m - t) * q4)
    pi_r = base_r + (p_r + t - w - b_r) * q4
    return pi_m, pi_r


def demand(model: ModelId, decisions: DecisionSet, params: Params,
           variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> DemandProfile:
    """Closed-form segment masses for one decision set (unclamped)."""
    model = ModelId(model)
    q1, q2, q3, q4 = segment_masses(model, decisions.p_m, decisions.p_r,
                                    decisions.b_m, decisions.b_r, params.alpha, variant)
    return DemandProfile(q1=float(q1), q2=float(q2), q3=float(q3),
                         q4=float(q4) if q4 is not None else None)


def profits(model: ModelId, decisions: DecisionSet, params: Params,
            variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> ProfitProfile:
    """Manufacturer and retailer profits at one decision set."""
    d = decisions
    pi_m, pi_r = profit_values(model, d.p_m, d.p_r, d.w, d.b_m, d.b_r, d.t,
                               params, variant)
    return ProfitProfile(pi_m=float(pi_m), pi_r=float(pi_r))


def _range_check(name: str, value: float) -> ValidityCheck:
    # slack is the distance into [0, 1]; negative outside, zero on the boundary
    return ValidityCheck(name=name, slack=min(value, 1.0 - value))


def validity(model: ModelId, decisions: DecisionSet, params: Params,
             variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> ValidityReport:
    """Evaluate every interiority constraint with signed slacks.

    Never raises on constraint violations; the report carries them. Checks
    cover segment masses in [0, 1], the ordering of the primary-channel
    valuation thresholds, trade-in thresholds in [0, 1], t >= b_r where the
    model has a transfer price, and (informationally) channel margins.
    """
    model = ModelId(model)
    q = demand(model, decisions, params, variant)
    a = params.alpha
    d = decisions
    checks: list[ValidityCheck] = [
        _range_check("q1_in_unit", q.q1),
        _range_check("q2_in_unit", q.q2),
        _range_check("q3_in_unit", q.q3),
    ]
    if q.q4 is not None:
        checks.append(_range_check("q4_in_unit", q.q4))

    lower = d.p_m / a
    upper = (d.p_r - d.p_m) / (1.0 - a)
    checks.append(ValidityCheck("primary_threshold_nonneg", lower))
    checks.append(ValidityCheck("primary_thresholds_ordered", upper - lower))
    checks.append(ValidityCheck("primary_threshold_below_one", 1.0 - upper))

    if model is ModelId.M:
        checks.append(_range_check("tradein_threshold_in_unit", d.b_m))
    elif model is ModelId.R:
        checks.append(_range_check("tradein_threshold_in_unit", d.b_r / a))
    else:
        gap = (d.b_m - d.b_r) / (1.0 - a)
        checks.append(_range_check("tradein_split_in_unit", gap))
        checks.append(_range_check("tradein_threshold_in_unit", d.b_r / a))
        checks.append(ValidityCheck("tradein_thresholds_ordered", d.b_r / a - gap))

    if model in (ModelId.R, ModelId.MR):
        checks.append(ValidityCheck("transfer_covers_subsidy", d.t - d.b_r))

    c_m = params.c_m
    margins = [("margin_direct", d.p_m - c_m), ("margin_wholesale", d.w - c_m),
               ("margin_retail", d.p_r - d.w)]
    if model is ModelId.M:
        margins.append(("margin_tradein_m", params.delta + params.s + d.p_m - c_m - d.b_m))
    elif model is ModelId.R:
        margins.append(("margin_tradein_m", params.delta + params.s + d.w - c_m - d.t))
        margins.append(("margin_tradein_r", d.p_r + d.t - d.w - d.b_r))
    else:
        margins.append(("margin_tradein_m", params.delta + params.s + d.p_m - c_m - d.b_m))
        margins.append(("margin_tradein_m_via_r", params.delta + params.s + d.w - c_m - d.t))
        margins.append(("margin_tradein_r", d.p_r + d.t - d.w - d.b_r))
    checks.extend(ValidityCheck(name, slack, informational=True) for name, slack in margins)
    return ValidityReport(checks=tuple(checks))


@dataclass(frozen=True)
class Equilibrium:
    """A decision set bundled with its recomputed market outcome.

    ``provenance`` records whether the decisions came from the closed-form
    expressions or from the numeric backward-induction solver. Demands,
    profits and validity are always recomputed from the decisions at
    construction (via :func:`make_equilibrium`), never stored independently.

    ``certified_demand_variant`` is set for the joint model only: it names
    the segment-3 variant under which the decision set passes a stationarity
    check ("adopted", "as_printed"), or "none" when neither does.
    """

    model: ModelId
    params: Params
    decisions: DecisionSet
    demands: DemandProfile
    profit: ProfitProfile
    validity: ValidityReport
    provenance: str
    singularity_distance: float
    demand_variant: MrDemandVariant | None = None
    certified_demand_variant: str | None = None

    def as_dict(self) -> dict:
        out = {
            "model": self.model.value,
            "provenance": self.provenance,
            "params": self.params.as_dict(),
            "decisions": dict(self.decisions.as_dict()),
            "demands": self.demands.as_dict(),
            "profits": self.profit.as_dict(),
            "validity": self.validity.as_dict(),
            "singularity_distance": self.singularity_distance,
        }
        if self.demand_variant is not None:
            out["demand_variant"] = self.demand_variant.value
        if self.certified_demand_variant is not None:
            out["certified_demand_variant"] = self.certified_demand_variant
        return out


def make_equilibrium(model: ModelId, decisions: DecisionSet, params: Params,
                     provenance: str, singularity_distance: float,
                     variant: MrDemandVariant = MrDemandVariant.ADOPTED,
                     certified_demand_variant: str | None = None) -> Equilibrium:
    """Package decisions with their freshly computed outcome and validity."""
    model = ModelId(model)
    return Equilibrium(
        model=model,
        params=params,
        decisions=decisions,
        demands=demand(model, decisions, params, variant),
        profit=profits(model, decisions, params, variant),
        validity=validity(model, decisions, params, variant),
        provenance=provenance,
        singularity_distance=singularity_distance,
        demand_variant=MrDemandVariant(variant) if model is ModelId.MR else None,
        certified_demand_variant=certified_demand_variant,
    )
