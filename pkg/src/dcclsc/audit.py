"""Numeric audit of the published ordering, monotonicity, threshold,
uniqueness, and endpoint claims.

Each audit encodes one published claim: its applicability condition, the
claimed conclusion, and the published threshold expressions, all evaluated
verbatim. Conclusions are then tested against the closed-form expressions on
an alpha grid (the claims are statements about those expressions, so the
numeric solver is used only for the uniqueness theorems). Disagreements are
reported, never corrected: several published claims demonstrably fail, and
surfacing them is the point of this module.

Verdicts are bit-reproducible functions of (claim id, params, grid, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_form, oracle
from .errors import Singularity
from .market import MrDemandVariant
from .params import ModelId, Params

#: Default audit grids: the manufacturer-led model is evaluated across the
#: whole preference range; the other two start above their denominator poles.
GRID_STEP = 0.01
MONOTONE_TOL = 1e-9
ENDPOINT_TOL = 1e-9


def default_alpha_grid(model: ModelId) -> tuple[float, ...]:
    model = ModelId(model)
    lo, hi = (0.01, 0.99) if model is ModelId.M else (0.30, 0.95)
    n = int(math.floor((hi - lo) / GRID_STEP + 1e-9)) + 1
    grid = (lo + k * GRID_STEP for k in range(n))
    return tuple(a for a in grid
                 if closed_form.singularity_distance(model, a) > closed_form.DEFAULT_GUARD)


@dataclass(frozen=True)
class Thresholds:
    """All published cost and preference thresholds, evaluated at one Params.

    ``alpha_star`` separates the price ordering of the joint model and
    ``alpha_hat`` its subsidy ordering; the ``prop*`` maps carry the c_m
    thresholds governing each decision variable's claimed monotonicity in
    alpha. Values may lie outside (0, 1); that is meaningful (no interior
    crossing), not an error.
    """

    alpha_star: float
    alpha_hat: float
    prop2: dict[str, float]
    prop4: dict[str, float]
    prop7: dict[str, float]


def thresholds(params: Params) -> Thresholds:
    """Evaluate every published threshold expression at ``params``."""
    c_m, d, s = params.c_m, params.delta, params.s
    den_star = 3.0 * c_m - 3.0 * d - 3.0 * s + 21.0
    den_hat = 10.0 * d - 5.0 * c_m + 10.0 * s + 2.0
    for name, den in (("price-ordering threshold", den_star),
                      ("subsidy-ordering threshold", den_hat)):
        if abs(den) < 1e-12:
            raise Singularity(name, params.alpha, abs(den), 1e-12)
    return Thresholds(
        alpha_star=(6.0 * c_m - 4.0 * d - 4.0 * s + 4.0) / den_star,
        alpha_hat=(5.0 * c_m - 10.0 * d - 10.0 * s + 8.0) / den_hat,
        prop2={
            "w": 2.0 * d + 2.0 * s + 1.0,
            "b_m": 2.0 * d + 2.0 * s + 4.0,
            "p_m": 2.0 * d + 2.0 * s + 4.0,
            "p_r": (4.0 * (d + s) - 1.0) / 2.0,
        },
        prop4={
            "w": (5.0 + d + s) / 4.0,
            "b_r": 2.0 * d + 2.0 * s + 1.0,
            "p_m": (2.0 * d + 2.0 * s + 8.0) / 3.0,
            "p_r": (4.0 * (d + s) - 1.0) / 2.0,
            "t": (4.0 * (d + s) + 9.0) / 2.0,
        },
        prop7={
            "w": (10.0 * d + 6.0 * s + 8.0) / 9.0,
            "b_m": 2.0 * d + 2.0 * s + 1.0,
            "b_r": (8.0 * d + 8.0 * s + 5.0) / 5.0,
            "p_m": (6.0 * d + 6.0 * s + 4.0) / 7.0,
            "p_r": (6.0 * d + 6.0 * s + 4.0) / 5.0,
            "t": (6.0 * d + 6.0 * s + 9.0) / 4.0,
        },
    )


#: Alternate published threshold for the retailer subsidy claim: the proof
#: block prints a different expression than the proposition text. Both are
#: evaluated and reported.
def prop4_subsidy_alternate_threshold(params: Params) -> float:
    return (2.0 * params.delta + 2.0 * params.s + 8.0) / 3.0


@dataclass(frozen=True)
class AuditVerdict:
    """One claim, its numeric test, and whether they agree.

    ``condition_value`` is the signed slack of the claim's applicability
    inequality (positive means the primary branch of the claim applies);
    None for unconditional claims. ``evidence`` is a grid of (alpha, value)
    pairs for whatever quantity the claim is about.
    """

    prop_id: str
    sub_id: str | None
    variable: str | None
    params: Params
    condition_value: float | None
    claimed: str
    observed: str
    agree: bool
    evidence: tuple[tuple[float, float], ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "prop_id": self.prop_id,
            "sub_id": self.sub_id,
            "variable": self.variable,
            "params": self.params.as_dict(),
            "condition_value": self.condition_value,
            "claimed": self.claimed,
            "observed": self.observed,
            "agree": self.agree,
            "evidence": [list(pair) for pair in self.evidence],
            "notes": list(self.notes),
        }


# ordering claims: (model, threshold kind, direction above the threshold)
# thresh kind: None (unconditional), "fixed_2_9", "alpha_star", "alpha_hat"
_ORDERING = {
    "P1": (ModelId.M, ("p_m", "p_r"), None, "less_than"),
    "P3": (ModelId.R, ("p_m", "p_r"), "fixed_2_9", "less_than"),
    "P5": (ModelId.MR, ("p_m", "p_r"), "alpha_star", "less_than"),
    "P6": (ModelId.MR, ("b_m", "b_r"), "alpha_hat", "greater_than"),
}

_OPPOSITE = {"less_than": "greater_than", "greater_than": "less_than"}


def _ordering_threshold(kind: str | None, params: Params) -> float | None:
    if kind is None:
        return None
    if kind == "fixed_2_9":
        return 2.0 / 9.0
    th = thresholds(params)
    return th.alpha_star if kind == "alpha_star" else th.alpha_hat


def audit_ordering(prop: str, params: Params,
                   alpha_grid: tuple[float, ...] | None = None) -> AuditVerdict:
    """Audit one pairwise ordering claim on an alpha grid.

    The claimed side is evaluated pointwise from the claim's threshold;
    points within one grid step of the threshold are excluded from the
    agreement test (the claim asserts equality exactly there). The verdict
    disagrees if any point beyond that band contradicts the claimed side.
    """
    prop = prop.upper()
    model, (var_a, var_b), kind, above_claim = _ORDERING[prop]
    grid = tuple(alpha_grid) if alpha_grid is not None else default_alpha_grid(model)
    theta = _ordering_threshold(kind, params)
    diffs = []
    for a in grid:
        values = closed_form.decision_values(model, a, params.c_m, params.delta, params.s)
        diffs.append(values[var_a] - values[var_b])
    diffs = np.asarray(diffs)
    grid_arr = np.asarray(grid)
    step = float(np.min(np.diff(grid_arr))) if len(grid) > 1 else GRID_STEP

    signs = np.sign(diffs)
    observed_all = ("less_than" if np.all(diffs < 0.0)
                    else "greater_than" if np.all(diffs > 0.0) else "mixed")
    flips = [float(grid_arr[i]) for i in range(1, len(signs)) if signs[i] != signs[i - 1]]

    notes = []
    if theta is None:
        claimed = above_claim
        agree = bool(observed_all == claimed)
        condition = None
    else:
        below_claim = _OPPOSITE[above_claim]
        in_band = np.abs(grid_arr - theta) <= step
        above = grid_arr > theta
        expected = np.where(above, 1.0 if above_claim == "greater_than" else -1.0,
                            1.0 if below_claim == "greater_than" else -1.0)
        tested = ~in_band
        agree = bool(np.all(signs[tested] == expected[tested])) if np.any(tested) else True
        if np.all(grid_arr > theta):
            claimed = above_claim
            condition = float(np.min(grid_arr) - theta)
        elif np.all(grid_arr < theta):
            claimed = below_claim
            condition = float(np.max(grid_arr) - theta)
        else:
            claimed = "mixed"
            condition = 0.0
            notes.append(f"threshold alpha={theta!r} lies inside the grid; "
                         f"claimed ordering flips there")
        if np.any(in_band):
            # equality claim at the threshold, tolerance 10x the grid
            # interpolation error of the difference
            i = int(np.argmin(np.abs(grid_arr - theta)))
            lo, hi = max(i - 1, 0), min(i + 1, len(grid) - 1)
            slope = abs(diffs[hi] - diffs[lo]) / max((grid_arr[hi] - grid_arr[lo]), step)
            tol_eq = 10.0 * step * max(slope, 1e-12)
            notes.append(
                f"equality at threshold: |diff|={abs(float(diffs[i])):.6g} at "
                f"alpha={float(grid_arr[i])!r}, tolerance {tol_eq:.6g}, "
                f"{'within' if abs(float(diffs[i])) <= tol_eq else 'OUTSIDE'} tolerance")
    if prop == "P3":
        for name, mask in (("below", grid_arr < 2.0 / 9.0), ("above", grid_arr > 2.0 / 9.0)):
            if np.any(mask):
                side = ("less_than" if np.all(diffs[mask] < 0.0)
                        else "greater_than" if np.all(diffs[mask] > 0.0) else "mixed")
                notes.append(f"{name} the pole at 2/9: observed {side}")
    if flips:
        notes.append("observed sign flips near alpha in " + repr([round(f, 6) for f in flips]))

    return AuditVerdict(
        prop_id=prop, sub_id=None, variable=f"{var_a} vs {var_b}", params=params,
        condition_value=condition if theta is not None else None,
        claimed=claimed, observed=observed_all, agree=agree,
        evidence=tuple((float(a), float(d)) for a, d in zip(grid_arr, diffs)),
        notes=tuple(notes),
    )


# monotonicity claims: prop -> (model, [(sub id, variable, increasing-when)])
# "below": increasing iff c_m < threshold; "above": increasing iff c_m > threshold
_MONOTONICITY = {
    "P2": (ModelId.M, (("i", "w", "below"), ("ii", "b_m", "below"),
                       ("ii", "p_m", "below"), ("iii", "p_r", "below"))),
    "P4": (ModelId.R, (("i", "w", "below"), ("ii", "b_r", "below"),
                       ("iii", "p_m", "below"), ("iv", "p_r", "below"),
                       ("v", "t", "above"))),
    "P7": (ModelId.MR, (("i", "w", "below"), ("ii", "b_m", "below"),
                        ("ii", "b_r", "below"), ("iii", "p_m", "below"),
                        ("iii", "p_r", "below"), ("iv", "t", "above"))),
}

_PROP_THRESHOLDS = {"P2": "prop2", "P4": "prop4", "P7": "prop7"}


def classify_direction(values) -> tuple[str, list[tuple[float, float]]]:
    """Classify a grid of values as increasing/decreasing/non_monotone.

    A direction holds when every forward difference respects it within
    MONOTONE_TOL; otherwise the sign-change intervals are returned.
    """
    arr = np.asarray(values, dtype=float)
    d = np.diff(arr)
    if np.all(d >= -MONOTONE_TOL):
        return "increasing", []
    if np.all(d <= MONOTONE_TOL):
        return "decreasing", []
    swaps = []
    rising = d > MONOTONE_TOL
    for i in range(1, len(d)):
        if rising[i] != rising[i - 1]:
            swaps.append(i)
    return "non_monotone", swaps


def audit_monotonicity(prop: str, params: Params,
                       alpha_grid: tuple[float, ...] | None = None) -> list[AuditVerdict]:
    """Audit one proposition's monotonicity claims, one verdict per variable.

    The observed direction comes from finite differences of the closed form
    over the grid; the claimed direction from the published c_m threshold.
    """
    prop = prop.upper()
    model, items = _MONOTONICITY[prop]
    grid = tuple(alpha_grid) if alpha_grid is not None else default_alpha_grid(model)
    th = getattr(thresholds(params), _PROP_THRESHOLDS[prop])
    values_by_alpha = [closed_form.decision_values(model, a, params.c_m, params.delta, params.s)
                       for a in grid]
    out = []
    for sub_id, var, direction in items:
        series = [v[var] for v in values_by_alpha]
        observed, swap_idx = classify_direction(series)
        thr = th[var]
        condition = (thr - params.c_m) if direction == "below" else (params.c_m - thr)
        claimed = "increasing" if condition > 0.0 else "decreasing"
        notes = []
        if swap_idx:
            locs = [round(float(grid[i]), 6) for i in swap_idx]
            notes.append("direction changes near alpha in " + repr(locs))
        if prop == "P4" and var == "b_r":
            alt = prop4_subsidy_alternate_threshold(params)
            alt_claim = "increasing" if params.c_m < alt else "decreasing"
            notes.append(
                f"alternate published threshold {alt!r} would claim {alt_claim}; "
                f"primary threshold {thr!r} claims {claimed}")
        out.append(AuditVerdict(
            prop_id=prop, sub_id=sub_id, variable=var, params=params,
            condition_value=float(condition), claimed=claimed, observed=observed,
            agree=bool(claimed == observed),
            evidence=tuple((float(a), float(v)) for a, v in zip(grid, series)),
            notes=tuple(notes),
        ))
    return out


_THEOREM_MODEL = {"T1": ModelId.M, "T2": ModelId.R, "T3": ModelId.MR}


def audit_uniqueness(theorem: str, params: Params,
                     cfg: oracle.OracleConfig | None = None,
                     n_starts: int = 8,
                     variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> AuditVerdict:
    """Audit an equilibrium-uniqueness theorem numerically.

    Combines the second-order verdicts at the numeric solution with a
    multistart probe: ``n_starts`` seeded random leader points are refined
    locally and must all land on the same optimum within 10x leader_tol.
    """
    theorem = theorem.upper()
    model = _THEOREM_MODEL[theorem]
    cfg = cfg or oracle.OracleConfig()
    eq = oracle.solve_stackelberg_numeric(model, params, cfg, variant)
    soc = oracle.check_soc(model, eq, params, cfg, variant)

    names = oracle.LEADER_FIELDS[model]
    rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(cfg.seed, spawn_key=(int(theorem[1]),))))
    x_star = np.array([getattr(eq.decisions, n) for n in names])
    spread = 0.0
    for _ in range(n_starts):
        start = {n: float(rng.uniform(*cfg.box(n))) for n in names}
        refined = oracle._polish(model, start, params, cfg, variant)
        arrived = np.array([refined[n] for n in names])
        spread = max(spread, float(np.max(np.abs(arrived - x_star))))
    converged = spread <= 10.0 * max(cfg.leader_tol, 1e-9)

    observed = ("unique" if (converged and soc.follower_negative_definite
                             and soc.leader_negative_definite) else "not_unique")
    notes = [f"multistart spread {spread:.3e} over {n_starts} starts",
             f"follower eigenvalues {tuple(round(e, 6) for e in soc.follower_hessian_eigs)}",
             f"leader eigenvalues {tuple(round(e, 6) for e in soc.leader_reduced_hessian_eigs)}"]
    failing = eq.validity.failing()
    if failing:
        notes.append("validity caveat: " + ", ".join(failing))
    if model is ModelId.MR:
        certified = oracle.certify_mr_variant(eq.decisions, params, cfg=cfg)
        notes.append(f"numeric optimum is stationary under variant: {certified}")
    return AuditVerdict(
        prop_id=theorem, sub_id=None, variable=None, params=params,
        condition_value=None, claimed="unique", observed=observed,
        agree=bool(observed == "unique"),
        evidence=((params.alpha, float(eq.profit.pi_m)),),
        notes=tuple(notes),
    )


def _endpoint_claims(model: ModelId, params: Params):
    """Published endpoint expressions per variable at alpha -> 0 and 1.

    Returns {variable: {0.0: value | None, 1.0: value | None}} with None for
    the one published endpoint that is indeterminate as printed (it retains
    alpha symbols); the caller reports it rather than guessing.
    """
    c_m, d, s = params.c_m, params.delta, params.s
    model = ModelId(model)
    if model is ModelId.M:
        return {
            "p_m": {0.0: c_m / 2.0, 1.0: (2.0 + c_m + d + s) / 3.0},
            "w": {0.0: (c_m + 1.0) / 2.0, 1.0: (c_m + d + s + 2.0) / 3.0},
            "b_m": {0.0: (2.0 * d - c_m + 2.0 * s) / 4.0,
                    1.0: (2.0 * d - c_m + 2.0 * s - 1.0) / 3.0},
            "p_r": {0.0: (2.0 * c_m + 3.0) / 4.0, 1.0: (c_m + d + s + 2.0) / 3.0},
        }
    if model is ModelId.R:
        return {
            "w": {0.0: (c_m - 1.0) / 2.0, 1.0: (5.0 + c_m + d + s) / 4.0},
            "b_r": {0.0: 0.0, 1.0: (2.0 * d + 2.0 * s + 1.0 - c_m) / 7.0},
            "p_m": {0.0: c_m / 2.0, 1.0: (2.0 * d + 2.0 * s + 8.0 + c_m) / 14.0},
            "p_r": {0.0: (2.0 * c_m + 3.0) / 4.0, 1.0: (c_m + d + s + 2.0) / 3.0},
            "t": {0.0: (4.0 * d + 4.0 * s - 2.0 * c_m + 9.0) / 4.0, 1.0: None},
        }
    return {}


def audit_endpoints(model: ModelId, params: Params) -> list[AuditVerdict]:
    """Compare closed-form endpoint limits against every published endpoint.

    Each mismatch is reported with both values; nothing is asserted. The
    joint model has no published endpoint block, so its list is empty.
    """
    model = ModelId(model)
    claims = _endpoint_claims(model, params)
    if not claims:
        return []
    lim = closed_form.limits(model, params)
    out = []
    for var, sides in claims.items():
        for at, published in sides.items():
            computed = lim[var][0 if at == 0.0 else 1]
            if published is None:
                # indeterminate as printed: the expression keeps alpha terms;
                # evaluate it with alpha set to the endpoint and flag it
                forced = (20.0 * params.delta - 10.0 * params.c_m
                          + 20.0 * params.s + 9.0) / 4.0
                out.append(AuditVerdict(
                    prop_id=f"LIM-{model.value}", sub_id=f"alpha->{int(at)}", variable=var,
                    params=params, condition_value=None, claimed="equal",
                    observed="indeterminate_as_printed", agree=False,
                    evidence=((at, float(computed)), (at, float(forced))),
                    notes=("published endpoint expression retains alpha symbols; "
                           "value shown evaluates it at alpha=1",),
                ))
                continue
            diff = computed - published
            observed = ("equal" if abs(diff) <= ENDPOINT_TOL
                        else "greater_than" if diff > 0 else "less_than")
            out.append(AuditVerdict(
                prop_id=f"LIM-{model.value}", sub_id=f"alpha->{int(at)}", variable=var,
                params=params, condition_value=None, claimed="equal",
                observed=observed, agree=bool(observed == "equal"),
                evidence=((at, float(computed)), (at, float(published))),
                notes=() if observed == "equal" else
                (f"computed limit {computed!r} vs published {published!r} "
                 f"(gap {diff:.6g})",),
            ))
    return out
