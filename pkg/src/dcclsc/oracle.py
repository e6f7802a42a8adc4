"""Numeric ground truth: backward-induction Stackelberg solver and choice simulation.

Nothing in this module evaluates the closed-form equilibrium expressions.
The leader problem is maximized by iterated grid refinement over a box (the
box halves around the incumbent each round), then polished locally with
Newton steps assembled purely from central finite differences; the follower
best response is recomputed at every leader candidate, vectorized over whole
grids. All profit surfaces are exactly quadratic in the unclamped default
mode, so the finite-difference steps carry no truncation error and land on
stationary points to roundoff, while probed second differences expose
non-concave regions (NonConcave) instead of chasing them.

The explicit clamped mode clips segment masses to [0, 1] before they enter
profits; that objective is kinked, so there the follower and the polish fall
back to golden-section coordinate sweeps, and an objective left without a
strict interior maximum by the clamping is refused rather than pinned at a
bracket edge. Reports always state which mode produced them.

``monte_carlo_demand`` simulates the discrete-choice model directly from the
utility definitions and fixed tie-breaking rules, providing the independent
check on the closed-form segment masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import market
from .errors import BoxBoundary, NonConcave, OutOfDomain, Violation
from .market import DemandProfile, Equilibrium, MrDemandVariant, make_equilibrium
from .params import DecisionSet, ModelId, Params

#: Leader decision variables per model (the follower owns the rest).
LEADER_FIELDS = {
    ModelId.M: ("p_m", "w", "b_m"),
    ModelId.R: ("p_m", "w", "t"),
    ModelId.MR: ("p_m", "w", "b_m", "t"),
}

#: Follower decision variables per model.
FOLLOWER_FIELDS = {
    ModelId.M: ("p_r",),
    ModelId.R: ("p_r", "b_r"),
    ModelId.MR: ("p_r", "b_r"),
}

_PRICE_BOX = (-1.0, 3.0)
_SUBSIDY_BOX = (0.0, 2.0)


def default_leader_box() -> dict[str, tuple[float, float]]:
    """Default per-variable search intervals: prices/wholesale [-1, 3], subsidies and transfer [0, 2]."""
    return {
        "p_m": _PRICE_BOX, "p_r": _PRICE_BOX, "w": _PRICE_BOX,
        "b_m": _SUBSIDY_BOX, "b_r": _SUBSIDY_BOX, "t": _SUBSIDY_BOX,
    }


@dataclass(frozen=True)
class OracleConfig:
    """Tuning knobs of the numeric solver and simulator.

    Parameters
    ----------
    follower_tol : float
        Follower-stage tolerance. The unclamped follower step is exact on
        the quadratic objective (residuals around 1e-12, below any practical
        setting); the clamped-mode coordinate sweeps iterate until their
        update falls under this bound.
    leader_tol : float
        Convergence tolerance of the leader polish.
    leader_box : mapping of variable name to (lo, hi)
        Search intervals; the solver raises ``BoxBoundary`` rather than
        silently truncating when the optimum lands on an edge.
    refinement_rounds : int
        Number of grid rounds; the box halves around the incumbent each round.
    grid_points_per_round : int
        Points per dimension per round; odd so the box center is a node.
    seed : int
        Substream root for everything stochastic (Monte Carlo, multistart).
    mc_samples : int
        Default sample count for the choice simulation.
    clamped : bool
        Evaluate profits on masses clipped to [0, 1] instead of the raw
        linear forms. Off by default; reports always state the mode.
    """

    follower_tol: float = 1e-10
    leader_tol: float = 1e-8
    leader_box: Mapping[str, tuple[float, float]] = field(default_factory=default_leader_box)
    refinement_rounds: int = 6
    grid_points_per_round: int = 33
    seed: int = 0
    mc_samples: int = 1_000_000
    clamped: bool = False

    def __post_init__(self):
        violations = []
        if not self.follower_tol > 0:
            violations.append(Violation("follower_tol", self.follower_tol, "must be > 0"))
        if not self.leader_tol > 0:
            violations.append(Violation("leader_tol", self.leader_tol, "must be > 0"))
        if self.grid_points_per_round < 5 or self.grid_points_per_round % 2 == 0:
            violations.append(Violation("grid_points_per_round", self.grid_points_per_round,
                                        "must be >= 5 and odd"))
        if self.refinement_rounds < 1:
            violations.append(Violation("refinement_rounds", self.refinement_rounds, "must be >= 1"))
        if violations:
            raise OutOfDomain(violations)

    def box(self, name: str) -> tuple[float, float]:
        return tuple(self.leader_box[name])

    def as_dict(self) -> dict:
        return {
            "follower_tol": self.follower_tol,
            "leader_tol": self.leader_tol,
            "leader_box": {k: list(v) for k, v in self.leader_box.items()},
            "refinement_rounds": self.refinement_rounds,
            "grid_points_per_round": self.grid_points_per_round,
            "seed": self.seed,
            "mc_samples": self.mc_samples,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class SocReport:
    """Second-order-condition check of one equilibrium point.

    Carries finite-difference Hessian eigenvalues of the follower profit in
    the follower variables and of the leader's reduced profit (follower
    substituted) in the leader variables; a stage counts as negative
    definite iff all of its eigenvalues are below -1e-9.
    """

    follower_hessian_eigs: tuple[float, ...]
    leader_reduced_hessian_eigs: tuple[float, ...]
    follower_negative_definite: bool
    leader_negative_definite: bool

    def as_dict(self) -> dict:
        return {
            "follower_hessian_eigs": list(self.follower_hessian_eigs),
            "leader_reduced_hessian_eigs": list(self.leader_reduced_hessian_eigs),
            "follower_negative_definite": self.follower_negative_definite,
            "leader_negative_definite": self.leader_negative_definite,
        }


_EIG_THRESHOLD = -1e-9
_STEP = 0.25
_FOLLOWER_ANCHOR = {"p_r": 1.0, "b_r": 0.5}


def _assemble(model: ModelId, **named) -> dict:
    """Full six-slot decision mapping with None in unused slots."""
    slots = {"p_m": None, "p_r": None, "w": None, "b_m": None, "b_r": None, "t": None}
    slots.update(named)
    return slots


def _pi_r(model: ModelId, dec: dict, params: Params, variant: MrDemandVariant,
          clamp: bool):
    return market.profit_values(model, dec["p_m"], dec["p_r"], dec["w"], dec["b_m"],
                                dec["b_r"], dec["t"], params, variant, clamp)[1]


def _pi_m(model: ModelId, dec: dict, params: Params, variant: MrDemandVariant,
          clamp: bool):
    return market.profit_values(model, dec["p_m"], dec["p_r"], dec["w"], dec["b_m"],
                                dec["b_r"], dec["t"], params, variant, clamp)[0]


def _follower_curvatures(model: ModelId, params: Params,
                         variant: MrDemandVariant) -> tuple[float, float | None, float | None]:
    """Second differences of the retailer profit at a fixed anchor.

    The unclamped profit is quadratic in the follower variables, so these
    curvatures (scaled by the step squared) are position-independent and
    decide concavity globally. Raises NonConcave when the follower Hessian
    is not negative definite; for model R that happens for alpha <= 1/5 and
    for model MR for alpha <= 1/4.
    """
    h = _STEP
    anchor = _assemble(model, p_m=1.0, w=1.0, b_m=0.5, t=0.5)

    def f(p_r, b_r):
        d = dict(anchor)
        d["p_r"], d["b_r"] = p_r, b_r
        return float(_pi_r(model, d, params, variant, clamp=False))

    p0, b0 = _FOLLOWER_ANCHOR["p_r"], _FOLLOWER_ANCHOR["b_r"]
    c_pp = f(p0 + h, b0) - 2.0 * f(p0, b0) + f(p0 - h, b0)
    if ModelId(model) is ModelId.M:
        if not c_pp < 0.0:
            raise NonConcave(f"retailer profit not concave in p_r (second difference {c_pp:.3e})")
        return c_pp, None, None
    c_bb = f(p0, b0 + h) - 2.0 * f(p0, b0) + f(p0, b0 - h)
    c_pb = (f(p0 + h, b0 + h) - f(p0 + h, b0 - h)
            - f(p0 - h, b0 + h) + f(p0 - h, b0 - h)) / 4.0
    det = c_pp * c_bb - c_pb * c_pb
    if not (c_pp < 0.0 and det > 1e-9 * abs(c_pp * c_bb)):
        raise NonConcave(
            "retailer profit not jointly concave in (p_r, b_r): "
            f"second differences ({c_pp:.3e}, {c_bb:.3e}), determinant {det:.3e}"
        )
    return c_pp, c_bb, c_pb


def _follower_solve(model: ModelId, leader: dict, params: Params, cfg: OracleConfig,
                    variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> dict:
    """Best response of the retailer, vectorized over leader-valued arrays.

    In the default unclamped mode the objective is exactly quadratic, so a
    single step built from central differences at a fixed anchor (a
    finite-difference Newton step with the constant probed curvature) is
    exact up to roundoff. The clamped mode falls back to golden-section
    coordinate sweeps.
    """
    model = ModelId(model)
    shape = np.broadcast(*(np.asarray(v) for v in leader.values())).shape

    def objective(p_r, b_r):
        dec = _assemble(model, **leader, p_r=p_r, b_r=b_r)
        return _pi_r(model, dec, params, variant, cfg.clamped)

    if cfg.clamped:
        return _follower_solve_clamped(model, objective, shape, cfg)

    c_pp, c_bb, c_pb = _follower_curvatures(model, params, variant)
    h = _STEP
    p0, b0 = _FOLLOWER_ANCHOR["p_r"], _FOLLOWER_ANCHOR["b_r"]
    if model is ModelId.M:
        g_p = (objective(p0 + h, None) - objective(p0 - h, None)) / 2.0
        return {"p_r": p0 - g_p * h / c_pp}
    g_p = (objective(p0 + h, b0) - objective(p0 - h, b0)) / 2.0
    g_b = (objective(p0, b0 + h) - objective(p0, b0 - h)) / 2.0
    det = c_pp * c_bb - c_pb * c_pb
    return {
        "p_r": p0 - h * (c_bb * g_p - c_pb * g_b) / det,
        "b_r": b0 - h * (c_pp * g_b - c_pb * g_p) / det,
    }


def _follower_solve_clamped(model: ModelId, objective, shape, cfg: OracleConfig) -> dict:
    """Golden-section coordinate sweeps for the kinked clamped-mode objective.

    Clamping removes the demand feedback from several profit terms, which can
    leave the objective linear (hence maximizer-free) along a coordinate; a
    non-negative second difference at the returned point raises NonConcave
    rather than silently pinning at the bracket edge.
    """
    brackets = {
        "p_r": (cfg.box("p_r")[0] - 1.0, cfg.box("p_r")[1] + 1.0),
        "b_r": (cfg.box("b_r")[0] - 1.0, cfg.box("b_r")[1] + 1.0),
    }
    p_r = np.full(shape, _FOLLOWER_ANCHOR["p_r"])
    fields = FOLLOWER_FIELDS[ModelId(model)]
    b_r = np.full(shape, _FOLLOWER_ANCHOR["b_r"]) if "b_r" in fields else None
    for _ in range(40):
        new_p = _golden(lambda x: objective(x, b_r), brackets["p_r"], shape)
        new_b = (_golden(lambda x: objective(new_p, x), brackets["b_r"], shape)
                 if b_r is not None else None)
        change = np.max(np.abs(new_p - p_r))
        if new_b is not None:
            change = max(change, np.max(np.abs(new_b - b_r)))
        p_r, b_r = new_p, new_b
        if change < max(cfg.follower_tol, 1e-9):
            break
    h = 1e-3
    curv_p = objective(p_r + h, b_r) - 2.0 * objective(p_r, b_r) + objective(p_r - h, b_r)
    worst = float(np.max(curv_p))
    if b_r is not None:
        curv_b = (objective(p_r, b_r + h) - 2.0 * objective(p_r, b_r)
                  + objective(p_r, b_r - h))
        worst = max(worst, float(np.max(curv_b)))
    if worst >= -1e-12:
        raise NonConcave(
            "clamped retailer objective has no strict interior maximum along "
            f"some coordinate (worst second difference {worst:.3e})")
    out = {"p_r": p_r}
    if b_r is not None:
        out["b_r"] = b_r
    return out


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(f, bracket: tuple[float, float], shape, iters: int = 70):
    lo = np.full(shape, bracket[0])
    hi = np.full(shape, bracket[1])
    for _ in range(iters):
        x1 = hi - _INVPHI * (hi - lo)
        x2 = lo + _INVPHI * (hi - lo)
        keep_left = f(x1) >= f(x2)
        hi = np.where(keep_left, x2, hi)
        lo = np.where(keep_left, lo, x1)
    return (lo + hi) / 2.0


def best_response_retailer(model: ModelId, leader_vars: Mapping[str, float],
                           params: Params, cfg: OracleConfig | None = None,
                           variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> dict[str, float]:
    """Maximize the retailer profit over the follower's variables.

    ``leader_vars`` must contain exactly the leader's variables for the
    model: {w, p_m, b_m} for M, {w, p_m, t} for R, {w, p_m, b_m, t} for MR.
    Raises NonConcave when the retailer objective has no interior maximum.
    """
    model = ModelId(model)
    cfg = cfg or OracleConfig()
    expected = set(LEADER_FIELDS[model])
    got = set(leader_vars)
    if got != expected:
        raise OutOfDomain([Violation("leader_vars", float("nan"),
                                     f"model {model.value} leader sets {sorted(expected)}, got {sorted(got)}")])
    leader = {k: float(v) for k, v in leader_vars.items()}
    sol = _follower_solve(model, leader, params, cfg, variant)
    return {k: float(v) for k, v in sol.items()}


def _reduced_leader_profit(model: ModelId, leader: dict, params: Params,
                           cfg: OracleConfig, variant: MrDemandVariant):
    follower = _follower_solve(model, leader, params, cfg, variant)
    dec = _assemble(model, **leader, **follower)
    return _pi_m(model, dec, params, variant, cfg.clamped)


def _leader_grid_round(model: ModelId, boxes: dict, params: Params, cfg: OracleConfig,
                       variant: MrDemandVariant) -> tuple[dict, float]:
    names = LEADER_FIELDS[ModelId(model)]
    axes = [np.linspace(boxes[n][0], boxes[n][1], cfg.grid_points_per_round) for n in names]
    mesh = np.meshgrid(*axes, indexing="ij")
    leader = {n: m.ravel() for n, m in zip(names, mesh)}
    profit = _reduced_leader_profit(model, leader, params, cfg, variant)
    profit = np.where(np.isfinite(profit), profit, -np.inf)
    best = int(np.argmax(profit))
    return {n: float(leader[n][best]) for n in names}, float(profit[best])


def _polish(model: ModelId, start: Mapping[str, float], params: Params,
            cfg: OracleConfig, variant: MrDemandVariant,
            max_iters: int = 40) -> dict[str, float]:
    """Local refinement of the reduced leader profit from ``start``.

    Unclamped profits are quadratic in the leader variables once the
    follower is substituted, so Newton steps built from central-difference
    gradients and a constant finite-difference Hessian land on the
    stationary point to within roundoff in one or two iterations. Steps are
    clipped into the configured box. Raises NonConcave when the reduced
    Hessian is not negative definite.
    """
    model = ModelId(model)
    names = LEADER_FIELDS[model]
    k = len(names)
    x = np.array([float(start[n]) for n in names])
    lo = np.array([cfg.box(n)[0] for n in names])
    hi = np.array([cfg.box(n)[1] for n in names])

    def f(vec):
        leader = {n: vec[i] for i, n in enumerate(names)}
        return float(_reduced_leader_profit(model, leader, params, cfg, variant))

    if cfg.clamped:
        return _polish_clamped(names, f, x, lo, hi, cfg)

    h = 1e-4
    H = _fd_hessian(f, x, h)
    eigs = np.linalg.eigvalsh(H)
    if not np.all(eigs < 0.0):
        raise NonConcave(
            "leader reduced profit not concave: finite-difference Hessian "
            f"eigenvalues {np.array2string(eigs, precision=4)}")

    hg = 1e-6
    for _ in range(max_iters):
        grad = np.empty(k)
        for i in range(k):
            xp = x.copy(); xp[i] += hg
            xm = x.copy(); xm[i] -= hg
            grad[i] = (f(xp) - f(xm)) / (2.0 * hg)
        step = np.linalg.solve(H, -grad)
        x = np.clip(x + step, lo, hi)
        if np.max(np.abs(step)) < cfg.leader_tol:
            break
    return {n: float(x[i]) for i, n in enumerate(names)}


def _polish_clamped(names, f, x, lo, hi, cfg: OracleConfig,
                    max_sweeps: int = 60) -> dict[str, float]:
    """Golden-section coordinate sweeps for the kinked clamped-mode objective."""
    for _ in range(max_sweeps):
        change = 0.0
        for i in range(len(names)):
            def section(z, i=i):
                vec = np.array(x, copy=True)
                vec[i] = float(z)
                return f(vec)

            new = float(_golden(lambda z: np.float64(section(z)), (lo[i], hi[i]), ()))
            change = max(change, abs(new - x[i]))
            x[i] = new
        if change < max(cfg.leader_tol, 1e-7):
            break
    return {n: float(x[i]) for i, n in enumerate(names)}


def solve_stackelberg_numeric(model: ModelId, params: Params,
                              cfg: OracleConfig | None = None,
                              variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> Equilibrium:
    """Numeric Stackelberg equilibrium by backward induction.

    The manufacturer's profit, with the retailer replaced by its computed
    best response, is maximized by ``refinement_rounds`` rounds of grid
    search (box halved around the incumbent each round) followed by local
    polish to ``leader_tol``. Deterministic for a fixed config.

    Raises
    ------
    BoxBoundary
        when the optimum lies on the leader box after final refinement.
    NonConcave
        when either stage's objective has no interior maximum.
    """
    model = ModelId(model)
    cfg = cfg or OracleConfig()
    names = LEADER_FIELDS[model]
    original = {n: cfg.box(n) for n in names}
    boxes = dict(original)
    incumbent = None
    for _round in range(cfg.refinement_rounds):
        incumbent, _ = _leader_grid_round(model, boxes, params, cfg, variant)
        next_boxes = {}
        for n in names:
            width = (boxes[n][1] - boxes[n][0]) * 0.5
            lo0, hi0 = original[n]
            lo = min(max(incumbent[n] - width / 2.0, lo0), hi0 - width)
            next_boxes[n] = (lo, lo + width)
        boxes = next_boxes

    leader = _polish(model, incumbent, params, cfg, variant)

    for n in names:
        lo0, hi0 = original[n]
        edge = 1e-6 * max(1.0, hi0 - lo0)
        if leader[n] - lo0 <= edge or hi0 - leader[n] <= edge:
            raise BoxBoundary(n, leader[n], (lo0, hi0))

    follower = {k: float(v) for k, v in
                _follower_solve(model, leader, params, cfg, variant).items()}
    decisions = DecisionSet(model=model, **leader, **follower)

    from .closed_form import singularity_distance

    return make_equilibrium(model, decisions, params, "numeric_oracle",
                            singularity_distance(model, params.alpha), variant=variant)


def _fd_hessian(f: Callable, x0: np.ndarray, h: float) -> np.ndarray:
    n = len(x0)
    H = np.empty((n, n))
    f0 = f(x0)
    for i in range(n):
        for j in range(i, n):
            if i == j:
                xp = x0.copy(); xp[i] += h
                xm = x0.copy(); xm[i] -= h
                H[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / (h * h)
            else:
                xpp = x0.copy(); xpp[i] += h; xpp[j] += h
                xpm = x0.copy(); xpm[i] += h; xpm[j] -= h
                xmp = x0.copy(); xmp[i] -= h; xmp[j] += h
                xmm = x0.copy(); xmm[i] -= h; xmm[j] -= h
                H[i, j] = H[j, i] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h)
    return H


def _richardson_hessian(f: Callable, x0: np.ndarray, h: float) -> np.ndarray:
    # one Richardson extrapolation step: eliminates the O(h^2) error term
    return (4.0 * _fd_hessian(f, x0, h / 2.0) - _fd_hessian(f, x0, h)) / 3.0


def check_soc(model: ModelId, eq: Equilibrium, params: Params,
              cfg: OracleConfig | None = None,
              variant: MrDemandVariant = MrDemandVariant.ADOPTED) -> SocReport:
    """Finite-difference second-order conditions at an equilibrium point.

    Central differences with step 1e-4 and one Richardson extrapolation;
    a stage is negative definite iff all its eigenvalues are < -1e-9.
    """
    model = ModelId(model)
    cfg = cfg or OracleConfig()
    h = 1e-4
    dec = {k: getattr(eq.decisions, k) for k in ("p_m", "p_r", "w", "b_m", "b_r", "t")}

    f_names = FOLLOWER_FIELDS[model]

    def follower_obj(x):
        d = dict(dec)
        d.update({n: x[i] for i, n in enumerate(f_names)})
        return float(_pi_r(model, d, params, variant, cfg.clamped))

    x_f = np.array([dec[n] for n in f_names], dtype=float)
    Hf = _richardson_hessian(follower_obj, x_f, h)
    eig_f = np.linalg.eigvalsh(Hf)

    l_names = LEADER_FIELDS[model]

    def leader_obj(x):
        leader = {n: x[i] for i, n in enumerate(l_names)}
        return float(_reduced_leader_profit(model, leader, params, cfg, variant))

    x_l = np.array([dec[n] for n in l_names], dtype=float)
    Hl = _richardson_hessian(leader_obj, x_l, h)
    eig_l = np.linalg.eigvalsh(Hl)

    return SocReport(
        follower_hessian_eigs=tuple(float(e) for e in eig_f),
        leader_reduced_hessian_eigs=tuple(float(e) for e in eig_l),
        follower_negative_definite=bool(np.all(eig_f < _EIG_THRESHOLD)),
        leader_negative_definite=bool(np.all(eig_l < _EIG_THRESHOLD)),
    )


@dataclass(frozen=True)
class MonteCarloDemand:
    """Empirical segment shares with binomial standard errors."""

    shares: DemandProfile
    stderr: DemandProfile
    n: int
    seed: int

    def as_dict(self) -> dict:
        return {"shares": self.shares.as_dict(), "stderr": self.stderr.as_dict(),
                "n": self.n, "seed": self.seed}


_MC_CHUNK = 1 << 18


def monte_carlo_demand(model: ModelId, decisions: DecisionSet, params: Params,
                       n: int, seed: int) -> MonteCarloDemand:
    """Simulate the discrete-choice model on n iid (v, u) ~ Uniform[0,1]^2 pairs.

    Choices follow the utility argmax with participation at zero utility and
    the fixed tie-breaks (direct channel, manufacturer subsidy). Each chunk
    of draws derives its own substream from (seed, chunk index), so results
    are bit-identical regardless of chunking or evaluation order.
    """
    if n < 1:
        raise OutOfDomain.single("n", n, "must be >= 1")
    model = ModelId(model)
    a = params.alpha
    d = decisions
    counts = {"q1": 0, "q2": 0, "q3": 0, "q4": 0}
    done = 0
    chunk_idx = 0
    while done < n:
        m = min(_MC_CHUNK, n - done)
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(seed, spawn_key=(chunk_idx,))))
        draws = rng.random((m, 2))
        v, u = draws[:, 0], draws[:, 1]
        u1 = a * v - d.p_m
        u2 = v - d.p_r
        s1 = (u1 >= u2) & (u1 >= 0.0)
        s2 = ~s1 & (u2 >= 0.0)
        counts["q1"] += int(np.count_nonzero(s1))
        counts["q2"] += int(np.count_nonzero(s2))
        if model is ModelId.M:
            counts["q3"] += int(np.count_nonzero(d.b_m - u >= 0.0))
        elif model is ModelId.R:
            counts["q3"] += int(np.count_nonzero(d.b_r - a * u >= 0.0))
        else:
            u3 = d.b_m - u
            u4 = d.b_r - a * u
            s3 = (u3 >= u4) & (u3 >= 0.0)
            s4 = ~s3 & (u4 >= 0.0)
            counts["q3"] += int(np.count_nonzero(s3))
            counts["q4"] += int(np.count_nonzero(s4))
        done += m
        chunk_idx += 1

    def share(k):
        return counts[k] / n

    def se(k):
        p = share(k)
        return math.sqrt(max(p * (1.0 - p), 0.0) / n)

    with_q4 = model is ModelId.MR
    shares = DemandProfile(q1=share("q1"), q2=share("q2"), q3=share("q3"),
                           q4=share("q4") if with_q4 else None)
    stderr = DemandProfile(q1=se("q1"), q2=se("q2"), q3=se("q3"),
                           q4=se("q4") if with_q4 else None)
    return MonteCarloDemand(shares=shares, stderr=stderr, n=n, seed=seed)


def stationarity_residuals(model: ModelId, decisions: DecisionSet, params: Params,
                           variant: MrDemandVariant = MrDemandVariant.ADOPTED,
                           cfg: OracleConfig | None = None,
                           h: float = 1e-5) -> dict[str, float]:
    """Scaled first-order residuals of a candidate equilibrium point.

    Central-difference partials of the retailer profit in the follower's
    variables and of the leader's reduced profit (follower re-solved at each
    perturbation) in the leader's variables, divided by max(1, |profit|).
    All residuals vanish at a true interior Stackelberg solution.
    """
    model = ModelId(model)
    cfg = cfg or OracleConfig()
    dec = {k: getattr(decisions, k) for k in ("p_m", "p_r", "w", "b_m", "b_r", "t")}
    pi_m_val, pi_r_val = market.profit_values(
        model, dec["p_m"], dec["p_r"], dec["w"], dec["b_m"], dec["b_r"], dec["t"],
        params, variant, cfg.clamped)
    out: dict[str, float] = {}
    scale_r = max(1.0, abs(float(pi_r_val)))
    for name in FOLLOWER_FIELDS[model]:
        dp = dict(dec); dp[name] += h
        dm = dict(dec); dm[name] -= h
        deriv = (float(_pi_r(model, dp, params, variant, cfg.clamped))
                 - float(_pi_r(model, dm, params, variant, cfg.clamped))) / (2.0 * h)
        out[f"follower:{name}"] = abs(deriv) / scale_r

    scale_m = max(1.0, abs(float(pi_m_val)))
    leader = {n: dec[n] for n in LEADER_FIELDS[model]}
    for name in LEADER_FIELDS[model]:
        lp = dict(leader); lp[name] += h
        lm = dict(leader); lm[name] -= h
        deriv = (float(_reduced_leader_profit(model, lp, params, cfg, variant))
                 - float(_reduced_leader_profit(model, lm, params, cfg, variant))) / (2.0 * h)
        out[f"leader:{name}"] = abs(deriv) / scale_m
    return out


#: Residual threshold below which a candidate point counts as stationary.
STATIONARITY_TOL = 1e-6


def certify_mr_variant(decisions: DecisionSet, params: Params,
                       tol: float = STATIONARITY_TOL,
                       cfg: OracleConfig | None = None) -> str:
    """Which segment-3 demand variant, if any, makes an MR point stationary.

    Returns "adopted", "as_printed", "both", or "none". The verdict is a
    deterministic function of (decisions, params).
    """
    passing = []
    for variant in (MrDemandVariant.ADOPTED, MrDemandVariant.AS_PRINTED):
        res = stationarity_residuals(ModelId.MR, decisions, params, variant, cfg)
        if max(res.values()) <= tol:
            passing.append(variant.value)
    if not passing:
        return "none"
    if len(passing) == 2:
        return "both"
    return passing[0]


def sample_params(n: int, seed: int, alpha_range: tuple[float, float] = (0.3, 0.95),
                  c_m_range: tuple[float, float] = (0.05, 0.95),
                  s_max: float = 0.3, guard_band: float = 0.01) -> list[Params]:
    """Seeded random admissible parameter draws for verification protocols.

    alpha is uniform on ``alpha_range`` excluding ``guard_band``-wide bands
    around the closed-form poles (2/9 and the MR denominator root), c_m is
    uniform on ``c_m_range``, c_r uniform on (0, c_m), s uniform on
    [0, s_max]. Deterministic given (n, seed).
    """
    from .closed_form import MR_UNIT_ROOT

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    poles = (2.0 / 9.0, MR_UNIT_ROOT)
    out = []
    while len(out) < n:
        alpha = float(rng.uniform(*alpha_range))
        if any(abs(alpha - p) < guard_band for p in poles):
            continue
        c_m = float(rng.uniform(*c_m_range))
        c_r = float(c_m * rng.uniform(0.05, 0.95))
        s = float(rng.uniform(0.0, s_max))
        out.append(Params(alpha=alpha, c_m=c_m, c_r=c_r, s=s))
    return out
