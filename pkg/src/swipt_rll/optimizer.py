"""Min-max overflow/underflow design under a rate constraint.

``optimize_iid`` searches the received on-probability of an i.i.d. code;
``optimize_constrained`` searches the edge probabilities of a (d,k) code by
multi-start coordinate descent with golden-section line searches. Coordinate
moves stall where the overflow and underflow curves cross (the max() has a
kink there), so each start ends with a bounded Nelder-Mead polish.
Constrained codes under Markov demand have no closed form here, so their
objective is simulated with a fixed seed (common random numbers across
candidates) and reported as ``source="empirical"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .analytics_constrained import rate_constrained, triple_analytic
from .analytics_unconstrained import EnergyTriple, of_uf_iid, of_uf_markov_usage, rate_iid
from .constraint_codes import CodeType, EdgeProbs, RllSpec, capacity_analysis
from .link_models import LinkEnv
from .simulator import SimConfig, simulate

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
RATE_SLACK = 1e-9


def golden_section(f, a: float, b: float, tol: float = 1e-8, max_iter: int = 200):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    The interval ends are evaluated too, so a minimum on the boundary is
    found exactly.
    """
    fa, fb = f(a), f(b)
    best = (a, fa) if fa <= fb else (b, fb)
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
    for x, fx in ((x1, f1), (x2, f2)):
        if fx < best[1]:
            best = (x, fx)
    return best


def _bisect_level(g, lo: float, hi: float, level: float, tol: float = 1e-13) -> float:
    """Point in [lo, hi] where monotone ``g`` crosses ``level``; ``g(lo) < level <= g(hi)``."""
    increasing = g(hi) >= g(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (g(mid) >= level) == increasing:
            hi = mid
        else:
            lo = mid
    return hi if increasing else lo


@dataclass(frozen=True)
class OptProblem:
    """Minimize max(P_of, P_uf) subject to rate >= ``rate``.

    ``family`` is ``"iid"`` or an ``RllSpec``. ``tie_groups`` lists groups of
    state indices (from d..k-1) forced to share one probability.
    """

    rate: float
    link: LinkEnv
    family: object = "iid"
    tie_groups: tuple[tuple[int, ...], ...] | None = None
    epsilon: float = 1e-3
    starts: int = 8
    seed: int = 0
    sim_steps: int = 1_000_000
    sim_burn_in: int = 10_000
    grid_step: float = 1e-4
    golden_tol: float = 1e-4
    max_sweeps: int = 20
    sweep_tol: float = 1e-7
    polish: bool = True
    polish_evals: int = 200

    @property
    def is_iid(self) -> bool:
        return isinstance(self.family, str) and self.family == "iid"

    @property
    def family_name(self) -> str:
        return "iid" if self.is_iid else str(self.family)


@dataclass(frozen=True)
class OptResult:
    family: str
    feasible: bool
    params: tuple[float, ...] = ()
    objective: float = math.nan
    triple: EnergyTriple | None = None
    source: str = "analytic"
    message: str = ""
    evaluations: int = 0
    start_objectives: tuple[float, ...] = field(default=(), repr=False)


def _usage_battery(p_y: float, link: LinkEnv):
    if link.iid_usage:
        return of_uf_iid(p_y, link.q, link.b_max)
    return of_uf_markov_usage(p_y, link.q0, link.q1, link.b_max)


def iid_triple(p_x: float, link: LinkEnv) -> EnergyTriple:
    p_y = p_x * (1.0 - link.p10)
    res = _usage_battery(p_y, link)
    return EnergyTriple(rate_iid(p_y, link.p10), res.p_of, res.p_uf)


def iid_max_rate(p10: float) -> tuple[float, float]:
    """(p_y maximizing the Z-channel rate, that rate)."""
    if p10 >= 1.0:
        return 0.0, 0.0
    x, negr = golden_section(lambda p: -rate_iid(p, p10), 0.0, 1.0 - p10, tol=1e-12)
    return x, -negr


def optimize_iid(problem: OptProblem) -> OptResult:
    link, R = problem.link, problem.rate
    p_top = 1.0 - link.p10
    p_star, r_max = iid_max_rate(link.p10)
    if R > r_max + 1e-12:
        return OptResult("iid", False, message=f"rate {R} exceeds the maximum i.i.d. rate {r_max:.6f}")

    def r(p):
        return rate_iid(min(p, p_top), link.p10)

    lo = 0.0 if r(0.0) >= R else _bisect_level(r, 0.0, p_star, R)
    hi = p_top if r(p_top) >= R else _bisect_level(r, p_star, p_top, R)
    count = 0

    def g(p):
        nonlocal count
        count += 1
        return _usage_battery(p, link).objective

    p_best, f_best = golden_section(g, lo, hi, tol=1e-10)
    step = problem.grid_step
    for j in range(-50, 51):
        p = min(hi, max(lo, p_best + j * step))
        fp = g(p)
        if fp < f_best:
            p_best, f_best = p, fp
    p_x = p_best / p_top if p_top > 0 else 0.0
    triple = iid_triple(p_x, link)
    return OptResult("iid", True, (p_x,), triple.objective, triple, "analytic", evaluations=count)


def analytic_supported(spec: RllSpec, link: LinkEnv) -> bool:
    if not link.iid_usage:
        return False
    return spec.code_type is CodeType.TYPE0 or link.p10 == 0.0


def evaluate_constrained(spec: RllSpec, P: EdgeProbs, link: LinkEnv,
                         sim_steps: int = 1_000_000, sim_burn_in: int = 10_000,
                         seed: int = 0) -> tuple[EnergyTriple, str]:
    """Triple for a constrained code, analytic where a closed form exists."""
    if analytic_supported(spec, link):
        return triple_analytic(spec, P, link.p10, link.q, link.b_max), "analytic"
    est = simulate(SimConfig(link, spec=spec, probs=P, steps=sim_steps,
                             burn_in=sim_burn_in, replications=1, seed=seed))
    return EnergyTriple(rate_constrained(spec, P, link.p10), est.p_of, est.p_uf), "empirical"


def _groups(spec: RllSpec, tie_groups) -> list[list[int]]:
    if tie_groups is None:
        return [[j] for j in range(spec.d, spec.k)]
    groups = [sorted(int(j) for j in g) for g in tie_groups]
    flat = sorted(j for g in groups for j in g)
    if flat != list(range(spec.d, spec.k)):
        raise ValueError(f"tie groups must partition states {spec.d}..{spec.k - 1}, got {tie_groups}")
    return groups


def optimize_constrained(problem: OptProblem) -> OptResult:
    spec: RllSpec = problem.family
    link, R, eps = problem.link, problem.rate, problem.epsilon
    name = problem.family_name
    cap = capacity_analysis(spec).capacity_bits
    if R > cap + 1e-12:
        return OptResult(name, False, message=f"rate {R} exceeds the capacity {cap:.4f} of {spec}")
    groups = _groups(spec, problem.tie_groups)
    source = "analytic" if analytic_supported(spec, link) else "empirical"
    cache: dict[tuple, tuple[float, EnergyTriple]] = {}

    def expand(theta) -> EdgeProbs:
        probs = [0.0] * spec.n_free
        for g, t in zip(groups, theta):
            for j in g:
                probs[j - spec.d] = t
        return EdgeProbs(probs)

    def f(theta) -> float:
        key = tuple(float(t) for t in theta)
        if key not in cache:
            P = expand(key)
            tr, _ = evaluate_constrained(spec, P, link, problem.sim_steps, problem.sim_burn_in, problem.seed)
            val = tr.objective if tr.rate >= R else 1.0 + (R - tr.rate)
            cache[key] = (val, tr)
        return cache[key][0]

    if not groups:
        f(())
        val, tr = cache[()]
        ok = tr.rate >= R - RATE_SLACK
        return OptResult(name, ok, (), tr.objective if ok else math.nan, tr if ok else None, source,
                         "" if ok else f"deterministic {spec} has rate 0", len(cache))

    rng = np.random.default_rng(np.random.SeedSequence(problem.seed, spawn_key=(1,)))
    maxent = capacity_analysis(spec).maxentropic.probs
    starts = [
        [float(np.clip(np.mean([maxent[j - spec.d] for j in g]), eps, 1 - eps)) for g in groups],
        [0.5] * len(groups),
    ]
    while len(starts) < problem.starts:
        starts.append(rng.uniform(eps, 1 - eps, len(groups)).tolist())
    starts = starts[: max(1, problem.starts)]

    finals = []
    for theta in starts:
        theta = list(theta)
        cur = f(theta)
        for _ in range(problem.max_sweeps):
            before = cur
            for gi in range(len(theta)):
                def line(t, gi=gi):
                    trial = list(theta)
                    trial[gi] = t
                    return f(trial)

                t_best, v_best = golden_section(line, eps, 1 - eps, tol=problem.golden_tol)
                if v_best < cur:
                    theta[gi], cur = t_best, v_best
            if before - cur <= problem.sweep_tol:
                break
        if problem.polish:
            res = minimize(lambda th: f(np.clip(th, eps, 1 - eps)), theta, method="Nelder-Mead",
                           bounds=[(eps, 1 - eps)] * len(theta),
                           options={"xatol": problem.golden_tol, "fatol": problem.sweep_tol,
                                    "maxfev": problem.polish_evals * len(theta)})
            th = [float(t) for t in np.clip(res.x, eps, 1 - eps)]
            if f(th) < cur:
                theta, cur = th, f(th)
        finals.append((cur, tuple(float(t) for t in theta)))

    start_objs = tuple(v for v, _ in finals)
    feasible = [(v, th) for v, th in finals if cache[th][1].rate >= R - RATE_SLACK and v < 1.0]
    if not feasible:
        return OptResult(name, False, message=f"no start reached rate {R} for {spec} under p10={link.p10}",
                         evaluations=len(cache), start_objectives=start_objs)
    v, th = min(feasible)
    tr = cache[th][1]
    return OptResult(name, True, expand(th).probs, tr.objective, tr, source,
                     evaluations=len(cache), start_objectives=start_objs)


def optimize(problem: OptProblem) -> OptResult:
    return optimize_iid(problem) if problem.is_iid else optimize_constrained(problem)


def reevaluate(problem: OptProblem, result: OptResult) -> EnergyTriple:
    """Recompute the triple at ``result``'s parameters (same seed for simulated objectives)."""
    if problem.is_iid:
        return iid_triple(result.params[0], problem.link)
    tr, _ = evaluate_constrained(problem.family, EdgeProbs(result.params), problem.link,
                                 problem.sim_steps, problem.sim_burn_in, problem.seed)
    return tr


# ---------------------------------------------------------------- sweeps

SWEEP_HEADER = ("family", "axis", "value", "rate", "p_of", "p_uf", "objective", "source")
AXES = ("q0", "R", "p10")


@dataclass(frozen=True)
class Family:
    name: str
    spec: RllSpec | None = None
    tie_groups: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep: every family is optimized at every axis value.

    Each family gets one seed for the whole axis (derived from ``seed`` and
    the family's position), so simulated objectives share random numbers
    across axis values.
    """

    name: str
    axis: str
    values: tuple[float, ...]
    families: tuple[Family, ...]
    link: LinkEnv
    rate: float
    seed: int = 0
    sim_steps: int = 1_000_000
    sim_burn_in: int = 10_000
    starts: int = 8

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"sweep axis must be one of {AXES}, got {self.axis!r}")

    def family_seed(self, index: int) -> int:
        return int(np.random.SeedSequence([self.seed, index]).generate_state(1)[0])

    def problem(self, index: int, value: float) -> OptProblem:
        fam = self.families[index]
        link, rate = self.link, self.rate
        if self.axis == "q0":
            link = LinkEnv(link.p10, value, link.q1, link.b_max)
        elif self.axis == "p10":
            link = LinkEnv(value, link.q0, link.q1, link.b_max)
        else:
            rate = value
        return OptProblem(rate, link, fam.spec if fam.spec is not None else "iid", fam.tie_groups,
                          starts=self.starts, seed=self.family_seed(index),
                          sim_steps=self.sim_steps, sim_burn_in=self.sim_burn_in)


@dataclass(frozen=True)
class SweepRow:
    family: str
    axis: str
    value: float
    result: OptResult | None
    error: str = ""

    def cells(self) -> tuple:
        r = self.result
        if r is None:
            return (self.family, self.axis, self.value, None, None, None, None, f"error: {self.error}")
        if not r.feasible:
            return (self.family, self.axis, self.value, None, None, None, None, "infeasible")
        t = r.triple
        return (self.family, self.axis, self.value, t.rate, t.p_of, t.p_uf, r.objective, r.source)


def _solve_point(job):
    sweep, index, value = job
    fam = sweep.families[index]
    try:
        return SweepRow(fam.name, sweep.axis, value, optimize(sweep.problem(index, value)))
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return SweepRow(fam.name, sweep.axis, value, None, str(exc))


def run_sweep(sweep: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Optimize every (family, value) pair; rows ordered by family, then value.

    Point failures become error rows. Output does not depend on ``workers``.
    """
    jobs = [(sweep, i, v) for i in range(len(sweep.families)) for v in sorted(sweep.values)]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_solve_point, jobs))
    return [_solve_point(j) for j in jobs]


def _grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    n = int(round((hi - lo) / step))
    return tuple(round(lo + i * step, 10) for i in range(n + 1))


def _t0(d, k, ties=None, name=None):
    spec = RllSpec(CodeType.TYPE0, d, k)
    return Family(name or str(spec), spec, ties)


IID = Family("iid")
K10_TIES = ((0,), (1,), (2,), (3, 4, 5, 6, 7, 8), (9,))


def preset(name: str, seed: int = 0, sim_steps: int | None = None, starts: int = 8) -> SweepSpec:
    """The built-in sweeps ``fig12``, ``fig13`` and ``fig14`` (battery size 2)."""
    extra = {"seed": seed, "starts": starts}
    if sim_steps is not None:
        extra["sim_steps"] = sim_steps
        extra["sim_burn_in"] = min(10_000, sim_steps // 10)
    if name == "fig12":
        fams = (IID, _t0(0, 1), _t0(0, 3), _t0(0, 10, K10_TIES, "type0(0,10)tied"))
        return SweepSpec(name, "q0", _grid(0.1, 0.9, 0.1), fams, LinkEnv(0.0, 0.5, 0.0, 2), 0.1, **extra)
    if name == "fig13":
        fams = (IID, _t0(0, 1), _t0(0, 2), _t0(0, 3))
        return SweepSpec(name, "R", _grid(0.05, 0.65, 0.05), fams, LinkEnv(0.0, 0.0, 0.0, 2), 0.1, **extra)
    if name == "fig14":
        fams = (IID, _t0(0, 3), _t0(1, 3))
        return SweepSpec(name, "p10", _grid(0.0, 0.9, 0.1), fams, LinkEnv(0.0, 0.0, 0.0, 2), 0.01, **extra)
    raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")


PRESETS = ("fig12", "fig13", "fig14")
