"""Seeded Monte Carlo of the full link: code -> channel -> demand -> battery.

Replication ``r`` draws from ``PCG64(SeedSequence(seed, spawn_key=(r,)))``.
Each slot consumes three uniforms (code, channel, demand), drawn in fixed
blocks of ``CHUNK`` slots, so results depend only on the config and never
on the engine or on how replications are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._engine import get_engine
from .constraint_codes import EdgeProbs, RllSpec, advance_probs, code_stationary
from .link_models import LinkEnv

CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    """One simulation experiment.

    Exactly one code source: ``p_x`` for an i.i.d. code, or ``spec`` with
    ``probs`` for a constrained code (endpoint probabilities allowed).
    """

    link: LinkEnv
    p_x: float | None = None
    spec: RllSpec | None = None
    probs: EdgeProbs | None = None
    steps: int = 1_000_000
    burn_in: int = 10_000
    replications: int = 10
    seed: int = 0
    b_start: int | None = None
    usage_start: int = 0
    code_start: int | None = None

    def __post_init__(self):
        if (self.p_x is None) == (self.spec is None):
            raise ValueError("give exactly one code source: p_x or spec")
        if self.p_x is not None and not 0.0 <= self.p_x <= 1.0:
            raise ValueError(f"p_x = {self.p_x} is not a probability")
        if self.spec is not None:
            probs = self.probs if self.probs is not None else EdgeProbs()
            probs.check(self.spec, strict=False)
            object.__setattr__(self, "probs", probs)
        if self.steps < 1 or self.replications < 1 or self.burn_in < 0:
            raise ValueError("steps and replications must be >= 1, burn_in >= 0")
        if self.steps < 10 * self.burn_in:
            raise ValueError(f"steps ({self.steps}) must be at least 10 x burn_in ({self.burn_in})")
        if self.b_start is not None and not 0 <= self.b_start <= self.link.b_max:
            raise ValueError(f"b_start {self.b_start} outside [0, {self.link.b_max}]")
        if self.usage_start not in (0, 1):
            raise ValueError("usage_start must be 0 (U0) or 1 (U1)")
        if self.code_start is not None:
            if self.spec is None or not 0 <= self.code_start <= self.spec.k:
                raise ValueError("code_start needs a constrained code and a state in 0..k")

    @property
    def constrained(self) -> bool:
        return self.spec is not None

    @property
    def initial_battery(self) -> int:
        return self.link.b_max // 2 if self.b_start is None else self.b_start

    def mirrored(self) -> "SimConfig":
        """The complemented experiment: type flipped, demand and battery mirrored.

        With a lossless channel and the same seed it reproduces the original
        run with overflow and underflow swapped.
        """
        if self.spec is None:
            raise ValueError("mirroring needs a constrained code")
        link = replace(self.link, q0=self.link.q1, q1=self.link.q0)
        return replace(
            self,
            link=link,
            spec=self.spec.dual(),
            b_start=self.link.b_max - self.initial_battery,
            usage_start=1 - self.usage_start,
        )


@dataclass(frozen=True)
class SimEstimate:
    p_of: float
    p_uf: float
    se_of: float
    se_uf: float
    per_rep_of: tuple[float, ...]
    per_rep_uf: tuple[float, ...]
    overflow_count: int
    underflow_count: int
    n: int
    reps: int
    seed: int

    @property
    def objective(self) -> float:
        return max(self.p_of, self.p_uf)


@dataclass
class Trace:
    """Per-slot record of one replication; ``c`` is None for i.i.d. codes."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    b: np.ndarray
    overflow: np.ndarray
    underflow: np.ndarray
    c: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.x)


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(rep,))))


def _kernel_args(cfg: SimConfig):
    link = cfg.link
    if cfg.constrained:
        adv = advance_probs(cfg.spec, cfg.probs)
        mode, ext, p_x = 1, cfg.spec.code_type.constrained_symbol, 0.0
    else:
        adv = np.zeros(1)
        mode, ext, p_x = 0, 0, cfg.p_x
    return (np.ascontiguousarray(adv, dtype=np.float64), mode, ext, float(p_x),
            float(link.p10), float(link.q0), float(link.q1), int(link.b_max))


def _initial_state(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    u0 = rng.random()
    c = 0
    if cfg.constrained:
        if cfg.code_start is not None:
            c = cfg.code_start
        else:
            cdf = np.cumsum(code_stationary(cfg.spec, cfg.probs, strict=False).stationary)
            c = min(int(np.searchsorted(cdf, u0, side="right")), cfg.spec.k)
    return np.array([c, cfg.usage_start, cfg.initial_battery], dtype=np.int64)


def _blocks(total: int):
    while total > 0:
        m = min(CHUNK, total)
        yield m
        total -= m


def run_replication(cfg: SimConfig, rep: int, engine=None) -> tuple[int, int]:
    """Overflow and underflow counts over the counted steps of one replication."""
    eng = get_engine(engine)
    rng = replication_rng(cfg.seed, rep)
    args = _kernel_args(cfg)
    state = _initial_state(cfg, rng)
    counts = np.zeros(2, dtype=np.int64)
    for m in _blocks(cfg.burn_in):
        eng.advance(rng.random((3, m)), *args, state, counts)
    counts[:] = 0
    for m in _blocks(cfg.steps):
        eng.advance(rng.random((3, m)), *args, state, counts)
    return int(counts[0]), int(counts[1])


def _se(values) -> float:
    r = len(values)
    if r < 2:
        return math.nan
    mean = math.fsum(values) / r
    var = math.fsum((v - mean) ** 2 for v in values) / (r - 1)
    return math.sqrt(var / r)


def simulate(cfg: SimConfig, workers: int = 1, engine: str | None = None) -> SimEstimate:
    """Estimate (P_of, P_uf) as event counts over counted steps.

    Mean and standard error are taken across replications; the standard
    error is NaN for a single replication.
    """
    reps = range(cfg.replications)
    if workers > 1 and cfg.replications > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: run_replication(cfg, r, engine), reps))
    else:
        results = [run_replication(cfg, r, engine) for r in reps]
    of = [o / cfg.steps for o, _ in results]
    uf = [u / cfg.steps for _, u in results]
    r = cfg.replications
    return SimEstimate(
        p_of=math.fsum(of) / r,
        p_uf=math.fsum(uf) / r,
        se_of=_se(of),
        se_uf=_se(uf),
        per_rep_of=tuple(of),
        per_rep_uf=tuple(uf),
        overflow_count=sum(o for o, _ in results),
        underflow_count=sum(u for _, u in results),
        n=cfg.steps,
        reps=r,
        seed=cfg.seed,
    )


def simulate_trace(cfg: SimConfig, rep: int = 0, engine: str | None = None,
                   include_burn_in: bool = False) -> Trace:
    """Per-slot record of replication ``rep``.

    Draws exactly the same stream as ``run_replication``, so event totals
    over the counted part agree with it.
    """
    eng = get_engine(engine)
    rng = replication_rng(cfg.seed, rep)
    args = _kernel_args(cfg)
    state = _initial_state(cfg, rng)
    parts = []
    for phase, total in (("burn", cfg.burn_in), ("count", cfg.steps)):
        for m in _blocks(total):
            buf = np.empty((7, m), dtype=np.int64)
            eng.trace(rng.random((3, m)), *args, state, buf)
            if phase == "count" or include_burn_in:
                parts.append(buf)
    rec = np.concatenate(parts, axis=1) if parts else np.empty((7, 0), dtype=np.int64)
    c, x, y, z, b, of, uf = (rec[i].astype(np.int16 if i in (0, 4) else np.int8) for i in range(7))
    return Trace(
        x=x, y=y, z=z, b=b, overflow=of, underflow=uf,
        c=c if cfg.constrained else None,
        meta={"seed": cfg.seed, "rep": rep, "b_start": cfg.initial_battery,
              "usage_start": cfg.usage_start, "burn_in_included": include_burn_in},
    )


@dataclass(frozen=True)
class RenewalAudit:
    """Empirical renewal statistics of a constrained-code trace.

    Only complete intervals (between two consecutive renewals) are counted.
    ``mean_underflow[b]`` / ``mean_overflow[b]`` are NaN for start levels
    never observed.
    """

    interval_pmf: dict[int, float]
    battery_at_renewal: np.ndarray
    mean_underflow: np.ndarray
    mean_overflow: np.ndarray
    n_intervals: int
    mean_interval: float
    underflow_rate: float
    overflow_rate: float

    def renewal_reward_underflow(self) -> float:
        seen = self.battery_at_renewal > 0
        return float(np.dot(self.battery_at_renewal[seen], self.mean_underflow[seen]) / self.mean_interval)

    def renewal_reward_overflow(self) -> float:
        seen = self.battery_at_renewal > 0
        return float(np.dot(self.battery_at_renewal[seen], self.mean_overflow[seen]) / self.mean_interval)


def renewal_audit(trace: Trace, b_max: int | None = None) -> RenewalAudit:
    """Split a trace at code state 0 and tabulate per-interval statistics."""
    if trace.c is None:
        raise ValueError("trace has no code states (i.i.d. source); renewal audit needs a constrained code")
    starts = np.flatnonzero(trace.c == 0)
    if starts.size < 2:
        raise ValueError("trace holds fewer than two renewals")
    if b_max is None:
        b_max = int(trace.b.max())
    lengths = np.diff(starts)
    lo, hi = starts[0], starts[-1]
    uf_cum = np.concatenate(([0], np.cumsum(trace.underflow, dtype=np.int64)))
    of_cum = np.concatenate(([0], np.cumsum(trace.overflow, dtype=np.int64)))
    uf_per = uf_cum[starts[1:]] - uf_cum[starts[:-1]]
    of_per = of_cum[starts[1:]] - of_cum[starts[:-1]]
    b0 = trace.b[starts[:-1]].astype(np.int64)
    n = lengths.size
    counts = np.bincount(b0, minlength=b_max + 1).astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean_uf = np.bincount(b0, weights=uf_per, minlength=b_max + 1) / counts
        mean_of = np.bincount(b0, weights=of_per, minlength=b_max + 1) / counts
    vals, cnt = np.unique(lengths, return_counts=True)
    span = hi - lo
    return RenewalAudit(
        interval_pmf={int(v): c / n for v, c in zip(vals, cnt)},
        battery_at_renewal=counts / n,
        mean_underflow=mean_uf,
        mean_overflow=mean_of,
        n_intervals=n,
        mean_interval=float(lengths.mean()),
        underflow_rate=float(uf_cum[hi] - uf_cum[lo]) / span,
        overflow_rate=float(of_cum[hi] - of_cum[lo]) / span,
    )


def write_estimate_csv(est: SimEstimate, path, header_comment: str | None = None):
    import csv

    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(header_comment.rstrip("\n") + "\n")
        w = csv.writer(fh)
        w.writerow(("p_of", "p_uf", "se_of", "se_uf", "n", "reps", "seed"))
        w.writerow((f"{est.p_of:.12g}", f"{est.p_uf:.12g}", f"{est.se_of:.12g}",
                    f"{est.se_uf:.12g}", est.n, est.reps, est.seed))
