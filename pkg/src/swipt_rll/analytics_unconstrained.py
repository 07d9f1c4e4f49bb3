"""Closed-form performance of unconstrained (i.i.d. Bernoulli) codes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .chains import ChainSolution, solve_chain

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EnergyTriple:
    rate: float
    p_of: float
    p_uf: float

    @property
    def objective(self) -> float:
        return max(self.p_of, self.p_uf)


@dataclass(frozen=True)
class BatteryResult:
    p_of: float
    p_uf: float
    chain: ChainSolution

    @property
    def objective(self) -> float:
        return max(self.p_of, self.p_uf)


def binary_entropy(a):
    """H(a) in bits, with H(0) = H(1) = 0. Accepts scalars or arrays."""
    a = np.asarray(a, dtype=float)
    h = (entr(a) + entr(1.0 - a)) / LN2
    return float(h) if h.ndim == 0 else h


def entropy_inverse(r: float, tol: float = 1e-12) -> float:
    """The unique a in [0, 1/2] with H(a) = r, by bisection."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"entropy value {r} outside [0, 1]")
    if r == 1.0:
        return 0.5  # H is flat to double precision near 1/2
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rate_iid(p_y: float, p10: float) -> float:
    """Mutual information of the Z-channel for received on-probability p_y."""
    if p10 >= 1.0:
        if p_y > 0.0:
            raise ValueError("p_y must be 0 when every transmitted 1 is lost")
        return 0.0
    if p_y < 0.0 or p_y > (1.0 - p10) + 1e-12:
        raise ValueError(f"p_y = {p_y} infeasible for p10 = {p10} (need p_y <= {1 - p10})")
    return binary_entropy(p_y) - p_y / (1.0 - p10) * binary_entropy(p10)


def _birth_death_stationary(up: float, down: float, b_max: int) -> np.ndarray:
    if down == 0.0:
        pi = np.zeros(b_max + 1)
        pi[-1] = 1.0
        return pi
    if up == 0.0:
        pi = np.zeros(b_max + 1)
        pi[0] = 1.0
        return pi
    # weights A**i, rescaled so the largest is 1
    logA = math.log(up) - math.log(down)
    e = np.arange(b_max + 1) * logA
    w = np.exp(e - e.max())
    return w / w.sum()


def of_uf_iid(p_y: float, q: float, b_max: int) -> BatteryResult:
    """Overflow/underflow for i.i.d. arrivals (p_y) and i.i.d. demand (q).

    With no net drift in either direction (``p_y(1-q) = (1-p_y)q = 0``) the
    battery never moves; it is then reported as sitting at ``b_max // 2``
    and both event probabilities are 0.
    """
    up = p_y * (1.0 - q)
    down = (1.0 - p_y) * q
    n = b_max + 1
    T = np.zeros((n, n))
    for i in range(n):
        if i < b_max:
            T[i, i + 1] = up
        if i > 0:
            T[i, i - 1] = down
        T[i, i] = 1.0 - T[i].sum()
    if up == 0.0 and down == 0.0:
        pi = np.zeros(n)
        pi[b_max // 2] = 1.0
    else:
        pi = _birth_death_stationary(up, down, b_max)
    p_of = float(pi[-1] * up)
    p_uf = float(pi[0] * down)
    return BatteryResult(p_of, p_uf, ChainSolution(T, pi))


def joint_usage_matrix(p_y: float, q0: float, q1: float, b_max: int) -> np.ndarray:
    """One-slot law of (battery, usage state); state index is ``2*b + u``."""
    n = 2 * (b_max + 1)
    T = np.zeros((n, n))
    # (probability, z, next usage state) for each usage state
    usage = {
        0: ((q0, 0, 0), (1.0 - q0, 1, 1)),
        1: ((q1, 1, 1), (1.0 - q1, 0, 0)),
    }
    for b in range(b_max + 1):
        for u in (0, 1):
            for pz, z, nu in usage[u]:
                for py, y in ((p_y, 1), (1.0 - p_y, 0)):
                    nb = min(b_max, max(0, b + y - z))
                    T[2 * b + u, 2 * nb + nu] += pz * py
    return T


def of_uf_markov_usage(p_y: float, q0: float, q1: float, b_max: int) -> BatteryResult:
    """Overflow/underflow with i.i.d. arrivals and two-state Markov demand.

    A reducible joint chain (corner parameters) is resolved from the
    default start: battery ``b_max // 2``, usage state U0.
    """
    T = joint_usage_matrix(p_y, q0, q1, b_max)
    sol = solve_chain(T, start=2 * (b_max // 2))
    pi = sol.stationary
    p_of = pi[2 * b_max] * p_y * q0 + pi[2 * b_max + 1] * p_y * (1.0 - q1)
    p_uf = pi[0] * (1.0 - p_y) * (1.0 - q0) + pi[1] * (1.0 - p_y) * q1
    return BatteryResult(float(p_of), float(p_uf), sol)


def overflow_iid(p_y: float, q: float, b_max: int) -> float:
    return of_uf_iid(p_y, q, b_max).p_of


def underflow_iid(p_y: float, q: float, b_max: int) -> float:
    return of_uf_iid(p_y, q, b_max).p_uf


@dataclass(frozen=True)
class Lemma3Solution:
    p_x_star: float
    value: float
    regime: str  # "matched", "overflow-limited" or "underflow-limited"


def solve_lemma3(R: float, q: float, b_max: int) -> Lemma3Solution:
    """Closed-form minimizer of max(O, U) subject to H(p_x) >= R.

    Noiseless channel, i.i.d. demand with probability ``q``.
    """
    if R > 1.0:
        raise ValueError(f"rate {R} exceeds 1 bit per channel use")
    if R <= binary_entropy(q):
        p = q
        regime = "matched"
    elif q <= 0.5:
        p = entropy_inverse(R)
        regime = "overflow-limited"
    else:
        p = 1.0 - entropy_inverse(R)
        regime = "underflow-limited"
    res = of_uf_iid(p, q, b_max)
    return Lemma3Solution(p, res.objective, regime)
