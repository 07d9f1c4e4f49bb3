"""Renewal-reward analytics for (d,k)-RLL codes with i.i.d. demand.

Renewals are the slots where the code state is 0. For a type-0 code a
renewal interval of length ``i`` carries ``i - 1`` zeros followed by a single
1, so the battery can only drain during the first ``i - 1`` slots and gains
at most one unit in the last one. Sampling the battery at renewal instants
therefore gives a Markov chain, and long-run event rates are
(expected events per interval) / (expected interval length).

Type-1 codes with a lossless channel are the exact mirror image: complement
the transmitted symbols and the demand, and read the battery from the top
(``b -> b_max - b``). Overflow and underflow trade places.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from .analytics_unconstrained import EnergyTriple, binary_entropy
from .chains import ChainSolution, solve_chain
from .constraint_codes import (
    CodeType,
    EdgeProbs,
    RenewalDist,
    RllSpec,
    code_stationary,
    renewal_dist,
)


class UnsupportedAnalytics(ValueError):
    """The requested regime has no closed form here; simulate it instead."""


def rate_constrained(spec: RllSpec, P: EdgeProbs, p10: float = 0.0) -> float:
    """Achievable rate sum_j pi_j {H(a_j (1-p10)) - a_j H(p10)}.

    ``a_j`` is the probability of transmitting a 1 from state j, which is
    ``1 - p_j`` for type-0 codes and ``p_j`` for type-1 codes.
    """
    if spec.deterministic:
        P.check(spec)
        return 0.0
    pi = code_stationary(spec, P).stationary
    p = np.asarray(P.probs)
    on = 1.0 - p if spec.code_type is CodeType.TYPE0 else p
    terms = binary_entropy(on * (1.0 - p10)) - on * binary_entropy(p10)
    return float(np.dot(pi[spec.d: spec.k], terms))


def binomial_table(i_max: int, q: float) -> np.ndarray:
    """``tab[i, n] = C(i, n) q^n (1-q)^(i-n)`` for 0 <= n <= i <= i_max, in log space."""
    i = np.arange(i_max + 1)[:, None]
    n = np.arange(i_max + 1)[None, :]
    m = np.maximum(i - n, 0)
    logc = gammaln(i + 1) - gammaln(n + 1) - gammaln(m + 1)
    tab = np.exp(logc + xlogy(n, q) + xlog1py(m, -q))
    return np.where(n <= i, tab, 0.0)


@dataclass(frozen=True)
class RenewalBatteryChain:
    chain: ChainSolution
    renewal: RenewalDist

    @property
    def transition(self) -> np.ndarray:
        return self.chain.transition

    @property
    def stationary(self) -> np.ndarray:
        return self.chain.stationary


@dataclass(frozen=True)
class RenewalRewards:
    expected_interval: float
    expected_underflow: np.ndarray  # indexed by battery level at the renewal
    expected_overflow: np.ndarray


def _require_type0(spec: RllSpec):
    if spec.code_type is not CodeType.TYPE0:
        raise UnsupportedAnalytics("renewal battery chain is built for type-0 codes")


def _check_link(p10, q, b_max):
    for name, v in (("p10", p10), ("q", q)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} = {v} is not a probability")
    if b_max < 1:
        raise ValueError("b_max must be >= 1")


def renewal_transition_matrix(spec: RllSpec, P: EdgeProbs, p10: float, q: float, b_max: int) -> np.ndarray:
    """Battery-at-renewal transition matrix for a type-0 code.

    Within an interval of length ``i``, ``L ~ Bin(i-1, q)`` demands hit the
    battery before the final slot. If the final 1 arrives (prob ``1-p10``)
    it either serves a same-slot demand or is stored; if it is lost the
    final slot is one more plain demand draw, so ``L' ~ Bin(i, q)``.
    """
    _require_type0(spec)
    _check_link(p10, q, b_max)
    pI = renewal_dist(spec, P)
    tab = binomial_table(spec.k + 1, q)
    levels = np.arange(b_max + 1)
    T = np.zeros((b_max + 1, b_max + 1))
    for m in levels:
        row = T[m]
        for i, w in pI.items():
            if w == 0.0:
                continue
            l1 = np.arange(i)
            after = np.maximum(m - l1, 0)
            recv = (1.0 - p10) * w * tab[i - 1, :i]
            np.add.at(row, after, q * recv)
            np.add.at(row, np.minimum(after + 1, b_max), (1.0 - q) * recv)
            l2 = np.arange(i + 1)
            np.add.at(row, np.maximum(m - l2, 0), p10 * w * tab[i, : i + 1])
    return T


def renewal_battery_chain(spec: RllSpec, P: EdgeProbs, p10: float, q: float, b_max: int) -> RenewalBatteryChain:
    """Battery sampled at renewal instants, with its stationary law.

    Degenerate demand can leave several absorbing levels; the limit is then
    taken from the default start ``b_max // 2``.
    """
    T = renewal_transition_matrix(spec, P, p10, q, b_max)
    return RenewalBatteryChain(solve_chain(T, start=b_max // 2), renewal_dist(spec, P))


def renewal_rewards(spec: RllSpec, P: EdgeProbs, p10: float, q: float, b_max: int) -> RenewalRewards:
    """Expected overflow/underflow counts per renewal interval, by start level."""
    _require_type0(spec)
    _check_link(p10, q, b_max)
    pI = renewal_dist(spec, P)
    tab = binomial_table(spec.k + 1, q)
    under = np.zeros(b_max + 1)
    over = np.zeros(b_max + 1)
    for i, w in pI.items():
        l1 = np.arange(i)
        l2 = np.arange(i + 1)
        for b in range(b_max + 1):
            # each demand beyond the stored b units is an underflow
            under[b] += w * (
                (1.0 - p10) * np.dot(np.maximum(l1 - b, 0), tab[i - 1, :i])
                + p10 * np.dot(np.maximum(l2 - b, 0), tab[i, : i + 1])
            )
        over[b_max] += w * (1.0 - p10) * tab[i, 0]
    return RenewalRewards(pI.mean, under, over)


def triple_type0(spec: RllSpec, P: EdgeProbs, p10: float, q: float, b_max: int) -> EnergyTriple:
    """(rate, P_of, P_uf) of a type-0 code under i.i.d. demand."""
    _require_type0(spec)
    rate = rate_constrained(spec, P, p10)
    chain = renewal_battery_chain(spec, P, p10, q, b_max)
    rw = renewal_rewards(spec, P, p10, q, b_max)
    pi = chain.stationary
    p_of = float(np.dot(pi, rw.expected_overflow) / rw.expected_interval)
    p_uf = float(np.dot(pi, rw.expected_underflow) / rw.expected_interval)
    return EnergyTriple(rate, p_of, p_uf)


def triple_type1_noiseless(spec: RllSpec, P: EdgeProbs, q: float, b_max: int, p10: float = 0.0) -> EnergyTriple:
    """(rate, P_of, P_uf) of a type-1 code, lossless channel, i.i.d. demand.

    Evaluated through the mirror map onto a type-0 code with demand
    probability ``1 - q``.
    """
    if spec.code_type is not CodeType.TYPE1:
        raise ValueError(f"expected a type-1 code, got {spec}")
    if p10 != 0.0:
        raise UnsupportedAnalytics(
            "type-1 analytics need a lossless channel (p10 = 0); use the simulator"
        )
    mirror = triple_type0(spec.dual(), P, 0.0, 1.0 - q, b_max)
    return EnergyTriple(mirror.rate, mirror.p_uf, mirror.p_of)


def type1_renewal_stationary(spec: RllSpec, P: EdgeProbs, q: float, b_max: int) -> np.ndarray:
    """Battery-at-renewal law for a lossless type-1 code (mirror of type-0)."""
    if spec.code_type is not CodeType.TYPE1:
        raise ValueError(f"expected a type-1 code, got {spec}")
    return renewal_battery_chain(spec.dual(), P, 0.0, 1.0 - q, b_max).stationary[::-1].copy()


def triple_analytic(spec: RllSpec, P: EdgeProbs, p10: float, q: float, b_max: int) -> EnergyTriple:
    """Dispatch to whichever closed form covers ``spec``."""
    if spec.code_type is CodeType.TYPE0:
        return triple_type0(spec, P, p10, q, b_max)
    return triple_type1_noiseless(spec, P, q, b_max, p10=p10)


__all__ = [
    "UnsupportedAnalytics",
    "RenewalBatteryChain",
    "RenewalRewards",
    "binomial_table",
    "rate_constrained",
    "renewal_battery_chain",
    "renewal_rewards",
    "renewal_transition_matrix",
    "triple_analytic",
    "triple_type0",
    "triple_type1_noiseless",
    "type1_renewal_stationary",
]
