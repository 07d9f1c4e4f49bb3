"""Run-length-limited codes for joint information and energy transfer."""

__version__ = "0.1.0"

from .analytics_constrained import (
    UnsupportedAnalytics,
    rate_constrained,
    renewal_battery_chain,
    renewal_rewards,
    triple_type0,
    triple_type1_noiseless,
)
from .analytics_unconstrained import (
    EnergyTriple,
    binary_entropy,
    entropy_inverse,
    of_uf_iid,
    of_uf_markov_usage,
    rate_iid,
    solve_lemma3,
)
from .chains import ChainSolution
from .constraint_codes import (
    CodeType,
    EdgeProbs,
    RenewalDist,
    RllSpec,
    capacity_analysis,
    code_stationary,
    renewal_dist,
    sample_codeword,
    validate_and_trace,
)
from .link_models import BatteryState, Channel, LinkEnv, UsageModel
from .simulator import SimConfig, SimEstimate, renewal_audit, simulate, simulate_trace

__all__ = [
    "BatteryState",
    "binary_entropy",
    "capacity_analysis",
    "ChainSolution",
    "Channel",
    "code_stationary",
    "CodeType",
    "EdgeProbs",
    "EnergyTriple",
    "entropy_inverse",
    "LinkEnv",
    "of_uf_iid",
    "of_uf_markov_usage",
    "rate_constrained",
    "rate_iid",
    "renewal_audit",
    "renewal_battery_chain",
    "renewal_dist",
    "renewal_rewards",
    "RenewalDist",
    "RllSpec",
    "sample_codeword",
    "SimConfig",
    "SimEstimate",
    "simulate",
    "simulate_trace",
    "solve_lemma3",
    "triple_type0",
    "triple_type1_noiseless",
    "UnsupportedAnalytics",
    "UsageModel",
    "validate_and_trace",
]
