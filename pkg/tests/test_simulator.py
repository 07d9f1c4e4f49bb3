import math

import numpy as np
import pytest

from oracles import within_3se
from swipt_rll._engine import ENGINES
from swipt_rll.constraint_codes import CodeType, EdgeProbs, RllSpec
from swipt_rll.link_models import LinkEnv, battery_step
from swipt_rll.simulator import (
    SimConfig,
    renewal_audit,
    run_replication,
    simulate,
    simulate_trace,
    write_estimate_csv,
)

T0, T1 = CodeType.TYPE0, CodeType.TYPE1
needs_ext = pytest.mark.skipif("cython" not in ENGINES, reason="compiled engine not built")

CONFIGS = [
    SimConfig(LinkEnv(0.2, 0.6, 0.3, 3), p_x=0.45, steps=30_000, burn_in=1000, replications=2, seed=5),
    SimConfig(LinkEnv(0.1, 0.2, 0.7, 2), spec=RllSpec(T0, 1, 4), probs=EdgeProbs([0.3, 0.6, 0.5]),
              steps=30_000, burn_in=1000, replications=2, seed=6),
    SimConfig(LinkEnv(0.0, 0.9, 0.0, 1), spec=RllSpec(T1, 0, 2), probs=EdgeProbs([1.0, 0.0]),
              steps=70_000, burn_in=0, replications=1, seed=7),
]


@needs_ext
@pytest.mark.parametrize("cfg", CONFIGS)
def test_engines_agree(cfg):
    for r in range(cfg.replications):
        assert run_replication(cfg, r, "python") == run_replication(cfg, r, "cython")
    a = simulate_trace(cfg, engine="python", include_burn_in=True)
    b = simulate_trace(cfg, engine="cython", include_burn_in=True)
    for name in ("x", "y", "z", "b", "overflow", "underflow", "c"):
        if getattr(a, name) is not None:
            np.testing.assert_array_equal(getattr(a, name), getattr(b, name))


@pytest.mark.parametrize("cfg", CONFIGS[:2])
def test_trace_obeys_step_semantics(cfg):
    tr = simulate_trace(cfg)
    b_max = cfg.link.b_max
    for t in range(len(tr) - 1):
        nb, of, uf = battery_step(int(tr.b[t]), int(tr.y[t]), int(tr.z[t]), b_max)
        assert (nb, of, uf) == (tr.b[t + 1], tr.overflow[t], tr.underflow[t])
        assert tr.y[t] <= tr.x[t]
    # event totals agree with the counting run
    assert (int(tr.overflow.sum()), int(tr.underflow.sum())) == run_replication(cfg, 0)


def test_determinism_across_workers():
    cfg = SimConfig(LinkEnv(0.1, 0.4, 0.6, 3), spec=RllSpec(T0, 0, 3), probs=EdgeProbs([0.4, 0.5, 0.6]),
                    steps=100_000, replications=6, seed=99)
    a = simulate(cfg, workers=1)
    b = simulate(cfg, workers=4)
    c = simulate(cfg, workers=3)
    assert a == b == c


def test_matched_iid_point():
    cfg = SimConfig(LinkEnv.iid(0.5, 4), p_x=0.5, steps=1_000_000, replications=10, seed=12)
    est = simulate(cfg)
    assert within_3se(0.05, est.p_of, est.se_of) and within_3se(0.05, est.p_uf, est.se_uf)


def test_alternating_code_meets_alternating_demand():
    for seed in range(4):
        for b0 in range(3):
            cfg = SimConfig(LinkEnv(0.0, 0.0, 0.0, 2), spec=RllSpec(T0, 1, 1), steps=10_000, burn_in=1000,
                            replications=2, seed=seed, b_start=b0)
            est = simulate(cfg)
            assert est.overflow_count == 0 and est.underflow_count == 0


def test_no_demand_saturates():
    cfg = SimConfig(LinkEnv.iid(0.0, 2), p_x=0.3, steps=1_000_000, replications=10, seed=13)
    est = simulate(cfg)
    assert est.p_uf == 0.0 and est.underflow_count == 0
    assert within_3se(0.3, est.p_of, est.se_of)


def test_mirrored_run_swaps_events_exactly():
    cfg = SimConfig(LinkEnv(0.0, 0.7, 0.4, 3), spec=RllSpec(T0, 1, 4), probs=EdgeProbs([0.3, 0.6, 0.5]),
                    steps=200_000, replications=3, seed=21, b_start=1)
    a, b = simulate(cfg), simulate(cfg.mirrored())
    assert (a.per_rep_of, a.per_rep_uf) == (b.per_rep_uf, b.per_rep_of)
    ta, tb = simulate_trace(cfg), simulate_trace(cfg.mirrored())
    np.testing.assert_array_equal(ta.x, 1 - tb.x)
    np.testing.assert_array_equal(ta.b, 3 - tb.b)


def test_standard_error_shrinks_like_root_n():
    base = dict(link=LinkEnv.iid(0.4, 2), p_x=0.45, burn_in=1000, replications=200, seed=77)
    se1 = simulate(SimConfig(steps=20_000, **base)).se_of
    se2 = simulate(SimConfig(steps=40_000, **base)).se_of
    assert se2 / se1 == pytest.approx(1 / math.sqrt(2), rel=0.2)


def test_single_replication_has_no_standard_error():
    est = simulate(SimConfig(LinkEnv.iid(0.4, 2), p_x=0.4, steps=10_000, burn_in=100, replications=1))
    assert math.isnan(est.se_of) and math.isnan(est.se_uf)


def test_config_validation():
    link = LinkEnv.iid(0.5, 2)
    with pytest.raises(ValueError):
        SimConfig(link)
    with pytest.raises(ValueError):
        SimConfig(link, p_x=0.5, spec=RllSpec(T0, 0, 1))
    with pytest.raises(ValueError):
        SimConfig(link, p_x=0.5, steps=1000, burn_in=200)
    with pytest.raises(ValueError):
        SimConfig(link, p_x=0.5, replications=0)
    with pytest.raises(ValueError):
        SimConfig(link, p_x=0.5, b_start=3)


def test_forced_cycle_audit():
    cfg = SimConfig(LinkEnv.iid(0.5, 2), spec=RllSpec(T0, 1, 1), steps=10_000, burn_in=100, replications=1)
    audit = renewal_audit(simulate_trace(cfg))
    assert audit.interval_pmf == {2: 1.0}


def test_audit_interval_law():
    cfg = SimConfig(LinkEnv.iid(0.5, 2), spec=RllSpec(T0, 1, 3), probs=EdgeProbs([0.5, 0.4]),
                    steps=500_000, replications=1, seed=3)
    audit = renewal_audit(simulate_trace(cfg), b_max=2)
    n = audit.n_intervals
    for i, p in {2: 0.5, 3: 0.3, 4: 0.2}.items():
        assert abs(audit.interval_pmf[i] - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_audit_identity_and_iid_rejection():
    cfg = SimConfig(LinkEnv(0.1, 0.3, 0.8, 3), spec=RllSpec(T0, 0, 2), probs=EdgeProbs([0.6, 0.5]),
                    steps=300_000, replications=1, seed=8)
    audit = renewal_audit(simulate_trace(cfg), b_max=3)
    assert abs(audit.renewal_reward_underflow() - audit.underflow_rate) <= 1e-9
    assert abs(audit.renewal_reward_overflow() - audit.overflow_rate) <= 1e-9
    with pytest.raises(ValueError):
        renewal_audit(simulate_trace(SimConfig(LinkEnv.iid(0.5, 2), p_x=0.5, steps=1000, burn_in=0)))


def test_estimate_csv(tmp_path):
    est = simulate(SimConfig(LinkEnv.iid(0.5, 2), p_x=0.5, steps=10_000, burn_in=100, replications=2, seed=4))
    path = tmp_path / "est.csv"
    write_estimate_csv(est, path, "# note")
    lines = path.read_text().splitlines()
    assert lines[0] == "# note"
    assert lines[1] == "p_of,p_uf,se_of,se_uf,n,reps,seed"
    assert lines[2].endswith(",10000,2,4")


def test_pure_python_engine_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SWIPT_RLL_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from swipt_rll._engine import engine; print(engine.NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
