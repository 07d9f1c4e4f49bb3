import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swipt_rll.link_models import (
    TRACE_COLUMNS,
    BatteryState,
    Channel,
    LinkEnv,
    UsageModel,
    battery_step,
    channel_step,
    usage_step,
    write_trace_csv,
)
from swipt_rll.simulator import SimConfig, simulate_trace


def _demand_trace(q0, q1, n, seed=1):
    # p_x = 0 leaves the battery idle; the usage stream is what we want
    cfg = SimConfig(LinkEnv(0.0, q0, q1, 2), p_x=0.0, steps=n, burn_in=0, replications=1, seed=seed)
    return simulate_trace(cfg).z.astype(int)


def test_alternating_usage():
    state, zs = 0, []
    for _ in range(6):
        z, state = usage_step(state, 0.0, 0.0, 0.5)
        zs.append(z)
    assert zs == [1, 0, 1, 0, 1, 0]


def test_iid_usage_rate():
    z = _demand_trace(0.7, 0.3, 1_000_000)
    se = math.sqrt(0.3 * 0.7 / z.size)
    assert abs(z.mean() - 0.3) <= 3 * se


def _runs(z, symbol):
    """Lengths of maximal runs of ``symbol``, dropping the truncated edges."""
    edges = np.flatnonzero(np.diff(np.r_[-1, z, -1]) != 0)
    starts, ends = edges[:-1], edges[1:]
    vals = z[starts]
    lengths = (ends - starts)[vals == symbol]
    return lengths[1:-1]


@pytest.mark.parametrize("j, qj", [(0, 0.0), (0, 0.5), (0, 0.9), (1, 0.0), (1, 0.5), (1, 0.9)])
def test_burst_means(j, qj):
    other = 0.3
    q0, q1 = (qj, other) if j == 0 else (other, qj)
    # bursts in U_j emit z = j
    runs = _runs(_demand_trace(q0, q1, 400_000, seed=7 + j), j)
    mean = 1.0 / (1.0 - qj)
    if qj == 0.0:
        assert np.all(runs == 1)
        return
    se = runs.std(ddof=1) / math.sqrt(runs.size)
    assert abs(runs.mean() - mean) <= 3 * se


def test_idle_bursts_of_ten():
    runs = _runs(_demand_trace(0.9, 0.0, 400_000, seed=3), 0)
    assert runs.mean() == pytest.approx(10.0, rel=0.03)


@pytest.mark.parametrize("b, y, z, expect", [
    (2, 1, 0, (2, 1, 0)),
    (0, 0, 1, (0, 0, 1)),
    (0, 1, 1, (0, 0, 0)),
    (1, 1, 1, (1, 0, 0)),
    (1, 1, 0, (2, 0, 0)),
    (1, 0, 1, (0, 0, 0)),
    (2, 0, 0, (2, 0, 0)),
])
def test_battery_step_table(b, y, z, expect):
    assert battery_step(b, y, z, 2) == expect


@given(st.integers(1, 8), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=200),
       st.data())
def test_battery_bounds_and_duality(b_max, yz, data):
    b0 = data.draw(st.integers(0, b_max))
    b, bd = b0, b_max - b0
    for y, z in yz:
        nb, of, uf = battery_step(b, y, z, b_max)
        nbd, ofd, ufd = battery_step(bd, 1 - y, 1 - z, b_max)
        assert 0 <= nb <= b_max
        assert not (of and uf)
        # the mirrored trajectory stays mirrored and swaps the events
        assert nbd == b_max - nb and (ofd, ufd) == (uf, of)
        b, bd = nb, nbd


def test_battery_state_object():
    s, of, uf = BatteryState(2, 2).step(1, 0)
    assert (s.level, of, uf) == (2, 1, 0)
    with pytest.raises(ValueError):
        BatteryState(3, 2)


def test_channel_step():
    assert channel_step(0, 0.9, 0.99) == 0
    assert channel_step(1, 0.0, 0.0) == 1
    assert Channel(0.3).step(1, 0.2) == 0 and Channel(0.3).step(1, 0.3) == 1


def test_channel_loss_rate():
    cfg = SimConfig(LinkEnv(0.3, 0.5, 0.5, 2), p_x=1.0, steps=1_000_000, burn_in=0, replications=1, seed=4)
    y = simulate_trace(cfg).y
    se = math.sqrt(0.21 / y.size)
    assert abs(y.mean() - 0.7) <= 3 * se


def test_usage_model_helpers():
    u = UsageModel.iid(0.3)
    assert u.is_iid and u.demand_probability == pytest.approx(0.3)
    assert UsageModel(0.9, 0.0).demand_probability == pytest.approx(1 / 11)
    assert u.dual() == UsageModel(u.q1, u.q0)
    assert LinkEnv.iid(0.3, 2).q == pytest.approx(0.3)
    with pytest.raises(ValueError):
        LinkEnv(0.0, 0.9, 0.0, 2).q
    with pytest.raises(ValueError):
        LinkEnv(1.5)
    with pytest.raises(ValueError):
        LinkEnv(b_max=0)


def test_trace_csv(tmp_path):
    cfg = SimConfig(LinkEnv.iid(0.5, 2), p_x=0.5, steps=100, burn_in=10, replications=1, seed=0)
    tr = simulate_trace(cfg)
    path = write_trace_csv(tr, tmp_path / "t.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert len(rows) == 101
    assert [int(v) for v in rows[1][1:]] == [tr.x[0], tr.y[0], tr.z[0], tr.b[0], tr.overflow[0], tr.underflow[0]]
