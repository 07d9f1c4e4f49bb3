"""Channel, receiver energy usage and battery: one time slot at a time.

These step functions are the reference semantics. The pure-Python
simulation engine calls them directly; the compiled engine re-implements
them and is tested against them.

Random draws are passed in as uniforms in [0, 1) so that every consumer of
a stream makes identical decisions.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path


class UsageState(enum.IntEnum):
    U0 = 0
    U1 = 1


def _check_prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} = {p} is not a probability")


@dataclass(frozen=True)
class Channel:
    """Z-channel: a transmitted 1 is lost with probability ``p10``."""

    p10: float = 0.0

    def __post_init__(self):
        _check_prob("p10", self.p10)

    def step(self, x: int, u: float) -> int:
        return channel_step(x, self.p10, u)


@dataclass(frozen=True)
class UsageModel:
    """Two-state receiver demand chain.

    In U0 the receiver stays idle (z=0) with probability ``q0``; in U1 it
    keeps demanding (z=1) with probability ``q1``. The emitted symbol
    decides the next state, so bursts have mean length ``1/(1-q_j)``.
    """

    q0: float
    q1: float

    def __post_init__(self):
        _check_prob("q0", self.q0)
        _check_prob("q1", self.q1)

    @classmethod
    def iid(cls, q: float) -> "UsageModel":
        return cls(1.0 - q, q)

    @property
    def is_iid(self) -> bool:
        return abs(self.q0 + self.q1 - 1.0) < 1e-12

    @property
    def demand_probability(self) -> float:
        """Long-run Pr[Z = 1]."""
        a, b = 1.0 - self.q0, 1.0 - self.q1
        if a + b == 0.0:
            raise ValueError("usage chain with q0 = q1 = 1 has no unique demand rate")
        return a / (a + b)

    def dual(self) -> "UsageModel":
        return UsageModel(self.q1, self.q0)

    def step(self, state: int, u: float) -> tuple[int, int]:
        return usage_step(state, self.q0, self.q1, u)


@dataclass(frozen=True)
class LinkEnv:
    p10: float = 0.0
    q0: float = 0.5
    q1: float = 0.5
    b_max: int = 2

    def __post_init__(self):
        _check_prob("p10", self.p10)
        _check_prob("q0", self.q0)
        _check_prob("q1", self.q1)
        if int(self.b_max) != self.b_max or self.b_max < 1:
            raise ValueError(f"b_max must be a positive integer, got {self.b_max}")

    @classmethod
    def iid(cls, q: float, b_max: int, p10: float = 0.0) -> "LinkEnv":
        return cls(p10, 1.0 - q, q, b_max)

    @property
    def usage(self) -> UsageModel:
        return UsageModel(self.q0, self.q1)

    @property
    def iid_usage(self) -> bool:
        return self.usage.is_iid

    @property
    def q(self) -> float:
        """Demand probability of an i.i.d. usage process."""
        if not self.iid_usage:
            raise ValueError(f"usage (q0={self.q0}, q1={self.q1}) is not i.i.d.")
        return self.q1


@dataclass(frozen=True)
class BatteryState:
    level: int
    b_max: int

    def __post_init__(self):
        if self.b_max < 1:
            raise ValueError("b_max must be >= 1")
        if not 0 <= self.level <= self.b_max:
            raise ValueError(f"battery level {self.level} outside [0, {self.b_max}]")

    def step(self, y: int, z: int) -> tuple["BatteryState", int, int]:
        b, of, uf = battery_step(self.level, y, z, self.b_max)
        return BatteryState(b, self.b_max), of, uf


def usage_step(state: int, q0: float, q1: float, u: float) -> tuple[int, int]:
    """Return ``(z, next_state)``."""
    if state == 0:
        if u < q0:
            return 0, 0
        return 1, 1
    if u < q1:
        return 1, 1
    return 0, 0


def channel_step(x: int, p10: float, u: float) -> int:
    if x and u >= p10:
        return 1
    return 0


def battery_step(b: int, y: int, z: int, b_max: int) -> tuple[int, int, int]:
    """Return ``(b_next, overflow, underflow)``.

    The harvested unit sits in the supercapacitor and serves a same-slot
    demand before anything is committed to the battery.
    """
    overflow = 1 if (b == b_max and y == 1 and z == 0) else 0
    underflow = 1 if (b == 0 and y == 0 and z == 1) else 0
    return min(b_max, max(0, b + y - z)), overflow, underflow


TRACE_COLUMNS = ("i", "x", "y", "z", "b", "overflow", "underflow")


def write_trace_csv(trace, path) -> Path:
    """Dump a simulation trace as ``i,x,y,z,b,overflow,underflow`` rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        cols = (trace.x, trace.y, trace.z, trace.b, trace.overflow, trace.underflow)
        for i, row in enumerate(zip(*(c.tolist() for c in cols)), start=1):
            w.writerow((i, *row))
    return path
