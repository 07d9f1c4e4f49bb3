"""(d,k) run-length-limited constraint graphs.

States are labelled ``0..k`` and count the length of the current run of the
constrained symbol (0 for type-0 codes, 1 for type-1 codes). In state ``j``
the encoder emits the run-extending symbol and moves to ``j + 1``, or emits
the run-breaking symbol and returns to 0. States ``j < d`` must extend and
state ``k`` must break; the free choices are ``P = (p_d, ..., p_{k-1})``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chains import ChainSolution, perron_root, solve_chain


class CodeType(str, enum.Enum):
    TYPE0 = "type0"
    TYPE1 = "type1"

    @property
    def constrained_symbol(self) -> int:
        return 0 if self is CodeType.TYPE0 else 1

    def dual(self) -> "CodeType":
        return CodeType.TYPE1 if self is CodeType.TYPE0 else CodeType.TYPE0


@dataclass(frozen=True)
class RllSpec:
    code_type: CodeType
    d: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "code_type", CodeType(self.code_type))
        if int(self.d) != self.d or int(self.k) != self.k:
            raise ValueError("d and k must be integers")
        if not 0 <= self.d <= self.k:
            raise ValueError(f"need 0 <= d <= k, got d={self.d}, k={self.k}")

    @property
    def n_states(self) -> int:
        return self.k + 1

    @property
    def n_free(self) -> int:
        """Number of free transition probabilities, k - d."""
        return self.k - self.d

    @property
    def deterministic(self) -> bool:
        return self.d == self.k

    def dual(self) -> "RllSpec":
        return RllSpec(self.code_type.dual(), self.d, self.k)

    def adjacency(self) -> np.ndarray:
        n = self.n_states
        A = np.zeros((n, n))
        for j in range(self.k):
            A[j, j + 1] = 1.0
        A[self.d:, 0] = 1.0
        return A

    def __str__(self):
        return f"{self.code_type.value}({self.d},{self.k})"


@dataclass(frozen=True)
class EdgeProbs:
    """Run-extension probabilities ``p_d .. p_{k-1}`` in state order."""

    probs: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    @classmethod
    def constant(cls, spec: RllSpec, value: float) -> "EdgeProbs":
        return cls((value,) * spec.n_free)

    def check(self, spec: RllSpec, strict: bool = True) -> None:
        """Validate against ``spec``; ``strict`` requires the open interval (0,1)."""
        if len(self.probs) != spec.n_free:
            raise ValueError(
                f"{spec} needs {spec.n_free} edge probabilities, got {len(self.probs)}"
            )
        for j, p in enumerate(self.probs, start=spec.d):
            if not (0.0 < p < 1.0 if strict else 0.0 <= p <= 1.0):
                rng = "(0,1)" if strict else "[0,1]"
                raise ValueError(f"p_{j} = {p} outside {rng}")


def advance_probs(spec: RllSpec, P: EdgeProbs) -> np.ndarray:
    """Probability of the run-extending symbol in each state 0..k."""
    adv = np.empty(spec.n_states)
    adv[: spec.d] = 1.0
    adv[spec.d: spec.k] = P.probs
    adv[spec.k] = 0.0
    return adv


@dataclass(frozen=True)
class TraceResult:
    valid: bool
    states: tuple[int, ...] | None
    reason: str = ""

    def __bool__(self):
        return self.valid


def _as_bits(bits) -> list[int]:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError("bit string may only contain '0' and '1'")
        return [int(c) for c in bits]
    out = [int(b) for b in bits]
    if any(b not in (0, 1) for b in out):
        raise ValueError("bits must be 0 or 1")
    return out


def validate_and_trace(bits, spec: RllSpec) -> TraceResult:
    """Check a finite sequence against the constraint and trace code states.

    The first and last runs of the constrained symbol are exempt from the
    lower bound ``d``; every run must respect ``k``. States follow
    ``C_1 = 0``.
    """
    seq = _as_bits(bits)
    if not seq:
        raise ValueError("empty sequence")
    ext = spec.code_type.constrained_symbol
    n = len(seq)
    i = 0
    while i < n:
        if seq[i] != ext:
            i += 1
            continue
        j = i
        while j < n and seq[j] == ext:
            j += 1
        run = j - i
        if run > spec.k:
            return TraceResult(False, None, f"run of length {run} at {i} exceeds k={spec.k}")
        interior = i > 0 and j < n
        if interior and run < spec.d:
            return TraceResult(False, None, f"run of length {run} at {i} shorter than d={spec.d}")
        i = j
    # runs of length 0 between two breaking symbols also violate d > 0
    if spec.d > 0:
        for i in range(1, n):
            if seq[i] != ext and seq[i - 1] != ext:
                return TraceResult(False, None, f"adjacent breaking symbols at {i - 1}")
    states = [0]
    for b in seq[:-1]:
        states.append(states[-1] + 1 if b == ext else 0)
    return TraceResult(True, tuple(states))


@dataclass(frozen=True)
class CapacityResult:
    lam: float
    capacity_bits: float
    maxentropic: EdgeProbs
    degenerate: bool = False


def capacity_analysis(spec: RllSpec, tol: float = 1e-12, max_iter: int = 100_000) -> CapacityResult:
    """Perron root of the constraint graph, log2 capacity and maxentropic P."""
    if spec.deterministic:
        return CapacityResult(1.0, 0.0, EdgeProbs(), degenerate=True)
    lam, x = perron_root(spec.adjacency(), tol=tol, max_iter=max_iter)
    probs = [x[j + 1] / (lam * x[j]) for j in range(spec.d, spec.k)]
    return CapacityResult(lam, math.log2(lam), EdgeProbs(probs))


def code_transition_matrix(spec: RllSpec, P: EdgeProbs) -> np.ndarray:
    adv = advance_probs(spec, P)
    n = spec.n_states
    T = np.zeros((n, n))
    for j in range(spec.k):
        T[j, j + 1] = adv[j]
    T[:, 0] += 1.0 - adv
    return T


def code_stationary(spec: RllSpec, P: EdgeProbs, strict: bool = True) -> ChainSolution:
    """Stationary law of the code-state chain.

    ``strict=False`` admits endpoint probabilities (used by the simulator);
    a chain that then becomes reducible is solved from state 0.
    """
    P.check(spec, strict=strict)
    return solve_chain(code_transition_matrix(spec, P), start=0)


@dataclass(frozen=True)
class RenewalDist:
    pmf: dict[int, float]

    @property
    def mean(self) -> float:
        return math.fsum(i * p for i, p in self.pmf.items())

    @property
    def support(self) -> tuple[int, int]:
        return min(self.pmf), max(self.pmf)

    def __getitem__(self, i: int) -> float:
        return self.pmf.get(i, 0.0)

    def items(self):
        return self.pmf.items()


def renewal_dist(spec: RllSpec, P: EdgeProbs) -> RenewalDist:
    """Distribution of the gap between consecutive visits to state 0."""
    P.check(spec, strict=False)
    adv = advance_probs(spec, P)
    pmf = {}
    survive = 1.0
    for j in range(spec.d, spec.k + 1):
        # an interval of length j+1 breaks the run in state j
        pmf[j + 1] = survive * (1.0 - adv[j])
        survive *= adv[j]
    return RenewalDist(pmf)


def sample_codeword(
    spec: RllSpec,
    P: EdgeProbs,
    n: int,
    seed=None,
    start_state: int | None = None,
) -> str:
    """Draw ``n`` symbols from the stationary code chain as a 0/1 string.

    The initial state comes from the stationary law unless ``start_state``
    is given. The last run may be cut short by the block boundary.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    P.check(spec, strict=False)
    rng = np.random.default_rng(seed)
    u0 = rng.random()
    if start_state is None:
        cdf = np.cumsum(code_stationary(spec, P, strict=False).stationary)
        state = min(int(np.searchsorted(cdf, u0, side="right")), spec.k)
    else:
        state = int(start_state)
    adv = advance_probs(spec, P).tolist()
    ext = spec.code_type.constrained_symbol
    out = []
    for u in rng.random(n).tolist():
        if u < adv[state]:
            out.append(ext)
            state += 1
        else:
            out.append(1 - ext)
            state = 0
    return "".join(map(str, out))


def complement(bits: Sequence[int] | str):
    if isinstance(bits, str):
        return bits.translate(str.maketrans("01", "10"))
    return [1 - int(b) for b in bits]
