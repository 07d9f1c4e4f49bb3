"""Small dense Markov chain utilities.

Every chain in this package is tiny (a few hundred states at most), so
everything here is dense linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

ROW_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """An iterative numeric routine hit its iteration cap."""


@dataclass(frozen=True)
class ChainSolution:
    """A row-stochastic transition matrix together with a stationary law."""

    transition: np.ndarray
    stationary: np.ndarray

    def __post_init__(self):
        self.transition.setflags(write=False)
        self.stationary.setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    def residual(self) -> float:
        """max |pi T - pi|."""
        return float(np.max(np.abs(self.stationary @ self.transition - self.stationary)))


def check_stochastic(T: np.ndarray, tol: float = ROW_TOL) -> None:
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"transition matrix must be square, got shape {T.shape}")
    if np.any(T < -tol):
        raise ValueError("transition matrix has negative entries")
    dev = np.max(np.abs(T.sum(axis=1) - 1.0))
    if dev > tol:
        raise ValueError(f"transition rows do not sum to 1 (max deviation {dev:.3e})")


def _solve_closed(T: np.ndarray) -> np.ndarray:
    # balance equations with the last one replaced by normalization
    n = T.shape[0]
    M = T.T - np.eye(n)
    M[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(M, rhs)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def closed_classes(T: np.ndarray) -> list[np.ndarray]:
    """Closed communicating classes of the chain, in state order."""
    adj = csr_matrix(T > 0)
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    out = []
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        others = np.flatnonzero(labels != c)
        if others.size == 0 or not np.any(T[np.ix_(members, others)] > 0):
            out.append(members)
    out.sort(key=lambda m: m[0])
    return out


def stationary_distribution(T, start=None) -> np.ndarray:
    """Stationary distribution of a finite chain.

    With a single closed class the answer is unique and ``start`` is
    ignored. Otherwise the long-run (Cesaro) distribution depends on where
    the chain starts; ``start`` (a state index or a distribution) picks it
    via absorption probabilities into each closed class.
    """
    T = np.asarray(T, dtype=float)
    check_stochastic(T)
    n = T.shape[0]
    classes = closed_classes(T)
    if len(classes) == 1:
        cls = classes[0]
        pi = np.zeros(n)
        pi[cls] = _solve_closed(T[np.ix_(cls, cls)])
        return pi

    if start is None:
        raise ValueError(
            f"chain has {len(classes)} closed classes; a start state is required"
        )
    s = np.zeros(n)
    if np.isscalar(start):
        s[int(start)] = 1.0
    else:
        s = np.asarray(start, dtype=float)
    recurrent = np.concatenate(classes)
    transient = np.setdiff1d(np.arange(n), recurrent)
    pi = np.zeros(n)
    if transient.size:
        Q = T[np.ix_(transient, transient)]
        N = np.linalg.inv(np.eye(transient.size) - Q)
    for cls in classes:
        weight = s[cls].sum()
        if transient.size:
            hit = N @ T[np.ix_(transient, cls)].sum(axis=1)
            weight += s[transient] @ hit
        if weight > 0:
            pi[cls] += weight * _solve_closed(T[np.ix_(cls, cls)])
    return pi / pi.sum()


def solve_chain(T, start=None) -> ChainSolution:
    T = np.array(T, dtype=float)
    return ChainSolution(T, stationary_distribution(T, start))


def perron_root(A, tol: float = 1e-12, max_iter: int = 100_000):
    """Perron root and right eigenvector of a nonnegative irreducible matrix.

    Power iteration runs on ``A + I``, which is primitive even when ``A`` is
    periodic, and stops once the Collatz-Wielandt bracket
    ``min (Ax)_i / x_i <= lambda <= max (Ax)_i / x_i`` is narrower than
    ``tol``. Returns ``(lam, x)`` with ``x`` normalized to sum 1.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    B = A + np.eye(n)
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        y = B @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        x = y / y.sum()
        if hi - lo < tol:
            return 0.5 * (lo + hi) - 1.0, x
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")
