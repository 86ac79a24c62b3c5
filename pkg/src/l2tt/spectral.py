"""Real-matrix analytics: l1 projection, irreducibility, Perron-Frobenius
enclosures, operator 2-norms and the sequence ||I + A^k||^(1/k)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .algebra import GroupRingElement

MAX_ITERATIONS = 100_000
DEFAULT_TOL = 1e-12


def l1_projection(A) -> np.ndarray:
    """Entrywise l1-norm of a matrix over Z[F]."""
    rows = [[a.l1_norm() if isinstance(a, GroupRingElement) else abs(int(a)) for a in row] for row in A]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _check_nonnegative(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expected a square matrix")
    if (M < 0).any():
        raise ValueError("matrix has a negative entry")
    return M


def is_irreducible(M) -> bool:
    """Strong connectivity of the support digraph; the 1x1 zero matrix is not irreducible."""
    M = _check_nonnegative(M)
    n = M.shape[0]
    if n == 0:
        return False
    if n == 1:
        return bool(M[0, 0] > 0)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(n))
    digraph.add_edges_from(zip(*np.nonzero(M)))
    return nx.is_strongly_connected(digraph)


@dataclass(frozen=True)
class Enclosure:
    lower: float
    upper: float
    converged: bool = True
    iterations: int = 0

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def pf_eigenvalue(M, tol: float = DEFAULT_TOL, max_iterations: int = MAX_ITERATIONS) -> Enclosure:
    """Collatz-Wielandt enclosure of the Perron root of an irreducible matrix.

    Iterates v <- (M + I) v from the all-ones vector; M + I is primitive, so
    this converges even when M itself is periodic. At each step
    min (Mv)_i / v_i <= lambda <= max (Mv)_i / v_i. Stops when the width is
    below ``tol * max(1, upper)``. Returns with ``converged=False`` if the cap
    is hit.
    """
    M = _check_nonnegative(M)
    if not is_irreducible(M):
        raise ValueError("pf_eigenvalue needs an irreducible matrix")
    A = M.astype(float)
    v = np.ones(A.shape[0])
    lo, hi = 0.0, math.inf
    for it in range(1, max_iterations + 1):
        Av = A @ v
        ratios = Av / v
        lo = max(lo, float(ratios.min()))
        hi = min(hi, float(ratios.max()))
        if hi - lo <= tol * max(1.0, hi):
            return Enclosure(lo, hi, True, it)
        v = Av + v
        v /= v.max()
    return Enclosure(lo, hi, False, max_iterations)


def spectral_norm(A) -> float:
    """Largest singular value, the operator norm of v -> vA on C^n."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def int_matrix_power(M, k: int) -> np.ndarray:
    """Exact M^k in Python integers (object array), by repeated squaring."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    base = np.array([[int(x) for x in row] for row in np.asarray(M)], dtype=object)
    n = base.shape[0]
    result = np.zeros((n, n), dtype=object)
    for i in range(n):
        result[i, i] = 1
    while k:
        if k & 1:
            result = result.dot(base)
        base = base.dot(base)
        k >>= 1
    return result


def log_spectral_norm_int(B: np.ndarray) -> float:
    """log of the operator 2-norm of an exact integer matrix, rounding once."""
    scale = max((abs(int(x)) for x in B.flat), default=0)
    if scale == 0:
        return -math.inf
    scaled = np.array([[int(x) / scale for x in row] for row in B], dtype=float)
    return math.log(scale) + math.log(spectral_norm(scaled))


def i_plus_power_norm(M, k: int) -> float:
    """||I + M^k||^(1/k), with M^k computed exactly."""
    if k < 1:
        raise ValueError("k must be at least 1")
    P = int_matrix_power(M, k)
    for i in range(P.shape[0]):
        P[i, i] += 1
    return math.exp(log_spectral_norm_int(P) / k)


def log_i_plus_power_norm(M, k: int) -> float:
    """(1/k) log ||I + M^k||, without the final exponentiation."""
    if k < 1:
        raise ValueError("k must be at least 1")
    P = int_matrix_power(M, k)
    for i in range(P.shape[0]):
        P[i, i] += 1
    return log_spectral_norm_int(P) / k
