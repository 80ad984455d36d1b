"""Explicit quantum-classical tripartite representation of the random-field
channel: the two qubits A, B plus a two-state classical register E whose basis
states label the field phase. The joint state stays block-diagonal in E, and
tracing E out reproduces the two-qubit channel exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityOperator, EYE2, partial_trace, tensor_product
from .measures import InformationDecomposition, concurrence, information_decomposition, tripartite_correlations
from .noise import (
    FIELD_PHASES,
    ConvergenceError,
    RandomFieldParams,
    _field_unitaries,
    _gh_nodes,
    field_unitary,
)

_P_ENV = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))


@dataclass(frozen=True)
class HybridTripartiteState:
    """Three-qubit state ordered (A, B, E) with a classical (diagonal) E register.

    Invariants checked at construction: no coherences between the E basis
    states, and the E marginal is maximally mixed.
    """

    rho: DensityOperator

    def __post_init__(self):
        if self.rho.dims != (2, 2, 2):
            raise ValueError(f"expected dims (2, 2, 2), got {self.rho.dims}")
        blocks = self.rho.matrix.reshape(2, 2, 2, 2, 2, 2)
        off = max(np.max(np.abs(blocks[:, :, 0, :, :, 1])), np.max(np.abs(blocks[:, :, 1, :, :, 0])))
        if off > 1e-10:
            raise ValueError(f"environment-register coherences present (max {off:.3e})")
        env = partial_trace(self.rho, (2,)).matrix
        if np.max(np.abs(env - EYE2 / 2.0)) > 1e-12:
            raise ValueError("environment marginal differs from I/2 beyond 1e-12")


@dataclass(frozen=True)
class FlowRecord:
    """One time point of the correlation-flow analysis."""

    time: float
    concurrence: float
    tripartite: float
    decomposition: InformationDecomposition


def embed_initial(rho_ab: DensityOperator) -> HybridTripartiteState:
    """rho_AB (x) I_E/2: the field register starts maximally mixed and
    uncorrelated from the qubits."""
    if rho_ab.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho_ab.dims}")
    m = tensor_product(rho_ab.matrix, EYE2 / 2.0)
    return HybridTripartiteState(DensityOperator(m, (2, 2, 2)))


def ube_unitary(p: RandomFieldParams, t: float, rabi: float | None = None) -> np.ndarray:
    """Controlled propagator on (B, E): sum_phi U_phi (x) |phi><phi|,
    block-diagonal in the register basis."""
    om = p.rabi if rabi is None else rabi
    out = np.zeros((4, 4), dtype=complex)
    for ph, proj in zip(FIELD_PHASES, _P_ENV):
        out += tensor_product(field_unitary(ph, om, t), proj)
    return out


def _conjugate_abe(mat8: np.ndarray, u_be: np.ndarray) -> np.ndarray:
    v = tensor_product(EYE2, u_be)
    return v @ mat8 @ v.conj().T


def _ube_batch(omegas: np.ndarray, t: float) -> np.ndarray:
    """ube_unitary stacked over Rabi frequencies, shape (n, 4, 4).

    (B, E) row index is 2b + e, so the phase-register blocks sit on the even
    and odd sublattices.
    """
    out = np.zeros((omegas.size, 4, 4), dtype=complex)
    out[:, 0::2, 0::2] = _field_unitaries(FIELD_PHASES[0], omegas, t)
    out[:, 1::2, 1::2] = _field_unitaries(FIELD_PHASES[1], omegas, t)
    return out


def evolve_abe(
    s0: HybridTripartiteState, p: RandomFieldParams, t: float, order: int = 64
) -> HybridTripartiteState:
    """(1_A (x) U_BE) rho (1_A (x) U_BE)^dag, Gauss-Hermite-averaged over the
    Rabi frequency when the field width is nonzero (with the same order-doubling
    convergence check as the two-qubit channel)."""
    m0 = s0.rho.matrix
    if p.width == 0.0:
        out = _conjugate_abe(m0, ube_unitary(p, t))
    else:
        def averaged(n):
            x, w = _gh_nodes(n)
            ubes = _ube_batch(p.rabi + 2.0 * p.width * x, t)
            v = np.zeros((n, 8, 8), dtype=complex)
            v[:, :4, :4] = ubes
            v[:, 4:, 4:] = ubes
            return np.einsum("n,nij,jk,nlk->il", w, v, m0, v.conj(), optimize=True)

        out = averaged(order)
        drift = np.max(np.abs(out - averaged(2 * order)))
        if drift > 1e-8:
            raise ConvergenceError(
                f"tripartite Rabi-average quadrature not converged at t={t:g}: "
                f"order {order} -> {2 * order} moved an entry by {drift:.3e}"
            )
    return HybridTripartiteState(DensityOperator(out, (2, 2, 2)))


def flow_timeseries(
    rho_ab0: DensityOperator, p: RandomFieldParams, grid, order: int = 64
) -> list[FlowRecord]:
    """Concurrence, genuine tripartite correlations and the information
    decomposition along a strictly increasing time grid."""
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size == 0 or np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be nonempty and strictly increasing")
    s0 = embed_initial(rho_ab0)
    records = []
    for t in grid:
        st = evolve_abe(s0, p, float(t), order)
        rho_ab = partial_trace(st.rho, (0, 1))
        records.append(
            FlowRecord(
                time=float(t),
                concurrence=concurrence(rho_ab),
                tripartite=tripartite_correlations(st.rho),
                decomposition=information_decomposition(st.rho),
            )
        )
    return records


def find_local_extrema(
    values, kind: str = "max", plateau_tol: float = 1e-12, include_edges: bool = False
) -> list[int]:
    """Indices of local maxima or minima of a sampled series.

    Runs of consecutive values equal within ``plateau_tol`` are collapsed to a
    single candidate at the run midpoint (dark periods of exactly zero
    concurrence form such plateaus). Edge runs count only when
    ``include_edges`` is set.
    """
    if kind not in ("max", "min"):
        raise ValueError("kind must be 'max' or 'min'")
    y = np.asarray(values, dtype=float).reshape(-1)
    if y.size < 3:
        return []
    runs = []  # (start, end) inclusive
    start = 0
    for i in range(1, y.size):
        if abs(y[i] - y[start]) > plateau_tol:
            runs.append((start, i - 1))
            start = i
    runs.append((start, y.size - 1))
    sign = 1.0 if kind == "max" else -1.0
    out = []
    for r, (a, b) in enumerate(runs):
        left_ok = r > 0 and sign * (y[a] - y[runs[r - 1][1]]) > 0
        right_ok = r < len(runs) - 1 and sign * (y[b] - y[runs[r + 1][0]]) > 0
        if (left_ok and right_ok) or (include_edges and (left_ok or right_ok) and (a == 0 or b == y.size - 1)):
            out.append((a + b) // 2)
    return out
