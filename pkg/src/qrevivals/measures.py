"""Scalar correlation quantifiers: concurrence, entanglement of formation,
mutual information, genuine tripartite correlations, the total-information
decomposition, and average/hidden entanglement of pure-state ensembles.

Entropy units: natural log (nats) for every mutual-information/decomposition
quantity; base 2 only inside the binary entropy of the entanglement of
formation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityOperator,
    SIGMA_Y,
    clip_positive_spectrum,
    hermitian_eigenvalues,
    matrix_sqrt_psd,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
)

_YY = tensor_product(SIGMA_Y, SIGMA_Y)


def _require_two_qubits(rho: DensityOperator):
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state with dims (2, 2), got {rho.dims}")


def concurrence(rho: DensityOperator) -> float:
    """Wootters concurrence of a two-qubit state.

    Computed from the Hermitian form sqrt(rho) (sy(x)sy) rho* (sy(x)sy) sqrt(rho),
    whose spectrum equals that of rho (sy(x)sy) rho* (sy(x)sy); complex
    conjugation is taken in the canonical basis. Eigenvalues below 1e-13 of
    the largest are rank dust and zeroed, otherwise their square roots would
    pollute the result at the 1e-8 level for rank-deficient states.
    """
    _require_two_qubits(rho)
    s = matrix_sqrt_psd(rho.matrix)
    flipped = _YY @ rho.matrix.conj() @ _YY
    chi = hermitian_eigenvalues(s @ flipped @ s)
    chi = clip_positive_spectrum(chi)
    if chi[0] > 0.0:
        chi[chi < 1e-13 * chi[0]] = 0.0
    roots = np.sqrt(chi)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_pure(psi) -> float:
    """Concurrence of a pure two-qubit state vector: 2 |psi0 psi3 - psi1 psi2|."""
    psi = np.asarray(psi, dtype=complex).reshape(4)
    return float(2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0)=h(1)=0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation h((1 + sqrt(1-c^2))/2) from a concurrence c."""
    if not -1e-9 <= c <= 1.0 + 1e-9:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def _validate_bipartition(rho: DensityOperator, bipartition):
    part_i, part_j = (tuple(sorted(int(i) for i in part)) for part in bipartition)
    n = len(rho.dims)
    combined = sorted(part_i + part_j)
    if combined != list(range(n)) or not part_i or not part_j:
        raise ValueError(
            f"bipartition {bipartition} must split subsystems 0..{n - 1} into two nonempty parts"
        )
    return part_i, part_j


def mutual_information(rho: DensityOperator, bipartition) -> float:
    """Quantum mutual information S(rho_I) + S(rho_J) - S(rho) in nats across
    a bipartition ((i, ...), (j, ...)) of the declared subsystems."""
    part_i, part_j = _validate_bipartition(rho, bipartition)
    s_i = von_neumann_entropy(partial_trace(rho, part_i))
    s_j = von_neumann_entropy(partial_trace(rho, part_j))
    return s_i + s_j - von_neumann_entropy(rho)


def _require_three_qubits(rho: DensityOperator):
    if rho.dims != (2, 2, 2):
        raise ValueError(f"expected a three-qubit state with dims (2, 2, 2), got {rho.dims}")


def tripartite_correlations(rho_abe: DensityOperator) -> float:
    """Genuine tripartite correlations: the minimum mutual information over the
    three bipartitions (AB|E), (AE|B), (BE|A)."""
    _require_three_qubits(rho_abe)
    return min(
        mutual_information(rho_abe, ((0, 1), (2,))),
        mutual_information(rho_abe, ((0, 2), (1,))),
        mutual_information(rho_abe, ((1, 2), (0,))),
    )


@dataclass(frozen=True)
class InformationDecomposition:
    """Split of the total state information into local, genuine-tripartite and
    maximal-bipartite parts, plus the residual of the bookkeeping identity."""

    total: float
    local: float
    tripartite: float
    bipartite_max: float
    residual: float


def information_decomposition(rho_abe: DensityOperator) -> InformationDecomposition:
    """Decompose I = ln 8 - S(rho_ABE) into local information
    sum_i (ln 2 - S(rho_i)), genuine tripartite correlations, and the maximal
    pairwise mutual information; the residual records the identity mismatch."""
    _require_three_qubits(rho_abe)
    s_full = von_neumann_entropy(rho_abe)
    singles = [von_neumann_entropy(partial_trace(rho_abe, (k,))) for k in range(3)]
    pairs = {
        (0, 1): von_neumann_entropy(partial_trace(rho_abe, (0, 1))),
        (0, 2): von_neumann_entropy(partial_trace(rho_abe, (0, 2))),
        (1, 2): von_neumann_entropy(partial_trace(rho_abe, (1, 2))),
    }
    ln2 = np.log(2.0)
    total = 3.0 * ln2 - s_full
    local = sum(ln2 - s for s in singles)
    tau = min(
        pairs[(0, 1)] + singles[2] - s_full,
        pairs[(0, 2)] + singles[1] - s_full,
        pairs[(1, 2)] + singles[0] - s_full,
    )
    mu2 = max(
        singles[0] + singles[1] - pairs[(0, 1)],
        singles[0] + singles[2] - pairs[(0, 2)],
        singles[1] + singles[2] - pairs[(1, 2)],
    )
    return InformationDecomposition(
        total=total,
        local=local,
        tripartite=tau,
        bipartite_max=mu2,
        residual=total - local - tau - mu2,
    )


@dataclass(frozen=True)
class WeightedPureEnsemble:
    """Probability-weighted set of two-qubit pure states.

    ``weights`` has shape (n,), ``states`` shape (n, 4); weights must be
    nonnegative and sum to 1, states unit-norm (both within 1e-9).
    """

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        s = np.asarray(self.states, dtype=complex)
        if s.ndim != 2 or s.shape != (w.size, 4):
            raise ValueError(f"states shape {s.shape} does not match {w.size} weights of 4-vectors")
        if np.any(w < -1e-12):
            raise ValueError(f"negative ensemble weight {w.min():.3e}")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"ensemble weights sum to {w.sum():.12g}, not 1 within 1e-9")
        norms = np.linalg.norm(s, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise ValueError("ensemble contains non-normalized states (beyond 1e-9)")
        w = w.copy()
        w.setflags(write=False)
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", s)

    def average_state(self) -> DensityOperator:
        """The mixture sum_i p_i |psi_i><psi_i|."""
        m = np.einsum("n,ni,nj->ij", self.weights, self.states, self.states.conj())
        return DensityOperator(m, (2, 2))


def average_entanglement(ens: WeightedPureEnsemble) -> float:
    """Weighted mean entanglement of formation of the ensemble members."""
    return float(
        sum(
            w * eof_from_concurrence(concurrence_pure(psi))
            for w, psi in zip(ens.weights, ens.states)
        )
    )


def hidden_entanglement(ens: WeightedPureEnsemble) -> float:
    """Average member entanglement minus the entanglement of the averaged state.

    Nonnegative (up to numerical dust) by convexity of the entanglement of
    formation.
    """
    e_mix = eof_from_concurrence(concurrence(ens.average_state()))
    return average_entanglement(ens) - e_mix
