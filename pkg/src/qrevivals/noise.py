"""Classical-noise channels acting on qubit B of a two-qubit pair.

Four models: the two-phase random driving field (with optional Gaussian
broadening of the Rabi frequency), quasi-static Gaussian dephasing with an
optional echo pulse, its finite-correlation-time Ornstein-Uhlenbeck extension,
random telegraph noise, and the four-step stroboscopic dephasing channel.

Conventions used throughout:

* Local sigma_z free-Hamiltonian terms are dropped (rotating frame); every
  measure computed downstream is invariant under those local unitaries.
* The echo pulse is an instantaneous sigma_x inserted between propagation
  segments.
* Monte-Carlo trajectories are partitioned into fixed-size batches; batch b
  draws from an independent stream spawned from the scenario seed, and batch
  results are reduced in batch order, so results are independent of the
  thread count used to evaluate them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .linalg import DensityOperator, EYE2, SIGMA_X
from .measures import WeightedPureEnsemble
from .states import EWLParams, bell_state, ewl_state

MC_BATCH = 2048
RNG_DESCRIPTION = "numpy-pcg64; SeedSequence.spawn per fixed-size trajectory batch"

FIELD_PHASES = (np.pi / 2.0, -np.pi / 2.0)


class ConvergenceError(RuntimeError):
    """Doubling the quadrature order moved some matrix entry by more than the threshold."""


# ---------------------------------------------------------------------------
# parameter types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomFieldParams:
    """Two-phase random driving field: central Rabi frequency and Gaussian width."""

    rabi: float
    width: float = 0.0

    def __post_init__(self):
        if self.rabi <= 0.0:
            raise ValueError(f"rabi={self.rabi} must be > 0")
        if self.width < 0.0:
            raise ValueError(f"width={self.width} must be >= 0")


@dataclass(frozen=True)
class StaticNoiseParams:
    """Longitudinal Gaussian dephasing noise of strength sigma.

    ``correlation_time`` = inf selects the quasi-static regime (quadrature
    averaging); a finite value selects the Ornstein-Uhlenbeck Monte-Carlo
    path. ``echo_time`` schedules an instantaneous sigma_x pulse.
    """

    sigma: float
    echo_time: float | None = None
    correlation_time: float = math.inf

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValueError(f"sigma={self.sigma} must be >= 0")
        if self.echo_time is not None and self.echo_time <= 0.0:
            raise ValueError(f"echo_time={self.echo_time} must be > 0 when present")
        if self.correlation_time <= 0.0:
            raise ValueError(f"correlation_time={self.correlation_time} must be > 0")

    @property
    def is_static(self) -> bool:
        return math.isinf(self.correlation_time)


@dataclass(frozen=True)
class RTNParams:
    """Random telegraph noise: switching rate gamma and coupling v.

    The telegraph signal flips sign at Poisson rate ``rate`` (autocorrelation
    exp(-2*rate*t)); g = coupling/rate marks the motional-narrowing crossover
    at g = 1. Zero coupling is the trivial noise-free edge.
    """

    rate: float
    coupling: float

    def __post_init__(self):
        if self.rate <= 0.0:
            raise ValueError(f"rate={self.rate} must be > 0")
        if self.coupling < 0.0:
            raise ValueError(f"coupling={self.coupling} must be >= 0")

    @property
    def g(self) -> float:
        return self.coupling / self.rate


@dataclass(frozen=True)
class StroboscopicParams:
    """Four-step stroboscopic dephasing with AR(1)-correlated Gaussian phases.

    Each step applies diag(1, exp(i x_k)) to qubit B; the x_k form a
    stationary Gaussian chain with variance phase_sigma^2 and lag-1
    autocorrelation ``autocorrelation``. Phases are not clamped to any
    hardware range. An optional bit flip is inserted after
    ``echo_after_step``.
    """

    phase_sigma: float
    autocorrelation: float
    sequences: int
    seed: int
    echo_after_step: int | None = None
    steps: int = 4

    def __post_init__(self):
        if self.phase_sigma < 0.0:
            raise ValueError(f"phase_sigma={self.phase_sigma} must be >= 0")
        if not 0.0 <= self.autocorrelation <= 1.0:
            raise ValueError(f"autocorrelation={self.autocorrelation} outside [0, 1]")
        if self.sequences <= 0:
            raise ValueError(f"sequences={self.sequences} must be > 0")
        if self.steps < 1:
            raise ValueError(f"steps={self.steps} must be >= 1")
        if self.echo_after_step is not None and not 1 <= self.echo_after_step < self.steps:
            raise ValueError(
                f"echo_after_step={self.echo_after_step} must lie in [1, {self.steps - 1}]"
            )


# ---------------------------------------------------------------------------
# random external field
# ---------------------------------------------------------------------------


def field_unitary(phase: float, rabi: float, t: float) -> np.ndarray:
    """Driving-field propagator [[cos, e^{-i phase} sin], [-e^{i phase} sin, cos]]
    with half-angle rabi*t/2, in the basis {|0>, |1>}."""
    half = 0.5 * rabi * t
    c, s = np.cos(half), np.sin(half)
    return np.array(
        [[c, np.exp(-1j * phase) * s], [-np.exp(1j * phase) * s, c]], dtype=complex
    )


def _field_unitaries(phase: float, rabi_values, t: float) -> np.ndarray:
    """field_unitary stacked over an array of Rabi frequencies, shape (n, 2, 2)."""
    half = 0.5 * np.asarray(rabi_values, dtype=float) * t
    c, s = np.cos(half), np.sin(half)
    out = np.empty((half.size, 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 1, 1] = c
    out[:, 0, 1] = np.exp(-1j * phase) * s
    out[:, 1, 0] = -np.exp(1j * phase) * s
    return out


def _gh_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and weights normalized against exp(-x^2)/sqrt(pi)."""
    if order < 1:
        raise ValueError(f"quadrature order {order} must be >= 1")
    x, w = np.polynomial.hermite.hermgauss(order)
    return x, w / np.sqrt(np.pi)


@dataclass(frozen=True)
class RandomUnitaryChannel:
    """Weighted finite mixture of unitaries acting on qubit B of a two-qubit
    pair: rho -> sum_k w_k (1 (x) U_k) rho (1 (x) U_k)^dag."""

    weights: np.ndarray
    unitaries: np.ndarray  # (n, 2, 2)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        u = np.asarray(self.unitaries, dtype=complex)
        if u.shape != (w.size, 2, 2):
            raise ValueError(f"unitaries shape {u.shape} does not match {w.size} weights")
        if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("channel weights must be nonnegative and sum to 1")
        dev = np.max(np.abs(np.einsum("nij,nkj->nik", u, u.conj()) - EYE2))
        if dev > 1e-12:
            raise ValueError(f"channel members are not unitary within 1e-12 (dev {dev:.3e})")
        w = w.copy()
        w.setflags(write=False)
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "unitaries", u)

    def _lifted(self) -> np.ndarray:
        """Members lifted to the two-qubit space as 1 (x) U (block diagonal)."""
        n = self.weights.size
        u4 = np.zeros((n, 4, 4), dtype=complex)
        u4[:, :2, :2] = self.unitaries
        u4[:, 2:, 2:] = self.unitaries
        return u4

    def apply_matrix(self, mat4: np.ndarray) -> np.ndarray:
        u4 = self._lifted()
        return np.einsum("n,nij,jk,nlk->il", self.weights, u4, mat4, u4.conj(), optimize=True)

    def apply(self, rho: DensityOperator) -> DensityOperator:
        if rho.dims != (2, 2):
            raise ValueError(f"channel acts on two-qubit states, got dims {rho.dims}")
        return DensityOperator(self.apply_matrix(rho.matrix), (2, 2))

    def pure_ensemble(self, psi0: np.ndarray) -> WeightedPureEnsemble:
        """Ensemble {(w_k, (1 (x) U_k)|psi0>)} generated from a pure input."""
        psi0 = np.asarray(psi0, dtype=complex).reshape(4)
        states = np.einsum("nij,j->ni", self._lifted(), psi0)
        return WeightedPureEnsemble(self.weights, states)

    @staticmethod
    def two_phase(rabi: float, t: float) -> "RandomUnitaryChannel":
        """Equal mixture of the +pi/2 and -pi/2 field propagators."""
        us = np.stack([field_unitary(ph, rabi, t) for ph in FIELD_PHASES])
        return RandomUnitaryChannel(np.array([0.5, 0.5]), us)

    @staticmethod
    def gaussian_field(rabi: float, width: float, t: float, order: int) -> "RandomUnitaryChannel":
        """Two-phase mixture Gauss-Hermite-averaged over the Rabi frequency.

        The Rabi frequency is normally distributed with mean ``rabi`` and
        variance 2*width^2, realized by nodes rabi + 2*width*x_k.
        """
        x, w = _gh_nodes(order)
        omegas = rabi + 2.0 * width * x
        us = np.empty((2 * order, 2, 2), dtype=complex)
        weights = np.empty(2 * order)
        for j, ph in enumerate(FIELD_PHASES):
            us[j::2] = _field_unitaries(ph, omegas, t)
            weights[j::2] = 0.5 * w
        return RandomUnitaryChannel(weights, us)


def random_field_map(rho0: DensityOperator, p: RandomFieldParams, t: float) -> DensityOperator:
    """Evolved two-qubit state under the fixed-Rabi two-phase field."""
    if p.width != 0.0:
        raise ValueError("random_field_map requires width = 0; use gaussian_averaged_map")
    return RandomUnitaryChannel.two_phase(p.rabi, t).apply(rho0)


def gaussian_averaged_map(
    rho0: DensityOperator, p: RandomFieldParams, t: float, order: int = 64
) -> DensityOperator:
    """Rabi-broadened field channel, checked for quadrature convergence by
    order doubling (any entry moving by more than 1e-8 raises)."""
    if p.width <= 0.0:
        raise ValueError("gaussian_averaged_map requires width > 0")
    base = RandomUnitaryChannel.gaussian_field(p.rabi, p.width, t, order).apply_matrix(rho0.matrix)
    check = RandomUnitaryChannel.gaussian_field(p.rabi, p.width, t, 2 * order).apply_matrix(
        rho0.matrix
    )
    drift = np.max(np.abs(base - check))
    if drift > 1e-8:
        raise ConvergenceError(
            f"Rabi-average quadrature not converged at t={t:g}: order {order} -> {2 * order} "
            f"moved an entry by {drift:.3e}"
        )
    return DensityOperator(base, (2, 2))


def random_field_ensemble(
    psi0: np.ndarray, p: RandomFieldParams, t: float, order: int = 64
) -> WeightedPureEnsemble:
    """Pure-state ensemble generated by the field channel from a pure input."""
    if p.width == 0.0:
        ch = RandomUnitaryChannel.two_phase(p.rabi, t)
    else:
        ch = RandomUnitaryChannel.gaussian_field(p.rabi, p.width, t, order)
    return ch.pure_ensemble(psi0)


# ---------------------------------------------------------------------------
# dephasing machinery shared by the static, OU, RTN and stroboscopic channels
# ---------------------------------------------------------------------------

_X4 = np.kron(EYE2, SIGMA_X)


def apply_b_dephasing(mat4: np.ndarray, factor: complex, echoed: bool = False) -> np.ndarray:
    """Pure dephasing of qubit B: the |0><1|_B coherences pick up ``factor``
    (|factor| <= 1), followed by a sigma_x on B when ``echoed``."""
    f2 = np.array([[1.0, factor], [np.conj(factor), 1.0]], dtype=complex)
    out = mat4 * np.kron(np.ones((2, 2)), f2)
    if echoed:
        out = _X4 @ out @ _X4
    return out


def dephased_state(rho0: DensityOperator, factor: complex, echoed: bool = False) -> DensityOperator:
    return DensityOperator(apply_b_dephasing(rho0.matrix, factor, echoed), (2, 2))


def _phase_partials(theta: np.ndarray) -> tuple:
    """Per-batch sums needed for the mean of exp(-i theta) and its errors."""
    c = np.cos(theta)
    s = np.sin(theta)
    return (
        c.sum(axis=0),
        s.sum(axis=0),
        (c * c).sum(axis=0),
        (s * s).sum(axis=0),
        (c * s).sum(axis=0),
        theta.shape[0],
    )


@dataclass(frozen=True)
class DephasingEstimate:
    """Monte-Carlo estimate of the dephasing factors <exp(-i theta(t))> with
    the standard error of the factor magnitude at each time."""

    factors: np.ndarray  # complex, one per time
    se_abs: np.ndarray  # standard error of |factor|
    trajectories: int


def _combine_phase_partials(partials: list[tuple]) -> DephasingEstimate:
    s_c = sum(p[0] for p in partials)
    s_s = sum(p[1] for p in partials)
    s_cc = sum(p[2] for p in partials)
    s_ss = sum(p[3] for p in partials)
    s_cs = sum(p[4] for p in partials)
    n = sum(p[5] for p in partials)
    mean_c = s_c / n
    mean_s = s_s / n
    factors = mean_c - 1j * mean_s
    if n > 1:
        var_c = np.maximum(0.0, (s_cc - n * mean_c**2) / (n - 1))
        var_s = np.maximum(0.0, (s_ss - n * mean_s**2) / (n - 1))
        cov = (s_cs - n * mean_c * mean_s) / (n - 1)
    else:
        var_c = var_s = cov = np.zeros_like(mean_c)
    mag = np.abs(factors)
    g_c = np.where(mag > 0.0, mean_c / np.where(mag > 0.0, mag, 1.0), 1.0)
    g_s = np.where(mag > 0.0, mean_s / np.where(mag > 0.0, mag, 1.0), 0.0)
    se = np.sqrt(np.maximum(0.0, g_c**2 * var_c + 2 * g_c * g_s * cov + g_s**2 * var_s) / n)
    return DephasingEstimate(factors=factors, se_abs=se, trajectories=n)


def _batch_sizes(n: int) -> list[int]:
    sizes = [MC_BATCH] * (n // MC_BATCH)
    if n % MC_BATCH:
        sizes.append(n % MC_BATCH)
    return sizes


def _map_ordered(fn, n_batches: int, threads: int) -> list:
    if threads <= 1 or n_batches <= 1:
        return [fn(i) for i in range(n_batches)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_batches)))


# ---------------------------------------------------------------------------
# quasi-static Gaussian dephasing with echo
# ---------------------------------------------------------------------------


def _echo_effective_duration(p: StaticNoiseParams, t: float) -> tuple[float, bool]:
    """Signed duration multiplying the static noise value, and the echo flag."""
    if p.echo_time is not None and t > p.echo_time:
        return 2.0 * p.echo_time - t, True
    return t, False


def static_dephasing_factor(p: StaticNoiseParams, t: float, order: int = 64) -> complex:
    """<exp(-i eps u)> over the Gaussian noise amplitude, u the effective
    (echo-refocused) duration; convergence-checked by order doubling."""
    u, _ = _echo_effective_duration(p, t)

    def factor(n):
        x, w = _gh_nodes(n)
        eps = np.sqrt(2.0) * p.sigma * x
        return complex(np.sum(w * np.exp(-1j * eps * u)))

    base = factor(order)
    drift = abs(base - factor(2 * order))
    if drift > 1e-8:
        raise ConvergenceError(
            f"static-noise quadrature not converged at t={t:g}: order {order} -> {2 * order} "
            f"moved the dephasing factor by {drift:.3e}"
        )
    return base


def static_noise_state(
    bell_input: str, p: StaticNoiseParams, t: float, order: int = 64
) -> tuple[DensityOperator, WeightedPureEnsemble]:
    """Quadrature-averaged state and the node ensemble for a Bell input under
    quasi-static dephasing (with the echo pulse applied at echo_time if set)."""
    if not p.is_static:
        raise ValueError("static_noise_state requires correlation_time = inf; use ou_noise_state")
    psi0 = bell_state(bell_input)
    u, echoed = _echo_effective_duration(p, t)
    rho = dephased_state(DensityOperator(np.outer(psi0, psi0.conj()), (2, 2)),
                         static_dephasing_factor(p, t, order), echoed)
    x, w = _gh_nodes(order)
    thetas = np.sqrt(2.0) * p.sigma * x * u
    members = np.empty((order, 4), dtype=complex)
    for k, th in enumerate(thetas):
        u2 = np.diag([np.exp(-0.5j * th), np.exp(0.5j * th)])
        if echoed:
            u2 = SIGMA_X @ u2
        members[k] = np.kron(EYE2, u2) @ psi0
    return rho, WeightedPureEnsemble(w, members)


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck extension (finite correlation time, Monte Carlo)
# ---------------------------------------------------------------------------


def _ou_partition(p: StaticNoiseParams, times: np.ndarray):
    """Fine time partition (exact-update midpoint scheme) covering all
    requested times, with the echo time inserted as a boundary."""
    t_max = float(times[-1])
    anchors = [0.0] + [float(t) for t in times]
    if p.echo_time is not None and p.echo_time < t_max:
        anchors.append(float(p.echo_time))
    anchors = np.unique(np.asarray(anchors))
    dt_max = p.correlation_time / 20.0
    if p.sigma > 0.0:
        dt_max = min(dt_max, 0.05 / p.sigma)
    fine = [anchors[0]]
    for b0, b1 in zip(anchors[:-1], anchors[1:]):
        nsub = max(1, int(np.ceil((b1 - b0) / dt_max - 1e-12)))
        fine.extend(np.linspace(b0, b1, nsub + 1)[1:].tolist())
    fine = np.asarray(fine)
    durations = np.diff(fine)
    midpoints = 0.5 * (fine[:-1] + fine[1:])
    decay = np.empty_like(durations)
    decay[0] = 0.0
    decay[1:] = np.exp(-np.diff(midpoints) / p.correlation_time)
    diffuse = np.empty_like(durations)
    diffuse[0] = p.sigma
    diffuse[1:] = p.sigma * np.sqrt(1.0 - decay[1:] ** 2)
    if p.echo_time is not None:
        signs = np.where(midpoints < p.echo_time, 1.0, -1.0)
    else:
        signs = np.ones_like(durations)
    col_of = {float(t): j for j, t in enumerate(times)}
    write_idx = np.array([col_of.get(float(b), -1) for b in fine[1:]], dtype=np.int64)
    zero_col = col_of.get(0.0)
    return decay, diffuse, durations * signs, write_idx, zero_col


def ou_dephasing_factors(
    p: StaticNoiseParams, times, trajectories: int, seed: int, threads: int = 1
) -> DephasingEstimate:
    """Monte-Carlo dephasing factors for Ornstein-Uhlenbeck noise on an
    ascending time grid (exact conditional updates, midpoint phase rule)."""
    if p.is_static:
        raise ValueError("ou_dephasing_factors requires a finite correlation_time")
    if trajectories < 1000:
        raise ValueError(f"trajectories={trajectories} below the minimum of 1000")
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0 or np.any(np.diff(times) <= 0.0) or times[0] < 0.0:
        raise ValueError("times must be a nonempty strictly increasing nonnegative grid")
    decay, diffuse, dur_sign, write_idx, zero_col = _ou_partition(p, times)
    sizes = _batch_sizes(trajectories)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def work(i):
        rng = np.random.default_rng(streams[i])
        normals = rng.standard_normal((sizes[i], dur_sign.size))
        theta = kernels.ou_phases(normals, decay, diffuse, dur_sign, write_idx, times.size)
        if zero_col is not None:
            theta[:, zero_col] = 0.0
        return _phase_partials(theta)

    return _combine_phase_partials(_map_ordered(work, len(sizes), threads))


def ou_noise_state(
    bell_input: str, p: StaticNoiseParams, t: float, trajectories: int, seed: int,
    threads: int = 1,
) -> DensityOperator:
    """Trajectory-averaged state for a Bell input under Ornstein-Uhlenbeck
    dephasing; deterministic for a fixed seed."""
    est = ou_dephasing_factors(p, [t] if t > 0 else [0.0], trajectories, seed, threads)
    psi0 = bell_state(bell_input)
    _, echoed = _echo_effective_duration(p, t)
    return dephased_state(
        DensityOperator(np.outer(psi0, psi0.conj()), (2, 2)), est.factors[0], echoed
    )


# ---------------------------------------------------------------------------
# random telegraph noise
# ---------------------------------------------------------------------------


def rtn_coherence(p: RTNParams, t):
    """Single-qubit coherence q(t) under telegraph dephasing.

    Below the crossover (g < 1) the decay is hyperbolic,
    exp(-gamma t) [cosh(d t) + (gamma/d) sinh(d t)] with d = sqrt(gamma^2 - v^2);
    above it (g > 1) the analytic continuation oscillates with
    mu = sqrt(v^2 - gamma^2); at g = 1 it is exp(-gamma t)(1 + gamma t).
    """
    t = np.asarray(t, dtype=float)
    gamma, v = p.rate, p.coupling
    if np.isclose(v, gamma, rtol=1e-12, atol=0.0):
        q = np.exp(-gamma * t) * (1.0 + gamma * t)
    elif v < gamma:
        d = math.sqrt(gamma * gamma - v * v)
        q = np.exp(-gamma * t) * (np.cosh(d * t) + (gamma / d) * np.sinh(d * t))
    else:
        mu = math.sqrt(v * v - gamma * gamma)
        q = np.exp(-gamma * t) * (np.cos(mu * t) + (gamma / mu) * np.sin(mu * t))
    return float(q) if q.ndim == 0 else q


def rtn_mc_coherence_grid(
    p: RTNParams, times, trajectories: int, seed: int, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo q(t) on an ascending grid: mean of cos(v * int_0^t xi) over
    telegraph trajectories (exponential inter-switch times at ``rate``,
    equiprobable initial sign). Returns (means, standard errors)."""
    if trajectories < 10_000:
        raise ValueError(f"trajectories={trajectories} below the minimum of 10000")
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0 or np.any(np.diff(times) <= 0.0) or times[0] < 0.0:
        raise ValueError("times must be a nonempty strictly increasing nonnegative grid")
    t_max = float(times[-1])
    mean_flips = p.rate * t_max
    cap = int(np.ceil(mean_flips + 12.0 * np.sqrt(mean_flips) + 25.0))
    sizes = _batch_sizes(trajectories)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def work(i):
        rng = np.random.default_rng(streams[i])
        b = sizes[i]
        xi0 = rng.integers(0, 2, size=b) * 2.0 - 1.0
        switches = np.cumsum(rng.exponential(1.0 / p.rate, size=(b, cap)), axis=1)
        while switches[:, -1].min() <= t_max:  # pragma: no cover - ~1e-12 probability
            extra = np.cumsum(rng.exponential(1.0 / p.rate, size=(b, cap)), axis=1)
            switches = np.concatenate([switches, switches[:, -1:] + extra], axis=1)
        integrals = kernels.rtn_integrals(switches, times)
        c = np.cos(p.coupling * integrals * xi0[:, None])
        return c.sum(axis=0), (c * c).sum(axis=0), b

    parts = _map_ordered(work, len(sizes), threads)
    s1 = sum(q[0] for q in parts)
    s2 = sum(q[1] for q in parts)
    n = sum(q[2] for q in parts)
    mean = s1 / n
    var = np.maximum(0.0, (s2 - n * mean**2) / (n - 1))
    return mean, np.sqrt(var / n)


def rtn_mc_coherence(
    p: RTNParams, t: float, trajectories: int, seed: int, threads: int = 1
) -> tuple[float, float]:
    """Monte-Carlo q(t) at a single time, with its standard error."""
    if t == 0.0:
        return 1.0, 0.0
    mean, se = rtn_mc_coherence_grid(p, [t], trajectories, seed, threads)
    return float(mean[0]), float(se[0])


def rtn_concurrence(ewl: EWLParams, p: RTNParams, t):
    """Closed-form concurrence max{0, 2K(t)} of an extended Werner-like input
    under telegraph dephasing, K = r|a|b|q(t)| - (1-r)/4 (same for both
    excitation kinds)."""
    q = np.abs(rtn_coherence(p, t))
    k = ewl.r * abs(ewl.a) * ewl.b * q - (1.0 - ewl.r) / 4.0
    c = np.maximum(0.0, 2.0 * k)
    return float(c) if np.ndim(c) == 0 else c


def rtn_evolved_state(ewl: EWLParams, p: RTNParams, t: float) -> DensityOperator:
    """Evolved extended Werner-like state under telegraph dephasing of qubit B."""
    return dephased_state(ewl_state(ewl), rtn_coherence(p, t))


# ---------------------------------------------------------------------------
# stroboscopic liquid-crystal-style dephasing channel
# ---------------------------------------------------------------------------


def stroboscopic_coherences(p: StroboscopicParams, threads: int = 1) -> DephasingEstimate:
    """Per-step dephasing factors <exp(-i Theta_k)> averaged over AR(1) phase
    sequences, Theta_k the accumulated (echo-sign-corrected) phase after step k."""
    mu, sigma = p.autocorrelation, p.phase_sigma
    signs = np.ones(p.steps)
    if p.echo_after_step is not None:
        signs[p.echo_after_step:] = -1.0
    sizes = _batch_sizes(p.sequences)
    streams = np.random.SeedSequence(p.seed).spawn(len(sizes))
    innov = sigma * np.sqrt(1.0 - mu * mu)

    def work(i):
        rng = np.random.default_rng(streams[i])
        z = rng.standard_normal((sizes[i], p.steps))
        x = np.empty_like(z)
        x[:, 0] = sigma * z[:, 0]
        for k in range(1, p.steps):
            x[:, k] = mu * x[:, k - 1] + innov * z[:, k]
        theta = np.cumsum(x * signs, axis=1)
        return _phase_partials(theta)

    return _combine_phase_partials(_map_ordered(work, len(sizes), threads))


def stroboscopic_state(bell_input: str, p: StroboscopicParams, step: int) -> DensityOperator:
    """Sequence-averaged state after ``step`` dephasing steps (1-based)."""
    if not 1 <= step <= p.steps:
        raise ValueError(f"step={step} outside 1..{p.steps}")
    est = stroboscopic_coherences(p)
    psi0 = bell_state(bell_input)
    echoed = p.echo_after_step is not None and step > p.echo_after_step
    return dephased_state(
        DensityOperator(np.outer(psi0, psi0.conj()), (2, 2)), est.factors[step - 1], echoed
    )
