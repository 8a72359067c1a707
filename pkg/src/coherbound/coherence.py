"""l1-norm coherence in the computational basis: the incoherence test, the
pure-state and matrix l1 measures, and an anytime upper bound on the convex
roof ``inf sum_i p_i C(psi_i)`` over pure-state decompositions.

Decompositions are enumerated through isometries: with ``rho = E diag(lam) E^dagger``
restricted to its support (rank ``r``), every decomposition into ``m`` terms is
``psi~_i = sum_k V_ik sqrt(lam_k) e_k`` for some ``m x r`` matrix ``V`` with
orthonormal columns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    DensityMatrix,
    InvariantError,
    PreconditionError,
    PureState,
    Tolerances,
    as_density,
    spectral,
)
from .sampling import make_rng

RANK_CUTOFF = 1e-12


def is_incoherent(rho, tol: float = 1e-12) -> bool:
    m = as_density(rho).m
    off = m - np.diag(np.diag(m))
    return bool(np.max(np.abs(off)) <= tol)


def l1_pure(psi) -> float:
    """``sum_{j != k} |c_j^* c_k|``, evaluated as ``(sum_j |c_j|)^2 - 1``."""
    c = psi.amplitudes if isinstance(psi, PureState) else PureState(psi).amplitudes
    s = float(np.sum(np.abs(c)))
    return max(s * s - 1.0, 0.0)


def l1_matrix(rho) -> float:
    m = as_density(rho).m
    a = np.abs(m)
    return float(np.sum(a) - np.trace(a))


@dataclass(frozen=True)
class Decomposition:
    weights: np.ndarray
    states: tuple[PureState, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size != len(self.states) or w.size == 0:
            raise InvariantError("decomposition needs one weight per state")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
            raise InvariantError(f"weights must form a probability vector (sum {w.sum()!r})")
        if len({s.dim for s in self.states}) != 1:
            raise InvariantError("decomposition states must share one dimension")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self):
        return len(self.states)

    def density(self) -> np.ndarray:
        vs = np.array([s.amplitudes for s in self.states])
        return np.einsum("i,ij,ik->jk", self.weights, vs, vs.conj())

    def average_coherence(self) -> float:
        return float(sum(p * l1_pure(s) for p, s in zip(self.weights, self.states)))

    def check(self, target, tol: float = 1e-8) -> None:
        err = np.linalg.norm(self.density() - as_density(target).m)
        if err > tol:
            raise InvariantError(f"decomposition misses target by {err:.3e} (Frobenius)")


@dataclass(frozen=True)
class RoofEstimate:
    value: float
    best_decomposition: Decomposition
    iterations: int
    converged: bool
    restart: int = 0


@dataclass(frozen=True)
class RoofBudget:
    restarts: int = 50
    iterations: int = 500
    seed: int = 0
    sizes: tuple[int, ...] | None = None  # decomposition sizes m; default rank..min(d^2, 2d)


# -- isometry parametrization ------------------------------------------------

def isometry_from_params(params, m: int, r: int) -> np.ndarray:
    """Orthonormalize the ``m x r`` complex matrix encoded by ``params``.

    ``params`` holds ``2*m*r`` reals: the row-major real parts followed by the
    imaginary parts. Leading dimensions, if any, are treated as a batch.
    """
    p = np.asarray(params, dtype=np.float64)
    batch = p.shape[:-1]
    if p.shape[-1] != 2 * m * r:
        raise PreconditionError(f"need {2 * m * r} isometry parameters for m={m}, r={r}, got {p.shape[-1]}")
    z = (p[..., : m * r] + 1j * p[..., m * r:]).reshape(*batch, m, r)
    q, rr = np.linalg.qr(z)
    d = np.diagonal(rr, axis1=-2, axis2=-1)
    mag = np.abs(d)
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return q * phase[..., None, :]


def identity_params(m: int, r: int) -> np.ndarray:
    p = np.zeros(2 * m * r)
    p[: m * r] = np.eye(m, r).ravel()
    return p


def _support(rho: DensityMatrix) -> np.ndarray:
    """Rows ``sqrt(lam_k) e_k^T`` for the eigenvalues above the rank cutoff."""
    lam, vec = spectral(rho)
    keep = lam > RANK_CUTOFF
    return np.sqrt(lam[keep])[:, None] * vec[:, keep].T


def _unnormalized_states(v: np.ndarray, root: np.ndarray) -> np.ndarray:
    return v @ root


def _roof_cost(psi: np.ndarray) -> np.ndarray:
    # p_i C(psi_i) = (sum_j |psi~_ij|)^2 - p_i, and the weights sum to one
    s = np.abs(psi).sum(axis=-1)
    return np.sum(s * s, axis=-1) - np.sum(np.abs(psi) ** 2, axis=(-2, -1))


_LOOSE = Tolerances(norm=1e-8)


def _decomposition_from_rows(psi: np.ndarray) -> Decomposition:
    p = np.sum(np.abs(psi) ** 2, axis=1)
    keep = p > 1e-300
    p, psi = p[keep], psi[keep]
    states = tuple(PureState(row / np.sqrt(pi), _LOOSE) for row, pi in zip(psi, p))
    return Decomposition(p / p.sum(), states)


def enumerate_decomposition(rho, isometry_params, m: int) -> Decomposition:
    rho = as_density(rho)
    root = _support(rho)
    r = root.shape[0]
    if m < r:
        raise PreconditionError(f"decomposition size m={m} is below rank {r}")
    v = isometry_from_params(isometry_params, m, r)
    return _decomposition_from_rows(_unnormalized_states(v, root))


# -- optimizer ---------------------------------------------------------------

def _default_sizes(rank: int, dim: int) -> tuple[int, ...]:
    return tuple(range(rank, max(rank, min(dim * dim, 2 * dim)) + 1))


def _climb(root, m_max, r, starts, n_active, draws):
    """Batched coordinate hill climb; one row of ``starts`` per restart.

    Every restart is embedded in an ``m_max x r`` parametrization; restart
    ``b`` only moves its first ``n_active[b]`` rows (the rest stay zero and
    contribute empty terms). ``draws[b, t]`` holds two uniforms per iteration:
    the coordinate and the perturbation. Returns per-restart best params, best
    cost, and the running-best cost history.
    """
    x = starts.copy()
    n_batch = x.shape[0]
    block = m_max * r
    n_par = 2 * n_active * r

    def cost_of(p):
        return _roof_cost(_unnormalized_states(isometry_from_params(p, m_max, r), root))

    cost = cost_of(x)
    step = np.full(n_batch, 0.3)
    iters = draws.shape[1]
    history = np.empty((iters, n_batch))
    rows = np.arange(n_batch)
    for t in range(iters):
        k = np.minimum((draws[:, t, 0] * n_par).astype(np.intp), n_par - 1)
        half = n_active * r
        coord = np.where(k < half, k, k - half + block)
        delta = step * (2.0 * draws[:, t, 1] - 1.0)
        trial = np.concatenate([x, x])
        trial[rows, coord] += delta
        trial[n_batch + rows, coord] -= delta
        c = cost_of(trial)
        c_plus, c_minus = c[:n_batch], c[n_batch:]
        use_minus = c_minus < c_plus
        c_best = np.where(use_minus, c_minus, c_plus)
        better = c_best < cost
        pick = np.where(use_minus, n_batch + rows, rows)
        x = np.where(better[:, None], trial[pick], x)
        cost = np.where(better, c_best, cost)
        step = np.clip(np.where(better, step * 1.5, step * 0.93), 1e-10, 2.0)
        history[t] = cost
    return x, cost, history


def _embed(p: np.ndarray, m: int, m_max: int, r: int) -> np.ndarray:
    out = np.zeros(2 * m_max * r)
    out[: m * r] = p[: m * r]
    out[m_max * r: m_max * r + m * r] = p[m * r:]
    return out


def roof_estimate(rho, budget: RoofBudget | None = None) -> RoofEstimate:
    """Upper bound on the convex-roof l1 coherence, attained by the returned
    decomposition.

    Restart ``k`` uses decomposition size ``sizes[k % len(sizes)]`` and its own
    random stream ``(seed, k)``; restart 0 starts from the eigendecomposition.
    With a fixed seed the value never increases when restarts or iterations
    grow.
    """
    budget = budget or RoofBudget()
    rho = as_density(rho)
    root = _support(rho)
    r, d = root.shape
    sizes = tuple(budget.sizes or _default_sizes(r, d))
    if min(sizes) < r:
        raise PreconditionError(f"decomposition sizes {sizes} include values below rank {r}")
    n_restarts = max(1, budget.restarts)
    iters = max(0, budget.iterations)
    m_max = max(sizes)

    ms = np.array([sizes[k % len(sizes)] for k in range(n_restarts)])
    starts = np.empty((n_restarts, 2 * m_max * r))
    draws = np.empty((n_restarts, iters, 2))
    for k, m in enumerate(ms):
        rng = make_rng(budget.seed, k)
        p = identity_params(m, r) if k == 0 else rng.standard_normal(2 * m * r)
        starts[k] = _embed(p, m, m_max, r)
        draws[k] = rng.random((iters, 2))
    x, cost, history = _climb(root, m_max, r, starts, ms, draws)

    k_best = int(np.argmin(cost))  # first index wins ties
    if iters >= 4:
        quarter = history[-max(1, iters // 4):, k_best]
        tail = float(quarter[0] - quarter[-1])
    else:
        tail = np.inf
    v = isometry_from_params(x[k_best], m_max, r)
    dec = _decomposition_from_rows(_unnormalized_states(v, root))
    return RoofEstimate(
        value=dec.average_coherence(),
        best_decomposition=dec,
        iterations=iters,
        converged=bool(tail <= 1e-9),
        restart=k_best,
    )
