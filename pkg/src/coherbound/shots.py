"""Finite-shot projective measurement of a witness observable.

The witness ``W = i[A, A^D]`` is assumed to be measured directly: outcomes are
the distinct eigenvalues of ``W`` with Born probabilities ``tr(P_k rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import CoherBoundError, PreconditionError, as_density, as_hermitian, check_same_dim, spectral
from .sampling import make_rng

CLUSTER_TOL = 1e-9
PROB_TOL = 1e-9
DEFAULT_Z = 5.0

COHERENT = "coherent_detected"
INCONCLUSIVE = "inconclusive"


class ProbabilityError(CoherBoundError, ValueError):
    pass


@dataclass(frozen=True)
class ShotResult:
    shots: int
    mean: float
    std_error: float
    outcome_counts: dict[float, int]
    witness_verdict: str
    z_threshold: float
    probabilities: dict[float, float] = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        return {
            "shots": self.shots,
            "mean": self.mean,
            "std_error": self.std_error,
            "witness_verdict": self.witness_verdict,
            "z_threshold": self.z_threshold,
            "outcome_counts": [[lam, n] for lam, n in self.outcome_counts.items()],
        }


def outcome_distribution(w, rho, cluster_tol: float = CLUSTER_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Distinct eigenvalues of ``w`` (clustered within ``cluster_tol``) and
    their probabilities in ``rho``, clamped to [0, 1] and renormalized."""
    w = as_hermitian(w)
    rho = as_density(rho)
    check_same_dim(w.m, rho.m)
    lam, vec = spectral(w)
    # <v|rho|v> for each eigenvector column
    weights = np.einsum("ji,jk,ki->i", vec.conj(), rho.m, vec).real
    starts = np.flatnonzero(np.concatenate([[True], np.diff(lam) > cluster_tol]))
    values = np.add.reduceat(lam, starts) / np.diff(np.append(starts, lam.size))
    probs = np.add.reduceat(weights, starts)
    if np.any(probs < -PROB_TOL) or np.any(probs > 1 + PROB_TOL) or abs(probs.sum() - 1.0) > PROB_TOL:
        raise ProbabilityError(f"outcome probabilities out of range: {probs}")
    probs = np.clip(probs, 0.0, 1.0)
    return values, probs / probs.sum()


def simulate_measurement(
    w,
    rho,
    shots: int,
    seed: int,
    z_threshold: float = DEFAULT_Z,
) -> ShotResult:
    shots = int(shots)
    if shots < 1:
        raise PreconditionError(f"shots must be positive, got {shots}")
    values, probs = outcome_distribution(w, rho)
    rng = make_rng(seed)
    cdf = np.cumsum(probs)
    idx = np.minimum(np.searchsorted(cdf, rng.random(shots), side="right"), values.size - 1)
    counts = np.bincount(idx, minlength=values.size)

    mean = float(np.dot(values, counts) / shots)
    var = float(np.dot(counts, (values - mean) ** 2) / (shots - 1)) if shots > 1 else 0.0
    std_error = np.sqrt(var / shots) if var > 0 else 0.0
    if shots == 1:
        detected = False
    elif std_error > 0:
        detected = abs(mean) > z_threshold * std_error
    else:
        # every shot gave the same outcome: judge against the largest standard
        # error any distribution on the spectrum's range could produce
        worst = (values[-1] - values[0]) / (2 * np.sqrt(shots))
        detected = worst > 0 and abs(mean) > z_threshold * worst
    return ShotResult(
        shots=shots,
        mean=mean,
        std_error=float(std_error),
        outcome_counts={float(v): int(n) for v, n in zip(values, counts)},
        witness_verdict=COHERENT if detected else INCONCLUSIVE,
        z_threshold=float(z_threshold),
        probabilities={float(v): float(p) for v, p in zip(values, probs)},
    )


def estimate_bound_from_shots(result: ShotResult) -> float:
    """``max(0, (|mean| - z * std_error) / 2)``: a discounted coherence lower bound."""
    return max(0.0, (abs(result.mean) - result.z_threshold * result.std_error) / 2)
