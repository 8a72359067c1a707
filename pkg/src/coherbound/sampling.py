"""Seeded random states and observables.

Streams come from :class:`numpy.random.SeedSequence` keyed on
``(seed, stream)``, so parallel workers can derive independent samplers
without sharing one generator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisCoefficients, expand, generalized_gell_mann
from .operators import DensityMatrix, HermitianOperator, PureState

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    dim: int
    mixed_rank: int = 1

    def __post_init__(self):
        if not 0 <= int(self.seed) <= _SEED_MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if not 1 <= self.mixed_rank <= self.dim:
            raise ValueError(f"mixed_rank must lie in [1, {self.dim}], got {self.mixed_rank}")


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed`` and an optional stream index path."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


def derive_seed(seed: int, *stream: int) -> int:
    """A 64-bit child seed, deterministic in ``(seed, *stream)``."""
    ss = np.random.SeedSequence([int(seed), *map(int, stream)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class Sampler:
    """Stateful sampler; not safe to share between threads."""

    def __init__(self, dim: int, rng: np.random.Generator):
        self.dim = dim
        self.rng = rng

    @classmethod
    def from_config(cls, cfg: SamplerConfig, stream: int | None = None) -> "Sampler":
        rng = make_rng(cfg.seed) if stream is None else make_rng(cfg.seed, stream)
        return cls(cfg.dim, rng)

    def pure(self) -> PureState:
        v = _complex_gaussian(self.rng, self.dim)
        return PureState(v / np.linalg.norm(v))

    def density(self, rank: int | None = None) -> DensityMatrix:
        """Hilbert-Schmidt-induced (Ginibre) state of at most the given rank."""
        rank = self.dim if rank is None else rank
        g = _complex_gaussian(self.rng, (self.dim, rank))
        m = g @ g.conj().T
        return DensityMatrix(m / np.trace(m).real)

    def observable(self) -> tuple[HermitianOperator, BasisCoefficients]:
        """Traceless observable with coefficients uniform on the unit sphere."""
        a = self.rng.standard_normal(self.dim * self.dim - 1)
        coeffs = BasisCoefficients(self.dim, a / np.linalg.norm(a))
        return expand(coeffs, generalized_gell_mann(self.dim)), coeffs


def random_pure(cfg: SamplerConfig) -> PureState:
    return Sampler.from_config(cfg).pure()


def random_density(cfg: SamplerConfig) -> DensityMatrix:
    return Sampler.from_config(cfg).density(cfg.mixed_rank)


def random_observable(cfg: SamplerConfig) -> tuple[HermitianOperator, BasisCoefficients]:
    return Sampler.from_config(cfg).observable()
