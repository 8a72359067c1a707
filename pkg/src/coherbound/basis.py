"""Orthonormal traceless Hermitian basis (generalized Gell-Mann) and the
coefficient map ``a <-> sum_mu a_mu H_mu``."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .operators import DimensionMismatchError, HermitianOperator, PreconditionError, as_hermitian

_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class BasisCoefficients:
    dim: int
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64, copy=True).ravel()
        if a.size != self.dim * self.dim - 1:
            raise DimensionMismatchError(
                f"coefficient vector for dim {self.dim} needs {self.dim ** 2 - 1} entries, got {a.size}")
        if not np.all(np.isfinite(a)):
            raise ValueError("basis coefficients must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.a))


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """``d^2 - 1`` traceless Hermitian matrices, orthonormal under tr(X^dagger Y).

    ``stack`` holds the elements as one ``(d^2-1, d, d)`` array; ``elements``
    wraps them as :class:`HermitianOperator`.
    """

    dim: int
    stack: np.ndarray

    @property
    def elements(self) -> tuple[HermitianOperator, ...]:
        return tuple(HermitianOperator(h) for h in self.stack)

    def __len__(self):
        return self.stack.shape[0]

    def __iter__(self):
        return iter(self.elements)


@lru_cache(maxsize=None)
def generalized_gell_mann(dim: int) -> OperatorBasis:
    """Generalized Gell-Mann basis scaled to unit Frobenius norm.

    Ordering: symmetric off-diagonal generators for ``j < k`` in lexicographic
    order, then the antisymmetric ones in the same order, then the ``d - 1``
    diagonal generators ``diag(1, ..., 1, -l, 0, ..., 0) / sqrt(l (l+1))``.
    For ``dim == 2`` this gives ``(sigma_x, sigma_y, sigma_z) / sqrt(2)``.
    """
    dim = int(dim)
    if dim < 2:
        raise PreconditionError(f"basis needs dim >= 2, got {dim}")
    pairs = [(j, k) for j in range(dim) for k in range(j + 1, dim)]
    out = np.zeros((dim * dim - 1, dim, dim), dtype=np.complex128)
    n = 0
    for j, k in pairs:
        out[n, j, k] = out[n, k, j] = _SQRT_HALF
        n += 1
    for j, k in pairs:
        out[n, j, k] = -1j * _SQRT_HALF
        out[n, k, j] = 1j * _SQRT_HALF
        n += 1
    for l in range(1, dim):
        diag = np.zeros(dim)
        diag[:l] = 1.0
        diag[l] = -l
        out[n] = np.diag(diag / np.sqrt(l * (l + 1)))
        n += 1
    out.setflags(write=False)
    return OperatorBasis(dim, out)


def _check(dim_a: int, basis: OperatorBasis) -> None:
    if dim_a != basis.dim:
        raise DimensionMismatchError(f"dimension mismatch: {dim_a} vs basis dim {basis.dim}")


def expand(a: BasisCoefficients, basis: OperatorBasis | None = None) -> HermitianOperator:
    """Return ``sum_mu a_mu H_mu``."""
    basis = basis or generalized_gell_mann(a.dim)
    _check(a.dim, basis)
    return HermitianOperator(np.tensordot(a.a, basis.stack, axes=1))


def project(h, basis: OperatorBasis) -> BasisCoefficients:
    """Coefficients ``a_mu = Re tr(H_mu h)``; the identity component is dropped."""
    m = as_hermitian(h).m
    _check(m.shape[0], basis)
    # tr(H_mu h) with H_mu Hermitian equals vdot(H_mu, h)
    a = np.einsum("mij,ij->m", basis.stack.conj(), m).real
    return BasisCoefficients(basis.dim, a)
