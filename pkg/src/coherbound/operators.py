"""Dense operator algebra on C^d: validated state/observable carriers and the
handful of primitives everything else is built from (commutators, traces,
variances, Frobenius inner products, Hermitian eigendecomposition).

All carriers hold read-only ``complex128`` arrays, so instances can be shared
freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
import scipy.linalg


class CoherBoundError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(CoherBoundError, ValueError):
    pass


class InvariantError(CoherBoundError, ValueError):
    """An object failed one of its structural invariants (not Hermitian, not
    normalized, negative eigenvalue, ...)."""


class PreconditionError(CoherBoundError, ValueError):
    """Inputs are structurally valid but violate an operation's precondition."""


class EigensolverError(CoherBoundError, RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10
    norm: float = 1e-10
    trace: float = 1e-9
    psd: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def _square(m, what: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvariantError(f"{what} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvariantError(f"{what} has non-finite entries")
    return a


class HermitianOperator:
    """Hermitian matrix, symmetrized on construction.

    Inputs whose largest ``|m_jk - conj(m_kj)|`` exceeds the hermiticity
    tolerance are rejected; anything within tolerance is replaced by
    ``(m + m^dagger) / 2``.
    """

    __slots__ = ("m",)

    def __init__(self, m, tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        if isinstance(m, HermitianOperator):
            m = m.m
        a = _square(m, "Hermitian operator")
        err = float(np.max(np.abs(a - a.conj().T)))
        if err > tol.hermiticity:
            raise InvariantError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
        object.__setattr__(self, "m", _readonly((a + a.conj().T) / 2))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.m if dtype is None else self.m.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class DensityMatrix(HermitianOperator):
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    __slots__ = ()

    def __init__(self, m, tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        super().__init__(m, tol)
        tr = np.trace(self.m).real
        if abs(tr - 1.0) > tol.trace:
            raise InvariantError(f"density matrix trace is {tr!r}, expected 1")
        lam_min = float(np.linalg.eigvalsh(self.m)[0])
        if lam_min < -tol.psd:
            raise InvariantError(f"density matrix has negative eigenvalue {lam_min:.3e}")

    @classmethod
    def from_pure(cls, psi: "PureState | np.ndarray") -> "DensityMatrix":
        v = psi.amplitudes if isinstance(psi, PureState) else PureState(psi).amplitudes
        return cls(np.outer(v, v.conj()))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.m, self.m)))


class PureState:
    """Normalized ket with amplitudes ``c_j`` in the reference basis."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        if isinstance(amplitudes, PureState):
            amplitudes = amplitudes.amplitudes
        v = np.asarray(amplitudes, dtype=np.complex128)
        if v.ndim != 1 or v.size == 0:
            raise InvariantError(f"state vector must be 1-d and non-empty, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvariantError("state vector has non-finite entries")
        n2 = float(np.vdot(v, v).real)
        if abs(n2 - 1.0) > tol.norm:
            raise InvariantError(f"state vector has squared norm {n2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _readonly(v))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)

    def __repr__(self):
        return f"PureState(dim={self.dim})"


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray   # ascending, real
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


MatrixLike = Union[HermitianOperator, np.ndarray]


def as_array(x) -> np.ndarray:
    if isinstance(x, HermitianOperator):
        return x.m
    if isinstance(x, PureState):
        return x.amplitudes
    return _square(x)


def as_hermitian(x, tol: Tolerances | None = None) -> HermitianOperator:
    return x if isinstance(x, HermitianOperator) else HermitianOperator(x, tol)


def as_density(x, tol: Tolerances | None = None) -> DensityMatrix:
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, PureState):
        return x.density()
    if isinstance(x, HermitianOperator):
        x = x.m
    return DensityMatrix(x, tol)


def check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")


def commutator(x: MatrixLike, y: MatrixLike) -> np.ndarray:
    """Return ``xy - yx``."""
    a, b = as_array(x), as_array(y)
    check_same_dim(a, b)
    return a @ b - b @ a


def expectation(obs, rho) -> complex:
    """``tr(obs rho)``; obs may be any square matrix."""
    a, r = as_array(obs), as_density(rho).m
    check_same_dim(a, r)
    # tr(AB) = sum_jk A_jk B_kj
    return complex(np.sum(a * r.T))


def variance(a, rho) -> float:
    """``tr(A^2 rho) - tr(A rho)^2``, clamped at zero."""
    h = as_hermitian(a).m
    r = as_density(rho).m
    check_same_dim(h, r)
    mean = np.sum(h * r.T).real
    second = np.sum((h @ h) * r.T).real
    return max(float(second - mean * mean), 0.0)


def frobenius_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product ``tr(x^dagger y)``."""
    a, b = as_array(x), as_array(y)
    check_same_dim(a, b)
    return complex(np.vdot(a, b))


def frobenius_norm(x) -> float:
    return float(np.linalg.norm(as_array(x)))


def spectral(h) -> SpectralDecomposition:
    m = as_hermitian(h).m
    try:
        w, v = scipy.linalg.eigh(m)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"Hermitian eigensolver failed: {exc}") from exc
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


# Pauli matrices, handy for tests and the qubit paths.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
for _p in (SIGMA_X, SIGMA_Y, SIGMA_Z):
    _p.setflags(write=False)
del _p
