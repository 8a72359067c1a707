"""Commutator lower bound on l1 coherence.

For a traceless observable ``A`` of unit Frobenius norm and any state ``rho``,

    lhs = |(1/2) tr([A, A^D] rho)|  <=  C(rho),

where ``A^D`` keeps only the diagonal of ``A`` in the reference basis. This
module evaluates the left-hand side, checks it against the l1 measures, finds
the observable that maximizes it, and builds the Hermitian witness
``i[A, A^D]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisCoefficients, OperatorBasis, generalized_gell_mann, project
from .coherence import RoofBudget, RoofEstimate, l1_matrix, roof_estimate
from .operators import (
    DensityMatrix,
    HermitianOperator,
    InvariantError,
    PreconditionError,
    as_density,
    as_hermitian,
    check_same_dim,
    commutator,
    expectation,
)

TRACE_TOL = 1e-9
NORM_TOL = 1e-9


def diagonal_part_state(rho) -> DensityMatrix:
    m = as_density(rho).m
    return DensityMatrix(np.diag(np.diag(m)))


def incoherent_part(a) -> HermitianOperator:
    m = as_hermitian(a).m
    return HermitianOperator(np.diag(np.diag(m).real))


def commutator_expectation(a, rho) -> complex:
    """``(1/2) tr([A, A^D] rho)``, purely imaginary.

    Uses ``[A, A^D]_jk = A_jk (A_kk - A_jj)``, which vanishes on the diagonal,
    so only the off-diagonal support of ``rho`` contributes.
    """
    m = as_hermitian(a).m
    r = as_density(rho).m
    check_same_dim(m, r)
    diag = np.diag(m).real
    c = m * (diag[None, :] - diag[:, None])
    return complex(0.5 * np.sum(c * r.T))


def commutator_expectation_matrix(a, rho) -> complex:
    """Same quantity via explicit matrix products; cross-check path."""
    a = as_hermitian(a)
    return 0.5 * expectation(commutator(a, incoherent_part(a)), rho)


def witness_operator(a) -> HermitianOperator:
    """``W = i[A, A^D]``; ``|<W>| = 2 lhs``."""
    a = as_hermitian(a)
    return HermitianOperator(1j * commutator(a, incoherent_part(a)))


# -- qubit closed form -------------------------------------------------------

@dataclass(frozen=True)
class QubitBloch:
    """Pure qubit ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` and a unit
    direction ``n`` for the observable :func:`bloch_observable`."""

    theta: float
    phi: float
    n: tuple[float, float, float]

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise InvariantError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise InvariantError(f"phi must lie in [0, 2pi), got {self.phi}")
        n = tuple(float(x) for x in self.n)
        if len(n) != 3 or abs(np.linalg.norm(n) - 1.0) > 1e-10:
            raise InvariantError(f"n must be a unit 3-vector, got {self.n}")
        object.__setattr__(self, "n", n)

    def state(self) -> np.ndarray:
        return np.array([np.cos(self.theta / 2), np.exp(1j * self.phi) * np.sin(self.theta / 2)])

    def density(self) -> DensityMatrix:
        v = self.state()
        return DensityMatrix(np.outer(v, v.conj()))


def bloch_observable(n) -> HermitianOperator:
    """``[[n_z, n_x + i n_y], [n_x - i n_y, -n_z]]``, Frobenius norm sqrt(2).

    Note the placement of ``i n_y``: this is ``sigma . n`` with ``n_y``
    reflected, and it is the form the closed expression in
    :func:`qubit_closed_form` is written for.
    """
    nx, ny, nz = n
    return HermitianOperator(np.array([[nz, nx + 1j * ny], [nx - 1j * ny, -nz]]))


def qubit_closed_form(b: QubitBloch) -> float:
    """``Im (1/2)<psi|[A, A^D]|psi>`` for ``A = bloch_observable(b.n)``:
    ``-n_z sin(theta) (n_x sin(phi) + n_y cos(phi))``.

    Bounded by ``sin(theta)`` in modulus. The expectation is quadratic in
    ``A``, so dividing ``A`` by sqrt(2) to reach unit Frobenius norm scales
    the value by 1/2.
    """
    nx, ny, nz = b.n
    return -nz * np.sin(b.theta) * (nx * np.sin(b.phi) + ny * np.cos(b.phi))


# -- bound check -------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    lhs: float
    c_l1: float
    roof_upper: float | None
    margin: float
    observable_coeffs: BasisCoefficients
    normalized: bool
    roof: RoofEstimate | None = None

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "c_l1": self.c_l1,
            "roof_upper": self.roof_upper,
            "margin": self.margin,
            "normalized": self.normalized,
            "observable_coeffs": [float(x) for x in self.observable_coeffs.a],
        }


def normalize_observable(a) -> HermitianOperator:
    """``(A - tr(A)/d I) / ||.||_F``."""
    m = as_hermitian(a).m
    d = m.shape[0]
    m = m - np.trace(m).real / d * np.eye(d)
    norm = np.linalg.norm(m)
    if norm < 1e-12:
        raise PreconditionError("observable is proportional to the identity; nothing left after trace removal")
    return HermitianOperator(m / norm)


def check_admissible(a) -> None:
    m = as_hermitian(a).m
    tr = abs(np.trace(m))
    if tr > TRACE_TOL:
        raise PreconditionError(f"observable must be traceless (|tr A| = {tr:.3e}); pass auto_normalize=True to fix")
    norm = np.linalg.norm(m)
    if abs(norm - 1.0) > NORM_TOL:
        raise PreconditionError(f"observable must have unit Frobenius norm (got {norm!r}); pass auto_normalize=True to fix")


def bound_check(
    a,
    rho,
    *,
    auto_normalize: bool = False,
    roof: bool = False,
    roof_budget: RoofBudget | None = None,
) -> BoundReport:
    a = as_hermitian(a)
    rho = as_density(rho)
    check_same_dim(a.m, rho.m)
    normalized = False
    if auto_normalize:
        b = normalize_observable(a)
        normalized = not np.allclose(b.m, a.m, rtol=0, atol=1e-15)
        a = b
    else:
        check_admissible(a)
    lhs = abs(commutator_expectation(a, rho))
    c_l1 = l1_matrix(rho)
    est = roof_estimate(rho, roof_budget) if roof else None
    return BoundReport(
        lhs=lhs,
        c_l1=c_l1,
        roof_upper=None if est is None else est.value,
        margin=c_l1 - lhs,
        observable_coeffs=project(a, generalized_gell_mann(a.dim)),
        normalized=normalized,
        roof=est,
    )


# -- optimal observable ------------------------------------------------------

def bound_form(rho, basis: OperatorBasis | None = None) -> np.ndarray:
    """Real symmetric ``S`` with ``(1/2) tr([A, A^D] rho) = (i/2) a^T S a``.

    ``S`` symmetrizes ``q_{mu nu} = Im tr(rho [H_mu, H_nu^D])``.
    """
    rho = as_density(rho)
    d = rho.dim
    basis = basis or generalized_gell_mann(d)
    if basis.dim != d:
        raise PreconditionError(f"basis dim {basis.dim} does not match state dim {d}")
    h = basis.stack
    hd = np.einsum("mii->mi", h).real  # diagonals of each H_nu
    r = rho.m
    # tr(rho [H_mu, D_nu]) = sum_jk H_mu[j,k] (D_nu[k] - D_nu[j]) rho[k,j]
    q = np.einsum("mjk,nk,kj->mn", h, hd, r) - np.einsum("mjk,nj,kj->mn", h, hd, r)
    q = q.imag
    return 0.5 * (q + q.T)


def optimal_observable(rho, basis: OperatorBasis | None = None) -> tuple[BasisCoefficients, float]:
    """Unit coefficient vector maximizing ``lhs`` and the value it achieves.

    The maximum of ``(1/2)|a^T S a|`` over the unit sphere is half the
    largest-magnitude eigenvalue of ``S``. Ties go to the lowest eigen-index;
    the eigenvector's first nonzero entry is made positive.
    """
    rho = as_density(rho)
    basis = basis or generalized_gell_mann(rho.dim)
    s = bound_form(rho, basis)
    lam, vec = np.linalg.eigh(s)
    mag = np.abs(lam)
    idx = int(np.flatnonzero(mag >= mag.max() - 1e-12)[0])
    v = vec[:, idx]
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size and v[nz[0]] < 0:
        v = -v
    v = v / np.linalg.norm(v)
    value = 0.5 * abs(float(v @ s @ v))
    return BasisCoefficients(rho.dim, v), value
