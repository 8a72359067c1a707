import numpy as np
import pytest

from coherbound.bound import commutator_expectation, witness_operator
from coherbound.operators import SIGMA_X, SIGMA_Z, PreconditionError, expectation
from coherbound.sampling import Sampler, make_rng
from coherbound.shots import (
    COHERENT, INCONCLUSIVE, ShotResult, estimate_bound_from_shots, outcome_distribution,
    simulate_measurement,
)
from conftest import rand_rho

plus = np.array([1, 1]) / np.sqrt(2)
RHO_PLUS = np.outer(plus, plus)
A_HALF = (SIGMA_X + SIGMA_Z) / 2


def _check_invariants(res):
    assert sum(res.outcome_counts.values()) == res.shots
    mean = sum(lam * n for lam, n in res.outcome_counts.items()) / res.shots
    assert abs(res.mean - mean) <= 1e-12


def test_diagonal_state_has_zero_mean():
    a, _ = Sampler(3, make_rng(2)).observable()
    w = witness_operator(a)
    rho = np.diag([0.2, 0.5, 0.3])
    assert expectation(w, rho) == pytest.approx(0, abs=1e-15)
    res = simulate_measurement(w, rho, 100_000, seed=1)
    _check_invariants(res)
    assert res.witness_verdict == INCONCLUSIVE


def test_plus_state_mean_within_five_sigma():
    w = witness_operator(A_HALF)
    res = simulate_measurement(w, RHO_PLUS, 10**6, seed=3)
    _check_invariants(res)
    assert abs(res.mean - expectation(w, RHO_PLUS).real) <= 5 * res.std_error
    assert sorted(res.outcome_counts) == pytest.approx([-0.5, 0.5])


def test_detects_coherence():
    psi = np.array([np.cos(0.4), 1j * np.sin(0.4)])
    rho = np.outer(psi, psi.conj())
    w = witness_operator(A_HALF)
    res = simulate_measurement(w, rho, 10_000, seed=4)
    assert res.witness_verdict == COHERENT
    assert abs(res.mean - expectation(w, rho).real) <= 5 * res.std_error


def test_zero_variance_uses_worst_case_error():
    psi = np.array([1, 1j]) / np.sqrt(2)  # eigenstate of W = sigma_y / 2
    rho = np.outer(psi, psi.conj())
    w = witness_operator(A_HALF)
    res = simulate_measurement(w, rho, 10_000, seed=4)
    assert res.mean == 0.5 and res.std_error == 0
    assert res.witness_verdict == COHERENT
    # two identical shots are not enough: worst case error 1/(2 sqrt 2)
    few = simulate_measurement(w, rho, 2, seed=4)
    assert few.std_error == 0 and few.witness_verdict == INCONCLUSIVE


def test_single_shot():
    res = simulate_measurement(witness_operator(A_HALF), RHO_PLUS, 1, seed=5)
    _check_invariants(res)
    assert res.std_error == 0
    assert res.witness_verdict == INCONCLUSIVE


def test_rejects_zero_shots():
    with pytest.raises(PreconditionError):
        simulate_measurement(witness_operator(A_HALF), RHO_PLUS, 0, seed=1)


def test_deterministic():
    w = witness_operator(A_HALF)
    assert simulate_measurement(w, RHO_PLUS, 1000, 9) == simulate_measurement(w, RHO_PLUS, 1000, 9)


def test_eigenvalue_clustering():
    w = np.diag([1.0, 1.0 + 1e-12, -1.0])
    values, probs = outcome_distribution(w, np.eye(3) / 3)
    np.testing.assert_allclose(values, [-1, 1], atol=1e-11)
    np.testing.assert_allclose(probs, [1 / 3, 2 / 3], atol=1e-12)


def test_probabilities_sane(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        w = witness_operator((g + g.conj().T) / 2)
        values, probs = outcome_distribution(w, rand_rho(rng, d))
        assert np.all(probs >= 0) and np.all(probs <= 1)
        assert probs.sum() == pytest.approx(1, abs=1e-9)


def test_estimate_examples():
    base = dict(shots=100, outcome_counts={}, witness_verdict=INCONCLUSIVE, z_threshold=5.0)
    assert estimate_bound_from_shots(ShotResult(mean=0.0, std_error=0.01, **base)) == 0
    assert estimate_bound_from_shots(ShotResult(mean=0.7, std_error=0.01, **base)) == pytest.approx(0.325)
    assert estimate_bound_from_shots(ShotResult(mean=-0.7, std_error=0.01, **base)) == pytest.approx(0.325)


def test_estimate_coverage():
    s = Sampler(3, make_rng(11))
    rho = s.density(3)
    a, _ = s.observable()
    w = witness_operator(a)
    exact = abs(commutator_expectation(a, rho))
    hits = 0
    for k in range(1000):
        res = simulate_measurement(w, rho, 2000, seed=k)
        est = estimate_bound_from_shots(res)
        assert est <= abs(res.mean) / 2
        hits += est <= exact + 5 * res.std_error / 2
    assert hits >= 990


def test_std_error_scaling():
    s = Sampler(3, make_rng(12))
    rho = s.density(2)
    w = witness_operator(s.observable()[0])
    small = np.mean([simulate_measurement(w, rho, 2500, seed=k).std_error for k in range(100)])
    big = np.mean([simulate_measurement(w, rho, 10_000, seed=1000 + k).std_error for k in range(100)])
    assert 0.4 <= big / small <= 0.6


def test_unbiased():
    s = Sampler(4, make_rng(13))
    rho = s.density(4)
    w = witness_operator(s.observable()[0])
    means = np.array([simulate_measurement(w, rho, 10_000, seed=k).mean for k in range(1000)])
    grand_se = means.std(ddof=1) / np.sqrt(means.size)
    assert abs(means.mean() - expectation(w, rho).real) <= 4 * grand_se
