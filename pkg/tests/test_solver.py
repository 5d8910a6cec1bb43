import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bjjcat.errors import ConvergenceError
from bjjcat.model import (
    ModelParams,
    TridiagonalOperator,
    build_hamiltonian,
    energy_expectation,
    imbalance_distribution,
    lobe_center,
)
from bjjcat.solver import (
    BISECTION_STEPS,
    bisect_eigenvalue,
    dense_oracle,
    doublet_splitting,
    ground_state,
    parity_blocks,
    spectrum,
    sturm_count,
    symmetric_ground_vector,
)

ORACLE_NS = range(2, 41)
ORACLE_LAMS = [0, 0.3, 0.9, 1.0, 1.1, 2, 5]


def H_of(N, lam):
    return build_hamiltonian(ModelParams(N, lam))


def charpoly_roots(M):
    # independent route: roots of det(M - x I) from its characteristic polynomial
    return np.sort(np.roots(np.poly(M)).real)


def test_n2_lambda0_spectrum():
    # the 3x3 matrix has zero diagonal and couplings -sqrt(2)/2, so its
    # eigenvalues are 0 and +-sqrt(2 * 1/2) = +-1
    H = H_of(2, 0.0)
    res = spectrum(H, 3)
    np.testing.assert_allclose(res.energies, [-1.0, 0.0, 1.0], atol=1e-13)
    np.testing.assert_allclose(res.energies, charpoly_roots(H.to_dense()), atol=1e-12)


def test_n2_lambda0_ground_vector():
    res = ground_state(H_of(2, 0.0))
    assert res.ground_energy == pytest.approx(-1.0, abs=1e-13)
    np.testing.assert_allclose(res.ground.coefficients, [0.5, math.sqrt(2) / 2, 0.5], atol=1e-13)


def test_n2_lambda1_oracle_vs_charpoly():
    H = H_of(2, 1.0)
    r2 = math.sqrt(2) / 2
    M = np.array([[-0.5, -r2, 0], [-r2, 0, -r2], [0, -r2, -0.5]])
    np.testing.assert_allclose(dense_oracle(H).energies, charpoly_roots(M), atol=1e-12)
    np.testing.assert_allclose(spectrum(H, 3).energies, charpoly_roots(M), atol=1e-12)


def test_harmonic_gap_at_lambda0():
    res = spectrum(H_of(100, 0.0), 2)
    assert abs(res.gap - 1.0) < 0.05


def test_tiny_doublet_at_lambda7():
    H = H_of(100, 7.0)
    res = spectrum(H, 2)
    assert abs(res.gap) < 1e-6
    assert 0 < doublet_splitting(H) < 1e-6


def test_gaussian_width_at_lambda0(ground):
    _, res = ground(100, 0.0)
    P = imbalance_distribution(res.ground)
    x = res.ground.imbalance()
    sigma_x = math.sqrt(np.sum(P * x**2))
    # |psi|^2 ~ exp(-x^2/sigma^2) has standard deviation sigma/sqrt(2)
    assert sigma_x * math.sqrt(2) == pytest.approx(0.14, abs=0.005)
    assert np.argmax(P) == 50


def test_lobes_at_lambda_1_2(ground):
    _, res = ground(100, 1.2)
    P = imbalance_distribution(res.ground)
    assert lobe_center(P) == pytest.approx(0.55, abs=0.03)
    assert lobe_center(P[::-1]) == pytest.approx(0.55, abs=0.03)


def test_lobes_at_lambda7(ground):
    _, res = ground(100, 7.0)
    P = imbalance_distribution(res.ground)
    assert lobe_center(P) >= 0.96


def test_n20_oracle_agreement():
    H = H_of(20, 0.5)
    assert ground_state(H).ground_energy == pytest.approx(dense_oracle(H).ground_energy, abs=1e-10)


def test_n20_symmetrized_oracle_vector():
    H = H_of(20, 2.0)
    sym = symmetric_ground_vector(dense_oracle(H))
    assert abs(np.dot(ground_state(H).ground.coefficients, sym)) > 1 - 1e-8


def test_oracle_dimension_guard():
    with pytest.raises(ValueError):
        dense_oracle(H_of(300, 1.0))


def test_oracle_matches_numpy():
    for N, lam in [(7, 0.4), (30, 3.0), (40, 1.0)]:
        H = H_of(N, lam)
        np.testing.assert_allclose(
            dense_oracle(H).energies, np.linalg.eigvalsh(H.to_dense()), atol=1e-11
        )


@pytest.mark.parametrize("lam", ORACLE_LAMS)
def test_oracle_equivalence_grid(lam):
    for N in ORACLE_NS:
        H = H_of(N, lam)
        fast, slow = ground_state(H), dense_oracle(H)
        assert abs(fast.ground_energy - slow.ground_energy) < 1e-10, N
        overlap = abs(np.dot(fast.ground.coefficients, symmetric_ground_vector(slow)))
        assert overlap > 1 - 1e-8, N


@pytest.mark.parametrize("N", [2, 3, 10, 51, 100, 257, 1000])
@pytest.mark.parametrize("lam", [0, 0.5, 1, 1.2, 2, 3])
def test_ground_state_properties(N, lam):
    H = H_of(N, lam)
    res = ground_state(H)
    A = res.ground.coefficients
    assert np.all(A > 0)
    assert np.max(np.abs(A - A[::-1])) < 1e-12
    assert abs(energy_expectation(H, res.ground) - res.ground_energy) < 1e-10


def test_positivity_at_lambda7_n100(ground):
    _, res = ground(100, 7.0)
    assert np.all(res.ground.coefficients > 0)


def test_spectrum_matches_numpy_low_levels():
    for N, lam in [(100, 0.5), (100, 1.2), (301, 2.0), (1000, 1.1)]:
        H = H_of(N, lam)
        ref = np.linalg.eigvalsh(H.to_dense())[:6]
        np.testing.assert_allclose(spectrum(H, 6).energies, ref, atol=1e-9)


def test_spectrum_states_orthonormal():
    res = spectrum(H_of(60, 1.5), 5)
    V = np.array([s.coefficients for s in res.states])
    np.testing.assert_allclose(V @ V.T, np.eye(5), atol=1e-9)
    assert np.all(res.residuals < 1e-10)


def test_spectrum_rejects_bad_inputs():
    H = H_of(4, 1.0)
    with pytest.raises(ValueError):
        spectrum(H, 0)
    with pytest.raises(ValueError):
        spectrum(H, 6)
    with pytest.raises(ValueError):
        spectrum(TridiagonalOperator([0.0, 1.0, 3.0], [1.0, 1.0]), 1)


def test_convergence_error_carries_residual():
    with pytest.raises(ConvergenceError) as info:
        spectrum(H_of(100, 1.2), 1, tol=1e-300)
    assert info.value.residual > 0


def test_sturm_count_brackets():
    H = H_of(25, 1.3)
    w = np.linalg.eigvalsh(H.to_dense())
    for j in (0, 5, 25):
        assert sturm_count(H, w[j] - 1e-8) == j
        assert sturm_count(H, w[j] + 1e-8) == j + 1


def test_bisection_hits_eigenvalue():
    H = H_of(50, 0.7)
    w = np.linalg.eigvalsh(H.to_dense())
    assert BISECTION_STEPS == 60
    for j in (0, 1, 10, 50):
        assert bisect_eigenvalue(H, j) == pytest.approx(w[j], abs=1e-11)


@pytest.mark.parametrize("N", [2, 3, 8, 9])
def test_parity_blocks_partition_spectrum(N):
    H = H_of(N, 1.7)
    even, odd = parity_blocks(H)
    parts = np.linalg.eigvalsh(even.to_dense())
    if odd is not None:
        parts = np.concatenate([parts, np.linalg.eigvalsh(odd.to_dense())])
    np.testing.assert_allclose(np.sort(parts), np.linalg.eigvalsh(H.to_dense()), atol=1e-12)


@pytest.mark.parametrize("N", [2, 3, 10, 11, 40, 41])
@pytest.mark.parametrize("lam", [0, 0.5, 1.2])
def test_splitting_matches_dense_difference(N, lam):
    H = H_of(N, lam)
    w, V = np.linalg.eigh(H.to_dense())
    par = np.sign(np.sum(V * V[::-1], axis=0))
    gap = w[par < 0][0] - w[par > 0][0]
    assert doublet_splitting(H) == pytest.approx(gap, rel=1e-9, abs=1e-13)


def test_doublet_collapse_monotone():
    lams = np.round(np.arange(1.25, 7.0001, 0.05), 10)
    gaps = [doublet_splitting(H_of(100, lam)) for lam in lams]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_doublet_splitting_decays_exponentially():
    # ln(gap) against N is close to linear deep in the cat regime
    logs = [math.log(doublet_splitting(H_of(N, 2.0))) for N in (40, 80, 120, 160)]
    steps = np.diff(logs)
    assert np.all(steps < 0)
    assert np.ptp(steps) < 0.1 * abs(steps.mean())


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 120), st.floats(0, 6))
def test_ground_energy_is_spectrum_minimum(N, lam):
    H = H_of(N, lam)
    res = ground_state(H)
    assert res.ground_energy == pytest.approx(np.linalg.eigvalsh(H.to_dense())[0], abs=1e-9)
    A = res.ground.coefficients
    assert np.max(np.abs(A - A[::-1])) < 1e-12
