import math

import numpy as np
import pytest

from qrebound import (
    DensityMatrix,
    Observable,
    SpectralDecomposition,
    eig_hermitian,
    expectation,
    partial_trace,
    second_moment,
    tensor,
    variance,
)
from qrebound.errors import (
    DimensionMismatch,
    InvariantViolation,
    NotHermitian,
    NotPositive,
    TraceNotOne,
)
from qrebound.hermitian import as_operator, hermiticity_residual, log_on_support


def test_as_operator_rejects_nonsquare():
    with pytest.raises(DimensionMismatch):
        as_operator([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])


def test_as_operator_rejects_nonfinite():
    with pytest.raises(InvariantViolation):
        as_operator([[math.nan, 0.0], [0.0, 1.0]])


def test_hermiticity_residual():
    assert hermiticity_residual(np.array([[1.0, 2.0], [2.0, 1.0]])) == 0.0
    assert hermiticity_residual(np.array([[1.0, 2.0], [0.0, 1.0]])) == pytest.approx(2.0)


def test_eig_projector_half():
    # (X + I)/2 has eigenvalues {0, 1}
    d = eig_hermitian([[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(d.eigenvalues, [0.0, 1.0], atol=1e-15)


def test_eig_analytic_2x2():
    # [[2, 1-1j], [1+1j, 0]] has eigenvalues 1 -+ sqrt(3)
    d = eig_hermitian([[2.0, 1.0 - 1.0j], [1.0 + 1.0j, 0.0]])
    expected = [1.0 - math.sqrt(3.0), 1.0 + math.sqrt(3.0)]
    np.testing.assert_allclose(d.eigenvalues, expected, atol=1e-14)


def test_eig_ascending_and_reconstructs():
    rng = np.random.Generator(np.random.PCG64(17))
    for dim in (2, 3, 4, 6):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        m = (g + g.conj().T) / 2
        d = eig_hermitian(m)
        assert np.all(np.diff(d.eigenvalues) >= 0)
        np.testing.assert_allclose(d.reconstruct(), m, atol=1e-13)
        # columns orthonormal
        np.testing.assert_allclose(
            d.eigenvectors.conj().T @ d.eigenvectors, np.eye(dim), atol=1e-13
        )


def test_eig_phase_convention():
    rng = np.random.Generator(np.random.PCG64(23))
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    d = eig_hermitian((g + g.conj().T) / 2)
    for j in range(4):
        col = d.eigenvectors[:, j]
        lead = col[np.abs(col) > 1e-12][0]
        assert lead.real > 0.0
        assert abs(lead.imag) < 1e-12


def test_eig_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian([[0.0, 1.0], [0.0, 0.0]])


def test_density_validation():
    with pytest.raises(TraceNotOne):
        DensityMatrix([[0.9, 0.0], [0.0, 0.2]])
    with pytest.raises(NotPositive):
        DensityMatrix([[1.5, 0.0], [0.0, -0.5]])
    with pytest.raises(NotHermitian):
        DensityMatrix([[0.5, 0.5], [0.0, 0.5]])


def test_density_clamps_tiny_negative_eigenvalue():
    eps = 1e-12
    rho = DensityMatrix([[1.0 + eps, 0.0], [0.0, -eps]])
    lam = rho.spectral().eigenvalues
    assert lam[0] == 0.0
    assert abs(lam.sum() - 1.0) < 1e-12
    assert np.all(np.isfinite(rho.matrix))


def test_observable_squared_cached():
    z = Observable([[1.0, 0.0], [0.0, -1.0]])
    np.testing.assert_array_equal(z.squared, np.eye(2))
    assert z.squared is z.squared


def test_tensor_and_partial_trace_roundtrip():
    a = np.array([[0.7, 0.1], [0.1, 0.3]])
    b = np.array([[0.6, 0.0], [0.0, 0.4]])
    joint = tensor(a, b)
    np.testing.assert_allclose(partial_trace(joint, 2, 2, keep="s"), a, atol=1e-15)
    np.testing.assert_allclose(partial_trace(joint, 2, 2, keep="e"), b, atol=1e-15)


def test_partial_trace_bell_pair():
    # |00> + |11> reduced on either side is maximally mixed
    psi = np.zeros(4)
    psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
    bell = np.outer(psi, psi)
    np.testing.assert_allclose(
        partial_trace(bell, 2, 2, keep="s"), 0.5 * np.eye(2), atol=1e-15
    )
    np.testing.assert_allclose(
        partial_trace(bell, 2, 2, keep="e"), 0.5 * np.eye(2), atol=1e-15
    )


def test_partial_trace_rejects_bad_keep():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, 2, 2, keep="both")


def test_expectation_variance_oracles():
    rho = DensityMatrix(np.diag([0.7, 0.3]))
    z = Observable([[1.0, 0.0], [0.0, -1.0]])
    assert expectation(rho, z) == pytest.approx(0.4, abs=1e-15)
    assert second_moment(rho, z) == pytest.approx(1.0, abs=1e-15)
    assert variance(rho, z) == pytest.approx(0.84, abs=1e-15)


def test_variance_never_negative():
    rng = np.random.Generator(np.random.PCG64(31))
    for _ in range(50):
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        w = g @ g.conj().T
        rho = DensityMatrix(w / np.trace(w).real)
        h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        obs = Observable((h + h.conj().T) / 2)
        assert variance(rho, obs) >= 0.0


def test_log_on_support_matches_dense_log():
    rho = DensityMatrix(np.diag([0.7, 0.3]))
    np.testing.assert_allclose(
        log_on_support(rho), np.diag(np.log([0.7, 0.3])), atol=1e-14
    )


def test_spectral_decomposition_dim():
    d = SpectralDecomposition(
        eigenvalues=np.array([0.0, 1.0]), eigenvectors=np.eye(2, dtype=complex)
    )
    assert d.dim == 2
