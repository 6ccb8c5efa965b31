"""
Unit tests for the linear algebra kernel.
"""
import math

import numpy as np
import pytest

from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import HermitianOperator, StateVector, linalg
from tests.conftest import SQRT2, T_M, designed_matrix, random_hermitian, random_unitary

pytestmark = pytest.mark.unit


class TestEigHermitian:
    """Test the Hermitian eigensolver."""

    def test_identity(self):
        """Identity has a triple eigenvalue 1."""
        spectrum = linalg.eig_hermitian(HermitianOperator(np.eye(3)))
        assert np.allclose(spectrum.eigenvalues, [1.0, 1.0, 1.0], atol=1e-12)

    def test_designed_network_spectrum(self):
        """Designed network has doubly degenerate -sqrt2, 0, sqrt2."""
        spectrum = linalg.eig_hermitian(HermitianOperator(designed_matrix()))
        expected = [-SQRT2, -SQRT2, 0.0, 0.0, SQRT2, SQRT2]
        assert np.allclose(spectrum.eigenvalues, expected, atol=1e-10)

    def test_eigenvalues_ascending(self, rng):
        """Eigenvalues are sorted ascending."""
        spectrum = linalg.eig_hermitian(random_hermitian(rng, 8))
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)

    @pytest.mark.parametrize("dim", [1, 2, 5, 9, 16])
    def test_reconstruction(self, rng, dim):
        """V diag(lambda) V^dagger rebuilds the matrix."""
        operator = random_hermitian(rng, dim)
        spectrum = linalg.eig_hermitian(operator)
        v = spectrum.eigenvectors
        rebuilt = (v * spectrum.eigenvalues) @ v.conj().T
        assert np.max(np.abs(rebuilt - operator.matrix)) < 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-10

    def test_eigenpairs(self, rng):
        """H v_j = lambda_j v_j for every column."""
        operator = random_hermitian(rng, 6)
        spectrum = linalg.eig_hermitian(operator)
        for j in range(6):
            v = spectrum.eigenvectors[:, j]
            residual = operator.matrix @ v - spectrum.eigenvalues[j] * v
            assert np.linalg.norm(residual) < 1e-10

    def test_jacobi_matches_lapack(self, rng):
        """Both solvers agree on eigenvalues."""
        operator = random_hermitian(rng, 7)
        jacobi = linalg.eig_hermitian(operator, solver="jacobi")
        lapack = linalg.eig_hermitian(operator, solver="lapack")
        assert np.allclose(jacobi.eigenvalues, lapack.eigenvalues, atol=1e-10)

    def test_unknown_solver(self):
        """Unknown solver names are rejected."""
        with pytest.raises(NetworkValidationError):
            linalg.eig_hermitian(HermitianOperator(np.eye(2)), solver="qr")

    def test_degenerate_projectors(self):
        """Eigenspace projectors match those built from reference eigenvectors."""
        spectrum = linalg.eig_hermitian(HermitianOperator(designed_matrix()))
        s = SQRT2
        phi_minus = np.array(
            [[s, -2, 1, 0, 0, 1], [0, 0, -1, -s, 2, 1]], dtype=np.complex128
        ).T
        phi_zero = np.array(
            [[s, 0, -1, 0, 0, -1], [0, 0, 1, -s, 0, -1]], dtype=np.complex128
        ).T
        for eigenvalue, basis in ((-SQRT2, phi_minus), (0.0, phi_zero)):
            q, _ = np.linalg.qr(basis)
            reference = q @ q.conj().T
            projector = linalg.spectral_projector(spectrum, eigenvalue)
            assert np.max(np.abs(projector - reference)) < 1e-9

    def test_projectors_sum_to_identity(self):
        """Projectors over distinct eigenvalues resolve the identity."""
        spectrum = linalg.eig_hermitian(HermitianOperator(designed_matrix()))
        total = sum(linalg.spectral_projector(spectrum, e) for e in (-SQRT2, 0.0, SQRT2))
        assert np.allclose(total, np.eye(6), atol=1e-10)


class TestOperatorValidation:
    """Test construction-time checks."""

    def test_not_square(self):
        """Non-square input is rejected."""
        with pytest.raises(NetworkValidationError) as excinfo:
            HermitianOperator(np.zeros((2, 3)))
        assert excinfo.value.error_code == "NOT_SQUARE"

    def test_non_finite(self):
        """NaN entries are rejected."""
        with pytest.raises(NetworkValidationError):
            HermitianOperator(np.array([[np.nan, 0], [0, 1]]))

    def test_not_hermitian_names_element(self):
        """The error message names the violating element."""
        with pytest.raises(NetworkValidationError) as excinfo:
            HermitianOperator(np.array([[0, 1], [2, 0]], dtype=complex))
        assert "H[" in excinfo.value.message
        assert excinfo.value.error_code == "NOT_HERMITIAN"

    def test_state_not_normalized(self):
        """States must have unit norm."""
        with pytest.raises(NetworkValidationError):
            StateVector(np.array([1.0, 1.0]))

    def test_normalized_constructor(self):
        """normalized() rescales to unit norm."""
        psi = StateVector.normalized([3.0, 4.0j])
        assert math.isclose(float(np.sum(psi.populations)), 1.0)


class TestEvolve:
    """Test spectral time evolution."""

    def test_zero_time_is_identity(self, designed):
        """evolve at t=0 returns the initial state."""
        psi = StateVector.normalized(np.arange(1, 7) + 1j)
        out = linalg.evolve(designed.operator, psi, 0.0)
        assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-12)

    def test_trimer_mirroring(self, trimer):
        """Site 1 maps to -site 3 at the mirroring time."""
        out = linalg.evolve(trimer.operator, StateVector.basis(3, 0), T_M)
        assert np.allclose(out.amplitudes, [0, 0, -1], atol=1e-10)

    def test_designed_network_superposition(self, designed):
        """Site 1 maps to -(r3 + r6)/sqrt2 at t_m."""
        out = linalg.evolve(designed.operator, StateVector.basis(6, 0), T_M)
        expected = np.zeros(6, dtype=complex)
        expected[2] = expected[5] = -1 / SQRT2
        assert abs(np.vdot(expected, out.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-10)

    def test_dimension_mismatch(self, designed):
        """State and operator dimensions must agree."""
        with pytest.raises(NetworkValidationError):
            linalg.evolve(designed.operator, StateVector.basis(3, 0), 1.0)

    def test_norm_conservation(self, rng):
        """Evolution is unitary."""
        operator = random_hermitian(rng, 6)
        psi = StateVector.normalized(rng.normal(size=6) + 1j * rng.normal(size=6))
        for t in np.linspace(0.0, 25.0, 11):
            out = linalg.evolve(operator, psi, float(t))
            assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10

    def test_composition(self, rng):
        """evolve(t1 + t2) equals evolve(t2) after evolve(t1)."""
        operator = random_hermitian(rng, 6)
        psi = StateVector.normalized(rng.normal(size=6) + 0j)
        direct = linalg.evolve(operator, psi, 3.7)
        stepped = linalg.evolve(operator, linalg.evolve(operator, psi, 1.2), 2.5)
        assert np.allclose(direct.amplitudes, stepped.amplitudes, atol=1e-9)


class TestSimilarityTransform:
    """Test unitary similarity transforms."""

    def test_identity_unitary(self, designed):
        """Identity leaves the operator unchanged."""
        out = linalg.similarity_transform(designed.operator, np.eye(6))
        assert np.allclose(out.matrix, designed.matrix, atol=1e-14)

    def test_spectrum_invariance(self, rng):
        """Random unitaries preserve the spectrum."""
        operator = random_hermitian(rng, 6)
        transformed = linalg.similarity_transform(operator, random_unitary(rng, 6))
        before = linalg.eig_hermitian(operator).eigenvalues
        after = linalg.eig_hermitian(transformed).eigenvalues
        assert np.allclose(before, after, atol=1e-10)

    def test_non_unitary_rejected(self, designed):
        """A non-unitary matrix is reported with its defect."""
        with pytest.raises(NetworkValidationError) as excinfo:
            linalg.similarity_transform(designed.operator, 2.0 * np.eye(6))
        assert excinfo.value.error_code == "NOT_UNITARY"
        assert "U U^dagger" in excinfo.value.message

    def test_shape_mismatch(self, designed):
        """Unitary and operator dimensions must agree."""
        with pytest.raises(NetworkValidationError):
            linalg.similarity_transform(designed.operator, np.eye(3))


class TestMatrixFunction:
    """Test spectral matrix functions."""

    def test_square_root(self, rng):
        """sqrt of a positive matrix squares back to it."""
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        positive = HermitianOperator(a @ a.conj().T)
        root = linalg.matrix_function(positive, np.sqrt)
        assert np.allclose(root @ root, positive.matrix, atol=1e-9)
