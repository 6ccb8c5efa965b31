"""
Dense complex linear algebra for small Hermitian problems.

Holds the immutable value types of the single-excitation simulator
(``HermitianOperator``, ``Spectrum``, ``StateVector``) and the
``LinearAlgebra`` kernel: a cyclic complex Jacobi eigensolver, spectral
time evolution and similarity transforms. Everything here is sized for
matrices of a few dozen rows at most.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np
import numpy.typing as npt

from spinnet.core.config import settings
from spinnet.core.errors import ConvergenceError, NetworkValidationError

ComplexMatrix = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]
ArrayLike = Union[npt.ArrayLike, Sequence[Sequence[complex]]]


def as_complex_matrix(entries: ArrayLike) -> ComplexMatrix:
    """
    Coerce entries into a read-only square complex matrix.

    Args:
        entries: Row-major matrix entries

    Returns:
        Validated complex matrix

    Raises:
        NetworkValidationError: If the matrix is not square or has NaN/Inf entries
    """
    matrix = np.array(entries, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise NetworkValidationError(
            f"Matrix must be square and non-empty, got shape {matrix.shape}",
            error_code="NOT_SQUARE",
        )
    if not np.all(np.isfinite(matrix)):
        raise NetworkValidationError(
            "Matrix has non-finite entries", error_code="NON_FINITE"
        )
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix in the single-excitation site basis (energies in units of J)."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix = as_complex_matrix(self.matrix)
        deviation = np.abs(matrix - matrix.conj().T)
        worst = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
        if deviation[worst] > settings.hermitian_tolerance:
            i, j = int(worst[0]), int(worst[1])
            raise NetworkValidationError(
                f"Operator is not Hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = "
                f"{deviation[worst]:.3e}",
                error_code="NOT_HERMITIAN",
            )
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @cached_property
    def spectrum(self) -> "Spectrum":
        """Eigendecomposition, computed once per operator."""
        return LinearAlgebra.eig_hermitian(self)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""

    eigenvalues: RealArray
    eigenvectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector over the site basis."""

    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=np.complex128)
        if amplitudes.ndim != 1 or amplitudes.shape[0] == 0:
            raise NetworkValidationError(
                f"State must be a non-empty vector, got shape {amplitudes.shape}",
                error_code="BAD_STATE_SHAPE",
            )
        if not np.all(np.isfinite(amplitudes)):
            raise NetworkValidationError(
                "State has non-finite amplitudes", error_code="NON_FINITE"
            )
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > settings.norm_tolerance:
            raise NetworkValidationError(
                f"State is not normalized: sum |a_i|^2 = {norm:.12f}",
                error_code="NOT_NORMALIZED",
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @property
    def populations(self) -> RealArray:
        """Site occupations |a_i|^2."""
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def basis(cls, dim: int, site: int) -> "StateVector":
        """Single excitation localized on ``site`` (0-based)."""
        if not 0 <= site < dim:
            raise NetworkValidationError(
                f"Site {site} out of range for dimension {dim}",
                error_code="SITE_OUT_OF_RANGE",
            )
        amplitudes = np.zeros(dim, dtype=np.complex128)
        amplitudes[site] = 1.0
        return cls(amplitudes)

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike) -> "StateVector":
        """Build a state from unnormalized amplitudes."""
        vector = np.array(amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise NetworkValidationError(
                "Cannot normalize the zero vector", error_code="NOT_NORMALIZED"
            )
        return cls(vector / norm)


def _jacobi_eigh(
    matrix: ComplexMatrix, tolerance: float, max_sweeps: int
) -> "tuple[RealArray, ComplexMatrix]":
    """Cyclic complex Jacobi: returns unsorted eigenvalues and eigenvector columns."""
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tolerance * max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                magnitude = abs(b)
                if magnitude == 0.0:
                    continue
                phase = b / magnitude
                app = a[p, p].real
                aqq = a[q, q].real
                # Real symmetric rotation on the phase-aligned 2x2 block.
                theta = (aqq - app) / (2.0 * magnitude)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g

    raise ConvergenceError(
        f"Jacobi eigensolver did not converge within {max_sweeps} sweeps"
    )


class LinearAlgebra:
    """Eigendecomposition, spectral evolution and similarity transforms."""

    @staticmethod
    def eig_hermitian(
        operator: HermitianOperator, solver: Optional[str] = None
    ) -> Spectrum:
        """
        Diagonalise a Hermitian operator.

        Args:
            operator: Hermitian operator
            solver: "jacobi" or "lapack"; defaults to settings.eig_solver

        Returns:
            Spectrum with eigenvalues ascending

        Raises:
            ConvergenceError: If the Jacobi sweeps are exhausted
        """
        method = solver or settings.eig_solver
        if method == "lapack":
            values, vectors = np.linalg.eigh(operator.matrix)
        elif method == "jacobi":
            values, vectors = _jacobi_eigh(
                operator.matrix, settings.jacobi_tolerance, settings.jacobi_max_sweeps
            )
        else:
            raise NetworkValidationError(
                f"Unknown eigensolver {method!r}", error_code="UNKNOWN_SOLVER"
            )

        order = np.argsort(values, kind="stable")
        eigenvalues = np.asarray(values, dtype=np.float64)[order]
        eigenvectors = np.asarray(vectors, dtype=np.complex128)[:, order]
        eigenvalues.setflags(write=False)
        eigenvectors.setflags(write=False)
        return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)

    @staticmethod
    def evolve(operator: HermitianOperator, psi0: StateVector, t: float) -> StateVector:
        """
        Evolve a state for time ``t`` (units of 1/J, hbar = 1).

        Uses the spectral sum over eigenpairs of the operator.

        Args:
            operator: Static Hamiltonian
            psi0: Initial state
            t: Evolution time

        Returns:
            Evolved state

        Raises:
            NetworkValidationError: On dimension mismatch
        """
        if psi0.dim != operator.dim:
            raise NetworkValidationError(
                f"State dimension {psi0.dim} does not match operator dimension "
                f"{operator.dim}",
                error_code="DIMENSION_MISMATCH",
            )
        if t == 0.0:
            return psi0
        spectrum = operator.spectrum
        vectors = spectrum.eigenvectors
        overlaps = vectors.conj().T @ psi0.amplitudes
        phases = np.exp(-1j * spectrum.eigenvalues * t)
        return StateVector(vectors @ (phases * overlaps))

    @staticmethod
    def similarity_transform(
        operator: HermitianOperator, unitary: ArrayLike
    ) -> HermitianOperator:
        """
        Return U H U^-1 for a unitary U.

        Args:
            operator: Operator to transform
            unitary: Unitary matrix of the same dimension

        Returns:
            Transformed Hermitian operator

        Raises:
            NetworkValidationError: If U is not unitary or dimensions differ
        """
        u = as_complex_matrix(unitary)
        if u.shape != operator.matrix.shape:
            raise NetworkValidationError(
                f"Unitary shape {u.shape} does not match operator shape "
                f"{operator.matrix.shape}",
                error_code="DIMENSION_MISMATCH",
            )
        defect = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
        if defect > settings.unitary_tolerance:
            raise NetworkValidationError(
                f"Matrix is not unitary: max |U U^dagger - I| = {defect:.3e}",
                error_code="NOT_UNITARY",
            )
        transformed = u @ operator.matrix @ u.conj().T
        return HermitianOperator(0.5 * (transformed + transformed.conj().T))

    @staticmethod
    def spectral_projector(
        spectrum: Spectrum, eigenvalue: float, tolerance: float = 1e-8
    ) -> ComplexMatrix:
        """Projector onto the eigenspace of ``eigenvalue``."""
        mask = np.abs(spectrum.eigenvalues - eigenvalue) <= tolerance
        block = spectrum.eigenvectors[:, mask]
        return block @ block.conj().T

    @staticmethod
    def matrix_function(
        operator: HermitianOperator, function: Callable[[RealArray], npt.NDArray]
    ) -> ComplexMatrix:
        """V f(lambda) V^dagger for an elementwise function of the eigenvalues."""
        spectrum = operator.spectrum
        vectors = spectrum.eigenvectors
        values = function(np.array(spectrum.eigenvalues))
        return (vectors * values) @ vectors.conj().T


# Global linear algebra kernel instance
linalg = LinearAlgebra()
