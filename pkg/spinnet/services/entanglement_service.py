"""
Entanglement service layer: two-site reduced states and entanglement of formation.
"""
import math

import numpy as np

from spinnet.core.config import settings
from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import HermitianOperator, StateVector, linalg
from spinnet.models import TwoSiteDensity

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

# Basis positions of |00>, |01>, |10>, |11> for the pair (A, B).
_00, _01, _10, _11 = 0, 1, 2, 3


def binary_entropy(x: float) -> float:
    """-x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    total = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def eof_from_concurrence(concurrence: float) -> float:
    """EOF as the binary entropy of x = (1 + sqrt(1 - C^2)) / 2."""
    tangle = min(1.0, concurrence * concurrence)
    x = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - tangle)))
    return min(1.0, binary_entropy(x))


class EntanglementService:
    """Service class for pairwise entanglement of single-excitation states."""

    @staticmethod
    def reduce_two_sites(psi: StateVector, a: int, b: int) -> TwoSiteDensity:
        """
        Partial trace of a single-excitation state onto sites (A, B).

        Args:
            psi: Single-excitation state
            a: 0-based site A
            b: 0-based site B

        Returns:
            Reduced density matrix in the (|00>, |01>, |10>, |11>) basis

        Raises:
            NetworkValidationError: If a == b or a site is out of range
        """
        if a == b:
            raise NetworkValidationError(
                f"Reduced state needs two distinct sites, got {a} twice",
                error_code="SAME_SITE",
            )
        for site in (a, b):
            if not 0 <= site < psi.dim:
                raise NetworkValidationError(
                    f"Site {site} out of range for dimension {psi.dim}",
                    error_code="SITE_OUT_OF_RANGE",
                )
        amp_a = complex(psi.amplitudes[a])
        amp_b = complex(psi.amplitudes[b])
        pop_a = abs(amp_a) ** 2
        pop_b = abs(amp_b) ** 2

        rho = np.zeros((4, 4), dtype=np.complex128)
        rho[_00, _00] = max(0.0, 1.0 - pop_a - pop_b)
        rho[_01, _01] = pop_b
        rho[_10, _10] = pop_a
        rho[_01, _10] = amp_b * np.conj(amp_a)
        rho[_10, _01] = np.conj(rho[_01, _10])
        return TwoSiteDensity(rho)

    @staticmethod
    def spin_flip(rho: TwoSiteDensity) -> TwoSiteDensity:
        """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
        return TwoSiteDensity(SIGMA_YY @ rho.matrix.conj() @ SIGMA_YY)

    @staticmethod
    def concurrence(rho: TwoSiteDensity) -> float:
        """
        Wootters concurrence max(l1 - l2 - l3 - l4, 0).

        The eigenvalues of rho * rho_tilde are taken from the Hermitian matrix
        sqrt(rho) rho_tilde sqrt(rho), which has the same spectrum.

        Raises:
            NetworkValidationError: If rho is not positive semidefinite
        """
        operator = HermitianOperator(rho.matrix)
        lowest = float(operator.spectrum.eigenvalues[0])
        if lowest < -settings.density_tolerance:
            raise NetworkValidationError(
                f"Density matrix is not positive semidefinite (eigenvalue {lowest:.3e})",
                error_code="NOT_PSD",
            )
        sqrt_rho = linalg.matrix_function(
            operator, lambda values: np.sqrt(np.clip(values, 0.0, None))
        )
        flipped = EntanglementService.spin_flip(rho).matrix
        product = sqrt_rho @ flipped @ sqrt_rho
        product = 0.5 * (product + product.conj().T)

        epsilons = np.array(linalg.eig_hermitian(HermitianOperator(product)).eigenvalues)
        epsilons[np.abs(epsilons) < settings.eigenvalue_clamp] = 0.0
        lambdas = np.sort(np.sqrt(np.clip(epsilons, 0.0, None)))[::-1]
        return max(0.0, float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))

    @staticmethod
    def eof(rho: TwoSiteDensity) -> float:
        """
        Entanglement of formation of a two-qubit state, in [0, 1].

        Args:
            rho: Reduced two-site density matrix

        Returns:
            EOF from the tangle tau = C^2 via the binary entropy
        """
        return eof_from_concurrence(EntanglementService.concurrence(rho))

    @staticmethod
    def pair_eof(psi: StateVector, a: int, b: int) -> float:
        """EOF between two sites of a single-excitation state."""
        return EntanglementService.eof(EntanglementService.reduce_two_sites(psi, a, b))

    @staticmethod
    def single_excitation_eof(amp_a: complex, amp_b: complex) -> float:
        """Closed form for pure single-excitation states: C = 2 |a_A| |a_B|."""
        return eof_from_concurrence(2.0 * abs(amp_a) * abs(amp_b))
