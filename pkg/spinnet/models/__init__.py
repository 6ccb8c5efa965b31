"""
Immutable numeric domain objects for the simulator.
"""
from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

import numpy as np

from spinnet.core.config import settings
from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import ComplexMatrix, HermitianOperator, StateVector

SitePair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class NetworkHamiltonian:
    """Network operator together with its unperturbed coupling graph."""

    operator: HermitianOperator
    coupling_mask: FrozenSet[SitePair]
    base_scale: float

    def __post_init__(self) -> None:
        for i, j in self.coupling_mask:
            if (j, i) not in self.coupling_mask:
                raise NetworkValidationError(
                    f"Coupling mask is not symmetric: ({i},{j}) has no mirror",
                    error_code="ASYMMETRIC_MASK",
                )
            if not (0 <= i < self.dim and 0 <= j < self.dim) or i == j:
                raise NetworkValidationError(
                    f"Coupling ({i},{j}) is not a valid off-diagonal pair",
                    error_code="SITE_OUT_OF_RANGE",
                )
        if self.base_scale < 0:
            raise NetworkValidationError(
                f"base_scale must be non-negative, got {self.base_scale}",
                error_code="NEGATIVE_SCALE",
            )

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def matrix(self) -> ComplexMatrix:
        return self.operator.matrix

    @property
    def edges(self) -> List[SitePair]:
        """Unordered couplings (i < j) in a stable order."""
        return sorted((i, j) for i, j in self.coupling_mask if i < j)


@dataclass(frozen=True, eq=False)
class TwoSiteDensity:
    """Reduced 4x4 density matrix of sites (A, B), basis |00>, |01>, |10>, |11>."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (4, 4):
            raise NetworkValidationError(
                f"Two-site density must be 4x4, got {matrix.shape}",
                error_code="BAD_DENSITY_SHAPE",
            )
        if float(np.max(np.abs(matrix - matrix.conj().T))) > settings.hermitian_tolerance:
            raise NetworkValidationError(
                "Two-site density is not Hermitian", error_code="NOT_HERMITIAN"
            )
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > settings.density_tolerance:
            raise NetworkValidationError(
                f"Two-site density trace is {trace.real:.12f}, expected 1",
                error_code="BAD_TRACE",
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)


@dataclass(frozen=True)
class KickEvent:
    """Sudden phase e^{i phase} on one site at a given time (units of 1/J)."""

    time: float
    site: int
    phase: float

    def __post_init__(self) -> None:
        if self.time < 0:
            raise NetworkValidationError(
                f"Kick time must be non-negative, got {self.time}",
                error_code="NEGATIVE_TIME",
            )
        if self.site < 0:
            raise NetworkValidationError(
                f"Kick site must be non-negative, got {self.site}",
                error_code="SITE_OUT_OF_RANGE",
            )


@dataclass(frozen=True, eq=False)
class Schedule:
    """Initial state, Hamiltonian and time-ordered kicks of one experiment."""

    initial: StateVector
    hamiltonian: NetworkHamiltonian
    kicks: Tuple[KickEvent, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        kicks = tuple(self.kicks)
        if self.initial.dim != self.hamiltonian.dim:
            raise NetworkValidationError(
                f"Initial state dimension {self.initial.dim} does not match "
                f"network dimension {self.hamiltonian.dim}",
                error_code="DIMENSION_MISMATCH",
            )
        for kick in kicks:
            if kick.site >= self.hamiltonian.dim:
                raise NetworkValidationError(
                    f"Kick site {kick.site} out of range for dimension "
                    f"{self.hamiltonian.dim}",
                    error_code="SITE_OUT_OF_RANGE",
                )
        for earlier, later in zip(kicks, kicks[1:]):
            if later.time < earlier.time:
                raise NetworkValidationError(
                    "Kicks must be ordered in time", error_code="KICKS_UNORDERED"
                )
        object.__setattr__(self, "kicks", kicks)


@dataclass(frozen=True, eq=False)
class ScheduleSample:
    """State of a schedule at one sampled time."""

    time: float
    state: StateVector
