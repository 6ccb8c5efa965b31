"""
Network service layer: Hamiltonian construction and static disorder.
"""
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import ComplexMatrix, HermitianOperator, linalg
from spinnet.core.rng import RandomStream
from spinnet.models import NetworkHamiltonian, SitePair
from spinnet.schemas import (
    ChainSpec,
    ConnectorEntry,
    CouplingEntry,
    DisorderKind,
    DisorderSpec,
    Distribution,
    NetworkConfig,
)

logger = structlog.get_logger("spinnet.network")

HADAMARD_BLOCK = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def _wrap(matrix: ComplexMatrix, mask: Optional[Iterable[SitePair]] = None) -> NetworkHamiltonian:
    operator = HermitianOperator(matrix)
    if mask is None:
        nonzero = np.argwhere(np.abs(operator.matrix) > 0.0)
        mask = [(int(i), int(j)) for i, j in nonzero if i != j]
    mask = frozenset(mask)
    base_scale = max((abs(operator.matrix[i, j]) for i, j in mask), default=0.0)
    return NetworkHamiltonian(
        operator=operator, coupling_mask=mask, base_scale=float(base_scale)
    )


class NetworkService:
    """Service class for network construction and disorder."""

    @staticmethod
    def build_network(
        n_sites: int,
        couplings: Iterable[Tuple[int, int, float]],
        onsite: Optional[Sequence[float]] = None,
    ) -> NetworkHamiltonian:
        """
        Build a single-excitation Hamiltonian from an arbitrary coupling graph.

        Args:
            n_sites: Number of sites N
            couplings: (i, j, J_ij) triples with 0-based sites
            onsite: On-site energies epsilon_i, zero if omitted

        Returns:
            Network Hamiltonian

        Raises:
            NetworkValidationError: On bad site indices or lengths
        """
        if n_sites < 2:
            raise NetworkValidationError(
                f"A network needs at least 2 sites, got {n_sites}",
                error_code="TOO_FEW_SITES",
            )
        matrix = np.zeros((n_sites, n_sites), dtype=np.complex128)
        for i, j, value in couplings:
            if not (0 <= i < n_sites and 0 <= j < n_sites) or i == j:
                raise NetworkValidationError(
                    f"Invalid coupling between sites {i} and {j}",
                    error_code="SITE_OUT_OF_RANGE",
                )
            matrix[i, j] = value
            matrix[j, i] = np.conj(value)
        if onsite is not None:
            if len(onsite) != n_sites:
                raise NetworkValidationError(
                    f"Expected {n_sites} on-site energies, got {len(onsite)}",
                    error_code="BAD_ONSITE_LENGTH",
                )
            matrix[np.diag_indices(n_sites)] = np.asarray(onsite, dtype=np.float64)
        return _wrap(matrix)

    @staticmethod
    def build_chain(spec: ChainSpec) -> NetworkHamiltonian:
        """
        Build the nearest-neighbour XY chain in the single-excitation subspace.

        The Pauli form is represented by its matrix elements: (i, i+1) carries
        J_{i,i+1} and the diagonal carries epsilon_i.

        Args:
            spec: Chain specification

        Returns:
            Chain Hamiltonian
        """
        if spec.n_sites < 2:
            raise NetworkValidationError(
                f"A chain needs at least 2 sites, got {spec.n_sites}",
                error_code="TOO_FEW_SITES",
            )
        couplings = [(i, i + 1, value) for i, value in enumerate(spec.couplings)]
        return NetworkService.build_network(spec.n_sites, couplings, spec.onsite)

    @staticmethod
    def direct_sum(*blocks: NetworkHamiltonian) -> NetworkHamiltonian:
        """Block-diagonal union of uncoupled networks."""
        dim = sum(block.dim for block in blocks)
        matrix = np.zeros((dim, dim), dtype=np.complex128)
        mask = set()
        offset = 0
        for block in blocks:
            end = offset + block.dim
            matrix[offset:end, offset:end] = block.matrix
            mask.update((i + offset, j + offset) for i, j in block.coupling_mask)
            offset = end
        return _wrap(matrix, mask)

    @staticmethod
    def build_uncoupled_pair(coupling: float) -> NetworkHamiltonian:
        """
        Two identical, uncoupled trimers on sites {1,2,3} and {4,5,6}.

        Args:
            coupling: Uniform coupling J

        Returns:
            6-site block-diagonal Hamiltonian

        Raises:
            NetworkValidationError: If J is zero
        """
        if coupling == 0:
            raise NetworkValidationError(
                "Coupling J must be non-zero for the trimer pair",
                error_code="ZERO_COUPLING",
            )
        trimer = NetworkService.build_chain(ChainSpec.uniform(3, coupling))
        return NetworkService.direct_sum(trimer, trimer)

    @staticmethod
    def connector(dim: int, pair: SitePair, block: ComplexMatrix) -> ComplexMatrix:
        """
        Identity except for a 2x2 unitary block on two sites.

        Args:
            dim: Matrix dimension
            pair: The two 0-based sites the block acts on
            block: 2x2 unitary block

        Returns:
            Connector matrix

        Raises:
            NetworkValidationError: If the pair is out of range or not distinct
        """
        i, j = pair
        if not (0 <= i < dim and 0 <= j < dim):
            raise NetworkValidationError(
                f"Connector sites {pair} out of range for dimension {dim}",
                error_code="SITE_OUT_OF_RANGE",
            )
        if i == j:
            raise NetworkValidationError(
                f"Connector sites must be distinct, got {pair}",
                error_code="SITE_OUT_OF_RANGE",
            )
        block = np.asarray(block, dtype=np.complex128)
        if block.shape != (2, 2):
            raise NetworkValidationError(
                f"Connector block must be 2x2, got {block.shape}",
                error_code="BAD_BLOCK_SHAPE",
            )
        u = np.eye(dim, dtype=np.complex128)
        u[np.ix_([i, j], [i, j])] = block
        return u

    @staticmethod
    def hadamard_connector(dim: int = 6, pair: SitePair = (2, 5)) -> ComplexMatrix:
        """Hadamard connector between two sites; self-inverse."""
        return NetworkService.connector(dim, pair, HADAMARD_BLOCK)

    @staticmethod
    def designed_network(coupling: float = 1.0) -> NetworkHamiltonian:
        """
        The physical 6-site network: trimer pair joined by the 3-6 Hadamard.

        Args:
            coupling: Coupling J

        Returns:
            Transformed network with its own coupling graph
        """
        pair = NetworkService.build_uncoupled_pair(coupling)
        transformed = linalg.similarity_transform(
            pair.operator, NetworkService.hadamard_connector(6, (2, 5))
        )
        return _wrap(_clean(transformed.matrix))

    @staticmethod
    def sample_disorder(spec: DisorderSpec, rng: RandomStream) -> float:
        """
        Draw one random number d from the configured distribution.

        Flat draws are uniform on [-0.5, 0.5]; Gaussian draws have zero mean
        and standard deviation 1/(2 sqrt 3), matching the flat window.

        Args:
            spec: Disorder specification
            rng: Random stream

        Returns:
            One draw d (unscaled)
        """
        if spec.distribution is Distribution.FLAT:
            return float(rng.uniform(-0.5, 0.5))
        return float(rng.normal(0.0, spec.width))

    @staticmethod
    def apply_disorder(
        network: NetworkHamiltonian, spec: DisorderSpec, rng: RandomStream
    ) -> NetworkHamiltonian:
        """
        Perturb a network with one static disorder realization.

        Off-diagonal disorder adds E * base_scale * d_ij to each existing coupling
        (one draw per unordered pair, applied symmetrically). Diagonal disorder adds
        E * base_scale * d_i to every on-site energy.

        Args:
            network: Unperturbed network
            spec: Disorder specification
            rng: Random stream owned by this realization

        Returns:
            Perturbed network with the unperturbed coupling graph and scale
        """
        if spec.error_scale == 0.0:
            return network

        scale = spec.error_scale * network.base_scale
        matrix = np.array(network.matrix)
        if spec.kind is DisorderKind.OFF_DIAGONAL:
            for i, j in network.edges:
                delta = scale * NetworkService.sample_disorder(spec, rng)
                matrix[i, j] += delta
                matrix[j, i] += delta
        else:
            for i in range(network.dim):
                matrix[i, i] += scale * NetworkService.sample_disorder(spec, rng)

        return NetworkHamiltonian(
            operator=HermitianOperator(matrix),
            coupling_mask=network.coupling_mask,
            base_scale=network.base_scale,
        )

    @staticmethod
    def from_config(config: NetworkConfig) -> NetworkHamiltonian:
        """
        Build a network from its structured description.

        Couplings and on-site energies are assembled first, then each connector
        is applied in order as a similarity transform.

        Args:
            config: Validated network configuration (1-based sites)

        Returns:
            Network Hamiltonian
        """
        couplings = [(c.sites[0] - 1, c.sites[1] - 1, c.value) for c in config.couplings]
        network = NetworkService.build_network(config.n_sites, couplings, config.onsite)
        if not config.connectors:
            return network

        operator = network.operator
        for entry in config.connectors:
            u = NetworkService.hadamard_connector(
                config.n_sites, (entry.sites[0] - 1, entry.sites[1] - 1)
            )
            operator = linalg.similarity_transform(operator, u)
        return _wrap(_clean(operator.matrix))

    @staticmethod
    def default_config(coupling: float = 1.0) -> NetworkConfig:
        """Description of the designed 6-site network."""
        edges = [(1, 2), (2, 3), (4, 5), (5, 6)]
        return NetworkConfig(
            n_sites=6,
            couplings=[CouplingEntry(sites=e, value=coupling) for e in edges],
            connectors=[ConnectorEntry(sites=(3, 6), kind="hadamard")],
        )

    @staticmethod
    def load_config(path: Union[str, Path]) -> NetworkConfig:
        """Read a JSON network description."""
        text = Path(path).read_text(encoding="utf-8")
        logger.debug("network config loaded", path=str(path))
        return NetworkConfig.model_validate_json(text)

    @staticmethod
    def dump_config(config: NetworkConfig, path: Union[str, Path]) -> None:
        """Write a JSON network description."""
        payload = json.dumps(config.model_dump(mode="json"), indent=2)
        Path(path).write_text(payload + "\n", encoding="utf-8")


def _clean(matrix: ComplexMatrix, tolerance: float = 1e-14) -> ComplexMatrix:
    """Zero entries that are round-off residue of a similarity transform."""
    cleaned = np.array(matrix)
    scale = max(1.0, float(np.max(np.abs(cleaned))))
    cleaned.real[np.abs(cleaned.real) < tolerance * scale] = 0.0
    cleaned.imag[np.abs(cleaned.imag) < tolerance * scale] = 0.0
    return cleaned
