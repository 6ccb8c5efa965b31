"""
Test configuration and fixtures.
"""
import math
from typing import Generator

import numpy as np
import pytest
from fastapi.testclient import TestClient

from spinnet.core.linalg import HermitianOperator
from spinnet.main import app
from spinnet.models import NetworkHamiltonian
from spinnet.schemas import ChainSpec
from spinnet.services.network_service import NetworkService

SQRT2 = math.sqrt(2.0)
T_M = math.pi / SQRT2


def designed_matrix(coupling: float = 1.0) -> np.ndarray:
    """Transformed 6-site Hamiltonian written out entry by entry (0-based)."""
    h = np.zeros((6, 6), dtype=np.complex128)
    entries = {
        (0, 1): coupling,
        (1, 2): coupling / SQRT2,
        (1, 5): coupling / SQRT2,
        (2, 4): coupling / SQRT2,
        (3, 4): coupling,
        (4, 5): -coupling / SQRT2,
    }
    for (i, j), value in entries.items():
        h[i, j] = h[j, i] = value
    return h


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianOperator:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(0.5 * (a + a.conj().T))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def client() -> Generator:
    """Create test client."""
    with TestClient(app) as c:
        yield c


@pytest.fixture
def designed() -> NetworkHamiltonian:
    """Designed network with J = 1."""
    return NetworkService.designed_network(1.0)


@pytest.fixture
def trimer() -> NetworkHamiltonian:
    """Uniform 3-site chain with J = 1."""
    return NetworkService.build_chain(ChainSpec.uniform(3, 1.0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
