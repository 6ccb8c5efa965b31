"""
Network inspection routes.
"""
from fastapi import APIRouter, Query

from spinnet.core.config import settings
from spinnet.core.linalg import linalg
from spinnet.schemas import SpectrumResponse
from spinnet.services.network_service import NetworkService

router = APIRouter()


@router.get("/spectrum", response_model=SpectrumResponse)
async def read_spectrum(
    coupling: float = Query(settings.coupling, gt=0, description="Coupling J")
) -> SpectrumResponse:
    """
    Eigenvalues and eigenvectors of the designed network.

    Args:
        coupling: Coupling J

    Returns:
        Ascending eigenvalues and eigenvector columns
    """
    network = NetworkService.designed_network(coupling)
    spectrum = linalg.eig_hermitian(network.operator)
    vectors = spectrum.eigenvectors
    return SpectrumResponse(
        coupling=coupling,
        eigenvalues=[float(x) for x in spectrum.eigenvalues],
        eigenvectors_real=vectors.real.tolist(),
        eigenvectors_imag=vectors.imag.tolist(),
    )
