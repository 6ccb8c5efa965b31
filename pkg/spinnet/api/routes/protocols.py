"""
Single-run protocol routes.
"""
import math
from typing import Union

from fastapi import APIRouter

from spinnet.models import NetworkHamiltonian
from spinnet.schemas import (
    EntanglerResult,
    ProtocolRequest,
    RouterResult,
    SenseRequest,
    SenseResponse,
)
from spinnet.services.montecarlo_service import MonteCarloService
from spinnet.services.network_service import NetworkService
from spinnet.services.protocol_service import ProtocolService

router = APIRouter()


def _device(request: Union[ProtocolRequest, SenseRequest]) -> NetworkHamiltonian:
    network = NetworkService.designed_network(request.coupling)
    if request.disorder is None:
        return network
    return MonteCarloService.single_device(network, request.disorder, request.seed)


@router.post("/route", response_model=RouterResult)
def run_router(request: ProtocolRequest) -> RouterResult:
    """
    Route an excitation from site 1 to site 4.

    Args:
        request: Coupling, number of periods and optional disorder

    Returns:
        Fidelity against site 4 at 2t_m, 4t_m, ...
    """
    return ProtocolService.run_router(_device(request), request.n_periods)


@router.post("/entangle", response_model=EntanglerResult)
def run_entangler(request: ProtocolRequest) -> EntanglerResult:
    """
    Generate the site 1 / site 4 entangled state.

    Returns:
        EOF of sites (1, 4) at 2t_m, 4t_m, ...
    """
    result = ProtocolService.run_entangler(_device(request), request.n_periods)
    a, b = result.pair
    return EntanglerResult(pair=(a + 1, b + 1), eof=result.eof)


@router.post("/sense", response_model=SenseResponse)
def run_sensor(request: SenseRequest) -> SenseResponse:
    """
    Estimate an unknown phase on one device.

    Returns:
        Both fidelities and both recovered angles in degrees
    """
    device = _device(request)
    theta = math.radians(request.theta_degrees)
    sample = ProtocolService.sense_once(device, device, theta)
    estimate = ProtocolService.estimate_phase(sample)
    return SenseResponse(
        f1=sample.f1,
        f2=sample.f2,
        theta1_degrees=math.degrees(estimate.theta1),
        theta2_degrees=math.degrees(estimate.theta2),
    )
