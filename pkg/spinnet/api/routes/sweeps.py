"""
Monte Carlo sweep routes.
"""
from fastapi import APIRouter, HTTPException, status

from spinnet.core.config import settings
from spinnet.schemas import SweepConfig, SweepResult
from spinnet.services.montecarlo_service import MonteCarloService

router = APIRouter()


@router.post("", response_model=SweepResult)
def run_sweep(config: SweepConfig) -> SweepResult:
    """
    Run a disorder-averaged sweep.

    Args:
        config: Sweep definition (1-based kick site and pair)

    Returns:
        Aggregated points with run metadata

    Raises:
        HTTPException: If the realization or worker count exceeds the API limit
    """
    if config.realizations > settings.api_max_realizations:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=(
                f"realizations={config.realizations} exceeds the API limit of "
                f"{settings.api_max_realizations}"
            ),
        )
    if config.workers > settings.api_max_workers:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=(
                f"workers={config.workers} exceeds the API limit of "
                f"{settings.api_max_workers}"
            ),
        )
    return MonteCarloService.run_sweep(config)
