"""
Health check routes.
"""
import time
from typing import Any, Dict

from fastapi import APIRouter, HTTPException, status

from spinnet.utils.health_checks import check_solver_health, get_application_info

router = APIRouter()


@router.get("/live")
async def liveness_check() -> Dict[str, Any]:
    """
    Liveness check.
    Returns 200 if the application is alive.
    """
    return {"status": "alive", "timestamp": time.time()}


@router.get("/detailed")
async def detailed_health_check() -> Dict[str, Any]:
    """
    Health check including a numerical self-test of the eigensolver.

    Returns:
        Application info and solver status; 503 if the solver disagrees with
        the known spectrum
    """
    solver_health = check_solver_health()
    health_data = {
        "status": solver_health["status"],
        "timestamp": time.time(),
        "application": get_application_info(),
        "solver": solver_health,
        "checks_performed": ["application_info", "eigensolver_spectrum"],
    }

    if solver_health["status"] != "healthy":
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE, detail=health_data
        )
    return health_data
