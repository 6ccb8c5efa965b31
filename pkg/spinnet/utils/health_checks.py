"""
Numerical self-checks used by the detailed health endpoint.
"""
import math
import time
from typing import Any, Dict

import numpy as np

from spinnet.core.config import settings
from spinnet.core.linalg import linalg
from spinnet.services.network_service import NetworkService

# Spectrum of the designed network for J = 1: doubly degenerate -sqrt2, 0, sqrt2.
REFERENCE_SPECTRUM = np.array(
    [-math.sqrt(2.0)] * 2 + [0.0] * 2 + [math.sqrt(2.0)] * 2, dtype=np.float64
)


def check_solver_health(tolerance: float = 1e-10) -> Dict[str, Any]:
    """
    Diagonalise the designed network and compare against its known spectrum.

    Returns:
        Solver health status
    """
    try:
        start_time = time.time()
        network = NetworkService.designed_network(1.0)
        spectrum = linalg.eig_hermitian(network.operator)
        response_time = time.time() - start_time

        deviation = float(np.max(np.abs(spectrum.eigenvalues - REFERENCE_SPECTRUM)))
        return {
            "status": "healthy" if deviation <= tolerance else "unhealthy",
            "solver": settings.eig_solver,
            "max_deviation": deviation,
            "response_time_ms": round(response_time * 1000, 2),
        }
    except Exception as e:
        return {"status": "unhealthy", "solver": settings.eig_solver, "error": str(e)}


def get_application_info() -> Dict[str, Any]:
    """
    Get application information.

    Returns:
        Application metadata
    """
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "debug_mode": settings.debug,
        "numpy_version": np.__version__,
        "timestamp": time.time(),
    }
