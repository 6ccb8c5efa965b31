"""
API router configuration.
"""
from fastapi import APIRouter

from spinnet.api.routes import health, network, protocols, sweeps

api_router = APIRouter()

# Include route modules
api_router.include_router(network.router, prefix="/network", tags=["Network"])
api_router.include_router(protocols.router, prefix="/protocols", tags=["Protocols"])
api_router.include_router(sweeps.router, prefix="/sweeps", tags=["Sweeps"])
api_router.include_router(health.router, prefix="/health", tags=["Health"])
