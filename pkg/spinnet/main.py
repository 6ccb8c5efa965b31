"""
Spin Network Simulator HTTP API

Exposes the network spectrum, single protocol runs and disorder-averaged
sweeps of the 6-site single-excitation network as JSON endpoints. Every
request is a pure computation; nothing is stored between requests.
"""
import time
from contextlib import asynccontextmanager
from typing import AsyncIterator, Awaitable, Callable

from fastapi import FastAPI, HTTPException, Request, Response, status
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from spinnet.api import api_router
from spinnet.core.config import settings
from spinnet.core.errors import SpinNetworkError
from spinnet.utils.helpers import SimulationLogger, logger


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncIterator[None]:
    """
    Application lifespan events.
    """
    logger.info("startup", app=settings.app_name, solver=settings.eig_solver)
    yield
    logger.info("shutdown", app=settings.app_name)


# FastAPI application instance
app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="""
    ## Spin Network Simulator

    Single-excitation dynamics of a 6-site spin network built from two
    perfect-transfer trimers joined by a Hadamard connector.

    ### Endpoints:
    - **Spectrum**: eigenvalues and eigenvectors of the designed network
    - **Protocols**: router, entanglement generator and phase sensor runs
    - **Sweeps**: disorder-averaged Monte Carlo statistics
    """,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
    lifespan=lifespan,
)

# CORS Middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request timing middleware
@app.middleware("http")
async def add_process_time_header(
    request: Request, call_next: Callable[[Request], Awaitable[Response]]
) -> Response:
    """Add process time header to responses."""
    start_time = time.time()
    response = await call_next(request)
    process_time = time.time() - start_time
    response.headers["X-Process-Time"] = str(process_time)

    logger.info(
        "request handled",
        method=request.method,
        path=request.url.path,
        status_code=response.status_code,
        process_time=round(process_time, 4),
    )
    return response


# Exception Handlers
@app.exception_handler(RequestValidationError)
async def validation_exception_handler(
    request: Request, exc: RequestValidationError
) -> JSONResponse:
    """Handle request validation errors."""
    SimulationLogger.log_error("Validation error", {"errors": str(exc.errors())})
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": "Validation error", "errors": jsonable_errors(exc)},
    )


@app.exception_handler(SpinNetworkError)
async def simulation_exception_handler(
    request: Request, exc: SpinNetworkError
) -> JSONResponse:
    """Handle simulation errors."""
    SimulationLogger.log_error(exc.message, {"error_code": exc.error_code})
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": exc.message, "error_code": exc.error_code},
    )


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException) -> JSONResponse:
    """Handle HTTP exceptions."""
    SimulationLogger.log_error(
        "HTTP error", {"status_code": exc.status_code, "detail": exc.detail}
    )
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})


def jsonable_errors(exc: RequestValidationError) -> list:
    return [
        {"loc": list(error.get("loc", ())), "msg": error.get("msg", "")}
        for error in exc.errors()
    ]


# Health check endpoint
@app.get("/health", tags=["Health"])
async def health_check() -> dict:
    """
    Health check endpoint.

    Returns:
        Application health status
    """
    return {
        "status": "healthy",
        "app_name": settings.app_name,
        "version": settings.app_version,
        "timestamp": time.time(),
    }


# Root endpoint
@app.get("/", tags=["Root"])
async def root() -> dict:
    """
    Root endpoint with API information.

    Returns:
        API welcome message and links
    """
    return {
        "message": f"Welcome to {settings.app_name}",
        "version": settings.app_version,
        "docs_url": "/docs",
        "redoc_url": "/redoc",
        "health_check": "/health",
    }


# Include API routes
app.include_router(api_router, prefix=settings.api_v1_prefix)
