"""
Development server runner script.
"""
import uvicorn

from spinnet.core.config import settings

if __name__ == "__main__":
    uvicorn.run(
        "spinnet.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
        access_log=True,
    )
