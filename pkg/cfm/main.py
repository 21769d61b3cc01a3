"""
cfm FastAPI application
Solve and test-instance generation over HTTP
"""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core.config import settings
from .core.errors import CFMError, DivergenceError, NumericalError
from .core.logging import configure_logging
from .routers import solve, testgen
from .schemas import ErrorPayload

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    logger.info("Starting %s %s", settings.APP_NAME, settings.APP_VERSION)
    yield
    logger.info("Shutting down %s", settings.APP_NAME)


app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description="Conic first-order methods: smoothed duals, optimal first-order solvers, certified test problems",
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(solve.router)
app.include_router(testgen.router)


@app.exception_handler(CFMError)
async def cfm_error_handler(request: Request, exc: CFMError):
    status_code = 500 if isinstance(exc, (NumericalError, DivergenceError)) else 422
    logger.error("%s %s failed: %s", request.method, request.url.path, exc.message)
    return JSONResponse(status_code=status_code, content=ErrorPayload.from_error(exc).model_dump(by_alias=True))


@app.get("/")
def root():
    """Root endpoint with API information"""
    return {
        "service": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "schema": settings.SCHEMA_VERSION,
        "docs": "/docs",
        "health": "/health",
    }


@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "service": settings.APP_NAME, "version": settings.APP_VERSION}
