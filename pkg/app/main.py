from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.routers import curve_router
from app.utils.config import get_settings
from app.utils.errors import ResourceAbort
from app.utils.logging_utils import setup_logger

# Load environment variables
load_dotenv()

logger = setup_logger("main")

app = FastAPI(
    title="Hyperelliptic Obstruction API",
    description="Decides rational points on y^2 = f(x) with local solubility, point search and Brauer-Manin obstructions",
    version="1.0.0"
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(curve_router.router)


@app.exception_handler(ResourceAbort)
async def resource_abort_handler(request: Request, exc: ResourceAbort):
    """Budget and precision aborts map to 503."""
    logger.warning(f"{request.url.path} aborted: {type(exc).__name__}: {exc}")
    return JSONResponse(
        status_code=503,
        content={"detail": str(exc), "error_type": type(exc).__name__},
    )


@app.get("/")
async def root():
    """Root endpoint to check if the API is running."""
    return {"message": "Hyperelliptic Obstruction API is running"}


@app.get("/health")
async def health_check():
    """Health check endpoint, with the active budgets."""
    settings = get_settings()
    return {
        "status": "healthy",
        "budgets": {
            "trial_bound": settings.trial_bound,
            "rho_budget": settings.rho_budget,
            "node_budget": settings.node_budget,
        },
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("app.main:app", host="0.0.0.0", port=get_settings().port, reload=True)
