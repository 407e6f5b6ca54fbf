import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Process-wide defaults, read once from the environment."""
    log_level: str = Field("INFO", description="Logging level for every module logger")
    trial_bound: int = Field(10**6, description="Trial division bound for integer factorization")
    rho_budget: int = Field(10**8, description="Pollard-rho iteration budget")
    node_budget: int = Field(10**7, description="Subproduct tree node budget")
    precision_factor: int = Field(20, description="Starting p-adic precision per unit of ramification bound")
    max_doublings: int = Field(6, description="Precision doublings before giving up")
    height_bound: int = Field(10**4, description="Default point search height")
    port: int = Field(8000, description="HTTP port for the service")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the settings built from environment variables."""
    return Settings(
        log_level=os.getenv("OBSTRUCT_LOG_LEVEL", "INFO"),
        trial_bound=int(os.getenv("OBSTRUCT_TRIAL_BOUND", 10**6)),
        rho_budget=int(os.getenv("OBSTRUCT_RHO_BUDGET", 10**8)),
        node_budget=int(os.getenv("OBSTRUCT_NODE_BUDGET", 10**7)),
        precision_factor=int(os.getenv("OBSTRUCT_PRECISION_FACTOR", 20)),
        max_doublings=int(os.getenv("OBSTRUCT_MAX_DOUBLINGS", 6)),
        height_bound=int(os.getenv("OBSTRUCT_HEIGHT_BOUND", 10**4)),
        port=int(os.getenv("PORT", 8000)),
    )
