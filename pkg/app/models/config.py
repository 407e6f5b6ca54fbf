from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


class SearchBounds(BaseModel):
    """Bounds for the search over square-norm elements ℓ."""
    degree: int = Field(2, ge=0, description="Largest degree of g in ℓ = g(θ)")
    coeff_bound: int = Field(10, ge=0, description="Coefficients of g range over [-bound, bound]")
    linear_bound: int = Field(30, ge=0, description="a - θ and 1 - aθ for |a| up to this bound")
    relation_pool: int = Field(400, ge=0, description="Smooth-norm elements kept for relation products")
    smooth_bound: int = Field(1000, ge=2, description="Norms must factor over primes up to this bound to enter the pool")
    max_relations: int = Field(16, ge=0, description="Square-norm products taken from the relation pool")
    max_candidates: int = Field(24, ge=1, description="Candidates returned after deduplication")


class EngineConfig(BaseModel):
    """Knobs for one run of the obstruction algorithm."""
    extra_primes: List[int] = Field(default_factory=list, description="Primes added to S by the user")
    node_budget: Optional[int] = Field(None, description="Subproduct tree node budget; defaults to settings")
    deep: bool = Field(False, description="Re-run with small and bad primes added when S_min gives no obstruction")
    deep_small_bound: int = Field(100, description="Deep pass adds all primes up to this bound")
    deep_bad_bound: int = Field(10**4, description="Deep pass adds bad primes up to this bound")
    check_unramified: bool = Field(True, description="Check that images outside S_min are unramified")

    @field_validator("extra_primes")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(p < 2 for p in v):
            raise ValueError("extra primes must be primes >= 2")
        return sorted(set(v))


class SampleConfig(BaseModel):
    """A sampling experiment over M(g, n) and the per-curve classification settings."""
    genus: int = Field(2, ge=1)
    bound: int = Field(10, ge=1, description="Coefficients drawn uniformly from [-bound, bound]")
    sample_size: int = Field(300, ge=0)
    seed: int = 0
    height_bound: int = Field(10**4, ge=1, description="Point search height bound")
    search: SearchBounds = Field(default_factory=SearchBounds)
    engine: EngineConfig = Field(default_factory=EngineConfig)
    consistency_check: bool = Field(True, description="Cross-check found points against obstruction survivors")
    workers: int = Field(1, ge=1)
