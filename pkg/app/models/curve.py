from typing import List, Optional

from pydantic import BaseModel, Field

# deg 12, everywhere locally soluble, S_min = {inf, 2, 5, 17}
GENUS5_COEFFICIENTS: List[int] = [-17, -13, -15, 6, -19, 5, -19, 4, -2, 19, 12, 13, -6]

# monic of degree 102 with constant term 1; a root has norm 1
GENUS50_EXPONENTS: List[int] = [
    102, 101, 97, 95, 93, 90, 86, 80, 77, 75, 71, 70, 68, 65, 64, 63, 62, 59, 58, 53, 50,
    49, 48, 46, 45, 44, 38, 37, 36, 35, 32, 31, 26, 25, 22, 16, 11, 8, 7, 1, 0,
]


def genus50_coefficients(twist: int = 1) -> List[int]:
    """Leading-first coefficients of twist·f for the degree-102 polynomial above."""
    exponents = set(GENUS50_EXPONENTS)
    return [twist if e in exponents else 0 for e in range(102, -1, -1)]


class CurveRequest(BaseModel):
    """Request model for classification and obstruction runs."""
    coefficients: List[int] = Field(..., description="Integer coefficients of f, leading first")
    extra_primes: List[int] = Field(default_factory=list, description="Primes added to S")
    ells: Optional[List[List[str]]] = Field(
        None, description="Elements of L as rational coefficients of powers of θ, constant first"
    )
    height_bound: Optional[int] = Field(None, ge=1, description="Point search height bound")
    deep: bool = Field(False, description="Retry over a larger S when S_min gives no obstruction")


class ExampleCurve(BaseModel):
    """A named curve with known behavior."""
    name: str
    coefficients: List[int]
    genus: int
    description: str
