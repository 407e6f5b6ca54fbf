from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

Verdict = Literal["obstructed", "not_obstructed_by_B", "not_locally_soluble", "error"]
Category = Literal["NotLocallySoluble", "BrauerManinObstructed", "HasRationalPoint", "Undecided"]


class PlaceEntry(BaseModel):
    """One place of S with the reasons it was included."""
    place: str
    provenance: List[str]


class PlaceData(BaseModel):
    """Local data at one place, enough to replay the F₂ arithmetic."""
    place: str
    dim: int = Field(..., description="Dimension of L_v^×/ℚ_v^×L_v^×²")
    full_dim: int = Field(..., description="Dimension of L_v^×/L_v^×²")
    labels: List[str] = Field(default_factory=list, description="Quotient basis, as component:generator")
    free_positions: List[int] = Field(default_factory=list, description="Full-space coordinates of the quotient basis")
    images: List[List[int]] = Field(default_factory=list, description="Image classes I_v as bit vectors")
    soluble: bool = True
    precision: Optional[int] = Field(None, description="p-adic working precision")


class PhiData(BaseModel):
    """The functional of one ℓ: one row per place over the quotient basis."""
    ell: List[str] = Field(..., description="Coefficients of ℓ in powers of θ, constant first")
    norm: str
    support: List[str]
    rows: Dict[str, List[int]]
    values: Dict[str, List[int]] = Field(default_factory=dict, description="Row applied to each image class")
    source: str = "search"


class ObstructionReport(BaseModel):
    """Certificate produced by the obstruction algorithm."""
    curve: List[int] = Field(..., description="Coefficients of f, leading first")
    genus: int
    S: List[PlaceEntry] = Field(default_factory=list)
    ells: List[List[str]] = Field(default_factory=list)
    places: List[PlaceData] = Field(default_factory=list)
    phi: List[PhiData] = Field(default_factory=list)
    survivors: List[Dict[str, List[int]]] = Field(
        default_factory=list, description="Surviving subproducts as per-place indices into the image lists"
    )
    verdict: Verdict = "error"
    complete: bool = Field(False, description="Whether the ℓ list is claimed to span the relevant Brauer subgroup")
    diagnostics: Dict[str, Any] = Field(default_factory=dict)


class VerificationResult(BaseModel):
    valid: bool
    verdict: Verdict
    survivors: int = Field(..., description="Number of surviving adelic class tuples after replay")
    problems: List[str] = Field(default_factory=list)


class PointModel(BaseModel):
    """A rational point; x is None at infinity. Coordinates as exact fraction strings."""
    x: Optional[str]
    y: str


class ClassificationResult(BaseModel):
    """Outcome of the classification pipeline for one curve."""
    curve: List[int]
    genus: int
    category: Category
    point: Optional[PointModel] = None
    report: Optional[ObstructionReport] = None
    failing_place: Optional[str] = None
    timings: Dict[str, float] = Field(default_factory=dict)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    index: Optional[int] = Field(None, description="Position in a sampled batch")
