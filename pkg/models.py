"""
Pydantic models for problem files, solver payloads and run reports
"""
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

# A scalar may be a JSON number or an exact "a/b" string
Scalar = Union[float, str]
PointSpec = Union[Scalar, List[Scalar]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CosineSpec(StrictModel):
    amplitude: Scalar = Field(..., description="Amplitude of the cosine term")
    frequency: Scalar = Field(..., description="Angular frequency (radians per unit belief)")
    phase: Scalar = Field(0.0, description="Phase in radians")


class PieceSpec(StrictModel):
    interval: Tuple[Scalar, Scalar] = Field(..., description="Closed interval [a, b] inside [0, 1]")
    coefficients: List[Scalar] = Field(
        ..., min_length=1, max_length=7, description="Polynomial coefficients in ascending powers of (x - center)"
    )
    center: Scalar = Field(0.0, description="Expansion point of the polynomial")
    cosine: Optional[CosineSpec] = Field(None, description="Optional cosine term added to the polynomial")


class UtilitySpec(StrictModel):
    kind: Literal["piecewise", "sampled", "constant"] = Field(..., description="Utility representation")
    name: str = Field("", description="Label used in messages and reports")
    pieces: Optional[List[PieceSpec]] = Field(None, description="Closed-form pieces covering [0, 1]")
    continuous: Optional[bool] = Field(None, description="Declared continuity; inferred when omitted")
    points: Optional[List[PointSpec]] = Field(None, description="Sample beliefs of a sampled utility")
    values: Optional[List[Scalar]] = Field(None, description="Utility value at each sample belief")
    value: Optional[Scalar] = Field(None, description="Value of a constant utility")

    @model_validator(mode="after")
    def check_kind_fields(self):
        if self.kind == "piecewise" and not self.pieces:
            raise ValueError("piecewise utilities need 'pieces'")
        if self.kind == "sampled":
            if not self.points or self.values is None:
                raise ValueError("sampled utilities need 'points' and 'values'")
            if len(self.points) != len(self.values):
                raise ValueError(f"'points' has {len(self.points)} entries but 'values' has {len(self.values)}")
        if self.kind == "constant" and self.value is None:
            raise ValueError("constant utilities need 'value'")
        return self


class GridSpec(StrictModel):
    step: Optional[Scalar] = Field(None, description="Uniform mesh spacing; 1/step must be an integer")
    points: Optional[List[PointSpec]] = Field(None, description="Explicit grid beliefs")

    @model_validator(mode="after")
    def check_one_form(self):
        if (self.step is None) == (self.points is None):
            raise ValueError("grid needs exactly one of 'step' or 'points'")
        return self


class ProblemFile(StrictModel):
    description: str = Field("", description="What the problem encodes")
    states: int = Field(2, ge=2, description="Number of states |Ω|")
    prior: Union[Scalar, List[Scalar]] = Field(..., description="Scalar P(state 1) for two states, else a probability vector")
    sender_utility: UtilitySpec
    mediator_utilities: List[UtilitySpec] = Field(default_factory=list, description="v_M1 ... v_Mn in chain order")
    grid: GridSpec
    denominator: Optional[int] = Field(None, ge=1, description="Lattice weight denominator Q")
    eps: Scalar = Field(0.0, description="Tolerance of the eps-best-reply refinement")
    include_full_information: bool = Field(True, description="Add the full-information distribution to the lattice")


class DistributionEntry(BaseModel):
    belief: str = Field(..., description="Belief (q for two states, else the probability vector)")
    coords: List[float] = Field(..., description="Full probability vector")
    weight: str = Field(..., description="Probability of this posterior")


class LatticeInfo(BaseModel):
    grid_size: int
    denominator: int
    element_count: int
    order_edges: int
    support_size: int


class SolvePayload(BaseModel):
    solver: str = Field(..., description="Strategy that produced the result")
    prior: str
    value: str = Field(..., description="Sender value; exact fractions stay a/b")
    value_float: float
    distribution: List[DistributionEntry] = Field(default_factory=list)
    used_no_information: Optional[bool] = None
    feasible_set_cardinalities: List[int] = Field(default_factory=list, description="|M_1| ... |M_{n+1}|")
    naive_lower_bound: Optional[str] = None
    unconstrained_bound: Optional[str] = None
    lattice: Optional[LatticeInfo] = None
    warnings: List[str] = Field(default_factory=list)


class ViolationInfo(BaseModel):
    weights: List[float]
    beliefs: List[str]
    mean: str
    gap: float


class CheckPayload(BaseModel):
    query: Literal["pair", "set", "dist"]
    mediator: int = Field(..., ge=1, description="1-based mediator index the query was checked against")
    beliefs: List[str]
    dominating: bool
    violation: Optional[ViolationInfo] = None
    own_value: Optional[str] = None
    best_contraction_value: Optional[str] = None
    garbling: List[DistributionEntry] = Field(default_factory=list)


class VerifyPayload(BaseModel):
    chain_value: str
    poset_value: str
    verifier_value: str
    passed: bool
    element_count: int
    seed: Optional[int] = None


class SweepRow(BaseModel):
    prior: float
    v_s: float
    cav_unconstrained: float
    cav_constrained: float


class SweepPayload(BaseModel):
    rows: List[SweepRow]
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None


class PlotPayload(BaseModel):
    csv_path: str
    svg_path: str
    rows: int


class RunReport(BaseModel):
    command: str = Field(..., description="Sub-command that ran")
    arguments: Dict[str, Any] = Field(default_factory=dict, description="Command-line arguments as parsed")
    configuration: Dict[str, Any] = Field(default_factory=dict, description="Resolved solver settings and problem parameters")
    result: Dict[str, Any] = Field(default_factory=dict, description="Command payload")
    timing_seconds: Optional[float] = Field(None, description="Wall-clock time, only with --timing")
    warnings: List[str] = Field(default_factory=list)
    exit_code: int = 0
