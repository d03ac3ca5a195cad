"""
Pydantic report models for every JSON surface of the command line.
Matrices are serialized row-major with explicit labels, never positionally.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1.0"


def _scalar(x: Any) -> Any:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


class MatrixReport(BaseModel):
    """A labelled matrix."""
    field: str
    rows: List[str]
    cols: List[str]
    entries: List[List[Any]]

    @classmethod
    def from_matrix(cls, m) -> "MatrixReport":
        return cls(
            field=m.field.name,
            rows=[str(r) for r in m.rows],
            cols=[str(c) for c in m.cols],
            entries=[[_scalar(x) for x in row] for row in m.to_lists()],
        )


class ShelterReport(BaseModel):
    field: str
    verdict: bool
    strict: bool
    first_violating_subtransversal: Optional[List[str]] = None
    candidate_rank: int
    expected_rank: Optional[int] = None
    checked: int

    @classmethod
    def from_result(cls, field: str, result) -> "ShelterReport":
        violation = result.first_violation
        return cls(
            field=field,
            verdict=result.verdict,
            strict=result.strict,
            first_violating_subtransversal=sorted(map(str, violation)) if violation is not None else None,
            candidate_rank=result.candidate_rank,
            expected_rank=result.expected_rank,
            checked=result.checked,
        )


class SignedIASReport(BaseModel):
    words: List[str]
    signed_words: List[str]
    base: Optional[List[str]] = None
    matrix: MatrixReport
    column_labels: List[str]
    unimodular: Optional[bool] = None
    worst_determinant: Optional[int] = None
    determinants_checked: int = 0
    three_circuits: List[List[str]] = Field(default_factory=list)
    shelters: Optional[ShelterReport] = None
    warnings: List[str] = Field(default_factory=list)


class NajiReport(BaseModel):
    variables: int
    equations: int
    solution: Optional[Dict[str, int]] = None
    certificate: List[str] = Field(default_factory=list)


class ObstructionReport(BaseModel):
    name: Optional[str] = None
    moves: List[str] = Field(default_factory=list)
    deleted: List[str] = Field(default_factory=list)
    iso: Dict[str, str] = Field(default_factory=dict)
    complete: bool = True


class VerdictReport(BaseModel):
    circle: bool
    naji: NajiReport
    obstruction: Optional[ObstructionReport] = None
    realization: Optional[List[str]] = None
    inconclusive: bool = False


class CircuitListModel(BaseModel):
    classes: List[List[str]]
    circuits: List[List[str]]


class MultimatroidReport(BaseModel):
    name: str
    order: int
    classification: Optional[str] = None
    binary_refutation: Optional[bool] = None
    planar: Optional[bool] = None
    regular: Optional[bool] = None
    circuits: Optional[CircuitListModel] = None
    fundamental_graph_edges: Optional[List[List[str]]] = None


class ExampleCheck(BaseModel):
    """One self-check against embedded golden data."""
    name: str
    passed: bool
    expected: Any = None
    actual: Any = None


class RunReport(BaseModel):
    """Top-level output of every subcommand."""
    schema_version: str = SCHEMA_VERSION
    command: str
    inputs_digest: Optional[str] = None
    verdicts: Dict[str, Any] = Field(default_factory=dict)
    payload: Dict[str, Any] = Field(default_factory=dict)
    bounds: Dict[str, Any] = Field(default_factory=dict)
    timings: Optional[Dict[str, float]] = None
    exit_code: int = 0
