"""
Pydantic schemas for the semigroup toolkit
"""

import os
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from backend.models.errors import InputError


class ConjugacyMethod(str, Enum):
    BRUTE_FORCE = "brute_force"
    STRUCTURAL = "structural"
    G_CONJUGACY = "g_conjugacy"
    CYCLE_TYPE = "cycle_type"


class LambdaRule(str, Enum):
    MIN_ID = "min_id"
    MAX_ID = "max_id"


class FieldKind(str, Enum):
    RATIONAL = "rational"
    PRIME = "prime"


class InvariantStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


# Input Schemas
class GeneratorFile(BaseModel):
    degree: int = Field(..., ge=0, description="Size of the point set")
    generators: List[List[Optional[int]]] = Field(..., description="Element literals, null = undefined")
    close_under_inverse: bool = Field(True, description="Add inverses of the generators before closing")
    name: Optional[str] = Field(None, description="Fixture name")
    seed: Optional[int] = Field(None, description="Seed used to produce a random fixture")

    @field_validator("generators")
    @classmethod
    def _non_empty(cls, value: List[List[Optional[int]]]) -> List[List[Optional[int]]]:
        if not value:
            raise ValueError("at least one generator is required")
        return value


class SuppliedRep(BaseModel):
    degree: int = Field(..., ge=1, description="Representation degree")
    images: Dict[str, List[List[Union[int, str]]]] = Field(
        ..., description="Group element id -> matrix of 'num/den' strings or integers"
    )


class SuppliedRepsFile(BaseModel):
    representations: Dict[str, List[SuppliedRep]] = Field(
        ..., description="Λ member id -> complete irredundant list of irreducibles"
    )


# Engine Schemas
class InverseCheck(BaseModel):
    is_inverse: bool = Field(..., description="Every element has exactly one inverse")
    violation: Optional[List[int]] = Field(None, description="Offending element pair (second may be -1)")
    reason: Optional[str] = Field(None, description="Diagnosis")


class GreenStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    d_classes: List[List[int]] = Field(..., description="D-classes, ordered by their Λ member")
    h_classes: List[List[int]] = Field(..., description="H-classes, ordered by minimal member")
    d_class_of: List[int] = Field(..., description="Element id -> D-class index")
    h_class_of: List[int] = Field(..., description="Element id -> H-class index")
    d_class_of_idempotent: Dict[int, int] = Field(..., description="Idempotent id -> D-class index")
    lambda_ids: List[int] = Field(..., description="One idempotent per D-class")
    idempotents_by_class: List[List[int]] = Field(..., description="Idempotents of each D-class, ascending")
    rule: LambdaRule = Field(LambdaRule.MIN_ID, description="Λ tie-breaking rule")

    def lambda_of(self, element: int) -> int:
        return self.lambda_ids[self.d_class_of[element]]

    def n_e(self, d_class: int) -> int:
        return len(self.idempotents_by_class[d_class])


class MaximalSubgroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    base_idempotent: int = Field(..., description="Identity of the group")
    member_ids: List[int] = Field(..., description="Members in ascending id order")
    group_product: List[List[int]] = Field(..., description="Cayley table on member positions")
    idempotent_count: int = Field(..., description="n_e: idempotents in the D-class of the base")

    @property
    def order(self) -> int:
        return len(self.member_ids)


class DClassSummary(BaseModel):
    index: int
    lambda_id: int
    rank: int
    size: int
    idempotent_count: int = Field(..., description="n_e")
    group_order: int = Field(..., description="|G(e)|")
    group_class_count: int = Field(..., description="Conjugacy classes of G(e)")


class TableSummary(BaseModel):
    degree: int
    size: int
    generator_ids: List[int]
    idempotent_count: int
    identity_id: Optional[int]
    lambda_ids: List[int]
    d_classes: List[DClassSummary]
    dimension_audit: bool = Field(..., description="Σ n_e²|G(e)| = |S|")


# Conjugacy Schemas
class InducedData(BaseModel):
    element: int
    induced_idempotent: int = Field(..., description="e_a")
    invertible_part: int = Field(..., description="a·e_a")
    subrank_class: int = Field(..., description="D-class index of a·e_a")
    subrank: int = Field(..., description="Λ representative of that D-class")


class ConjugacyClass(BaseModel):
    representative: int = Field(..., description="Minimal member id")
    members: List[int]
    subrank: Optional[int] = Field(None, description="Λ member shared by all members")
    group_class_witness: Optional[int] = Field(None, description="Representative of the matching class of G(subrank)")


class ConjugacyPartition(BaseModel):
    method: ConjugacyMethod
    classes: List[ConjugacyClass]

    @property
    def count(self) -> int:
        return len(self.classes)

    def blocks(self) -> List[List[int]]:
        return [c.members for c in self.classes]

    def class_of(self) -> Dict[int, int]:
        return {m: index for index, c in enumerate(self.classes) for m in c.members}


class CounterexampleReport(BaseModel):
    t: int = Field(..., description="Connecting element 2→1, 3→2")
    conjugated: int = Field(..., description="t·((31)[2])·t⁻¹")
    conjugate_is_zero: bool
    zero_in_class: bool = Field(..., description="0 ∈ [(32)[1]]")
    worked_class: List[int] = Field(..., description="[(32)[1]]")
    same_t_image: int = Field(..., description="t·((32)[1])·t⁻¹")
    same_t_image_in_class: bool
    passed: bool


# Verification Schemas
class InvariantResult(BaseModel):
    name: str
    status: InvariantStatus
    detail: str = ""


class RepresentationSummary(BaseModel):
    lambda_id: int
    d_class: int
    label: str
    group_degree: int
    degree: int
    commutant_dimension: int
    irreducible: bool


class RepresentationSection(BaseModel):
    field: str
    representations: List[RepresentationSummary]
    inequivalence_matrix: List[List[int]] = Field(..., description="Pairwise intertwiner dimensions")
    pairwise_inequivalent: bool
    degree_square_sum: int
    degree_identity: Optional[bool] = Field(None, description="Σ deg² = |S| (characteristic 0 only)")


class ConjugacySection(BaseModel):
    counts: Dict[str, int]
    classes: List[ConjugacyClass]
    g_classes: Optional[List[List[int]]] = None
    partitions_agree: bool
    group_class_sum: int = Field(..., description="Σ_e #cc(G(e))")


class AnalysisReport(BaseModel):
    input_digest: str
    fixture: Optional[str] = None
    seed: Optional[int] = None
    audit_seed: int = Field(0, description="Seed driving sampled audits")
    table: TableSummary
    connecting_elements: Dict[str, int] = Field(..., description="'f->e' witness ids used for the structural labels")
    conjugacy: ConjugacySection
    representations: Optional[RepresentationSection] = None
    lift_count: Optional[int] = None
    bijection_verdict: str = Field(..., description="PASS, FAIL or SKIPPED")


class VerificationReport(BaseModel):
    input_digest: str
    fixture: Optional[str] = None
    seed: Optional[int] = None
    audit_seed: int = Field(0, description="Seed driving sampled audits")
    size: int
    invariants: List[InvariantResult]
    verdict: InvariantStatus


class ErrorReport(BaseModel):
    error: str = Field(..., description="Error label")
    detail: str = Field(..., description="Error details")
    exit_code: int = Field(..., description="Process exit code")


# Configuration Schemas
class AnalysisConfig(BaseModel):
    element_cap: int = Field(1_000_000, ge=1, description="Largest semigroup enumerated")
    table_memory_mb: int = Field(4096, ge=1, description="Memory budget for the int64 product table")
    exhaustive_limit: int = Field(250, ge=0, description="Largest |S| for all-pairs audits")
    sample_pairs: int = Field(2000, ge=1, description="Seeded pair sample above the exhaustive limit")
    field: str = Field("q", description="'q' or 'fp:P'")
    seed: int = Field(0, description="Seed for sampling and random fixtures")
    skip_reps: bool = Field(False, description="Skip the representation pipeline")
    log_level: str = Field("WARNING", description="Logging level")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown logging level {value}")
        return value

    @classmethod
    def from_env(cls, **overrides) -> "AnalysisConfig":
        """Defaults from SEMIGROUP_* environment variables, then explicit overrides"""
        values = {
            "element_cap": os.getenv("SEMIGROUP_ELEMENT_CAP"),
            "table_memory_mb": os.getenv("SEMIGROUP_TABLE_MEMORY_MB"),
            "exhaustive_limit": os.getenv("SEMIGROUP_EXHAUSTIVE_LIMIT"),
            "sample_pairs": os.getenv("SEMIGROUP_SAMPLE_PAIRS"),
            "log_level": os.getenv("SEMIGROUP_LOG_LEVEL"),
        }
        values.update(overrides)
        try:
            return cls(**{k: v for k, v in values.items() if v is not None})
        except ValidationError as e:
            raise InputError("Invalid configuration", str(e))
