"""
Semigroup algebra elements, matrices over a group algebra, and representations

AlgebraElement coefficients are exact rationals; they are mapped into the
working field only when a representation is applied.
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from backend.models.schemas import MaximalSubgroup
from backend.models.semigroup_table import SemigroupTable

Coefficient = Union[int, Fraction]


class AlgebraElement:
    """Finite linear combination of element ids; zero coefficients are dropped"""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Optional[Dict[int, Coefficient]] = None):
        self.coefficients: Dict[int, Fraction] = {
            int(a): Fraction(c) for a, c in (coefficients or {}).items() if c != 0
        }

    @classmethod
    def basis(cls, a: int) -> "AlgebraElement":
        return cls({a: 1})

    @classmethod
    def combination(cls, terms: Iterable[Tuple[int, Coefficient]]) -> "AlgebraElement":
        total: Dict[int, Fraction] = {}
        for a, c in terms:
            total[a] = total.get(a, Fraction(0)) + Fraction(c)
        return cls(total)

    @property
    def support(self) -> List[int]:
        return sorted(self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement.combination(list(self.coefficients.items()) + list(other.coefficients.items()))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, c: Coefficient) -> "AlgebraElement":
        return AlgebraElement({a: c * x for a, x in self.coefficients.items()})

    def multiply(self, table: SemigroupTable, other: "AlgebraElement") -> "AlgebraElement":
        """Product in the semigroup algebra, bilinear extension of the table"""
        return AlgebraElement.combination(
            (int(table.product[a, b]), x * y)
            for a, x in self.coefficients.items()
            for b, y in other.coefficients.items()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}·[{a}]" for a, c in sorted(self.coefficients.items()))
        return f"AlgebraElement({terms or '0'})"


class GroupMatrix:
    """n_e × n_e matrix with entries in the group algebra of G(e)

    coefficients[i, j, g] is the coefficient of the g-th member of G(e) in entry (i, j).
    """

    def __init__(self, subgroup: MaximalSubgroup, coefficients: np.ndarray):
        self.subgroup = subgroup
        self.coefficients = coefficients

    @property
    def size(self) -> int:
        return self.coefficients.shape[0]

    def entry(self, i: int, j: int) -> AlgebraElement:
        members = self.subgroup.member_ids
        return AlgebraElement({members[g]: c for g, c in enumerate(self.coefficients[i, j]) if c != 0})

    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        """Matrix product with group-algebra convolution in each entry"""
        n, order = self.size, self.subgroup.order
        result = np.full((n, n, order), Fraction(0), dtype=object)
        table = self.subgroup.group_product
        for g in range(order):
            for h in range(order):
                result[:, :, table[g][h]] += self.coefficients[:, :, g].dot(other.coefficients[:, :, h])
        return GroupMatrix(self.subgroup, result)

    def is_zero(self) -> bool:
        return not np.any(self.coefficients != 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupMatrix):
            return NotImplemented
        return (
            self.subgroup.base_idempotent == other.subgroup.base_idempotent
            and self.coefficients.shape == other.coefficients.shape
            and not np.any(self.coefficients != other.coefficients)
        )

    def __repr__(self) -> str:
        return f"<GroupMatrix(e={self.subgroup.base_idempotent}, size={self.size})>"


class Rep(BaseModel):
    """Matrix representation of a maximal subgroup G(e)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    group: MaximalSubgroup
    degree: int = Field(..., ge=1)
    images: Dict[int, np.ndarray] = Field(..., description="Group member id -> matrix over the working field")
    label: str = Field(..., description="e.g. 'trivial', 'partition (2, 1)', 'character 3', 'supplied 0'")

    def image(self, g: int) -> np.ndarray:
        return self.images[g]


class LiftedRep(BaseModel):
    """Representation of S lifted from a representation of G(e), e ∈ Λ"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: Rep
    lambda_id: int
    d_class: int
    n_e: int
    images: List[np.ndarray] = Field(..., description="Element id -> matrix, block (i, j) = ρ(β_ij(a))")
    generator_ids: List[int] = Field(..., description="Generators of S; their images determine the commutant")

    @property
    def degree(self) -> int:
        return self.n_e * self.source.degree

    @property
    def label(self) -> str:
        return self.source.label
