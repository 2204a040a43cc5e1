"""
Enumerated semigroup of partial permutations with its product table
"""

from typing import Dict, List, Optional

import numpy as np

from backend.models.errors import InputError
from backend.models.partial_perm import PartialPerm


class SemigroupTable:
    """Immutable after construction; `cache` only memoizes derived data"""

    def __init__(
        self,
        degree: int,
        elements: List[PartialPerm],
        generator_ids: List[int],
        product: np.ndarray,
        inverse_of: np.ndarray,
    ):
        self.degree = degree
        self.elements = elements
        self.index: Dict[PartialPerm, int] = {p: i for i, p in enumerate(elements)}
        self.generator_ids = generator_ids
        self.product = product
        self.product.setflags(write=False)
        self.inverse_of = inverse_of
        self.inverse_of.setflags(write=False)
        self.ranks = np.array([p.rank for p in elements], dtype=np.int64)

        ids = np.arange(len(elements))
        self.idempotent_ids: List[int] = [int(i) for i in np.flatnonzero(product[ids, ids] == ids)]
        self.identity_id: Optional[int] = None
        for e in self.idempotent_ids:
            if np.array_equal(product[e, :], ids) and np.array_equal(product[:, e], ids):
                self.identity_id = e
                break

        # dom(a) = a⁻¹a and ran(a) = aa⁻¹ as element ids, -1 when a⁻¹ ∉ S
        self.dom_ids = np.full(len(elements), -1, dtype=np.int64)
        self.ran_ids = np.full(len(elements), -1, dtype=np.int64)
        has_inverse = inverse_of >= 0
        self.dom_ids[has_inverse] = product[inverse_of[has_inverse], ids[has_inverse]]
        self.ran_ids[has_inverse] = product[ids[has_inverse], inverse_of[has_inverse]]
        self.cache: Dict[str, object] = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_identity(self) -> bool:
        return self.identity_id is not None

    @property
    def inverse_closed(self) -> bool:
        return bool(np.all(self.inverse_of >= 0))

    def multiply(self, a: int, b: int) -> int:
        return int(self.product[a, b])

    def is_idempotent(self, a: int) -> bool:
        return int(self.product[a, a]) == a

    def id_of(self, perm: PartialPerm) -> int:
        try:
            return self.index[perm]
        except KeyError:
            raise InputError(f"{perm.display()} is not an element of the semigroup")

    def find(self, literal) -> int:
        return self.id_of(PartialPerm.from_literal(literal))

    def zero_id(self) -> Optional[int]:
        """Id of the empty map when it belongs to S"""
        return self.index.get(PartialPerm.empty(self.degree))

    def __repr__(self) -> str:
        return f"<SemigroupTable(degree={self.degree}, size={self.size})>"
