"""
Semigroup Service - enumeration, Green structure, maximal subgroups and the natural order
"""

import logging
from math import comb, factorial, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from backend.models.errors import InputError, NotInverseError, ResourceCapError
from backend.models.partial_perm import UNDEFINED, PartialPerm, compose, inverse
from backend.models.schemas import GreenStructure, InverseCheck, LambdaRule, MaximalSubgroup
from backend.models.semigroup_table import SemigroupTable
from backend.utils.union_find import UnionFind, blocks_from_labels

logger = logging.getLogger(__name__)

# codes are base-(degree+1) integers and must fit in int64
MAX_DEGREE = 15


class SemigroupService:
    def __init__(self, element_cap: int = 1_000_000, table_memory_mb: int = 4096):
        self.element_cap = element_cap
        self.table_memory_mb = table_memory_mb

    def size_limit(self) -> Tuple[int, str]:
        """Largest closure allowed, and what bounds it: the element cap or the int64 product table budget"""
        table_limit = isqrt(self.table_memory_mb * 2**20 // 8)
        if table_limit < self.element_cap:
            return table_limit, f"the product table budget of {self.table_memory_mb} MB"
        return self.element_cap, f"the element cap of {self.element_cap}"

    def generate(
        self,
        degree: int,
        generators: Sequence[PartialPerm],
        close_under_inverse: bool = True,
    ) -> SemigroupTable:
        """Breadth-first closure of the generators (and their inverses) under composition"""
        if degree > MAX_DEGREE:
            raise InputError(f"Degree {degree} exceeds the supported maximum {MAX_DEGREE}")
        if not generators:
            raise InputError("At least one generator is required")
        for g in generators:
            if g.degree != degree:
                raise InputError(f"Generator {g.to_literal()} has degree {g.degree}, expected {degree}")

        seeds: List[PartialPerm] = []
        for g in generators:
            if g not in seeds:
                seeds.append(g)
        if close_under_inverse:
            for g in list(seeds):
                g_inv = inverse(g)
                if g_inv not in seeds:
                    seeds.append(g_inv)

        elements: List[PartialPerm] = []
        index: Dict[PartialPerm, int] = {}
        limit, bound_by = self.size_limit()

        def add(perm: PartialPerm) -> None:
            if perm in index:
                return
            if len(elements) >= limit:
                raise ResourceCapError(
                    f"Closure exceeds {bound_by}",
                    f"{len(elements)} elements enumerated before stopping",
                )
            index[perm] = len(elements)
            elements.append(perm)

        for g in seeds:
            add(g)
        position = 0
        while position < len(elements):
            x = elements[position]
            for g in seeds:
                add(compose(x, g))
            position += 1
        logger.debug("Closure of %d seeds on %d points has %d elements", len(seeds), degree, len(elements))

        product = self._product_table(degree, elements)
        inverse_of = self._inverse_ids(degree, elements, index)
        return SemigroupTable(
            degree=degree,
            elements=elements,
            generator_ids=[index[g] for g in seeds],
            product=product,
            inverse_of=inverse_of,
        )

    def _encode(self, degree: int, elements: Sequence[PartialPerm]) -> Tuple[np.ndarray, np.ndarray]:
        """Images with the sentinel `degree` for undefined points, and their integer codes"""
        images = np.array([p.images for p in elements], dtype=np.int64).reshape(len(elements), degree)
        images[images == UNDEFINED] = degree
        powers = (degree + 1) ** np.arange(degree, dtype=np.int64)
        return images, images @ powers

    def _product_table(self, degree: int, elements: Sequence[PartialPerm]) -> np.ndarray:
        """product[a, b] = id of a∘b, filled one row at a time"""
        size = len(elements)
        images, codes = self._encode(degree, elements)
        extended = np.full((size, degree + 1), degree, dtype=np.int64)
        extended[:, :degree] = images
        powers = (degree + 1) ** np.arange(degree, dtype=np.int64)
        order = np.argsort(codes, kind="stable")
        sorted_codes = codes[order]

        try:
            product = np.empty((size, size), dtype=np.int64)
        except MemoryError:
            raise ResourceCapError(f"No memory for a {size}x{size} product table", f"{size * size * 8} bytes requested")
        for a in range(size):
            composed = extended[a][images]
            row_codes = composed @ powers
            positions = np.searchsorted(sorted_codes, row_codes)
            positions = np.minimum(positions, size - 1)
            if not np.array_equal(sorted_codes[positions], row_codes):
                raise RuntimeError("Product table left the enumerated set; closure is incomplete")
            product[a] = order[positions]
        return product

    def _inverse_ids(self, degree: int, elements: Sequence[PartialPerm], index: Dict[PartialPerm, int]) -> np.ndarray:
        return np.array([index.get(inverse(p), -1) for p in elements], dtype=np.int64)

    def check_inverse(self, table: SemigroupTable) -> InverseCheck:
        """Every element has exactly one inverse in S, and idempotents commute"""
        product = table.product
        ids = np.arange(table.size)
        for a in range(table.size):
            aba = product[product[a, :], a]
            bab = product[product[:, a], ids]
            inverses = np.flatnonzero((aba == a) & (bab == ids))
            if len(inverses) == 0:
                return InverseCheck(
                    is_inverse=False,
                    violation=[a, -1],
                    reason=f"{table.elements[a].display()} has no inverse in S",
                )
            if len(inverses) > 1:
                return InverseCheck(
                    is_inverse=False,
                    violation=[a, int(inverses[1])],
                    reason=f"{table.elements[a].display()} has {len(inverses)} inverses",
                )
        idempotents = np.array(table.idempotent_ids, dtype=np.int64)
        block = product[np.ix_(idempotents, idempotents)]
        clash = np.argwhere(block != block.T)
        if len(clash):
            e, f = idempotents[clash[0]]
            return InverseCheck(
                is_inverse=False,
                violation=[int(e), int(f)],
                reason="idempotents do not commute",
            )
        return InverseCheck(is_inverse=True)

    def require_inverse(self, table: SemigroupTable) -> None:
        check = table.cache.get("inverse_check")
        if check is None:
            check = table.cache["inverse_check"] = self.check_inverse(table)
        if not check.is_inverse:
            raise NotInverseError("not an inverse semigroup", check.reason)

    def green_structure(self, table: SemigroupTable, rule: LambdaRule = LambdaRule.MIN_ID) -> GreenStructure:
        """H from (dom, ran); D on idempotents through connecting elements"""
        key = f"green:{rule.value}"
        if key in table.cache:
            return table.cache[key]
        self.require_inverse(table)
        dom, ran = table.dom_ids, table.ran_ids

        uf = UnionFind(table.idempotent_ids)
        for code in np.unique(dom * table.size + ran):
            uf.union(int(code // table.size), int(code % table.size))
        d_label = {a: uf.find(int(dom[a])) for a in range(table.size)}
        h_label = {a: (int(dom[a]), int(ran[a])) for a in range(table.size)}
        green = self._assemble(table, d_label, h_label, rule)
        table.cache[key] = green
        logger.debug("Green structure: %d D-classes, %d H-classes", len(green.d_classes), len(green.h_classes))
        return green

    def green_structure_from_ideals(self, table: SemigroupTable, rule: LambdaRule = LambdaRule.MIN_ID) -> GreenStructure:
        """Definitional D: join of L (equal S¹a) and R (equal aS¹)"""
        product = table.product
        left_key, right_key = {}, {}
        for a in range(table.size):
            left = np.unique(np.append(product[:, a], a))
            right = np.unique(np.append(product[a, :], a))
            left_key[a] = left.tobytes()
            right_key[a] = right.tobytes()

        uf = UnionFind(range(table.size))
        for labels in (left_key, right_key):
            first_seen: Dict[bytes, int] = {}
            for a, label in labels.items():
                uf.union(a, first_seen.setdefault(label, a))
        d_label = {a: uf.find(a) for a in range(table.size)}
        h_label = {a: (left_key[a], right_key[a]) for a in range(table.size)}
        return self._assemble(table, d_label, h_label, rule)

    def _assemble(self, table: SemigroupTable, d_label: Dict, h_label: Dict, rule: LambdaRule) -> GreenStructure:
        idempotents = set(table.idempotent_ids)
        d_blocks = blocks_from_labels(d_label)
        idempotents_by_class = [[a for a in block if a in idempotents] for block in d_blocks]
        if any(not found for found in idempotents_by_class):
            raise NotInverseError("not an inverse semigroup", "a D-class without idempotents")
        # D-classes are ordered by their smallest idempotent under every rule
        order = sorted(range(len(d_blocks)), key=lambda i: idempotents_by_class[i][0])
        d_blocks = [d_blocks[i] for i in order]
        idempotents_by_class = [idempotents_by_class[i] for i in order]

        d_class_of = [0] * table.size
        for index, block in enumerate(d_blocks):
            for a in block:
                d_class_of[a] = index
        h_blocks = blocks_from_labels(h_label)
        h_class_of = [0] * table.size
        for index, block in enumerate(h_blocks):
            for a in block:
                h_class_of[a] = index
        pick = min if rule == LambdaRule.MIN_ID else max
        return GreenStructure(
            d_classes=d_blocks,
            h_classes=h_blocks,
            d_class_of=d_class_of,
            h_class_of=h_class_of,
            d_class_of_idempotent={e: d_class_of[e] for e in sorted(idempotents)},
            lambda_ids=[pick(found) for found in idempotents_by_class],
            idempotents_by_class=idempotents_by_class,
            rule=rule,
        )

    def maximal_subgroup(self, table: SemigroupTable, e: int, green: Optional[GreenStructure] = None) -> MaximalSubgroup:
        """G(e) = {a | dom(a) = e = ran(a)} with its Cayley table"""
        if not table.is_idempotent(e):
            raise InputError(f"Element {e} is not idempotent")
        cached = table.cache.setdefault("subgroups", {})
        if e in cached:
            return cached[e]
        green = green if green is not None else self.green_structure(table)
        members = [int(a) for a in np.flatnonzero((table.dom_ids == e) & (table.ran_ids == e))]
        position = {a: i for i, a in enumerate(members)}
        group_product = [[position[int(table.product[a, b])] for b in members] for a in members]
        subgroup = MaximalSubgroup(
            base_idempotent=e,
            member_ids=members,
            group_product=group_product,
            idempotent_count=len(green.idempotents_by_class[green.d_class_of[e]]),
        )
        cached[e] = subgroup
        return subgroup

    def connecting_elements(self, table: SemigroupTable, f: int, e: int) -> List[int]:
        """Every t with dom(t) = f and ran(t) = e, ascending"""
        for x in (f, e):
            if not table.is_idempotent(x):
                raise InputError(f"Element {x} is not idempotent")
        self.require_inverse(table)
        return [int(t) for t in np.flatnonzero((table.dom_ids == f) & (table.ran_ids == e))]

    def connecting_element(self, table: SemigroupTable, f: int, e: int) -> int:
        """Minimal-id t with dom(t) = f and ran(t) = e"""
        lookup = self._connecting_lookup(table)
        if (f, e) not in lookup:
            for x in (f, e):
                if not table.is_idempotent(x):
                    raise InputError(f"Element {x} is not idempotent")
            raise InputError(f"Idempotents {f} and {e} are not D-related")
        return lookup[(f, e)]

    def _connecting_lookup(self, table: SemigroupTable) -> Dict[Tuple[int, int], int]:
        if "connecting" not in table.cache:
            self.require_inverse(table)
            codes = table.dom_ids * table.size + table.ran_ids
            unique, first = np.unique(codes, return_index=True)
            table.cache["connecting"] = {
                (int(code // table.size), int(code % table.size)): int(t) for code, t in zip(unique, first)
            }
        return table.cache["connecting"]

    def sigma_t(self, table: SemigroupTable, t: int, a: int) -> int:
        """t·a·t⁻¹, the isomorphism G(dom t) → G(ran t)"""
        self.require_inverse(table)
        f = int(table.dom_ids[t])
        if table.dom_ids[a] != f or table.ran_ids[a] != f:
            raise InputError(f"Element {a} is not in G({f}) for connecting element {t}")
        return int(table.product[table.product[t, a], table.inverse_of[t]])

    def natural_leq(self, table: SemigroupTable, b: int, a: int) -> bool:
        """b ≤ a iff b = a·dom(b)"""
        self.require_inverse(table)
        return int(table.product[a, table.dom_ids[b]]) == b

    def down_set(self, table: SemigroupTable, a: int) -> List[int]:
        self.require_inverse(table)
        below = table.product[a, table.dom_ids] == np.arange(table.size)
        return [int(b) for b in np.flatnonzero(below)]

    def mobius(self, table: SemigroupTable, b: int, a: int) -> int:
        """μ(b, a) of the natural order: μ(a,a) = 1, μ(b,a) = -Σ_{b<c≤a} μ(c,a)"""
        if not self.natural_leq(table, b, a):
            raise InputError(f"Element {b} is not below {a} in the natural order")
        return self.mobius_column(table, a)[b]

    def mobius_column(self, table: SemigroupTable, a: int) -> Dict[int, int]:
        """μ(b, a) for every b ≤ a"""
        cached = table.cache.setdefault("mobius", {})
        if a in cached:
            return cached[a]
        below = np.array(self.down_set(table, a), dtype=np.int64)
        ranks = table.ranks[below]
        column = {a: 1}
        for b in below[np.argsort(-ranks, kind="stable")]:
            b = int(b)
            if b == a:
                continue
            # strictly above b inside [b, a]
            above = below[table.product[below, table.dom_ids[b]] == b]
            column[b] = -sum(column[int(c)] for c in above if int(c) != b)
        cached[a] = column
        return column

    def dimension_audit(self, table: SemigroupTable, green: GreenStructure) -> bool:
        """Σ over D-classes of n_e²·|G(e)| equals |S|"""
        total = 0
        for index, e in enumerate(green.lambda_ids):
            total += green.n_e(index) ** 2 * self.maximal_subgroup(table, e, green).order
        return total == table.size

    def is_full_rook_monoid(self, table: SemigroupTable) -> bool:
        n = table.degree
        return table.size == sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
