"""
Conjugacy Service - induced idempotents, subranks and the conjugacy partitions of S
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from backend.models.errors import InputError
from backend.models.partial_perm import PartialPerm, stable_rank_and_cycle_type
from backend.models.schemas import (
    ConjugacyClass,
    ConjugacyMethod,
    ConjugacyPartition,
    CounterexampleReport,
    GreenStructure,
    InducedData,
    MaximalSubgroup,
)
from backend.models.semigroup_table import SemigroupTable
from backend.services.semigroup_service import SemigroupService
from backend.utils.union_find import UnionFind, blocks_from_labels, find_orbits

logger = logging.getLogger(__name__)

# the worked example in R₃, 0-based: (32)[1], (12)[3], (31)[2] and t = 2→1, 3→2
WORKED_A = [None, 2, 1]
WORKED_CLASS = ([1, 0, None], [None, 2, 1], [2, None, 0])
WORKED_B = [2, None, 0]
WORKED_T = [None, 0, 1]


class ConjugacyService:
    def __init__(self, semigroup_service: Optional[SemigroupService] = None):
        self.semigroups = semigroup_service or SemigroupService()

    def induced_idempotents(self, table: SemigroupTable) -> np.ndarray:
        """e_a for every a: the first idempotent among a, a², ..."""
        if "induced" in table.cache:
            return table.cache["induced"]
        product = table.product
        ids = np.arange(table.size)
        powers = ids.copy()
        induced = np.full(table.size, -1, dtype=np.int64)
        for _ in range(table.size + 1):
            found = (product[powers, powers] == powers) & (induced < 0)
            induced[found] = powers[found]
            if np.all(induced >= 0):
                break
            powers = product[powers, ids]
        if np.any(induced < 0):
            raise RuntimeError("Power iteration exceeded |S| steps without reaching an idempotent")
        induced.setflags(write=False)
        table.cache["induced"] = induced
        return induced

    def induced_idempotent(self, table: SemigroupTable, a: int) -> int:
        return int(self.induced_idempotents(table)[a])

    def invertible_part(self, table: SemigroupTable, a: int) -> int:
        """a·e_a"""
        return int(table.product[a, self.induced_idempotent(table, a)])

    def subrank(self, table: SemigroupTable, green: GreenStructure, a: int) -> int:
        """The Λ member whose D-class holds a·e_a"""
        return green.lambda_of(self.invertible_part(table, a))

    def induced_data(self, table: SemigroupTable, green: GreenStructure) -> List[InducedData]:
        induced = self.induced_idempotents(table)
        data = []
        for a in range(table.size):
            part = int(table.product[a, induced[a]])
            d_class = green.d_class_of[part]
            data.append(
                InducedData(
                    element=a,
                    induced_idempotent=int(induced[a]),
                    invertible_part=part,
                    subrank_class=d_class,
                    subrank=green.lambda_ids[d_class],
                )
            )
        return data

    def group_conjugacy_classes(self, table: SemigroupTable, subgroup: MaximalSubgroup) -> List[List[int]]:
        """Classes of G(e) by conjugating with every member"""
        product, inverse_of = table.product, table.inverse_of
        return find_orbits(
            subgroup.member_ids,
            subgroup.member_ids,
            lambda g, x: int(product[product[g, x], inverse_of[g]]),
        )

    def group_class_lookup(self, table: SemigroupTable, subgroup: MaximalSubgroup) -> Dict[int, int]:
        """Member -> minimal id of its group conjugacy class"""
        cached = table.cache.setdefault("group_classes", {})
        if subgroup.base_idempotent not in cached:
            cached[subgroup.base_idempotent] = {
                member: block[0] for block in self.group_conjugacy_classes(table, subgroup) for member in block
            }
        return cached[subgroup.base_idempotent]

    def s_conjugacy_bruteforce(self, table: SemigroupTable) -> ConjugacyPartition:
        """Transitive closure of xy ~ yx over all ordered pairs"""
        product = table.product
        xy, yx = product.ravel(), product.T.ravel()
        differ = xy != yx
        codes = np.unique(np.minimum(xy[differ], yx[differ]) * table.size + np.maximum(xy[differ], yx[differ]))
        uf = UnionFind(range(table.size))
        for code in codes:
            uf.union(int(code // table.size), int(code % table.size))
        logger.debug("Brute force closure merged %d distinct primary pairs", len(codes))
        subranks = self._subranks_if_inverse(table)
        classes = [
            ConjugacyClass(
                representative=block[0],
                members=block,
                subrank=subranks[block[0]] if subranks is not None else None,
            )
            for block in uf.blocks()
        ]
        return ConjugacyPartition(method=ConjugacyMethod.BRUTE_FORCE, classes=classes)

    def _subranks_if_inverse(self, table: SemigroupTable) -> Optional[List[int]]:
        check = table.cache.get("inverse_check") or self.semigroups.check_inverse(table)
        table.cache["inverse_check"] = check
        if not check.is_inverse:
            return None
        green = self.semigroups.green_structure(table)
        return [d.subrank for d in self.induced_data(table, green)]

    def structural_labels(self, table: SemigroupTable, green: GreenStructure) -> Dict[int, Tuple[int, int]]:
        """a -> (subrank e, class of σ_t(a·e_a) in G(e)) with t connecting e_a to e"""
        labels = {}
        lookups = {
            e: self.group_class_lookup(table, self.semigroups.maximal_subgroup(table, e, green))
            for e in green.lambda_ids
        }
        for data in self.induced_data(table, green):
            e = data.subrank
            t = self.semigroups.connecting_element(table, data.induced_idempotent, e)
            image = self.semigroups.sigma_t(table, t, data.invertible_part)
            labels[data.element] = (e, lookups[e][image])
        return labels

    def s_conjugacy_structural(self, table: SemigroupTable, green: GreenStructure) -> ConjugacyPartition:
        labels = self.structural_labels(table, green)
        classes = []
        for block in blocks_from_labels(labels):
            e, witness = labels[block[0]]
            classes.append(
                ConjugacyClass(
                    representative=block[0],
                    members=block,
                    subrank=e,
                    group_class_witness=witness,
                )
            )
        return ConjugacyPartition(method=ConjugacyMethod.STRUCTURAL, classes=classes)

    def g_conjugacy(self, table: SemigroupTable) -> ConjugacyPartition:
        """Orbits of S under conjugation by the unit group"""
        if not table.has_identity:
            raise InputError("∼_G needs a monoid; the semigroup has no identity element")
        units = self.semigroups.maximal_subgroup(table, table.identity_id)
        product, inverse_of = table.product, table.inverse_of
        uf = UnionFind(range(table.size))
        for g in units.member_ids:
            conjugates = product[product[g, :], inverse_of[g]]
            for x in np.flatnonzero(conjugates != np.arange(table.size)):
                uf.union(int(x), int(conjugates[x]))
        classes = [ConjugacyClass(representative=block[0], members=block) for block in uf.blocks()]
        return ConjugacyPartition(method=ConjugacyMethod.G_CONJUGACY, classes=classes)

    def cycle_type_partition(self, table: SemigroupTable) -> ConjugacyPartition:
        """Classes by stable rank and cycle type; valid for full rook monoids only"""
        if not self.semigroups.is_full_rook_monoid(table):
            raise InputError("Cycle-type classification applies to full rook monoids only")
        labels = {a: stable_rank_and_cycle_type(p) for a, p in enumerate(table.elements)}
        classes = [ConjugacyClass(representative=block[0], members=block) for block in blocks_from_labels(labels)]
        return ConjugacyPartition(method=ConjugacyMethod.CYCLE_TYPE, classes=classes)

    def mutually_inverse_witness(self, table: SemigroupTable, a: int, b: int) -> Optional[Tuple[int, int]]:
        """u, v = u⁻¹ with a·e_a = u(b·e_b)v and b·e_b = v(a·e_a)u, minimal u"""
        self.semigroups.require_inverse(table)
        product, inverse_of = table.product, table.inverse_of
        ids = np.arange(table.size)
        part_a = self.invertible_part(table, a)
        part_b = self.invertible_part(table, b)
        first = product[product[:, part_b], inverse_of] == part_a
        second = product[product[inverse_of, part_a], ids] == part_b
        found = np.flatnonzero(first & second)
        if len(found) == 0:
            return None
        u = int(found[0])
        return u, int(inverse_of[u])

    def counterexample_check(self, table: SemigroupTable) -> CounterexampleReport:
        """t((31)[2])t⁻¹ = 0 lies outside [(32)[1]] in R₃"""
        if table.degree != 3 or not self.semigroups.is_full_rook_monoid(table):
            raise InputError("The worked counterexample needs the rook monoid R₃")
        product, inverse_of = table.product, table.inverse_of
        a = table.find(WORKED_A)
        t = table.find(WORKED_T)
        x = table.find(WORKED_B)
        zero = table.id_of(PartialPerm.empty(3))
        partition = self.s_conjugacy_bruteforce(table)
        class_of = partition.class_of()
        worked_class = partition.classes[class_of[a]].members

        conjugated = int(product[product[t, x], inverse_of[t]])
        same_t = int(product[product[t, a], inverse_of[t]])
        expected = sorted(table.find(literal) for literal in WORKED_CLASS)
        zero_in_class = class_of[zero] == class_of[a]
        same_in_class = class_of[same_t] == class_of[a]
        passed = (
            conjugated == zero
            and not zero_in_class
            and worked_class == expected
            and same_t == table.find(WORKED_CLASS[0])
            and same_in_class
        )
        return CounterexampleReport(
            t=t,
            conjugated=conjugated,
            conjugate_is_zero=conjugated == zero,
            zero_in_class=zero_in_class,
            worked_class=worked_class,
            same_t_image=same_t,
            same_t_image_in_class=same_in_class,
            passed=passed,
        )
