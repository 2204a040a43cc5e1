"""
Verification Service - runs every structural, conjugacy and representation invariant on one table
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from backend.models.algebra import AlgebraElement, LiftedRep, Rep
from backend.models.errors import UnsupportedGroupError
from backend.models.partial_perm import compose, natural_leq, to_rook_matrix
from backend.models.schemas import (
    AnalysisConfig,
    ConjugacyPartition,
    GreenStructure,
    InvariantResult,
    InvariantStatus,
    LambdaRule,
)
from backend.models.semigroup_table import SemigroupTable
from backend.services.conjugacy_service import ConjugacyService
from backend.services.representation_service import RepresentationService
from backend.services.semigroup_service import SemigroupService

logger = logging.getLogger(__name__)


def _result(name: str, ok: bool, detail: str = "") -> InvariantResult:
    return InvariantResult(name=name, status=InvariantStatus.PASS if ok else InvariantStatus.FAIL, detail=detail)


def _skipped(name: str, reason: str) -> InvariantResult:
    return InvariantResult(name=name, status=InvariantStatus.SKIPPED, detail=reason)


class VerificationService:
    def __init__(
        self,
        config: AnalysisConfig,
        semigroup_service: SemigroupService,
        conjugacy_service: ConjugacyService,
        representation_service: RepresentationService,
    ):
        self.config = config
        self.semigroups = semigroup_service
        self.conjugacy = conjugacy_service
        self.representations = representation_service
        self.rng = np.random.default_rng(config.seed)

    def sample_pairs(self, table: SemigroupTable) -> Tuple[np.ndarray, np.ndarray]:
        """All ordered pairs up to the exhaustive limit, else a seeded sample"""
        n = table.size
        if n <= self.config.exhaustive_limit:
            left, right = np.divmod(np.arange(n * n), n)
            return left, right
        count = self.config.sample_pairs
        return self.rng.integers(0, n, size=count), self.rng.integers(0, n, size=count)

    def primary_codes(self, table: SemigroupTable) -> np.ndarray:
        """Sorted codes a·|S| + b of all pairs with a = xy, b = yx"""
        if "primary" not in table.cache:
            n = table.size
            table.cache["primary"] = np.unique(table.product.ravel() * n + table.product.T.ravel())
        return table.cache["primary"]

    def verify(
        self,
        table: SemigroupTable,
        supplied: Optional[Dict[int, List[Rep]]] = None,
    ) -> List[InvariantResult]:
        self.semigroups.require_inverse(table)
        green = self.semigroups.green_structure(table)
        brute = self.conjugacy.s_conjugacy_bruteforce(table)
        structural = self.conjugacy.s_conjugacy_structural(table, green)

        checks: List[Callable[[], InvariantResult]] = [
            lambda: self.check_partial_perm_laws(table),
            lambda: self.check_rook_matrices(table),
            lambda: self.check_d_oracle(table, green),
            lambda: self.check_dimension_audit(table, green),
            lambda: self.check_sigma_isomorphisms(table, green),
            lambda: self.check_mobius(table),
            lambda: self.check_induced_group_element(table, green),
            lambda: self.check_group_elements_primary(table, green, brute),
            lambda: self.check_h_related_conjugate(table, green),
            lambda: self.check_invertible_part_conjugate(table, brute),
            lambda: self.check_mutually_inverse_witness(table, brute),
            lambda: self.check_constant_subrank(table, green, brute),
            lambda: self.check_unique_group_meeting(table, green, brute),
            lambda: self.check_connecting_independence(table, green),
            lambda: self.check_connecting_conjugate(table, green, brute),
            lambda: self.check_partitions_equal(brute, structural),
            lambda: self.check_class_count(table, green, brute),
            lambda: self.check_g_refines(table, brute),
            lambda: self.check_lambda_independence(table, brute),
            lambda: self.check_cycle_type_oracle(table, brute),
            lambda: self.check_counterexample(table),
            lambda: self.check_mobius_inversion(table),
            lambda: self.check_psi_homomorphism(table, green),
            lambda: self.check_decomposition_injective(table, green),
        ]
        results = [check() for check in checks]
        results.extend(self.check_representations(table, green, brute, supplied))
        failed = [r.name for r in results if r.status == InvariantStatus.FAIL]
        logger.info("Verified %d invariants, %d failed %s", len(results), len(failed), failed or "")
        return results

    # Elements and Green structure

    def check_partial_perm_laws(self, table: SemigroupTable) -> InvariantResult:
        name = "partial_perm_laws"
        elements = table.elements
        left, right = self.sample_pairs(table)
        for a, b in zip(left.tolist(), right.tolist()):
            if compose(elements[a], elements[b]) != elements[table.product[a, b]]:
                return _result(name, False, f"product table disagrees with composition at ({a}, {b})")
            if natural_leq(elements[b], elements[a]) != self.semigroups.natural_leq(table, b, a):
                return _result(name, False, f"natural order disagrees at ({b}, {a})")
        for a, p in enumerate(elements):
            inv = elements[table.inverse_of[a]]
            if compose(compose(p, inv), p) != p or compose(compose(inv, p), inv) != inv:
                return _result(name, False, f"inverse law fails at {a}")
        return _result(name, True, f"{len(left)} pairs")

    def check_rook_matrices(self, table: SemigroupTable) -> InvariantResult:
        name = "rook_matrix_homomorphism"
        matrices = np.array([to_rook_matrix(p) for p in table.elements])
        left, right = self.sample_pairs(table)
        products = np.einsum("pij,pjk->pik", matrices[left], matrices[right])
        bad = np.flatnonzero(np.any(products != matrices[table.product[left, right]], axis=(1, 2)))
        if len(bad):
            return _result(name, False, f"M(ab) ≠ M(a)M(b) at ({left[bad[0]]}, {right[bad[0]]})")
        return _result(name, True)

    def check_d_oracle(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        oracle = self.semigroups.green_structure_from_ideals(table)
        same = oracle.d_classes == green.d_classes and oracle.h_classes == green.h_classes
        return _result("green_ideal_oracle", same, f"{len(green.d_classes)} D-classes")

    def check_dimension_audit(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        return _result("dimension_audit", self.semigroups.dimension_audit(table, green), "Σ n_e²|G(e)| = |S|")

    def check_sigma_isomorphisms(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        name = "sigma_t_isomorphism"
        product = table.product
        for index, e in enumerate(green.lambda_ids):
            target = set(self.semigroups.maximal_subgroup(table, e, green).member_ids)
            for f in green.idempotents_by_class[index]:
                t = self.semigroups.connecting_element(table, f, e)
                source = self.semigroups.maximal_subgroup(table, f, green).member_ids
                image = {a: self.semigroups.sigma_t(table, t, a) for a in source}
                if set(image.values()) != target or len(set(image.values())) != len(source):
                    return _result(name, False, f"σ_t is not a bijection G({f}) → G({e})")
                for a in source:
                    for b in source:
                        if image[int(product[a, b])] != product[image[a], image[b]]:
                            return _result(name, False, f"σ_t not multiplicative on G({f})")
        return _result(name, True)

    def check_mobius(self, table: SemigroupTable) -> InvariantResult:
        """Closed form on Boolean intervals, defining identity elsewhere"""
        name = "mobius_closed_form"
        product, dom, ranks = table.product, table.dom_ids, table.ranks
        boolean, other = 0, 0
        for a in range(table.size):
            below = np.array(self.semigroups.down_set(table, a), dtype=np.int64)
            column = self.semigroups.mobius_column(table, a)
            for b in below.tolist():
                interval = below[product[below, dom[b]] == b]
                diff = int(ranks[a] - ranks[b])
                if len(interval) == 2 ** diff:
                    boolean += 1
                    if column[b] != (-1) ** diff:
                        return _result(name, False, f"μ({b}, {a}) = {column[b]}, expected {(-1) ** diff}")
                elif b != a:
                    other += 1
                    if sum(column[int(c)] for c in interval) != 0:
                        return _result(name, False, f"Σ μ over [{b}, {a}] ≠ 0")
        return _result(name, True, f"{boolean} Boolean intervals, {other} checked by the defining identity")

    # Conjugacy

    def check_induced_group_element(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        name = "invertible_part_in_group"
        induced = self.conjugacy.induced_idempotents(table)
        ids = np.arange(table.size)
        parts = table.product[ids, induced]
        commute = np.array_equal(parts, table.product[induced, ids])
        h_class_of = np.array(green.h_class_of)
        same_h = np.array_equal(h_class_of[parts], h_class_of[induced])
        return _result(name, commute and same_h, "a·e_a = e_a·a and a·e_a H e_a")

    def _group_elements(self, table: SemigroupTable) -> np.ndarray:
        return np.flatnonzero(table.dom_ids == table.ran_ids)

    def check_group_elements_primary(
        self, table: SemigroupTable, green: GreenStructure, brute: ConjugacyPartition
    ) -> InvariantResult:
        """Conjugate group elements are D-related and primarily conjugate"""
        name = "group_elements_primary"
        codes = self.primary_codes(table)
        class_of = brute.class_of()
        groups = self._group_elements(table)
        by_class: Dict[int, List[int]] = {}
        for a in groups.tolist():
            by_class.setdefault(class_of[a], []).append(a)
        for members in by_class.values():
            members = np.array(members, dtype=np.int64)
            if len({green.d_class_of[a] for a in members.tolist()}) != 1:
                return _result(name, False, f"class of {members[0]} spans several D-classes")
            pair_codes = (members[:, None] * table.size + members[None, :]).ravel()
            if not np.all(np.isin(pair_codes, codes)):
                return _result(name, False, f"class of {members[0]} holds group elements not primarily conjugate")
        return _result(name, True, f"{len(groups)} group elements")

    def check_h_related_conjugate(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        """H-related primarily conjugate group elements are conjugate inside H_{e_a}"""
        name = "h_related_conjugate"
        product, inverse_of = table.product, table.inverse_of
        groups = set(self._group_elements(table).tolist())
        checked = 0
        for code in self.primary_codes(table).tolist():
            a, b = divmod(code, table.size)
            if a not in groups or b not in groups or green.h_class_of[a] != green.h_class_of[b]:
                continue
            checked += 1
            members = np.array(self.semigroups.maximal_subgroup(table, int(table.dom_ids[a]), green).member_ids)
            if not np.any(product[product[members, b], inverse_of[members]] == a):
                return _result(name, False, f"no h with {a} = h·{b}·h⁻¹")
        return _result(name, True, f"{checked} pairs")

    def check_invertible_part_conjugate(self, table: SemigroupTable, brute: ConjugacyPartition) -> InvariantResult:
        class_of = brute.class_of()
        failures = [
            a for a in range(table.size) if class_of[a] != class_of[self.conjugacy.invertible_part(table, a)]
        ]
        return _result("invertible_part_conjugate", not failures, f"a ≁ a·e_a at {failures[0]}" if failures else "")

    def check_mutually_inverse_witness(self, table: SemigroupTable, brute: ConjugacyPartition) -> InvariantResult:
        name = "mutually_inverse_witness"
        class_of = brute.class_of()
        left, right = self.sample_pairs(table)
        for a, b in zip(left.tolist(), right.tolist()):
            found = self.conjugacy.mutually_inverse_witness(table, a, b) is not None
            if found != (class_of[a] == class_of[b]):
                return _result(name, False, f"witness {'found' if found else 'missing'} for ({a}, {b})")
        return _result(name, True, f"{len(left)} pairs")

    def check_constant_subrank(
        self, table: SemigroupTable, green: GreenStructure, brute: ConjugacyPartition
    ) -> InvariantResult:
        varying = [
            c.representative
            for c in brute.classes
            if len({self.conjugacy.subrank(table, green, a) for a in c.members}) != 1
        ]
        return _result("constant_subrank", not varying, f"class of {varying[0]}" if varying else "")

    def check_unique_group_meeting(
        self, table: SemigroupTable, green: GreenStructure, brute: ConjugacyPartition
    ) -> InvariantResult:
        """Each class meets exactly one G(e), e ∈ Λ, namely its subrank"""
        name = "unique_group_meeting"
        lambdas = set(green.lambda_ids)
        for c in brute.classes:
            met = {
                int(table.dom_ids[a])
                for a in c.members
                if table.dom_ids[a] == table.ran_ids[a] and int(table.dom_ids[a]) in lambdas
            }
            if met != {c.subrank}:
                return _result(name, False, f"class of {c.representative} meets G(e) for e in {sorted(met)}")
        return _result(name, True)

    def check_connecting_independence(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        """Every connecting element gives the same group class"""
        name = "connecting_element_independence"
        for data in self.conjugacy.induced_data(table, green):
            subgroup = self.semigroups.maximal_subgroup(table, data.subrank, green)
            lookup = self.conjugacy.group_class_lookup(table, subgroup)
            classes = {
                lookup[self.semigroups.sigma_t(table, t, data.invertible_part)]
                for t in self.semigroups.connecting_elements(table, data.induced_idempotent, data.subrank)
            }
            if len(classes) != 1:
                return _result(name, False, f"element {data.element} lands in {len(classes)} group classes")
        return _result(name, True)

    def check_connecting_conjugate(
        self, table: SemigroupTable, green: GreenStructure, brute: ConjugacyPartition
    ) -> InvariantResult:
        """t·a·t⁻¹ ∼ a for every t from e_a to the subrank idempotent"""
        name = "connecting_conjugate_in_class"
        class_of = brute.class_of()
        checked = 0
        for data in self.conjugacy.induced_data(table, green):
            a = data.element
            for t in self.semigroups.connecting_elements(table, data.induced_idempotent, data.subrank):
                conjugated = int(table.product[table.product[t, a], table.inverse_of[t]])
                checked += 1
                if class_of[conjugated] != class_of[a]:
                    return _result(name, False, f"t = {t} sends {a} to {conjugated} outside its class")
        return _result(name, True, f"{checked} conjugates")

    def check_partitions_equal(self, brute: ConjugacyPartition, structural: ConjugacyPartition) -> InvariantResult:
        return _result(
            "structural_equals_bruteforce",
            brute.blocks() == structural.blocks(),
            f"{brute.count} vs {structural.count} classes",
        )

    def group_class_sum(self, table: SemigroupTable, green: GreenStructure) -> int:
        return sum(
            len(self.conjugacy.group_conjugacy_classes(table, self.semigroups.maximal_subgroup(table, e, green)))
            for e in green.lambda_ids
        )

    def check_class_count(
        self, table: SemigroupTable, green: GreenStructure, brute: ConjugacyPartition
    ) -> InvariantResult:
        total = self.group_class_sum(table, green)
        return _result("class_count_equals_group_classes", brute.count == total, f"{brute.count} = Σ #cc(G(e)) = {total}")

    def check_g_refines(self, table: SemigroupTable, brute: ConjugacyPartition) -> InvariantResult:
        name = "g_conjugacy_refines"
        if not table.has_identity:
            return _skipped(name, "no identity element")
        class_of = brute.class_of()
        g_partition = self.conjugacy.g_conjugacy(table)
        split = [block[0] for block in g_partition.blocks() if len({class_of[a] for a in block}) != 1]
        return _result(name, not split, f"{g_partition.count} ∼_G classes, {brute.count} ∼ classes")

    def check_lambda_independence(self, table: SemigroupTable, brute: ConjugacyPartition) -> InvariantResult:
        green_max = self.semigroups.green_structure(table, LambdaRule.MAX_ID)
        other = self.conjugacy.s_conjugacy_structural(table, green_max)
        return _result("lambda_rule_independence", other.count == brute.count, f"max-id rule gives {other.count}")

    def check_cycle_type_oracle(self, table: SemigroupTable, brute: ConjugacyPartition) -> InvariantResult:
        name = "cycle_type_oracle"
        if not self.semigroups.is_full_rook_monoid(table):
            return _skipped(name, "not a full rook monoid")
        oracle = self.conjugacy.cycle_type_partition(table)
        return _result(name, oracle.blocks() == brute.blocks(), f"{oracle.count} cycle types")

    def check_counterexample(self, table: SemigroupTable) -> InvariantResult:
        name = "counterexample_check"
        if table.degree != 3 or not self.semigroups.is_full_rook_monoid(table):
            return _skipped(name, "needs R₃")
        report = self.conjugacy.counterexample_check(table)
        return _result(name, report.passed, f"t·(31)[2]·t⁻¹ = {table.elements[report.conjugated].display()}")

    # Algebra decomposition

    def check_mobius_inversion(self, table: SemigroupTable) -> InvariantResult:
        for a in range(table.size):
            total = AlgebraElement()
            for b in self.semigroups.down_set(table, a):
                total = total + self.representations.groupoid_expand(table, b)
            if total != AlgebraElement.basis(a):
                return _result("mobius_inversion", False, f"Σ_(b ≤ a) ⌊b⌋ ≠ a at {a}")
        return _result("mobius_inversion", True)

    def check_psi_homomorphism(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        for e in green.lambda_ids:
            failure = self.representations.psi_homomorphism_failure(table, green, e)
            if failure is not None:
                return _result("psi_homomorphism", False, f"ψ_{e} fails on {failure}")
        scope = "all pairs" if table.size <= self.config.exhaustive_limit else "generator pairs"
        return _result("psi_homomorphism", True, scope)

    def check_decomposition_injective(self, table: SemigroupTable, green: GreenStructure) -> InvariantResult:
        rank = self.representations.decomposition_rank(table, green)
        return _result("decomposition_injective", rank == table.size, f"rank {rank} of {table.size}")

    # Representations

    def check_representations(
        self,
        table: SemigroupTable,
        green: GreenStructure,
        brute: ConjugacyPartition,
        supplied: Optional[Dict[int, List[Rep]]],
    ) -> List[InvariantResult]:
        names = [
            "lift_multiplicativity",
            "lift_irreducible",
            "lift_pairwise_inequivalent",
            "degree_identity",
            "zero_block",
            "bijection",
        ]
        if self.config.skip_reps:
            return [_skipped(name, "representations skipped") for name in names]
        try:
            lifts = self.representations.all_irreps(table, green, supplied)
        except UnsupportedGroupError as e:
            return [_skipped(name, e.message) for name in names]
        return self.check_lifts(table, green, brute, lifts)

    def check_lifts(
        self,
        table: SemigroupTable,
        green: GreenStructure,
        brute: ConjugacyPartition,
        lifts: List[LiftedRep],
    ) -> List[InvariantResult]:
        results = []
        failures = [(lift.label, self.representations.multiplicativity_failure(table, lift)) for lift in lifts]
        failures = [(label, pair) for label, pair in failures if pair is not None]
        results.append(
            _result("lift_multiplicativity", not failures, f"{failures[0][0]} at {failures[0][1]}" if failures else "")
        )

        matrix = self.representations.inequivalence_matrix(lifts)
        irreducible = all(matrix[i][i] == 1 for i in range(len(lifts)))
        inequivalent = all(matrix[i][j] == 0 for i in range(len(lifts)) for j in range(len(lifts)) if i != j)
        results.append(_result("lift_irreducible", irreducible, f"{len(lifts)} commutant solves"))
        results.append(_result("lift_pairwise_inequivalent", inequivalent))

        square_sum = sum(lift.degree ** 2 for lift in lifts)
        if self.representations.field.characteristic == 0:
            results.append(_result("degree_identity", square_sum == table.size, f"Σ deg² = {square_sum}"))
        else:
            results.append(_skipped("degree_identity", "positive characteristic"))

        nonzero = [
            (lift.label, a)
            for lift in lifts
            for a in [self.representations.zero_block_failure(table, green, lift)]
            if a is not None
        ]
        results.append(_result("zero_block", not nonzero, f"{nonzero[0][0]} at {nonzero[0][1]}" if nonzero else ""))

        certified = len(lifts) if irreducible and inequivalent else -1
        results.append(_result("bijection", certified == brute.count, f"{len(lifts)} lifts, {brute.count} classes"))
        return results
