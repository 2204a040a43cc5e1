"""
Representation Service - semigroup algebra decomposition, lifted representations and their certificates
"""

import logging
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from backend.models.algebra import AlgebraElement, GroupMatrix, LiftedRep, Rep
from backend.models.errors import CharacteristicError, InputError, UnsupportedGroupError
from backend.models.schemas import FieldKind, GreenStructure, MaximalSubgroup, SuppliedRepsFile
from backend.models.semigroup_table import SemigroupTable
from backend.services.semigroup_service import SemigroupService
from backend.utils.exact_fields import RationalField, ScalarField, intertwiner_nullity
from backend.utils.young_tableaux import Partition, generate_partitions, seminormal_images

logger = logging.getLogger(__name__)

MAX_SYMMETRIC_DEGREE = 5

AnyRep = Union[Rep, LiftedRep]


class RepresentationService:
    def __init__(
        self,
        field: Optional[ScalarField] = None,
        semigroup_service: Optional[SemigroupService] = None,
        exhaustive_limit: int = 250,
    ):
        self.field = field or RationalField()
        self.semigroups = semigroup_service or SemigroupService()
        self.exhaustive_limit = exhaustive_limit

    # Decomposition

    def groupoid_expand(self, table: SemigroupTable, a: int) -> AlgebraElement:
        """⌊a⌋ = Σ_{b ≤ a} μ(b, a)·b"""
        return AlgebraElement(self.semigroups.mobius_column(table, a))

    def _lambda_index(self, green: GreenStructure, e: int) -> int:
        if e not in green.lambda_ids:
            raise InputError(f"Element {e} is not in Λ {green.lambda_ids}")
        return green.lambda_ids.index(e)

    def matrix_units(self, table: SemigroupTable, green: GreenStructure, e: int) -> Tuple[List[int], List[int]]:
        """Idempotents f_1..f_n of D_e by ascending id, and t_i with dom t_i = f_i, ran t_i = e"""
        idempotents = green.idempotents_by_class[self._lambda_index(green, e)]
        return idempotents, [self.semigroups.connecting_element(table, f, e) for f in idempotents]

    def psi_tensor(self, table: SemigroupTable, green: GreenStructure, e: int) -> np.ndarray:
        """T[a, i, j, g]: coefficient of g·E_ij in ψ_e(a) for every basis element a"""
        cached = table.cache.setdefault("psi", {})
        if e in cached:
            return cached[e]
        idempotents, connecting = self.matrix_units(table, green, e)
        row = {f: i for i, f in enumerate(idempotents)}
        subgroup = self.semigroups.maximal_subgroup(table, e, green)
        position = {g: k for k, g in enumerate(subgroup.member_ids)}
        product, inverse_of = table.product, table.inverse_of
        dom, ran = table.dom_ids, table.ran_ids

        n = len(idempotents)
        tensor = np.zeros((table.size, n, n, subgroup.order), dtype=np.int64)
        # ⌊b⌋ for b ∈ D_e is t_i·b·t_j⁻¹ E_ij, and a = Σ_{b ≤ a} ⌊b⌋
        for b in green.d_classes[self._lambda_index(green, e)]:
            i, j = row[int(ran[b])], row[int(dom[b])]
            g = int(product[product[connecting[i], b], inverse_of[connecting[j]]])
            above = np.flatnonzero(product[:, dom[b]] == b)
            tensor[above, i, j, position[g]] += 1
        tensor.setflags(write=False)
        cached[e] = tensor
        return tensor

    def psi(self, table: SemigroupTable, green: GreenStructure, e: int, x: AlgebraElement) -> GroupMatrix:
        tensor = self.psi_tensor(table, green, e)
        coefficients = np.zeros(tensor.shape[1:], dtype=np.int64).astype(object)
        for a, c in x.coefficients.items():
            coefficients = coefficients + tensor[a].astype(object) * c
        return GroupMatrix(self.semigroups.maximal_subgroup(table, e, green), coefficients)

    def regular_psi(self, table: SemigroupTable, green: GreenStructure, e: int) -> np.ndarray:
        """ψ_e of every basis element composed with the regular representation of G(e), as integer matrices"""
        tensor = self.psi_tensor(table, green, e)
        subgroup = self.semigroups.maximal_subgroup(table, e, green)
        order = subgroup.order
        regular = np.zeros((order, order, order), dtype=np.int64)
        for g in range(order):
            for h in range(order):
                regular[g, subgroup.group_product[g][h], h] = 1
        n = tensor.shape[1]
        stacked = np.einsum("aijg,gxy->aixjy", tensor, regular)
        return stacked.reshape(table.size, n * order, n * order)

    def decomposition_rank(self, table: SemigroupTable, green: GreenStructure) -> int:
        """Rank of a ↦ ⊕_e ψ_e(a); equals |S| iff the decomposition map is injective"""
        rows = np.concatenate(
            [self.psi_tensor(table, green, e).reshape(table.size, -1) for e in green.lambda_ids], axis=1
        )
        if self.field.kind == FieldKind.PRIME:
            return self.field.rank(self.field.gf(rows % self.field.characteristic))
        rational = RationalField()
        system = rows.astype(object)
        lower = rational.modular_rank(system)
        if lower == min(system.shape):
            return lower
        return rational.rank(system)

    # Group representations

    def is_multiplicative(self, rep: Rep) -> bool:
        members = rep.group.member_ids
        if not self.field.equal(rep.image(rep.group.base_idempotent), self.field.identity(rep.degree)):
            return False
        for gi, g in enumerate(members):
            for hi, h in enumerate(members):
                gh = members[rep.group.group_product[gi][hi]]
                if not self.field.equal(rep.image(g) @ rep.image(h), rep.image(gh)):
                    return False
        return True

    def symmetric_group_irreps(self, k: int) -> List[Tuple[Partition, Dict[Tuple[int, ...], np.ndarray]]]:
        """One seminormal representation of S_k per partition, images keyed by one-line permutation"""
        if k > MAX_SYMMETRIC_DEGREE:
            raise UnsupportedGroupError(
                f"Built-in irreducibles of S_{k} are not supported (k ≤ {MAX_SYMMETRIC_DEGREE}); supply them instead"
            )
        irreps = []
        for shape in generate_partitions(k):
            images = {perm: self.field.matrix(matrix) for perm, matrix in seminormal_images(shape).items()}
            irreps.append((shape, images))
        return irreps

    def _element_order(self, subgroup: MaximalSubgroup, g: int) -> int:
        table = subgroup.group_product
        identity = subgroup.member_ids.index(subgroup.base_idempotent)
        power, order = g, 1
        while power != identity:
            power = table[power][g]
            order += 1
        return order

    def builtin_irreps(self, table: SemigroupTable, green: GreenStructure, e: int) -> List[Rep]:
        """Trivial, full symmetric (k ≤ 5) and split cyclic maximal subgroups"""
        subgroup = self.semigroups.maximal_subgroup(table, e, green)
        order = subgroup.order
        one = self.field.identity(1)
        if order == 1:
            return [Rep(group=subgroup, degree=1, images={e: one}, label="trivial")]

        support = sorted(table.elements[e].domain)
        k = len(support)
        if order == factorial(k) and k <= MAX_SYMMETRIC_DEGREE:
            place = {x: i for i, x in enumerate(support)}
            as_perm = {
                g: tuple(place[table.elements[g](x)] for x in support) for g in subgroup.member_ids
            }
            reps = []
            for shape, images in self.symmetric_group_irreps(k):
                reps.append(
                    Rep(
                        group=subgroup,
                        degree=images[tuple(range(k))].shape[0],
                        images={g: images[perm] for g, perm in as_perm.items()},
                        label=f"partition {shape}",
                    )
                )
            return reps

        generator = next(
            (i for i in range(order) if self._element_order(subgroup, i) == order),
            None,
        )
        if generator is not None:
            return self._cyclic_irreps(subgroup, generator)
        raise UnsupportedGroupError(
            f"G({e}) of order {order} has no built-in irreducibles; supply a complete list for it",
        )

    def _cyclic_irreps(self, subgroup: MaximalSubgroup, generator: int) -> List[Rep]:
        order = subgroup.order
        powers = [subgroup.member_ids.index(subgroup.base_idempotent)]
        for _ in range(order - 1):
            powers.append(subgroup.group_product[powers[-1]][generator])
        if self.field.kind == FieldKind.RATIONAL:
            if order != 2:
                raise UnsupportedGroupError(
                    f"Cyclic G({subgroup.base_idempotent}) of order {order} does not split over Q; "
                    "use fp:P with P ≡ 1 mod the order or supply representations"
                )
            characters = [[1, 1], [1, -1]]
            labels = ["trivial", "sign"]
        else:
            p = self.field.characteristic
            if (p - 1) % order:
                raise UnsupportedGroupError(
                    f"Cyclic G({subgroup.base_idempotent}) of order {order} does not split over GF({p}); "
                    "supply representations"
                )
            root = self.field.primitive_root_of_unity(order)
            characters = [[pow(root, i * c, p) for i in range(order)] for c in range(order)]
            labels = [f"character {c}" for c in range(order)]
        return [
            Rep(
                group=subgroup,
                degree=1,
                images={subgroup.member_ids[powers[i]]: self.field.matrix([[values[i]]]) for i in range(order)},
                label=label,
            )
            for values, label in zip(characters, labels)
        ]

    def supplied_reps(
        self, table: SemigroupTable, green: GreenStructure, supplied: SuppliedRepsFile
    ) -> Dict[int, List[Rep]]:
        """Parse a supplied representations file into Reps over the working field"""
        result = {}
        for key, entries in supplied.representations.items():
            try:
                e = int(key)
            except ValueError:
                raise InputError(f"Representation key {key!r} is not an element id")
            self._lambda_index(green, e)
            subgroup = self.semigroups.maximal_subgroup(table, e, green)
            reps = []
            for number, entry in enumerate(entries):
                images = {}
                for member, rows in entry.images.items():
                    matrix = self.field.matrix(rows)
                    if matrix.shape != (entry.degree, entry.degree):
                        raise InputError(f"Supplied representation {number} of G({e}) has a matrix of shape {matrix.shape}")
                    try:
                        images[int(member)] = matrix
                    except ValueError:
                        raise InputError(f"Supplied representation {number} of G({e}) has non-id member key {member!r}")
                if sorted(images) != subgroup.member_ids:
                    raise InputError(f"Supplied representation {number} of G({e}) does not cover G({e}) exactly")
                reps.append(Rep(group=subgroup, degree=entry.degree, images=images, label=f"supplied {number}"))
            result[e] = reps
        return result

    def validate_complete(self, subgroup: MaximalSubgroup, reps: Sequence[Rep]) -> None:
        """Supplied lists must be multiplicative, irreducible, pairwise inequivalent and complete"""
        e = subgroup.base_idempotent
        for rep in reps:
            if not self.is_multiplicative(rep):
                raise InputError(f"{rep.label} of G({e}) is not multiplicative")
            if self.commutant_dimension(rep) != 1:
                raise InputError(f"{rep.label} of G({e}) is not irreducible")
        for i, first in enumerate(reps):
            for second in reps[i + 1:]:
                if self.intertwiner_dimension(first, second) != 0:
                    raise InputError(f"{first.label} and {second.label} of G({e}) are equivalent; the list is redundant")
        square_sum = sum(rep.degree ** 2 for rep in reps)
        if square_sum != subgroup.order:
            raise InputError(f"Irreducibles of G({e}) are incomplete: Σ deg² = {square_sum}, |G({e})| = {subgroup.order}")

    # Lifting

    def lift(self, table: SemigroupTable, green: GreenStructure, rho: Rep) -> LiftedRep:
        """ρ*(a): block (i, j) is ρ(β_ij(a))"""
        e = rho.group.base_idempotent
        d_class = self._lambda_index(green, e)
        if not self.is_multiplicative(rho):
            raise InputError(f"{rho.label} of G({e}) is not multiplicative")
        tensor = self.psi_tensor(table, green, e)
        members = rho.group.member_ids
        n, d = tensor.shape[1], rho.degree
        images = []
        for a in range(table.size):
            matrix = self.field.zeros(n * d, n * d)
            for i, j, g in np.argwhere(tensor[a]):
                c = int(tensor[a, i, j, g])
                block = rho.image(members[g])
                if c != 1:
                    block = self.field.scale(c, block)
                matrix[i * d:(i + 1) * d, j * d:(j + 1) * d] += block
            images.append(matrix)
        return LiftedRep(
            source=rho,
            lambda_id=e,
            d_class=d_class,
            n_e=n,
            images=images,
            generator_ids=list(table.generator_ids),
        )

    def lift_of(self, lift: LiftedRep, x: AlgebraElement) -> np.ndarray:
        """ρ* extended linearly to the semigroup algebra"""
        total = self.field.zeros(lift.degree, lift.degree)
        for a, c in x.coefficients.items():
            total = total + self.field.scale(c, lift.images[a])
        return total

    def characteristic_guard(self, table: SemigroupTable, green: GreenStructure, p: int) -> bool:
        """p = 0, or p prime and coprime to every |G(e)|"""
        if p == 0:
            return True
        if not galois.is_prime(p):
            raise InputError(f"Characteristic {p} is not prime")
        return all(self.semigroups.maximal_subgroup(table, e, green).order % p for e in green.lambda_ids)

    def require_admissible(self, table: SemigroupTable, green: GreenStructure) -> None:
        p = self.field.characteristic
        if not self.characteristic_guard(table, green, p):
            orders = sorted({self.semigroups.maximal_subgroup(table, e, green).order for e in green.lambda_ids})
            raise CharacteristicError(
                f"characteristic {p} divides the order of a maximal subgroup",
                f"maximal subgroup orders {orders}",
            )

    def all_irreps(
        self,
        table: SemigroupTable,
        green: GreenStructure,
        supplied: Optional[Dict[int, List[Rep]]] = None,
    ) -> List[LiftedRep]:
        """Lift every irreducible of every G(e), e ∈ Λ"""
        self.require_admissible(table, green)
        supplied = supplied or {}
        lifts = []
        for e in green.lambda_ids:
            if e in supplied:
                reps = supplied[e]
                self.validate_complete(self.semigroups.maximal_subgroup(table, e, green), reps)
            else:
                reps = self.builtin_irreps(table, green, e)
            lifts.extend(self.lift(table, green, rho) for rho in reps)
        logger.info("Lifted %d representations over %s", len(lifts), self.field)
        return lifts

    # Certificates

    def _images_for_solve(self, rep: AnyRep) -> List[np.ndarray]:
        if isinstance(rep, LiftedRep):
            return [rep.images[a] for a in rep.generator_ids]
        return [rep.images[g] for g in sorted(rep.images)]

    def commutant_dimension(self, rep: AnyRep) -> int:
        images = self._images_for_solve(rep)
        return intertwiner_nullity(self.field, [(m, m) for m in images], rep.degree, rep.degree, at_least=1)

    def intertwiner_dimension(self, first: AnyRep, second: AnyRep) -> int:
        if type(first) is not type(second):
            raise InputError("Intertwiners compare two group representations or two lifted representations")
        if isinstance(first, LiftedRep):
            keys = first.generator_ids
            if keys != second.generator_ids:
                raise InputError("Lifted representations come from different tables")
            pairs = [(first.images[a], second.images[a]) for a in keys]
        else:
            if sorted(first.images) != sorted(second.images):
                raise InputError("Representations of different groups")
            pairs = [(first.images[g], second.images[g]) for g in sorted(first.images)]
        return intertwiner_nullity(self.field, pairs, first.degree, second.degree)

    def inequivalence_matrix(self, lifts: Sequence[LiftedRep]) -> List[List[int]]:
        """Entry (i, j) = dim Hom(ρ*_i, ρ*_j); the diagonal holds commutant dimensions"""
        size = len(lifts)
        matrix = [[0] * size for _ in range(size)]
        for i in range(size):
            matrix[i][i] = self.commutant_dimension(lifts[i])
            for j in range(i + 1, size):
                # semisimple: both directions have the same dimension
                matrix[i][j] = matrix[j][i] = self.intertwiner_dimension(lifts[i], lifts[j])
        return matrix

    def right_factors(self, table: SemigroupTable) -> np.ndarray:
        """All elements up to the exhaustive limit, else the generators"""
        if table.size <= self.exhaustive_limit:
            return np.arange(table.size)
        return np.array(sorted(table.generator_ids), dtype=np.int64)

    def psi_homomorphism_failure(
        self, table: SemigroupTable, green: GreenStructure, e: int
    ) -> Optional[Tuple[int, int]]:
        """First pair (a, b) with ψ_e(ab) ≠ ψ_e(a)ψ_e(b), or None"""
        images = self.regular_psi(table, green, e)
        rights = self.right_factors(table)
        for a in range(table.size):
            bad = np.any(images[a] @ images[rights] != images[table.product[a, rights]], axis=(1, 2))
            if np.any(bad):
                return a, int(rights[np.argmax(bad)])
        return None

    def multiplicativity_failure(self, table: SemigroupTable, lift: LiftedRep) -> Optional[Tuple[int, int]]:
        """First pair (a, b) with ρ*(ab) ≠ ρ*(a)ρ*(b), or None"""
        stack, scale, modulus = self.field.integer_stack(lift.images)
        rights = self.right_factors(table)
        for a in range(table.size):
            left = stack[a] @ stack[rights]
            right = stack[table.product[a, rights]] * scale
            if modulus is not None:
                left = left % modulus
            bad = np.any(left != right, axis=(1, 2))
            if np.any(bad):
                return a, int(rights[np.argmax(bad)])
        return None

    def zero_block_failure(self, table: SemigroupTable, green: GreenStructure, lift: LiftedRep) -> Optional[int]:
        """First a outside D_e with ρ*(⌊a⌋) ≠ 0, or None"""
        stack, _, modulus = self.field.integer_stack(lift.images)
        for a in range(table.size):
            if green.d_class_of[a] == lift.d_class:
                continue
            total = np.zeros(stack.shape[1:], dtype=stack.dtype)
            for b, mu in self.semigroups.mobius_column(table, a).items():
                total += mu * stack[b]
            if modulus is not None:
                total %= modulus
            if np.any(total):
                return a
        return None
