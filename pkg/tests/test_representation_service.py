import pytest

from backend.models.algebra import AlgebraElement, Rep
from backend.models.errors import CharacteristicError, InputError, UnsupportedGroupError
from backend.models.partial_perm import PartialPerm
from backend.models.schemas import SuppliedRepsFile
from backend.services.representation_service import RepresentationService
from backend.utils.exact_fields import PrimeField


@pytest.fixture(scope="module")
def r3_green(semigroups, r3):
    return semigroups.green_structure(r3)


@pytest.fixture(scope="module")
def gf5(semigroups):
    return RepresentationService(field=PrimeField(5), semigroup_service=semigroups)


@pytest.fixture(scope="module")
def cyclic3(semigroups):
    return semigroups.generate(3, [PartialPerm([1, 2, 0])])


def test_groupoid_expansion_inverts(semigroups, representations, r3):
    a = r3.find([1, 0, None])
    expanded = representations.groupoid_expand(r3, a)
    assert len(expanded.support) == 4
    assert expanded.coefficients[a] == 1
    total = AlgebraElement()
    for b in semigroups.down_set(r3, a):
        total = total + representations.groupoid_expand(r3, b)
    assert total == AlgebraElement.basis(a)


def test_algebra_element_arithmetic(r3):
    x = AlgebraElement.combination([(1, 2), (3, -1), (1, -2)])
    assert x.support == [3]
    assert (x - x).is_zero()
    identity = AlgebraElement.basis(r3.identity_id)
    y = AlgebraElement({5: 1, 7: 3})
    assert identity.multiply(r3, y) == y
    assert y.multiply(r3, identity) == y


def test_psi_tensor_shape(representations, r3, r3_green, lambda_of_rank):
    e = lambda_of_rank(r3, 2)
    assert representations.psi_tensor(r3, r3_green, e).shape == (34, 3, 3, 2)
    units = representations.psi_tensor(r3, r3_green, r3.identity_id)
    assert units.shape == (34, 1, 1, 6)


def test_psi_of_groupoid_idempotents_are_matrix_units(representations, r3, r3_green, lambda_of_rank):
    e = lambda_of_rank(r3, 2)
    idempotents, connecting = representations.matrix_units(r3, r3_green, e)
    assert idempotents == sorted(idempotents)
    assert all(r3.dom_ids[t] == f and r3.ran_ids[t] == e for f, t in zip(idempotents, connecting))
    for i, f in enumerate(idempotents):
        image = representations.psi(r3, r3_green, e, representations.groupoid_expand(r3, f))
        for row in range(image.size):
            for col in range(image.size):
                expected = AlgebraElement.basis(e) if (row, col) == (i, i) else AlgebraElement()
                assert image.entry(row, col) == expected


def test_psi_is_multiplicative(semigroups, representations, r2, r3, r3_green):
    for e in r3_green.lambda_ids:
        assert representations.psi_homomorphism_failure(r3, r3_green, e) is None
    green = semigroups.green_structure(r2)
    for e in green.lambda_ids:
        assert representations.psi_homomorphism_failure(r2, green, e) is None


def test_group_matrix_product_matches_table(representations, r3, r3_green, lambda_of_rank):
    e = lambda_of_rank(r3, 2)
    psi = lambda a: representations.psi(r3, r3_green, e, AlgebraElement.basis(a))
    for a in range(0, r3.size, 3):
        for b in range(0, r3.size, 4):
            assert psi(a) @ psi(b) == psi(int(r3.product[a, b]))
    assert psi(r3.zero_id()).is_zero()


def test_decomposition_is_injective(semigroups, representations, gf5, r2, r3, r3_green):
    assert representations.decomposition_rank(r3, r3_green) == 34
    assert gf5.decomposition_rank(r3, r3_green) == 34
    assert representations.decomposition_rank(r2, semigroups.green_structure(r2)) == 7


def test_r3_lifts(representations, r3, r3_green):
    lifts = representations.all_irreps(r3, r3_green)
    assert sorted(lift.degree for lift in lifts) == [1, 1, 1, 2, 3, 3, 3]
    assert sum(lift.degree ** 2 for lift in lifts) == r3.size
    for lift in lifts:
        assert representations.commutant_dimension(lift) == 1
        assert representations.multiplicativity_failure(r3, lift) is None
        assert representations.zero_block_failure(r3, r3_green, lift) is None
    matrix = representations.inequivalence_matrix(lifts)
    assert all(matrix[i][j] == int(i == j) for i in range(len(lifts)) for j in range(len(lifts)))


def test_lift_of_groupoid_idempotent(representations, r3, r3_green, lambda_of_rank):
    e = lambda_of_rank(r3, 1)
    rho = representations.builtin_irreps(r3, r3_green, e)[0]
    lift = representations.lift(r3, r3_green, rho)
    image = representations.lift_of(lift, representations.groupoid_expand(r3, e))
    assert representations.field.equal(image @ image, image)
    assert not representations.field.is_zero(image)


def test_trivial_and_sign_are_inequivalent(semigroups, representations, r2):
    green = semigroups.green_structure(r2)
    trivial, sign = representations.builtin_irreps(r2, green, r2.identity_id)
    assert (trivial.label, sign.label) == ("partition (2,)", "partition (1, 1)")
    assert representations.intertwiner_dimension(trivial, sign) == 0
    assert representations.intertwiner_dimension(trivial, trivial) == 1


def test_regular_representation_is_reducible(semigroups, representations, r2):
    units = semigroups.maximal_subgroup(r2, r2.identity_id)
    swap = next(g for g in units.member_ids if g != r2.identity_id)
    field = representations.field
    regular = Rep(
        group=units,
        degree=2,
        images={r2.identity_id: field.identity(2), swap: field.matrix([[0, 1], [1, 0]])},
        label="regular",
    )
    assert representations.is_multiplicative(regular)
    assert representations.commutant_dimension(regular) == 2
    broken = Rep(
        group=units,
        degree=2,
        images={r2.identity_id: field.identity(2), swap: field.matrix([[1, 1], [0, 1]])},
        label="broken",
    )
    assert not representations.is_multiplicative(broken)


def test_symmetric_group_irreps(representations):
    degrees = [images[tuple(range(3))].shape[0] for _, images in representations.symmetric_group_irreps(3)]
    assert degrees == [1, 2, 1]
    assert len(representations.symmetric_group_irreps(5)) == 7
    with pytest.raises(UnsupportedGroupError):
        representations.symmetric_group_irreps(6)


def test_characteristic_guard(representations, r3, r3_green):
    assert representations.characteristic_guard(r3, r3_green, 0)
    assert representations.characteristic_guard(r3, r3_green, 5)
    assert not representations.characteristic_guard(r3, r3_green, 2)
    assert not representations.characteristic_guard(r3, r3_green, 3)
    with pytest.raises(InputError):
        representations.characteristic_guard(r3, r3_green, 4)


def test_lifts_in_positive_characteristic(semigroups, gf5, r3, r3_green):
    lifts = gf5.all_irreps(r3, r3_green)
    assert len(lifts) == 7
    assert all(gf5.commutant_dimension(lift) == 1 for lift in lifts)
    assert all(gf5.multiplicativity_failure(r3, lift) is None for lift in lifts)
    gf2 = RepresentationService(field=PrimeField(2), semigroup_service=semigroups)
    with pytest.raises(CharacteristicError):
        gf2.all_irreps(r3, r3_green)


def test_lifts_over_a_large_prime(semigroups, r3, r3_green):
    large = RepresentationService(field=PrimeField(2**61 - 1), semigroup_service=semigroups)
    lifts = large.all_irreps(r3, r3_green)
    assert len(lifts) == 7
    for lift in lifts:
        assert large.multiplicativity_failure(r3, lift) is None
        assert large.zero_block_failure(r3, r3_green, lift) is None


def test_small_semigroups(semigroups, representations, r1):
    assert len(representations.all_irreps(r1, semigroups.green_structure(r1))) == 2
    trivial = semigroups.generate(1, [PartialPerm([0])])
    assert trivial.size == 1
    lifts = representations.all_irreps(trivial, semigroups.green_structure(trivial))
    assert [lift.degree for lift in lifts] == [1]


def test_cyclic_group_needs_roots_of_unity(semigroups, representations, cyclic3):
    green = semigroups.green_structure(cyclic3)
    with pytest.raises(UnsupportedGroupError):
        representations.all_irreps(cyclic3, green)
    gf7 = RepresentationService(field=PrimeField(7), semigroup_service=semigroups)
    lifts = gf7.all_irreps(cyclic3, green)
    assert len(lifts) == 3
    assert all(gf7.multiplicativity_failure(cyclic3, lift) is None for lift in lifts)
    matrix = gf7.inequivalence_matrix(lifts)
    assert [matrix[i][i] for i in range(3)] == [1, 1, 1]
    assert matrix[0][1] == matrix[1][2] == 0


def test_supplied_representations(semigroups, representations, r2):
    green = semigroups.green_structure(r2)
    units = semigroups.maximal_subgroup(r2, r2.identity_id)
    swap = next(g for g in units.member_ids if g != r2.identity_id)

    def supplied(*signs):
        entries = [
            {"degree": 1, "images": {str(r2.identity_id): [[1]], str(swap): [[s]]}} for s in signs
        ]
        return SuppliedRepsFile.model_validate({"representations": {str(r2.identity_id): entries}})

    complete = representations.supplied_reps(r2, green, supplied(1, -1))
    assert len(representations.all_irreps(r2, green, complete)) == 4

    incomplete = representations.supplied_reps(r2, green, supplied(1))
    with pytest.raises(InputError):
        representations.all_irreps(r2, green, incomplete)
    redundant = representations.supplied_reps(r2, green, supplied(1, 1))
    with pytest.raises(InputError):
        representations.all_irreps(r2, green, redundant)
    not_lambda = SuppliedRepsFile.model_validate({"representations": {str(swap): []}})
    with pytest.raises(InputError):
        representations.supplied_reps(r2, green, not_lambda)
    named = {"degree": 1, "images": {str(r2.identity_id): [[1]], "swap": [[1]]}}
    named_member = SuppliedRepsFile.model_validate({"representations": {str(r2.identity_id): [named]}})
    with pytest.raises(InputError, match="swap"):
        representations.supplied_reps(r2, green, named_member)
