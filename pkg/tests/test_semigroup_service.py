import numpy as np
import pytest

from backend.models.errors import InputError, NotInverseError, ResourceCapError
from backend.models.partial_perm import PartialPerm
from backend.models.schemas import LambdaRule
from backend.services.semigroup_service import SemigroupService
from backend.utils.fixtures import builtin_generators


@pytest.mark.parametrize("name, size", [("rook-1", 2), ("rook-2", 7), ("rook-3", 34), ("rook-4", 209)])
def test_rook_monoid_sizes(build, semigroups, name, size):
    table = build(name)
    assert table.size == size
    assert semigroups.is_full_rook_monoid(table)
    assert table.has_identity


def test_other_builtin_sizes(build, semigroups):
    assert build("sym-3").size == 6
    assert build("sym-4").size == 24
    assert not semigroups.is_full_rook_monoid(build("sym-3"))
    chain = build("chain-4")
    assert chain.size == 4
    assert chain.zero_id() is not None


def test_chain_is_not_inverse(build, semigroups):
    chain = build("chain-4")
    check = semigroups.check_inverse(chain)
    assert not check.is_inverse
    assert check.violation[1] == -1
    with pytest.raises(NotInverseError):
        semigroups.green_structure(chain)


def test_inverse_closure_flag(semigroups):
    # 1→2 alone: {a, 0} without its inverse, the Brandt semigroup with it
    a = PartialPerm([1, None])
    bare = semigroups.generate(2, [a], close_under_inverse=False)
    assert bare.size == 2
    assert not bare.inverse_closed
    assert not semigroups.check_inverse(bare).is_inverse
    closed = semigroups.generate(2, [a])
    assert closed.size == 5
    assert semigroups.check_inverse(closed).is_inverse


def test_generate_errors(semigroups):
    with pytest.raises(InputError):
        semigroups.generate(3, [PartialPerm([0, 1])])
    with pytest.raises(InputError):
        semigroups.generate(2, [])
    with pytest.raises(ResourceCapError):
        SemigroupService(element_cap=10).generate(3, [PartialPerm([1, 0, 2]), PartialPerm([1, 2, 0]), PartialPerm([0, 1, None])])


def test_product_table_budget():
    budgeted = SemigroupService(table_memory_mb=1)
    assert budgeted.size_limit()[0] == 362
    assert SemigroupService(element_cap=100, table_memory_mb=1).size_limit() == (100, "the element cap of 100")
    rook5 = [PartialPerm.from_literal(g) for g in builtin_generators("rook-5").generators]
    with pytest.raises(ResourceCapError):
        budgeted.generate(5, rook5)


def test_table_allocation_failure_is_a_resource_cap(monkeypatch):
    def refuse(*args, **kwargs):
        raise MemoryError

    monkeypatch.setattr(np, "empty", refuse)
    with pytest.raises(ResourceCapError):
        SemigroupService().generate(2, [PartialPerm([1, 0])])


def test_product_table_matches_composition(r3):
    for a in range(r3.size):
        for b in range(0, r3.size, 5):
            assert r3.elements[r3.product[a, b]] == r3.elements[a] * r3.elements[b]
    assert r3.multiply(r3.identity_id, 7) == 7


def test_idempotents_and_inverses(r3):
    assert len(r3.idempotent_ids) == 8
    assert r3.inverse_closed
    for a in range(r3.size):
        assert r3.elements[r3.inverse_of[a]] == r3.elements[a].inverse()
        assert r3.elements[r3.dom_ids[a]] == r3.elements[a].domain_of()
        assert r3.elements[r3.ran_ids[a]] == r3.elements[a].range_of()


def test_green_structure_of_r3(semigroups, r3):
    green = semigroups.green_structure(r3)
    summary = sorted(
        (int(r3.ranks[e]), green.n_e(i), semigroups.maximal_subgroup(r3, e, green).order)
        for i, e in enumerate(green.lambda_ids)
    )
    assert summary == [(0, 1, 1), (1, 3, 1), (2, 3, 2), (3, 1, 6)]
    assert len(green.h_classes) == 1 + 9 + 9 + 1
    assert semigroups.dimension_audit(r3, green)
    # every D-class of a rook monoid is a rank
    for block in green.d_classes:
        assert len({int(r3.ranks[a]) for a in block}) == 1


def test_green_oracle_and_lambda_rule(semigroups, r3):
    green = semigroups.green_structure(r3)
    oracle = semigroups.green_structure_from_ideals(r3)
    assert oracle.d_classes == green.d_classes
    assert oracle.h_classes == green.h_classes
    maximal = semigroups.green_structure(r3, LambdaRule.MAX_ID)
    assert maximal.d_classes == green.d_classes
    assert all(min_e <= max_e for min_e, max_e in zip(green.lambda_ids, maximal.lambda_ids))
    assert maximal.lambda_ids != green.lambda_ids


def test_maximal_subgroups(semigroups, r3):
    units = semigroups.maximal_subgroup(r3, r3.identity_id)
    assert units.order == 6
    assert units.idempotent_count == 1
    e = r3.find([None, 1, 2])
    group = semigroups.maximal_subgroup(r3, e)
    assert group.order == 2
    assert group.idempotent_count == 3
    assert r3.find([None, 2, 1]) in group.member_ids
    with pytest.raises(InputError):
        semigroups.maximal_subgroup(r3, r3.find([None, 2, 1]))


def test_connecting_elements(semigroups, r3):
    f = r3.find([0, 1, None])
    e = r3.find([None, 1, 2])
    t = semigroups.connecting_element(r3, f, e)
    assert r3.dom_ids[t] == f and r3.ran_ids[t] == e
    witnesses = semigroups.connecting_elements(r3, f, e)
    assert t == witnesses[0]
    assert len(witnesses) == 2
    with pytest.raises(InputError):
        semigroups.connecting_element(r3, r3.identity_id, r3.zero_id())
    with pytest.raises(InputError):
        semigroups.connecting_element(r3, r3.find([None, 2, 1]), e)


def test_sigma_t_maps_group_onto_group(semigroups, r3):
    f = r3.find([0, 1, None])
    e = r3.find([None, 1, 2])
    t = semigroups.connecting_element(r3, f, e)
    source = semigroups.maximal_subgroup(r3, f).member_ids
    target = semigroups.maximal_subgroup(r3, e).member_ids
    assert sorted(semigroups.sigma_t(r3, t, a) for a in source) == target
    with pytest.raises(InputError):
        semigroups.sigma_t(r3, t, e)


def test_natural_order_and_down_sets(semigroups, r3):
    assert sorted(semigroups.down_set(r3, r3.identity_id)) == sorted(r3.idempotent_ids)
    a = r3.find([1, 0, None])
    assert len(semigroups.down_set(r3, a)) == 4
    assert semigroups.natural_leq(r3, r3.find([1, None, None]), a)
    assert not semigroups.natural_leq(r3, a, r3.find([1, None, None]))


def test_mobius(semigroups, r3):
    zero = r3.zero_id()
    assert semigroups.mobius(r3, zero, r3.identity_id) == -1
    assert semigroups.mobius(r3, r3.identity_id, r3.identity_id) == 1
    b = r3.find([1, None, None])
    assert semigroups.mobius(r3, zero, b) == -1
    column = semigroups.mobius_column(r3, r3.find([1, 0, None]))
    assert sorted(column.values()) == [-1, -1, 1, 1]
    with pytest.raises(InputError):
        semigroups.mobius(r3, r3.identity_id, zero)


def test_mobius_closed_form_on_r3(semigroups, r3):
    for a in range(r3.size):
        for b, mu in semigroups.mobius_column(r3, a).items():
            assert mu == (-1) ** int(r3.ranks[a] - r3.ranks[b])


def test_brandt_semigroup_has_no_identity(semigroups, brandt):
    assert brandt.size == 5
    assert not brandt.has_identity
    green = semigroups.green_structure(brandt)
    assert sorted(green.n_e(i) for i in range(len(green.lambda_ids))) == [1, 2]
    assert semigroups.dimension_audit(brandt, green)
    assert np.all(brandt.inverse_of >= 0)
