"""
Shared fixtures: services and the small tables most tests run against
"""

import pytest

from backend.models.partial_perm import PartialPerm
from backend.models.schemas import GeneratorFile
from backend.models.semigroup_table import SemigroupTable
from backend.services.conjugacy_service import ConjugacyService
from backend.services.representation_service import RepresentationService
from backend.services.semigroup_service import SemigroupService
from backend.utils.fixtures import builtin_generators


def table_from(semigroups: SemigroupService, generators: GeneratorFile) -> SemigroupTable:
    perms = [PartialPerm.from_literal(g) for g in generators.generators]
    return semigroups.generate(generators.degree, perms, generators.close_under_inverse)


@pytest.fixture(scope="session")
def semigroups():
    return SemigroupService()


@pytest.fixture(scope="session")
def conjugacy(semigroups):
    return ConjugacyService(semigroups)


@pytest.fixture(scope="session")
def representations(semigroups):
    return RepresentationService(semigroup_service=semigroups)


@pytest.fixture(scope="session")
def build(semigroups):
    """Table of a builtin fixture by name"""
    cache = {}

    def _build(name: str, seed: int = 0) -> SemigroupTable:
        if (name, seed) not in cache:
            cache[name, seed] = table_from(semigroups, builtin_generators(name, seed=seed))
        return cache[name, seed]

    return _build


@pytest.fixture(scope="session")
def r1(build):
    return build("rook-1")


@pytest.fixture(scope="session")
def r2(build):
    return build("rook-2")


@pytest.fixture(scope="session")
def r3(build):
    return build("rook-3")


@pytest.fixture(scope="session")
def brandt(semigroups):
    """{0→1, 1→0, id{0}, id{1}, 0}: inverse, no identity"""
    return semigroups.generate(2, [PartialPerm([1, None])])


@pytest.fixture(scope="session")
def lambda_of_rank(semigroups):
    """Λ member of the D-class of a given rank"""

    def _lambda(table: SemigroupTable, rank: int) -> int:
        green = semigroups.green_structure(table)
        return next(e for e in green.lambda_ids if table.ranks[e] == rank)

    return _lambda
