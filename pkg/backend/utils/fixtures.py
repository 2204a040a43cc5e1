"""
Built-in generator sets: rook-n, sym-n, chain-n and seeded random-n
"""

import re
from typing import List, Optional

import numpy as np

from backend.models.errors import InputError
from backend.models.partial_perm import PartialPerm
from backend.models.schemas import GeneratorFile
from backend.services.semigroup_service import MAX_DEGREE

Literal = List[Optional[int]]

BUILTIN_PATTERN = re.compile(r"^(rook|sym|chain|random)-(\d+)$")


def transpositions(n: int) -> List[Literal]:
    """Adjacent transpositions (i i+1); the identity when n = 1"""
    if n == 1:
        return [[0]]
    result = []
    for i in range(n - 1):
        images: Literal = list(range(n))
        images[i], images[i + 1] = i + 1, i
        result.append(images)
    return result


def rook_generators(n: int) -> List[Literal]:
    """Transpositions plus the partial identity on the first n-1 points"""
    return transpositions(n) + [list(range(n - 1)) + [None]]


def chain_generator(n: int) -> Literal:
    """The shift i+1 → i, nilpotent of index n"""
    return [None] + list(range(n - 1))


def random_generators(n: int, seed: int, count: int) -> List[Literal]:
    rng = np.random.default_rng(seed)
    result = []
    for _ in range(count):
        rank = int(rng.integers(n // 2, n + 1))
        domain = rng.choice(n, size=rank, replace=False)
        images = rng.choice(n, size=rank, replace=False)
        mapping = dict(zip(domain.tolist(), images.tolist()))
        result.append(PartialPerm.from_mapping(n, mapping).to_literal())
    return result


def builtin_generators(name: str, seed: int = 0, count: int = 3) -> GeneratorFile:
    match = BUILTIN_PATTERN.match(name.strip().lower())
    if not match:
        raise InputError(f"Unknown builtin {name!r}; expected rook-n, sym-n, chain-n or random-n")
    family, n = match.group(1), int(match.group(2))
    if not 1 <= n <= MAX_DEGREE:
        raise InputError(f"Builtin degree {n} outside 1..{MAX_DEGREE}")

    if family == "rook":
        return GeneratorFile(degree=n, generators=rook_generators(n), name=f"rook-{n}")
    if family == "sym":
        return GeneratorFile(degree=n, generators=transpositions(n), name=f"sym-{n}")
    if family == "chain":
        # closed under composition only: {a, a², ..., 0}
        return GeneratorFile(degree=n, generators=[chain_generator(n)], close_under_inverse=False, name=f"chain-{n}")
    if count < 1:
        raise InputError("random fixtures need at least one generator")
    return GeneratorFile(
        degree=n,
        generators=random_generators(n, seed, count),
        name=f"random-{n}",
        seed=seed,
    )
