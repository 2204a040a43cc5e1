"""
Partial permutations of {0, ..., degree-1}

Composition is a left action: compose(a, b) applies b first, then a.
A partial permutation is stored as its images tuple with UNDEFINED (-1) for
points outside the domain; equality and hashing use that tuple.
"""

from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from backend.models.errors import InputError

UNDEFINED = -1


class PartialPerm:
    """Injective partial self-map of a finite point set"""

    __slots__ = ("degree", "images", "_hash")

    def __init__(self, images: Sequence[Optional[int]]):
        normalized = tuple(UNDEFINED if x is None else int(x) for x in images)
        degree = len(normalized)
        seen = set()
        for point in normalized:
            if point == UNDEFINED:
                continue
            if point < 0 or point >= degree:
                raise InputError(f"Image {point} outside 0..{degree - 1}")
            if point in seen:
                raise InputError(f"Point {point} has two preimages; not injective")
            seen.add(point)
        self.degree = degree
        self.images = normalized
        self._hash = hash(normalized)

    @classmethod
    def _from_images(cls, images: Tuple[int, ...]) -> "PartialPerm":
        """Wrap an images tuple already known to be a valid partial permutation"""
        perm = object.__new__(cls)
        perm.degree = len(images)
        perm.images = images
        perm._hash = hash(images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> "PartialPerm":
        return cls(range(degree))

    @classmethod
    def empty(cls, degree: int) -> "PartialPerm":
        return cls([None] * degree)

    @classmethod
    def partial_identity(cls, degree: int, points: Iterable[int]) -> "PartialPerm":
        keep = set(points)
        return cls([x if x in keep else None for x in range(degree)])

    @classmethod
    def from_mapping(cls, degree: int, mapping: dict) -> "PartialPerm":
        """Build from {point: image}"""
        return cls([mapping.get(x) for x in range(degree)])

    @classmethod
    def from_literal(cls, literal: Sequence[Optional[int]]) -> "PartialPerm":
        """Parse the file literal: 0-based images, null for undefined"""
        return cls(literal)

    def to_literal(self) -> List[Optional[int]]:
        return [None if y == UNDEFINED else y for y in self.images]

    def __call__(self, point: int) -> Optional[int]:
        y = self.images[point]
        return None if y == UNDEFINED else y

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialPerm):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "PartialPerm") -> "PartialPerm":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"PartialPerm({self.to_literal()})"

    def __str__(self) -> str:
        return self.display()

    def display(self) -> str:
        """1-based arrow notation, e.g. (2→1, 3→2, 4→3)"""
        arrows = [f"{x + 1}→{y + 1}" for x, y in enumerate(self.images) if y != UNDEFINED]
        return "(" + ", ".join(arrows) + ")" if arrows else "0"

    @property
    def rank(self) -> int:
        return sum(1 for y in self.images if y != UNDEFINED)

    @property
    def domain(self) -> frozenset:
        return frozenset(x for x, y in enumerate(self.images) if y != UNDEFINED)

    @property
    def range(self) -> frozenset:
        return frozenset(y for y in self.images if y != UNDEFINED)

    def is_idempotent(self) -> bool:
        return all(y == UNDEFINED or y == x for x, y in enumerate(self.images))

    def inverse(self) -> "PartialPerm":
        return inverse(self)

    def domain_of(self) -> "PartialPerm":
        return domain_of(self)

    def range_of(self) -> "PartialPerm":
        return range_of(self)

    def to_rook_matrix(self) -> np.ndarray:
        return to_rook_matrix(self)

    def restrictions(self) -> Iterator["PartialPerm"]:
        return restrictions(self)


def _check_degrees(a: PartialPerm, b: PartialPerm) -> None:
    if a.degree != b.degree:
        raise InputError(f"Degree mismatch: {a.degree} vs {b.degree}")


def compose(a: PartialPerm, b: PartialPerm) -> PartialPerm:
    """a∘b: apply b, then a"""
    _check_degrees(a, b)
    images = a.images
    return PartialPerm._from_images(tuple(UNDEFINED if y == UNDEFINED else images[y] for y in b.images))


def inverse(a: PartialPerm) -> PartialPerm:
    result = [UNDEFINED] * a.degree
    for x, y in enumerate(a.images):
        if y != UNDEFINED:
            result[y] = x
    return PartialPerm._from_images(tuple(result))


def domain_of(a: PartialPerm) -> PartialPerm:
    """Partial identity on dom(a), i.e. a⁻¹a"""
    return PartialPerm._from_images(tuple(UNDEFINED if y == UNDEFINED else x for x, y in enumerate(a.images)))


def range_of(a: PartialPerm) -> PartialPerm:
    """Partial identity on ran(a), i.e. aa⁻¹"""
    return PartialPerm.partial_identity(a.degree, a.range)


def natural_leq(b: PartialPerm, a: PartialPerm) -> bool:
    """b ≤ a iff b is a restriction of a"""
    _check_degrees(a, b)
    return compose(a, domain_of(b)) == b


def to_rook_matrix(a: PartialPerm) -> np.ndarray:
    """0/1 matrix with a one at (i, j) iff a(j) = i"""
    matrix = np.zeros((a.degree, a.degree), dtype=np.int64)
    for j, i in enumerate(a.images):
        if i != UNDEFINED:
            matrix[i, j] = 1
    return matrix


def restrictions(a: PartialPerm) -> Iterator[PartialPerm]:
    """Every restriction of a to a subset of its domain (2^rank of them)"""
    domain = sorted(a.domain)
    for size in range(len(domain) + 1):
        for subset in combinations(domain, size):
            keep = set(subset)
            yield PartialPerm([y if x in keep else UNDEFINED for x, y in enumerate(a.images)])


def stable_image(a: PartialPerm) -> frozenset:
    """Largest set mapped onto itself by a: ran(a^k) once the ranges stop shrinking"""
    power = a
    current = power.range
    while True:
        power = compose(a, power)
        shrunk = power.range
        if shrunk == current:
            return current
        current = shrunk


def stable_rank_and_cycle_type(a: PartialPerm) -> Tuple[int, Tuple[int, ...]]:
    """Stable rank and cycle type of a restricted to its stable image"""
    stable = stable_image(a)
    lengths = []
    visited = set()
    for start in sorted(stable):
        if start in visited:
            continue
        length = 0
        point = start
        while point not in visited:
            visited.add(point)
            point = a.images[point]
            length += 1
        lengths.append(length)
    return len(stable), tuple(sorted(lengths, reverse=True))
