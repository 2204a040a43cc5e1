"""
Partitions, standard Young tableaux and Young's seminormal form

Tableaux hold the entries 0..k-1; s_j is the adjacent transposition (j, j+1).
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Dict, List, Sequence, Tuple

Partition = Tuple[int, ...]
Tableau = Tuple[Tuple[int, ...], ...]


@lru_cache(maxsize=None)
def generate_partitions(n: int, largest: int = None) -> Tuple[Partition, ...]:
    """Partitions of n in reverse lexicographic order: (n), (n-1, 1), ..."""
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    result = []
    for first in range(min(n, largest), 0, -1):
        for rest in generate_partitions(n - first, first):
            result.append((first,) + rest)
    return tuple(result)


def hook_length_degree(shape: Partition) -> int:
    """Number of standard tableaux of the given shape"""
    n = sum(shape)
    conjugate = [sum(1 for row in shape if row > j) for j in range(shape[0])] if shape else []
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            hooks *= (row - j - 1) + (conjugate[j] - i - 1) + 1
    return factorial(n) // hooks


@lru_cache(maxsize=None)
def standard_tableaux(shape: Partition) -> Tuple[Tableau, ...]:
    """All standard Young tableaux of a shape, in generation order"""
    n = sum(shape)
    found: List[Tableau] = []

    def fill(rows: List[List[int]], num: int) -> None:
        if num == n:
            found.append(tuple(tuple(row) for row in rows))
            return
        for i, length in enumerate(shape):
            j = len(rows[i])
            if j == length:
                continue
            above_filled = i == 0 or len(rows[i - 1]) > j
            if above_filled:
                rows[i].append(num)
                fill(rows, num + 1)
                rows[i].pop()

    fill([[] for _ in shape], 0)
    return tuple(found)


def _positions(tableau: Tableau) -> Dict[int, Tuple[int, int]]:
    return {value: (r, c) for r, row in enumerate(tableau) for c, value in enumerate(row)}


def _swap(tableau: Tableau, j: int) -> Tableau:
    swap = {j: j + 1, j + 1: j}
    return tuple(tuple(swap.get(v, v) for v in row) for row in tableau)


@lru_cache(maxsize=None)
def seminormal_generators(shape: Partition) -> Tuple[Tuple[Tuple[Fraction, ...], ...], ...]:
    """Matrices of s_0, ..., s_{k-2}; column t is the image of the basis vector of tableau t"""
    tableaux = standard_tableaux(shape)
    index = {t: i for i, t in enumerate(tableaux)}
    k = sum(shape)
    dim = len(tableaux)
    generators = []
    for j in range(k - 1):
        matrix = [[Fraction(0)] * dim for _ in range(dim)]
        for t, tableau in enumerate(tableaux):
            pos = _positions(tableau)
            (r1, c1), (r2, c2) = pos[j], pos[j + 1]
            if r1 == r2:
                matrix[t][t] = Fraction(1)
            elif c1 == c2:
                matrix[t][t] = Fraction(-1)
            else:
                axial = (c2 - r2) - (c1 - r1)
                matrix[t][t] = Fraction(1, axial)
                partner = index[_swap(tableau, j)]
                # moving j+1 above j lengthens the tableau's permutation
                if r1 < r2:
                    matrix[partner][t] = Fraction(1)
                else:
                    matrix[partner][t] = 1 - Fraction(1, axial * axial)
        generators.append(tuple(tuple(row) for row in matrix))
    return tuple(generators)


def permutation_word(perm: Sequence[int]) -> List[int]:
    """Indices j with perm = s_{j_1} ∘ s_{j_2} ∘ ... (bubble sort on positions)"""
    w = list(perm)
    sorted_by = []
    changed = True
    while changed:
        changed = False
        for p in range(len(w) - 1):
            if w[p] > w[p + 1]:
                w[p], w[p + 1] = w[p + 1], w[p]
                sorted_by.append(p)
                changed = True
    return sorted_by[::-1]


def _matmul(a, b):
    n = len(a)
    m = len(b[0])
    inner = len(b)
    return tuple(
        tuple(sum((a[i][x] * b[x][j] for x in range(inner)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


@lru_cache(maxsize=None)
def seminormal_images(shape: Partition) -> Dict[Tuple[int, ...], Tuple[Tuple[Fraction, ...], ...]]:
    """Image of every permutation of S_k (one-line tuples) in the seminormal representation"""
    k = sum(shape)
    generators = seminormal_generators(shape)
    dim = len(standard_tableaux(shape))
    identity = tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
    images = {}
    for perm in permutations(range(k)):
        matrix = identity
        for j in permutation_word(perm):
            matrix = _matmul(matrix, generators[j])
        images[perm] = matrix
    return images
