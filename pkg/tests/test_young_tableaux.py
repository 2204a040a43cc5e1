from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from backend.utils.young_tableaux import (
    generate_partitions,
    hook_length_degree,
    permutation_word,
    seminormal_generators,
    seminormal_images,
    standard_tableaux,
)


def _compose(p, q):
    return tuple(p[q[x]] for x in range(len(q)))


def _adjacent(k, j):
    perm = list(range(k))
    perm[j], perm[j + 1] = j + 1, j
    return tuple(perm)


def _product(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][x] * b[x][j] for x in range(n)), Fraction(0)) for j in range(n)) for i in range(n))


def test_partitions_in_reverse_lexicographic_order():
    assert generate_partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert len(generate_partitions(5)) == 7
    assert generate_partitions(0) == ((),)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_tableaux_counts_match_hook_lengths(k):
    degrees = []
    for shape in generate_partitions(k):
        tableaux = standard_tableaux(shape)
        assert len(tableaux) == hook_length_degree(shape)
        degrees.append(len(tableaux))
    assert sum(d * d for d in degrees) == factorial(k)


def test_hook_length_examples():
    assert hook_length_degree((2, 1)) == 2
    assert hook_length_degree((3, 1)) == 3
    assert hook_length_degree((2, 2)) == 2
    assert hook_length_degree((3, 2)) == 5


def test_permutation_word_rebuilds_the_permutation():
    for perm in permutations(range(4)):
        rebuilt = tuple(range(4))
        for j in permutation_word(perm):
            rebuilt = _compose(rebuilt, _adjacent(4, j))
        assert rebuilt == perm


def test_generators_of_shape_21():
    s0, s1 = seminormal_generators((2, 1))
    assert s0 == ((1, 0), (0, -1))
    assert s1 == ((Fraction(-1, 2), Fraction(3, 4)), (1, Fraction(1, 2)))


@pytest.mark.parametrize("shape", generate_partitions(4))
def test_seminormal_form_is_a_representation(shape):
    images = seminormal_images(shape)
    for p in images:
        for q in images:
            assert _product(images[p], images[q]) == images[_compose(p, q)]


def test_trivial_and_sign_shapes():
    trivial = seminormal_images((3,))
    sign = seminormal_images((1, 1, 1))
    for perm in permutations(range(3)):
        assert trivial[perm] == ((1,),)
        parity = len(permutation_word(perm)) % 2
        assert sign[perm] == (((-1) ** parity,),)
