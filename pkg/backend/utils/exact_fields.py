"""
Exact scalar fields and the linear algebra the representation checks need

Rationals are numpy object arrays of Fraction; GF(p) matrices are galois
FieldArrays. Both expose the same small interface so callers never branch on
the field.
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from backend.models.errors import InputError
from backend.models.schemas import FieldKind

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, str]

# word-size prime for rank lower bounds over ℚ
MODULAR_CHECK_PRIME = 1_000_003

# matrix products of int64 stacks stay exact while bound² · inner dimension is below this
INT64_PRODUCT_LIMIT = 2**62


def stack_dtype(bound: int, inner: int) -> type:
    """int64 when every product sum of entries up to bound fits, Python ints otherwise"""
    if bound * bound * max(inner, 1) < INT64_PRODUCT_LIMIT:
        return np.int64
    return object


class ScalarField:
    kind: FieldKind
    characteristic: int
    name: str

    def matrix(self, rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        raise NotImplementedError

    def identity(self, size: int) -> np.ndarray:
        raise NotImplementedError

    def scale(self, coefficient: Scalar, matrix: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def rank(self, matrix: np.ndarray) -> int:
        raise NotImplementedError

    def to_json(self, value) -> Union[int, str]:
        raise NotImplementedError

    def nullity(self, matrix: np.ndarray) -> int:
        if matrix.shape[0] == 0:
            return matrix.shape[1]
        return matrix.shape[1] - self.rank(matrix)

    def is_zero(self, matrix: np.ndarray) -> bool:
        return np.count_nonzero(matrix) == 0

    def equal(self, left: np.ndarray, right: np.ndarray) -> bool:
        return left.shape == right.shape and np.count_nonzero(left - right) == 0

    def matrix_to_json(self, matrix: np.ndarray) -> List[List[Union[int, str]]]:
        return [[self.to_json(x) for x in row] for row in matrix]

    def __repr__(self) -> str:
        return self.name


class RationalField(ScalarField):
    kind = FieldKind.RATIONAL
    characteristic = 0
    name = "Q"

    @staticmethod
    def coerce(value: Scalar) -> Fraction:
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational scalar: {value!r}", str(e))

    def matrix(self, rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
        rows = list(rows)
        cols = len(rows[0]) if rows else 0
        result = np.empty((len(rows), cols), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise InputError("Ragged matrix rows")
            for j, value in enumerate(row):
                result[i, j] = self.coerce(value)
        return result

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.full((rows, cols), Fraction(0), dtype=object)

    def identity(self, size: int) -> np.ndarray:
        result = self.zeros(size, size)
        for i in range(size):
            result[i, i] = Fraction(1)
        return result

    def scale(self, coefficient: Scalar, matrix: np.ndarray) -> np.ndarray:
        return self.coerce(coefficient) * matrix

    def rank(self, matrix: np.ndarray) -> int:
        """Row echelon form by exact elimination"""
        rows = [list(row) for row in matrix]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        piv_r = 0
        for piv_c in range(n_cols):
            if piv_r == n_rows:
                break
            for i_row in range(piv_r, n_rows):
                if rows[i_row][piv_c] != 0:
                    break
            else:
                continue
            rows[piv_r], rows[i_row] = rows[i_row], rows[piv_r]
            pivot = rows[piv_r]
            fp = pivot[piv_c]
            for r in range(piv_r + 1, n_rows):
                fr = rows[r][piv_c]
                if fr == 0:
                    continue
                frp = fr / fp
                row = rows[r]
                for c in range(piv_c, n_cols):
                    if pivot[c] != 0:
                        row[c] -= pivot[c] * frp
            piv_r += 1
        return piv_r

    def to_json(self, value) -> Union[int, str]:
        value = Fraction(value)
        return int(value) if value.denominator == 1 else str(value)

    @staticmethod
    def common_denominator(values: Iterable[Fraction]) -> int:
        return math.lcm(1, *(Fraction(x).denominator for x in values))

    def modular_rank(self, matrix: np.ndarray, prime: int = MODULAR_CHECK_PRIME) -> int:
        """Rank of the matrix cleared of denominators and reduced mod a word-size prime; never above the rank over ℚ"""
        if matrix.size == 0:
            return 0
        scale = self.common_denominator(matrix.reshape(-1))
        reduced = np.array([int(x * scale) % prime for x in matrix.reshape(-1)], dtype=np.int64)
        gf = galois.GF(prime)
        return int(np.linalg.matrix_rank(gf(reduced.reshape(matrix.shape))))

    def integer_stack(self, matrices: Sequence[np.ndarray]) -> Tuple[np.ndarray, int, Optional[int]]:
        """Matrices scaled by one common denominator into an integer stack; returns (stack, scale, modulus)"""
        flat = [x for m in matrices for x in m.reshape(-1)]
        scale = self.common_denominator(flat)
        shape = (len(matrices),) + (matrices[0].shape if matrices else (0, 0))
        scaled = [int(x * scale) for x in flat]
        bound = max([scale] + [abs(x) for x in scaled])
        stack = np.array(scaled, dtype=stack_dtype(bound, shape[-1])).reshape(shape)
        return stack, scale, None


class PrimeField(ScalarField):
    kind = FieldKind.PRIME

    def __init__(self, p: int):
        if not galois.is_prime(p):
            raise InputError(f"Characteristic {p} is not prime")
        self.characteristic = p
        self.name = f"GF({p})"
        self.gf = galois.GF(p)

    def coerce(self, value: Scalar) -> int:
        """Reduce an integer, Fraction or 'num/den' string mod p"""
        fraction = RationalField.coerce(value)
        denominator = fraction.denominator % self.characteristic
        if denominator == 0:
            raise InputError(f"Denominator of {value!r} vanishes mod {self.characteristic}")
        reduced = self.gf(fraction.numerator % self.characteristic) / self.gf(denominator)
        return int(reduced)

    def matrix(self, rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
        rows = list(rows)
        cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise InputError("Ragged matrix rows")
        values = np.array([[self.coerce(x) for x in row] for row in rows], dtype=np.int64)
        return self.gf(values.reshape(len(rows), cols))

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return self.gf.Zeros((rows, cols))

    def identity(self, size: int) -> np.ndarray:
        return self.gf.Identity(size)

    def scale(self, coefficient: Scalar, matrix: np.ndarray) -> np.ndarray:
        return self.gf(self.coerce(coefficient)) * matrix

    def rank(self, matrix: np.ndarray) -> int:
        return int(np.linalg.matrix_rank(matrix))

    def primitive_root_of_unity(self, order: int) -> int:
        if (self.characteristic - 1) % order:
            raise InputError(f"GF({self.characteristic}) has no primitive {order}-th root of unity")
        return int(self.gf.primitive_element ** ((self.characteristic - 1) // order))

    def to_json(self, value) -> int:
        return int(value)

    def integer_stack(self, matrices: Sequence[np.ndarray]) -> Tuple[np.ndarray, int, Optional[int]]:
        shape = (len(matrices),) + (matrices[0].shape if matrices else (0, 0))
        stack = np.array([m.view(np.ndarray) for m in matrices], dtype=np.int64).reshape(shape)
        if stack_dtype(self.characteristic - 1, shape[-1]) is object:
            stack = stack.astype(object)
        return stack, 1, self.characteristic


def parse_field(value: str) -> ScalarField:
    """'q' -> ℚ, 'fp:P' -> GF(P)"""
    text = value.strip().lower()
    if text in ("q", "qq", "rational"):
        return RationalField()
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise InputError(f"Bad field {value!r}")
        return PrimeField(p)
    raise InputError(f"Bad field {value!r}; expected q or fp:P")


def intertwiner_nullity(
    field: ScalarField,
    pairs: Iterable[Tuple[np.ndarray, np.ndarray]],
    d1: int,
    d2: int,
    at_least: int = 0,
) -> int:
    """Dimension of {M (d2×d1) : M·A1 = A2·M for every (A1, A2) in pairs}

    `at_least` is a known lower bound (1 for a commutant). Over ℚ a modular
    rank that already meets it settles the answer without exact elimination.
    """
    blocks = []
    for a1, a2 in pairs:
        block = field.zeros(d2 * d1, d2 * d1)
        for k in range(d2):
            for l in range(d1):
                column = field.zeros(d2, d1)
                column[k, :] = column[k, :] + a1[l, :]
                column[:, l] = column[:, l] - a2[:, k]
                block[:, k * d1 + l] = column.reshape(-1)
        blocks.append(block)
    if not blocks:
        return d1 * d2
    system = np.concatenate(blocks, axis=0)
    if field.kind == FieldKind.PRIME:
        system = field.gf(system)
    else:
        bound = system.shape[1] - field.modular_rank(system)
        if bound <= at_least:
            return at_least
    logger.debug("Intertwiner solve %d×%d over %s", system.shape[0], system.shape[1], field)
    return field.nullity(system)
