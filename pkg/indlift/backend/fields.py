"""Table-driven arithmetic and linear algebra over small finite fields."""
import itertools
import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from indlift.backend.errors import KindError

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (2, 3, 4, 5)

Vector = Tuple[int, ...]


def _gf4_product(a: int, b: int) -> int:
    """Multiply two GF(4) elements encoded as polynomials over GF(2) in x."""
    result = 0
    for shift in range(2):
        if (b >> shift) & 1:
            result ^= a << shift
    if result & 0b100:
        # reduce modulo x^2 + x + 1
        result ^= 0b111
    return result


class GaloisField:
    """The field GF(q) with addition and multiplication stored as numpy tables."""

    def __init__(self, q: int) -> None:
        """Initialize the field tables for order q."""
        if q not in SUPPORTED_ORDERS:
            raise KindError(f"unsupported field order {q}", {"supported": SUPPORTED_ORDERS})
        self.q = q
        if q == 4:
            self.add = np.array([[a ^ b for b in range(q)] for a in range(q)])
            self.mul = np.array([[_gf4_product(a, b) for b in range(q)] for a in range(q)])
        else:
            self.add = np.array([[(a + b) % q for b in range(q)] for a in range(q)])
            self.mul = np.array([[(a * b) % q for b in range(q)] for a in range(q)])
        self.neg = np.array([int(np.nonzero(self.add[a] == 0)[0][0]) for a in range(q)])
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.nonzero(self.mul[a] == 1)[0][0])

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def vectors(self, dim: int) -> Tuple[Vector, ...]:
        """Return all vectors of F^dim in lexicographic order."""
        return tuple(itertools.product(range(self.q), repeat=dim))

    def basis_vector(self, dim: int, index: int) -> Vector:
        """Return the standard basis vector e_index of F^dim."""
        return tuple(1 if i == index else 0 for i in range(dim))

    def mat_mul(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Multiply two matrices over the field."""
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        if self.q == 4:
            products = self.mul[left[:, :, None], right[None, :, :]]
            return np.bitwise_xor.reduce(products, axis=1)
        return (left @ right) % self.q

    def combine(self, coefficients: Sequence[int], rows: np.ndarray) -> Vector:
        """Return the linear combination sum_i coefficients[i] * rows[i]."""
        rows = np.asarray(rows, dtype=np.int64)
        coeffs = np.asarray(coefficients, dtype=np.int64).reshape(1, -1)
        if rows.shape[0] == 0:
            return tuple(0 for _ in range(rows.shape[1]))
        return tuple(int(v) for v in self.mat_mul(coeffs, rows)[0])

    def rref(self, rows: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
        """Row-reduce a matrix; return the nonzero reduced rows and pivot columns."""
        work = np.array(rows, dtype=np.int64, copy=True)
        if work.ndim != 2:
            raise ValueError("rref expects a two-dimensional array")
        n_rows, n_cols = work.shape
        pivots: List[int] = []
        r = 0
        for col in range(n_cols):
            if r == n_rows:
                break
            nonzero = np.nonzero(work[r:, col])[0]
            if nonzero.size == 0:
                continue
            p = r + int(nonzero[0])
            if p != r:
                work[[r, p]] = work[[p, r]]
            work[r] = self.mul[self.inv[work[r, col]], work[r]]
            for i in range(n_rows):
                if i != r and work[i, col] != 0:
                    factor = self.neg[work[i, col]]
                    work[i] = self.add[work[i], self.mul[factor, work[r]]]
            pivots.append(col)
            r += 1
        return work[:r], tuple(pivots)

    def rank(self, rows: np.ndarray) -> int:
        """Return the rank of a matrix."""
        reduced, _ = self.rref(rows)
        return int(reduced.shape[0])

    def nullspace(self, matrix: np.ndarray) -> np.ndarray:
        """Return a basis (as rows, in reduced echelon form) of {x : matrix x = 0}."""
        matrix = np.asarray(matrix, dtype=np.int64)
        n_cols = matrix.shape[1]
        reduced, pivots = self.rref(matrix)
        free = [c for c in range(n_cols) if c not in pivots]
        basis = []
        for f in free:
            x = np.zeros(n_cols, dtype=np.int64)
            x[f] = 1
            for i, p in enumerate(pivots):
                x[p] = self.neg[reduced[i, f]]
            basis.append(x)
        if not basis:
            return np.zeros((0, n_cols), dtype=np.int64)
        echelon, _ = self.rref(np.array(basis))
        return echelon

    def solve(self, matrix: np.ndarray, rhs: Sequence[int]) -> Optional[np.ndarray]:
        """Return one solution of matrix x = rhs (free variables zero), or None."""
        matrix = np.asarray(matrix, dtype=np.int64)
        n_cols = matrix.shape[1]
        augmented = np.concatenate(
            [matrix, np.asarray(rhs, dtype=np.int64).reshape(-1, 1)], axis=1
        )
        reduced, pivots = self.rref(augmented)
        if n_cols in pivots:
            return None
        solution = np.zeros(n_cols, dtype=np.int64)
        for i, p in enumerate(pivots):
            solution[p] = reduced[i, n_cols]
        return solution

    def coordinates(self, basis: np.ndarray, pivots: Sequence[int], v: Vector) -> Optional[Vector]:
        """Coordinates of v in an echelon basis, or None when v is outside its span."""
        coeffs = tuple(int(v[p]) for p in pivots)
        if self.combine(coeffs, basis) != tuple(v):
            return None
        return coeffs

    @lru_cache(maxsize=None)
    def general_linear(self, dim: int) -> Tuple[np.ndarray, ...]:
        """Return all invertible dim x dim matrices in lexicographic order."""
        group = []
        for entries in itertools.product(range(self.q), repeat=dim * dim):
            matrix = np.array(entries, dtype=np.int64).reshape(dim, dim)
            if self.rank(matrix) == dim:
                group.append(matrix)
        logger.debug("GL(%d, %d) has %d elements", dim, self.q, len(group))
        return tuple(group)

    @lru_cache(maxsize=None)
    def echelon_bases(self, dim: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[Vector, ...]], ...]:
        """All subspaces of F^dim as (pivots, reduced echelon basis), ordered by dimension."""
        subspaces = []
        for k in range(dim + 1):
            for pivots in itertools.combinations(range(dim), k):
                slots = [
                    (i, j)
                    for i, p in enumerate(pivots)
                    for j in range(p + 1, dim)
                    if j not in pivots
                ]
                for values in itertools.product(range(self.q), repeat=len(slots)):
                    rows = [[0] * dim for _ in range(k)]
                    for i, p in enumerate(pivots):
                        rows[i][p] = 1
                    for (i, j), value in zip(slots, values):
                        rows[i][j] = value
                    subspaces.append((pivots, tuple(tuple(r) for r in rows)))
        return tuple(subspaces)


@lru_cache(maxsize=None)
def galois_field(q: int) -> GaloisField:
    """Return the shared field instance for order q."""
    return GaloisField(q)
