"""Exact linear algebra kernels.

Three coefficient worlds are used by the engine:

- GF(2): differentials, homology ranks and the monodromy system. Rows are
  bit-packed into uint64 words and eliminated lowest column first with the
  first available pivot row, so every rank and solution is reproducible.
- Z: the domain system and the spin^c group. Smith normal forms come from
  ``sympy.polys.matrices`` with arbitrary-precision integers and the left and
  right transforms, so cokernel coordinates can be read off directly.
- GF(2)[q]: the equivariant total differential. Ranks over the fraction field
  are computed by fraction-free (Bareiss) elimination on ``galois.Poly``
  entries; a randomized evaluation rank over GF(2^16) is kept as a
  cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import galois
import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from branchfloer.errors import ComplexShapeError, NotAComplexError

GF2 = galois.GF2

# Alexander gradings are integral or, for even point counts, half-integral.
Grading = int | Fraction

_WORD_BITS = 64


def as_grading(value: Fraction) -> Grading:
    """``value`` as an int when it is integral."""
    return int(value) if value.denominator == 1 else value


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into little-endian uint64 words, one row per row."""
    rows, cols = dense.shape
    words = max(1, -(-cols // _WORD_BITS))
    padded = np.zeros((rows, words * _WORD_BITS), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    return np.packbits(padded, axis=1, bitorder="little").view("<u8")


def _bit(packed: np.ndarray, row: int, col: int) -> int:
    word, bit = divmod(col, _WORD_BITS)
    return int((packed[row, word] >> np.uint64(bit)) & np.uint64(1))


def _row_reduce(packed: np.ndarray, ncols: int, *, reduced: bool = False) -> list[int]:
    """Gaussian elimination in place over the first ``ncols`` columns.

    Returns the pivot columns in order. With ``reduced`` the pivot columns are
    cleared above the pivot as well (reduced row echelon form).
    """
    nrows = packed.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        word, bit = divmod(col, _WORD_BITS)
        mask = np.uint64(1 << bit)
        hits = np.flatnonzero(packed[r:, word] & mask)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            packed[[r, p]] = packed[[p, r]]
        targets = np.flatnonzero(packed[:, word] & mask)
        targets = targets[targets != r] if reduced else targets[targets > r]
        if targets.size:
            packed[targets] ^= packed[r]
        pivots.append(col)
        r += 1
    return pivots


@dataclass(frozen=True)
class F2Matrix:
    """Sparse matrix over GF(2) stored as the set of positions holding 1."""

    rows: int
    cols: int
    entries: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ComplexShapeError(f"negative shape {self.rows}x{self.cols}")
        entries = frozenset(self.entries)
        for r, c in entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ComplexShapeError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> F2Matrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, frozenset((i, i) for i in range(n)))

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]] | np.ndarray) -> F2Matrix:
        dense = np.asarray(array, dtype=np.int64)
        if dense.ndim != 2:
            raise ComplexShapeError("expected a 2-dimensional array")
        rows, cols = np.nonzero(dense % 2)
        return cls(dense.shape[0], dense.shape[1], frozenset(zip(rows.tolist(), cols.tolist())))

    @classmethod
    def from_pairs(cls, rows: int, cols: int, pairs: Iterable[tuple[int, int]]) -> F2Matrix:
        """Build from a list of positions counted mod 2 (repeated pairs cancel)."""
        entries: set[tuple[int, int]] = set()
        for pair in pairs:
            entries ^= {pair}
        return cls(rows, cols, frozenset(entries))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, c in self.entries:
            dense[r, c] = 1
        return dense

    def to_galois(self) -> galois.FieldArray:
        return GF2(self.to_dense())

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> F2Matrix:
        return F2Matrix(self.cols, self.rows, frozenset((c, r) for r, c in self.entries))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> F2Matrix:
        row_at = {r: i for i, r in enumerate(rows)}
        col_at = {c: j for j, c in enumerate(cols)}
        return F2Matrix(
            len(rows),
            len(cols),
            frozenset(
                (row_at[r], col_at[c]) for r, c in self.entries if r in row_at and c in col_at
            ),
        )

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0 or not self.entries:
            return 0
        return len(_row_reduce(_pack_rows(self.to_dense()), self.cols))

    def __add__(self, other: F2Matrix) -> F2Matrix:
        if self.shape != other.shape:
            raise ComplexShapeError(f"cannot add {self.shape} and {other.shape}")
        return F2Matrix(self.rows, self.cols, self.entries ^ other.entries)

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.cols != other.rows:
            raise ComplexShapeError(f"cannot compose {self.shape} with {other.shape}")
        if not self.entries or not other.entries:
            return F2Matrix.zeros(self.rows, other.cols)
        product = self.to_galois() @ other.to_galois()
        return F2Matrix.from_dense(product.view(np.ndarray).astype(np.int64))


def f2_rank(matrix: F2Matrix) -> int:
    """Rank over GF(2)."""
    return matrix.rank()


def f2_solve(matrix: F2Matrix, rhs: Sequence[int]) -> list[int] | None:
    """Solve ``matrix @ x = rhs`` over GF(2).

    Free variables are set to 0, so the answer is deterministic. Returns None
    when the system is inconsistent.
    """
    if len(rhs) != matrix.rows:
        raise ComplexShapeError(f"right-hand side has {len(rhs)} entries, expected {matrix.rows}")
    augmented = np.zeros((matrix.rows, matrix.cols + 1), dtype=np.uint8)
    augmented[:, : matrix.cols] = matrix.to_dense()
    augmented[:, matrix.cols] = np.asarray(rhs, dtype=np.int64) % 2
    packed = _pack_rows(augmented)
    pivots = _row_reduce(packed, matrix.cols, reduced=True)
    for r in range(len(pivots), matrix.rows):
        if _bit(packed, r, matrix.cols):
            return None
    solution = [0] * matrix.cols
    for r, col in enumerate(pivots):
        solution[col] = _bit(packed, r, matrix.cols)
    return solution


def f2_homology_ranks(complex: Sequence[F2Matrix]) -> list[int]:
    """Homology ranks of a chain complex over GF(2).

    ``complex[i]`` is the differential d_{i+1}: C_{i+1} -> C_i, stored with
    shape (dim C_i, dim C_{i+1}). The result lists rank H_k for k = 0..len.
    """
    maps = list(complex)
    if not maps:
        raise ComplexShapeError("a complex needs at least one differential")
    for k in range(1, len(maps)):
        lower, upper = maps[k - 1], maps[k]
        if upper.rows != lower.cols:
            raise ComplexShapeError(
                f"d_{k} has {lower.cols} columns but d_{k + 1} has {upper.rows} rows"
            )
        if not (lower @ upper).is_zero():
            raise NotAComplexError((k, k + 1))
    dims = [maps[0].rows] + [d.cols for d in maps]
    ranks = [d.rank() for d in maps]
    homology = []
    for k, dim in enumerate(dims):
        outgoing = ranks[k - 1] if k >= 1 else 0
        incoming = ranks[k] if k < len(ranks) else 0
        homology.append(dim - outgoing - incoming)
    return homology


# ---------------------------------------------------------------------------
# Z
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZMatrix:
    """Dense integer matrix with arbitrary-precision entries."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ComplexShapeError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> ZMatrix:
        entries = tuple(tuple(int(v) for v in row) for row in rows)
        width = cols if cols is not None else (len(entries[0]) if entries else 0)
        return cls(len(entries), width, entries)

    @classmethod
    def identity(cls, n: int) -> ZMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(v) for v in row] for row in self.entries], self.shape, ZZ)

    def __matmul__(self, other: ZMatrix) -> ZMatrix:
        if self.cols != other.rows:
            raise ComplexShapeError(f"cannot compose {self.shape} with {other.shape}")
        product = np.array(self.entries, dtype=object).reshape(self.shape) @ np.array(
            other.entries, dtype=object
        ).reshape(other.shape)
        return ZMatrix.from_rows(product.tolist(), other.cols)


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ m @ right`` is diagonal with ``invariant_factors`` on the diagonal.

    Factors are nonnegative, each divides the next, and zeros come last.
    """

    invariant_factors: tuple[int, ...]
    left: ZMatrix
    right: ZMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def _integer_rows(matrix: DomainMatrix) -> list[list[int]]:
    return [[int(v) for v in row] for row in matrix.to_list()]


def smith_decomposition(m: ZMatrix) -> SmithDecomposition:
    """Smith normal form of ``m`` with both unimodular transforms."""
    if m.rows == 0 or m.cols == 0:
        return SmithDecomposition((), ZMatrix.identity(m.rows), ZMatrix.identity(m.cols))
    smf, s, t = smith_normal_decomp(m.to_domain_matrix())
    diagonal = _integer_rows(smf)
    left = _integer_rows(s)
    factors = []
    for i in range(min(m.rows, m.cols)):
        d = diagonal[i][i]
        if d < 0:
            left[i] = [-v for v in left[i]]
        factors.append(abs(d))
    return SmithDecomposition(
        tuple(factors),
        ZMatrix.from_rows(left, m.rows),
        ZMatrix.from_rows(_integer_rows(t), m.cols),
    )


def integer_snf(m: ZMatrix) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix."""
    return smith_decomposition(m).invariant_factors


# ---------------------------------------------------------------------------
# GF(2)[q]
# ---------------------------------------------------------------------------

POLY_ZERO = galois.Poly.Zero(GF2)
POLY_ONE = galois.Poly.One(GF2)


def poly(coefficients: Sequence[int]) -> galois.Poly:
    """Polynomial in q from ascending coefficients."""
    if not coefficients:
        return POLY_ZERO
    return galois.Poly([c % 2 for c in coefficients], field=GF2, order="asc")


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix with entries in GF(2)[q]."""

    rows: int
    cols: int
    entries: tuple[tuple[galois.Poly, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ComplexShapeError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[F2Matrix]) -> PolyMatrix:
        """Sum of ``coefficients[k] * q**k``; all coefficient matrices share one shape."""
        if not coefficients:
            raise ComplexShapeError("at least one coefficient matrix is required")
        rows, cols = coefficients[0].shape
        if any(c.shape != (rows, cols) for c in coefficients):
            raise ComplexShapeError("coefficient matrices differ in shape")
        dense = [c.to_dense() for c in coefficients]
        entries = tuple(
            tuple(poly([int(d[i, j]) for d in dense]) for j in range(cols)) for i in range(rows)
        )
        return cls(rows, cols, entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Sequence[int]]]) -> PolyMatrix:
        """Build from nested lists of ascending coefficient lists."""
        entries = tuple(tuple(poly(entry) for entry in row) for row in rows)
        return cls(len(entries), len(entries[0]) if entries else 0, entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(entry == POLY_ZERO for row in self.entries for entry in row)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.cols != other.rows:
            raise ComplexShapeError(f"cannot compose {self.shape} with {other.shape}")
        entries = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = POLY_ZERO
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a != POLY_ZERO:
                        b = other.entries[k][j]
                        if b != POLY_ZERO:
                            acc = acc + a * b
                row.append(acc)
            entries.append(tuple(row))
        return PolyMatrix(self.rows, other.cols, tuple(entries))


def fq_matrix_rank(m: PolyMatrix) -> int:
    """Rank over the fraction field GF(2)(q).

    Bareiss elimination keeps every intermediate entry a polynomial: each
    update is divided exactly by the previous pivot. Columns without a pivot
    are skipped.
    """
    a = [list(row) for row in m.entries]
    rank = 0
    previous = POLY_ONE
    for col in range(m.cols):
        if rank == m.rows:
            break
        pivot_row = next((r for r in range(rank, m.rows) if a[r][col] != POLY_ZERO), None)
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        pivot = a[rank][col]
        for r in range(rank + 1, m.rows):
            factor = a[r][col]
            for c in range(col + 1, m.cols):
                # characteristic 2: the Bareiss difference is a sum
                quotient, remainder = divmod(pivot * a[r][c] + factor * a[rank][c], previous)
                if remainder != POLY_ZERO:
                    raise ArithmeticError("inexact Bareiss division")
                a[r][c] = quotient
            a[r][col] = POLY_ZERO
        previous = pivot
        rank += 1
    return rank


def fq_matrix_rank_by_evaluation(m: PolyMatrix, points: int = 8, seed: int | None = None) -> int:
    """Largest rank of ``m`` evaluated at random points of GF(2^16).

    Never exceeds :func:`fq_matrix_rank` and equals it with high probability.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    field = galois.GF(2**16)
    lifted = [
        [galois.Poly(entry.coeffs.view(np.ndarray), field=field) for entry in row]
        for row in m.entries
    ]
    best = 0
    for x in field.Random(points, seed=seed):
        values = field.Zeros(m.shape)
        for i, row in enumerate(lifted):
            for j, entry in enumerate(row):
                values[i, j] = entry(x)
        best = max(best, int(np.linalg.matrix_rank(values)))
    return best
