"""
Exact integer matrix reduction.

Matrices are lists of rows of Python ints, so entries never overflow. The
Smith normal form pivots on the entry of least absolute value and can track
the unimodular transforms S, S^-1 and T with S * A * T = D.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from aws_lambda_powertools import Logger

logger = Logger(service="cubetopo", child=True)

Matrix = List[List[int]]


def identity(size: int) -> Matrix:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(matrix: Sequence[Sequence[int]], n_cols: int = 0) -> Matrix:
    if not matrix:
        return [[] for _ in range(n_cols)]
    return [list(column) for column in zip(*matrix)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], n_cols: int) -> Matrix:
    """Product a * b where b has `n_cols` columns."""
    result = zeros(len(a), n_cols)
    for i, row in enumerate(a):
        out = result[i]
        for k, value in enumerate(row):
            if value:
                for j, other in enumerate(b[k]):
                    if other:
                        out[j] += value * other
    return result


def apply(matrix: Sequence[Sequence[int]], vector: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, vector) if a) for row in matrix]


def is_zero(matrix: Sequence[Sequence[int]]) -> bool:
    return all(not value for row in matrix for value in row)


@dataclass(frozen=True)
class SmithForm:
    """
    Result of a Smith normal form computation.

    Attributes:
        diagonal (Tuple[int, ...]): min(m, n) nonnegative entries, each dividing
            the next, zeros last.
        rank (int): Number of nonzero diagonal entries.
        left (Matrix, optional): S, m x m unimodular.
        left_inverse (Matrix, optional): S^-1.
        right (Matrix, optional): T, n x n unimodular.
    """

    diagonal: Tuple[int, ...]
    rank: int
    n_rows: int
    n_cols: int
    left: Optional[Matrix] = None
    left_inverse: Optional[Matrix] = None
    right: Optional[Matrix] = None

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return self.diagonal[: self.rank]

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


class _Reducer:
    def __init__(self, matrix: Sequence[Sequence[int]], n_cols: int, track: bool) -> None:
        self.a = [list(row) for row in matrix]
        self.m = len(self.a)
        self.n = n_cols
        self.track = track
        if track:
            self.s = identity(self.m)
            self.s_inv = identity(self.m)
            self.t = identity(self.n)

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        if self.track:
            self.s[i], self.s[j] = self.s[j], self.s[i]
            for row in self.s_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        if self.track:
            for row in self.t:
                row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, q: int) -> None:
        """row_target -= q * row_source"""
        src = self.a[source]
        self.a[target] = [x - q * y for x, y in zip(self.a[target], src)]
        if self.track:
            self.s[target] = [x - q * y for x, y in zip(self.s[target], self.s[source])]
            for row in self.s_inv:
                row[source] += q * row[target]

    def add_col(self, target: int, source: int, q: int) -> None:
        """col_target -= q * col_source"""
        for row in self.a:
            if row[source]:
                row[target] -= q * row[source]
        if self.track:
            for row in self.t:
                if row[source]:
                    row[target] -= q * row[source]

    def negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        if self.track:
            self.s[i] = [-x for x in self.s[i]]
            for row in self.s_inv:
                row[i] = -row[i]

    def smallest(self, t: int) -> Optional[Tuple[int, int]]:
        best = None
        best_abs = 0
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                value = row[j]
                if value and (best is None or abs(value) < best_abs):
                    best, best_abs = (i, j), abs(value)
                    if best_abs == 1:
                        return best
        return best

    def clear_cross(self, t: int) -> bool:
        """Reduces row t and column t modulo the pivot; True if all cleared."""
        pivot = self.a[t][t]
        cleared = True
        for i in range(t + 1, self.m):
            if self.a[i][t]:
                self.add_row(i, t, self.a[i][t] // pivot)
                cleared = cleared and not self.a[i][t]
        for j in range(t + 1, self.n):
            if self.a[t][j]:
                self.add_col(j, t, self.a[t][j] // pivot)
                cleared = cleared and not self.a[t][j]
        return cleared

    def non_divisible(self, t: int) -> Optional[int]:
        pivot = self.a[t][t]
        for i in range(t + 1, self.m):
            row = self.a[i]
            for j in range(t + 1, self.n):
                if row[j] % pivot:
                    return i
        return None

    def run(self) -> int:
        t = 0
        while t < min(self.m, self.n):
            position = self.smallest(t)
            if position is None:
                break
            self.swap_rows(position[0], t)
            self.swap_cols(position[1], t)
            while True:
                if not self.clear_cross(t):
                    # remainders are smaller than the pivot; promote the least
                    candidates = [(abs(self.a[i][t]), i, t) for i in range(t + 1, self.m) if self.a[i][t]]
                    candidates += [(abs(self.a[t][j]), t, j) for j in range(t + 1, self.n) if self.a[t][j]]
                    _, i, j = min(candidates)
                    self.swap_rows(i, t)
                    self.swap_cols(j, t)
                    continue
                offender = self.non_divisible(t)
                if offender is None:
                    break
                self.add_row(t, offender, -1)
            if self.a[t][t] < 0:
                self.negate_row(t)
            t += 1
        return t


def smith_normal_form(
    matrix: Sequence[Sequence[int]], n_cols: Optional[int] = None, transforms: bool = False
) -> SmithForm:
    """
    Smith normal form over the integers.

    Args:
        matrix (Sequence[Sequence[int]]): Row-major integer matrix.
        n_cols (int, optional): Column count, required when the matrix has no rows.
        transforms (bool, optional): Also compute S, S^-1 and T. Defaults to False.

    Returns:
        SmithForm: Diagonal, rank and optionally the transforms.
    """
    if n_cols is None:
        n_cols = len(matrix[0]) if matrix else 0
    reducer = _Reducer(matrix, n_cols, transforms)
    rank = reducer.run()
    diagonal = tuple(reducer.a[i][i] for i in range(min(reducer.m, n_cols)))
    logger.debug(
        "Smith normal form computed",
        extra={"rows": reducer.m, "cols": n_cols, "rank": rank},
    )
    if not transforms:
        return SmithForm(diagonal, rank, reducer.m, n_cols)
    return SmithForm(
        diagonal, rank, reducer.m, n_cols, reducer.s, reducer.s_inv, reducer.t
    )


def kernel_basis(matrix: Sequence[Sequence[int]], n_cols: int) -> List[List[int]]:
    """
    Integer basis of {x : A x = 0}, returned as a list of vectors.
    """
    form = smith_normal_form(matrix, n_cols, transforms=True)
    return [[row[j] for row in form.right] for j in range(form.rank, n_cols)]


def solve_with(form: SmithForm, b: Sequence[int]) -> Optional[List[int]]:
    """
    Integer solution of A x = b given the tracked Smith form of A, or None
    when b is not in the integer column span of A.
    """
    y = apply(form.left, b)
    z = [0] * form.n_cols
    for i, value in enumerate(y):
        if i < form.rank:
            if value % form.diagonal[i]:
                return None
            z[i] = value // form.diagonal[i]
        elif value:
            return None
    return apply(form.right, z)
