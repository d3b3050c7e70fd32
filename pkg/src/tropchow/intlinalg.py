"""Exact integer lattice algebra.

Hermite and Smith normal forms, saturated integer kernels, prescribed-pairing
covectors and lattice quotient projections.  Matrices are plain lists of lists
of Python ints, so every intermediate value is arbitrary precision; nothing
here (or anywhere downstream) touches floating point.  Rational elimination is
done with ``fractions.Fraction``.

All functions are pure and deterministic: pivots are chosen by smallest
absolute value, then lowest row index, then lowest column index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Matrix = list[list[int]]


class NoSolution(Exception):
    """No integral covector attains the prescribed pairing values."""


# ---------------------------------------------------------------------------
# basic matrix helpers


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(A: Matrix) -> Matrix:
    if not A:
        return []
    return [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(A[0])
    cols = len(B[0]) if B else 0
    return [
        [sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)]
        for row in A
    ]


def mat_vec(A: Matrix, v: list[int]) -> list[int]:
    return [sum(row[k] * v[k] for k in range(len(v))) for row in A]


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def _row_sub(M: Matrix, i: int, j: int, q: int) -> None:
    # row i -= q * row j
    Mi, Mj = M[i], M[j]
    for k in range(len(Mi)):
        Mi[k] -= q * Mj[k]


def _negate_row(M: Matrix, i: int) -> None:
    M[i] = [-x for x in M[i]]


def determinant(A: Matrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(A: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*A, U unimodular, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = identity_matrix(m)
    r = 0
    for c in range(n):
        if r >= m:
            break
        while True:
            rows = [i for i in range(r, m) if H[i][c]]
            if not rows:
                has_pivot = False
                break
            p = min(rows, key=lambda i: (abs(H[i][c]), i))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    if q:
                        _row_sub(H, i, r, q)
                        _row_sub(U, i, r, q)
            if all(H[i][c] == 0 for i in range(r + 1, m)):
                has_pivot = True
                break
        if not has_pivot:
            continue
        if H[r][c] < 0:
            _negate_row(H, r)
            _negate_row(U, r)
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                _row_sub(H, i, r, q)
                _row_sub(U, i, r, q)
        r += 1
    return H, U


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithDecomposition:
    """U*A*V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...

    Diagonal entries are nonnegative; ``rows``/``cols`` record the shape of
    the input (D has the same shape).
    """

    U: Matrix
    D: Matrix
    V: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _two_row_transform(M: Matrix, W: Matrix, r0: int, r1: int,
                       a: int, b: int, c: int, d: int) -> None:
    # (row r0, row r1) <- (a*r0 + b*r1, c*r0 + d*r1); applied to M and W
    for X in (M, W):
        X[r0], X[r1] = (
            [a * x + b * y for x, y in zip(X[r0], X[r1])],
            [c * x + d * y for x, y in zip(X[r0], X[r1])],
        )


def _two_col_transform(M: Matrix, W: Matrix, c0: int, c1: int,
                       a: int, b: int, c: int, d: int) -> None:
    # (col c0, col c1) <- (a*c0 + b*c1, c*c0 + d*c1); applied to M and W
    for X in (M, W):
        for row in X:
            x, y = row[c0], row[c1]
            row[c0] = a * x + b * y
            row[c1] = c * x + d * y


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """Smith normal form with tracked unimodular transforms.

    Each pivot is made to divide every entry of its trailing block before
    moving on, so the divisibility chain holds by construction.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)
    t = 0
    while t < min(m, n):
        best = None
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v:
                    key = (abs(v), i, j)
                    if best is None or key < best:
                        best = key
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            D[t], D[pi] = D[pi], D[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in D:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, m):
                if D[i][t]:
                    a, b = D[t][t], D[i][t]
                    if b % a == 0:
                        _row_sub(D, i, t, b // a)
                        _row_sub(U, i, t, b // a)
                    else:
                        g, x, y = _xgcd(a, b)
                        _two_row_transform(D, U, t, i, x, y, -(b // g), a // g)
            for j in range(t + 1, n):
                if D[t][j]:
                    a, b = D[t][t], D[t][j]
                    if b % a == 0:
                        q = b // a
                        for row in D:
                            row[j] -= q * row[t]
                        for row in V:
                            row[j] -= q * row[t]
                    else:
                        g, x, y = _xgcd(a, b)
                        _two_col_transform(D, V, t, j, x, y, -(b // g), a // g)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            if any(D[t][j] for j in range(t + 1, n)):
                continue
            d = D[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_sub(D, t, bad, -1)  # row t += row bad
            _row_sub(U, t, bad, -1)
        t += 1
    for i in range(min(m, n)):
        if D[i][i] < 0:
            _negate_row(D, i)
            _negate_row(U, i)
    return SmithDecomposition(U=U, D=D, V=V, rows=m, cols=n)


# ---------------------------------------------------------------------------
# kernels, covectors, quotients


def kernel_basis(rows: list[list[int]], ambient: int) -> list[list[int]]:
    """Basis vectors of the saturated lattice {x in Z^ambient : rows @ x = 0}.

    ``rows`` may be empty, in which case the standard basis is returned.
    The basis columns come from the unimodular HNF transform of the transposed
    matrix, so the kernel lattice is saturated by construction.
    """
    m = len(rows)
    T = [[rows[j][i] for j in range(m)] for i in range(ambient)]
    H, W = hermite_normal_form(T)
    return [list(W[i]) for i in range(ambient) if not any(H[i])]


def integer_kernel(A: Matrix) -> Matrix:
    """Columns form a saturated Z-basis of {x : A x = 0}.

    A must have at least one row (the ambient dimension is read off it);
    use :func:`kernel_basis` directly when the row list may be empty.
    """
    if not A:
        raise ValueError("integer_kernel needs at least one row; see kernel_basis")
    basis = kernel_basis([list(r) for r in A], len(A[0]))
    return [[v[i] for v in basis] for i in range(len(A[0]))]


def solve_prescribed_pairings(vectors: list[list[int]], values: list[int]) -> list[int]:
    """Integral covector m with <m, v_i> = values[i] for all i.

    The input vectors are expected to be part of a lattice basis (smooth cone
    generators); free coordinates of the solution are set to zero.  Raises
    NoSolution when the values are inconsistent with the saturated span.
    """
    if len(vectors) != len(values):
        raise ValueError("one value per vector required")
    if not vectors:
        raise ValueError("ambient dimension unknown for empty input")
    n = len(vectors[0])
    k = len(vectors)
    snf = smith_normal_form([list(v) for v in vectors])
    rhs = mat_vec(snf.U, [int(v) for v in values])
    diag = snf.diagonal
    y = [0] * n
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d:
            if rhs[i] % d:
                raise NoSolution(f"pairing value {values[i]} unreachable on the span")
            y[i] = rhs[i] // d
        elif rhs[i]:
            raise NoSolution("values inconsistent on dependent vectors")
    return mat_vec(snf.V, y)


@dataclass(frozen=True)
class LatticeProjection:
    """Surjection Z^source_rank -> Z^target_rank killing a saturated sublattice."""

    source_rank: int
    target_rank: int
    matrix: tuple[tuple[int, ...], ...]

    def apply(self, v) -> list[int]:
        return [dot(row, v) for row in self.matrix]


def quotient_lattice(sublattice_generators: list[list[int]], ambient_rank: int) -> LatticeProjection:
    """Projection whose kernel is the saturation of the generated sublattice."""
    gens = [list(v) for v in sublattice_generators if any(v)]
    if not gens:
        return LatticeProjection(
            ambient_rank, ambient_rank,
            tuple(tuple(row) for row in identity_matrix(ambient_rank)),
        )
    k = len(gens)
    G = [[gens[j][i] for j in range(k)] for i in range(ambient_rank)]
    snf = smith_normal_form(G)
    r = snf.rank
    P = [list(snf.U[i]) for i in range(r, ambient_rank)]
    H, _ = hermite_normal_form(P)
    return LatticeProjection(ambient_rank, ambient_rank - r, tuple(tuple(row) for row in H))


def invert_unimodular(U: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(U)
    M = [[Fraction(U[i][j]) for j in range(n)] +
         [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        p = next((i for i in range(col, n) if M[i][col]), None)
        if p is None:
            raise ValueError("matrix is singular")
        M[col], M[p] = M[p], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    inv = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            x = M[i][j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        inv.append(row)
    return inv


# ---------------------------------------------------------------------------
# exact rational elimination (used for cone membership and nullspaces)


def solve_rational(A, b) -> list[Fraction] | None:
    """One exact solution of A x = b (free coordinates zero), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        p = next((i for i in range(row, m) if M[i][col]), None)
        if p is None:
            continue
        M[row], M[p] = M[p], M[row]
        pv = M[row][col]
        M[row] = [x / pv for x in M[row]]
        for i in range(m):
            if i != row and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[row])]
        pivots.append((row, col))
        row += 1
    for i in range(row, m):
        if M[i][n]:
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = M[r][n]
    return x


def rational_nullspace(A, ncols: int) -> list[list[Fraction]]:
    """Basis of the rational nullspace of A (rows over Z or Q)."""
    m = len(A)
    M = [[Fraction(A[i][j]) for j in range(ncols)] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        p = next((i for i in range(row, m) if M[i][col]), None)
        if p is None:
            continue
        M[row], M[p] = M[p], M[row]
        pv = M[row][col]
        M[row] = [x / pv for x in M[row]]
        for i in range(m):
            if i != row and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[row])]
        pivots.append((row, col))
        row += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in pivots:
            v[c] = -M[r][free]
        basis.append(v)
    return basis


def rational_rank(A, ncols: int | None = None) -> int:
    """Rank over Q by exact elimination."""
    m = len(A)
    if m == 0:
        return 0
    n = ncols if ncols is not None else len(A[0])
    return n - len(rational_nullspace(A, n))


def vector_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g
