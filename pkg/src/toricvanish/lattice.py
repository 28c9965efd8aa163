"""Exact integer linear algebra: HNF, SNF, kernels, cokernels.

Matrices are lists of rows, rows are lists of ints. All routines are
deterministic: pivot choices are pinned (smallest absolute value, ties broken
by lowest row then lowest column) so that transform matrices are reproducible
across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def copy_matrix(A):
    return [row[:] for row in A]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(m, n):
    return [[0] * n for _ in range(m)]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    if not A:
        return []
    n = len(B)
    assert all(len(row) == n for row in A)
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def vec_gcd(v):
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive_vector(v):
    """Divide out the gcd; the zero vector is returned unchanged."""
    g = vec_gcd(v)
    return list(v) if g == 0 else [a // g for a in v]


def determinant(A):
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = copy_matrix(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A):
    """Rank over Q, computed fraction-free."""
    if not A or not A[0]:
        return 0
    M = [[Fraction(a) for a in row] for row in A]
    m, n = len(M), len(M[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, m):
            if M[i][col]:
                f = M[i][col] / M[r][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return r


def solve_rational(A, b):
    """One rational solution x of A x = b, or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    M = [[Fraction(a) for a in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        M[r] = [a / M[r][col] for a in M[r]]
        for i in range(m):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b_ for a, b_ in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = M[i][n]
    return x


def hermite_normal_form(A):
    """Row-style HNF: returns (H, U) with U unimodular and U*A = H.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    zero rows sit at the bottom. The pivot choice (smallest nonzero absolute
    value, ties lowest row) makes the transform deterministic.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    H = copy_matrix(A)
    U = identity_matrix(m)
    r = 0
    for col in range(n):
        while True:
            piv = None
            for i in range(r, m):
                if H[i][col] != 0 and (piv is None or abs(H[i][col]) < abs(H[piv][col])):
                    piv = i
            if piv is None:
                break
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            dirty = False
            for i in range(r + 1, m):
                if H[i][col]:
                    q = H[i][col] // H[r][col]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][col]:
                        dirty = True
            if not dirty:
                break
        if r < m and H[r][col] != 0:
            if H[r][col] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][col] // H[r][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
            if r == m:
                break
    return H, U


def smith_normal_form(A):
    """Returns (U, S, V) with U*A*V = S diagonal, d_1 | d_2 | ..., d_i >= 0.

    U and V are unimodular. Pivot selection: smallest nonzero absolute value,
    ties broken by lowest row then lowest column.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    S = copy_matrix(A)
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, q):
        # row_i -= q * row_j
        S[i] = [a - q * b for a, b in zip(S[i], S[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):
        # col_i -= q * col_j
        for row in S:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while True:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] != 0 and (piv is None or abs(S[i][j]) < abs(S[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        while True:
            # Reduce column t, restarting whenever a smaller remainder shows up.
            restart = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    row_op(i, t, q)
                    if S[i][t]:
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    col_op(j, t, q)
                    if S[t][j]:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # Pivot divides everything it will precede, or we fold a bad row in.
            bad = None
            d = S[t][t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % d != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
        if t == min(m, n):
            break
    return U, S, V


def snf_diagonal(A):
    _, S, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def integer_kernel(A):
    """Basis of {x in Z^n : A x = 0}, as rows, in HNF with positive pivots.

    The basis spans a saturated sublattice (it comes from unimodular column
    operations), so the kernel lattice equals its own saturation.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    if n == 0:
        return []
    _, S, V = smith_normal_form(A)
    r = sum(1 for i in range(min(m, n)) if i < len(S) and S[i][i] != 0)
    cols = [[V[i][j] for i in range(n)] for j in range(r, n)]
    if not cols:
        return []
    H, _ = hermite_normal_form(cols)
    basis = [row for row in H if any(row)]
    return basis


def saturation_index(A):
    """Index of the row lattice of A inside its saturation (product of the
    nonzero SNF invariants)."""
    diag = snf_diagonal(A)
    idx = 1
    for d in diag:
        if d:
            idx *= d
    return idx


def solve_integer(A, b):
    """One integer solution x of A x = b, or None.

    Uses the column-style HNF of A: solves in the lattice generated by the
    columns.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    # Row-HNF of A^T gives a triangular generating set of the column lattice.
    At = transpose(A) if A else [[] for _ in range(n)]
    H, U = hermite_normal_form(At)  # U * A^T = H, rows of H generate col lattice
    # Solve y * H = b over Z by forward substitution on pivot columns.
    rows = [row for row in H if any(row)]
    y = [0] * len(rows)
    rem = list(b)
    for i, row in enumerate(rows):
        piv = next(j for j in range(m) if row[j] != 0)
        if rem[piv] % row[piv] != 0:
            return None
        y[i] = rem[piv] // row[piv]
        rem = [a - y[i] * c for a, c in zip(rem, row)]
    if any(rem):
        return None
    # x = y * U (restricted to the nonzero rows of H).
    x = [0] * n
    for yi, urow in zip(y, U[: len(rows)]):
        for j in range(n):
            x[j] += yi * urow[j]
    return x


def unimodular_inverse(U):
    """Inverse of a unimodular integer matrix, or None if the matrix is
    singular or the inverse is not integral."""
    n = len(U)
    inv = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        col = solve_rational(U, e)
        if col is None or any(matvec(U, col)[i] != e[i] for i in range(n)):
            return None
        if any(c.denominator != 1 for c in col):
            return None
        inv.append([int(c) for c in col])
    return transpose(inv)


@dataclass(frozen=True)
class AbelianGroup:
    """Presentation of Z^m / (column span of A), from the SNF of A.

    Coordinates on the quotient: apply `U` to an ambient vector, read entries
    with invariant 1 as dead, entries with invariant d > 1 modulo d, and the
    remaining entries as free integers. `lift` is an explicit section.
    """

    ambient_rank: int
    diagonal: tuple
    U: tuple
    Uinv: tuple

    @property
    def free_rank(self):
        return self.ambient_rank - sum(1 for d in self.diagonal if d != 0)

    @property
    def invariants(self):
        return tuple(d for d in self.diagonal if d > 1)

    @property
    def torsion_order(self):
        o = 1
        for d in self.invariants:
            o *= d
        return o

    def _coords(self, x):
        return [sum(u * a for u, a in zip(row, x)) for row in self.U]

    def project(self, x):
        """Class of an ambient integer vector: (free tuple, torsion tuple)."""
        y = self._coords(x)
        free = []
        tors = []
        for yi, d in zip(y, list(self.diagonal) + [0] * self.ambient_rank):
            if d == 0:
                free.append(yi)
            elif d > 1:
                tors.append(yi % d)
        return tuple(free), tuple(tors)

    def lift(self, free, tors=()):
        """An ambient integer vector mapping to the given class."""
        y = []
        fi = ti = 0
        for d in list(self.diagonal) + [0] * self.ambient_rank:
            if len(y) == self.ambient_rank:
                break
            if d == 0:
                y.append(free[fi])
                fi += 1
            elif d > 1:
                y.append(tors[ti])
                ti += 1
            else:
                y.append(0)
        return [sum(u * a for u, a in zip(row, y)) for row in self.Uinv]


def cokernel_presentation(A):
    """Presentation of Z^m modulo the lattice generated by the columns of A."""
    m = len(A)
    U, S, _ = smith_normal_form(A)
    diag = [S[i][i] for i in range(min(m, len(S[0]) if S and S[0] else 0))]
    diag = [d for d in diag if d != 0]
    return AbelianGroup(
        ambient_rank=m,
        diagonal=tuple(diag),
        U=tuple(tuple(row) for row in U),
        Uinv=tuple(tuple(row) for row in unimodular_inverse(U)),
    )
