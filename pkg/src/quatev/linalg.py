"""Small exact linear algebra over Fraction / QuadExt scalars."""

from __future__ import annotations

from fractions import Fraction


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(A, v):
    return [sum(A[i][t] * v[t] for t in range(len(v))) for i in range(len(A))]


def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * x for x in row] for row in A]


def identity(n, one=Fraction(1)):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def column_space_basis(A):
    """A basis of the column span, by exact Gaussian elimination."""
    if not A:
        return []
    rows, cols = len(A), len(A[0])
    work = [[A[i][j] for i in range(rows)] for j in range(cols)]  # columns as rows
    basis = []
    pivots = []
    for vec in work:
        v = list(vec)
        for bvec, piv in zip(basis, pivots):
            if v[piv] != 0:
                c = v[piv] / bvec[piv]
                v = [x - c * y for x, y in zip(v, bvec)]
        nz = next((i for i, x in enumerate(v) if x != 0), None)
        if nz is not None:
            basis.append(v)
            pivots.append(nz)
    return [list(b) for b in basis]


def solve_exact(A, b):
    """Solve A x = b exactly; raises ValueError if inconsistent/singular-ambiguous."""
    n, m = len(A), len(A[0])
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    piv_cols = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    x = [0 * A[0][0] for _ in range(m)]
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    # consistency
    for i in range(n):
        if sum(A[i][j] * x[j] for j in range(m)) != b[i]:
            raise ValueError("inconsistent system")
    return x


def mat_inv(A):
    """Exact inverse of a square matrix."""
    n = len(A)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve_exact(A, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def charpoly(A):
    """Characteristic polynomial det(X*I - A), Berkowitz (division-free).

    Returns coefficients ascending: [c_0, ..., c_{n-1}, 1].
    """
    n = len(A)
    if n == 0:
        return [1]
    zero = 0 * A[0][0]
    one = zero + 1
    poly = [one, -A[0][0]]  # descending coefficients of X - a00
    for r in range(1, n):
        a = A[r][r]
        R = [A[r][j] for j in range(r)]
        C = [A[i][r] for i in range(r)]
        M = [[A[i][j] for j in range(r)] for i in range(r)]
        # s_k = R . M^k . C, k = 0..r-1
        s, vec = [], C
        for _ in range(r):
            s.append(sum((x * y for x, y in zip(R, vec)), start=zero))
            vec = mat_vec(M, vec)
        t = [one, -a] + [-x for x in s]
        # truncated convolution: the Berkowitz Toeplitz product
        new = []
        for i in range(r + 2):
            acc = zero
            lo = max(0, i - len(t) + 1)
            for j in range(lo, min(i, len(poly) - 1) + 1):
                acc = acc + t[i - j] * poly[j]
            new.append(acc)
        poly = new
    return list(reversed(poly))
