"""Exact integer and rational linear algebra for small dense systems.

Matrices are plain lists of lists. Integer routines stay in Python ints
(arbitrary precision), rational routines use fractions.Fraction. All of
this is cubic-time elimination, which is plenty for the matrix sizes that
fan and weight computations produce.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

IntMatrix = list[list[int]]
IntVector = tuple[int, ...]


def vector_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v) -> IntVector:
    """Rescale an integer vector to its primitive representative.

    Raises ValueError on the zero vector, which has no primitive rescaling.
    """
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    oi[j] += aik * bk[j]
    return out


def mat_vec(a, v):
    return tuple(sum(ai[j] * v[j] for j in range(len(v))) for ai in a)


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def smith_normal_form(a: IntMatrix):
    """Compute the Smith normal form of an integer matrix.

    Returns:
        (d, u, v) with d = u * a * v, u and v unimodular, d diagonal with
        nonnegative entries satisfying d[i] | d[i+1].
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        for j in range(n):
            d[dst][j] += c * d[src][j]
        for j in range(m):
            u[dst][j] += c * u[src][j]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < m and t < n:
        # find a nonzero pivot in the remaining block
        pi = pj = -1
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0:
                    pi, pj = i, j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # clear column t by row operations, euclidean style
            dirty = False
            for i in range(t + 1, m):
                if d[i][t] == 0:
                    continue
                q = d[i][t] // d[t][t]
                add_row(t, i, -q)
                if d[i][t] != 0:
                    swap_rows(t, i)
                    dirty = True
            for j in range(t + 1, n):
                if d[t][j] == 0:
                    continue
                q = d[t][j] // d[t][t]
                add_col(t, j, -q)
                if d[t][j] != 0:
                    swap_cols(t, j)
                    dirty = True
            if not dirty:
                break
        t += 1

    rank = t
    for i in range(rank):
        if d[i][i] < 0:
            for j in range(n):
                d[i][j] = -d[i][j]
            # keep d = u a v consistent: negate row of u
            for j in range(m):
                u[i][j] = -u[i][j]
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            x, y = d[i][i], d[i + 1][i + 1]
            if y % x != 0:
                changed = True
                add_col(i + 1, i, 1)
                # re-diagonalize the 2x2 block; each swap shrinks |pivot|
                while d[i + 1][i] != 0 or d[i][i + 1] != 0:
                    while d[i + 1][i] != 0:
                        q = d[i + 1][i] // d[i][i]
                        add_row(i, i + 1, -q)
                        if d[i + 1][i] != 0:
                            swap_rows(i, i + 1)
                    while d[i][i + 1] != 0:
                        q = d[i][i + 1] // d[i][i]
                        add_col(i, i + 1, -q)
                        if d[i][i + 1] != 0:
                            swap_cols(i, i + 1)
                for k in (i, i + 1):
                    if d[k][k] < 0:
                        for j in range(n):
                            d[k][j] = -d[k][j]
                        for j in range(m):
                            u[k][j] = -u[k][j]
    return d, u, v


def elementary_divisors(a: IntMatrix) -> list[int]:
    d, _, _ = smith_normal_form(a)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i] != 0:
            out.append(d[i][i])
    return out


def lattice_index(a: IntMatrix) -> int:
    """Index of the column span of a inside its saturation.

    The product of the elementary divisors; 1 exactly when the columns
    generate a saturated sublattice (a direct summand).
    """
    out = 1
    for e in elementary_divisors(a):
        out *= e
    return out


def integer_kernel(a: IntMatrix) -> list[IntVector]:
    """Basis of the integer kernel {x : a x = 0} as a list of vectors."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return []
    d, _, v = smith_normal_form(a)
    rank = 0
    for i in range(min(m, n)):
        if d[i][i] != 0:
            rank += 1
    cols = []
    for j in range(rank, n):
        cols.append(tuple(v[i][j] for i in range(n)))
    return cols


def invert_unimodular(a: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    r, pivots = rref(aug)
    if len(pivots) < n:
        raise ValueError("matrix is singular")
    inv = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            val = r[i][j]
            if val.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(val))
        inv.append(row)
    return inv


def saturation_data(b: IntMatrix):
    """Split the ambient lattice along the column span of b.

    Args:
        b: n x d integer matrix whose columns span a rank-d sublattice.

    Returns:
        (proj, sect, sat) where sat is an n x d matrix whose columns are a
        basis of the saturation of the span, proj is the (n-d) x n matrix of
        the quotient map Z^n -> Z^(n-d), and sect is an n x (n-d) integer
        section of proj (proj * sect = identity).
    """
    n = len(b)
    d_cols = len(b[0]) if b else 0
    dd, u, _ = smith_normal_form(b)
    rank = 0
    for i in range(min(n, d_cols)):
        if dd[i][i] != 0:
            rank += 1
    uinv = invert_unimodular(u)
    sat = [[uinv[i][j] for j in range(rank)] for i in range(n)]
    proj = [u[i][:] for i in range(rank, n)]
    sect = [[uinv[i][j] for j in range(rank, n)] for i in range(n)]
    return proj, sect, sat


# ---------------------------------------------------------------------------
# rational elimination

def rref(a):
    """Reduced row echelon form over Fraction. Returns (rows, pivot columns)."""
    rows = [[Fraction(x) for x in row] for row in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def rank(a) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def solve(a, b):
    """One solution of a x = b over the rationals, or None if inconsistent."""
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = r[i][n]
    return tuple(x)


def nullspace(a):
    """Basis of the rational kernel of a."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return []
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fc]
        basis.append(tuple(v))
    return basis


def det(a) -> Fraction:
    n = len(a)
    rows = [[Fraction(x) for x in row] for row in a]
    out = Fraction(1)
    for c in range(n):
        pr = None
        for i in range(c, n):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            return Fraction(0)
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            out = -out
        out *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out
