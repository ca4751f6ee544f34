"""Exact integer and rational linear algebra.

Matrices are lists of rows; lattice bases are matrices whose *columns* are the
basis vectors.  Everything runs on Python ints (and Fractions where rational
input is allowed), so there is no overflow or rounding anywhere.

Canonical lattice form: column Hermite normal form with pivots ordered by
increasing row, positive pivot entries, and every entry to the right of a
pivot reduced into [0, pivot).  Two subgroups of Z^n are equal iff their HNF
bases are identical.
"""

from fractions import Fraction
from math import gcd


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(m, n):
    return [[0] * n for _ in range(m)]


def mat_mul(A, B):
    m, k = len(A), len(B)
    n = len(B[0]) if B else 0
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(n):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def columns(A):
    return [list(col) for col in zip(*A)] if A else []


def from_columns(cols, nrows=None):
    if not cols:
        return [[] for _ in range(nrows)] if nrows else []
    return [list(row) for row in zip(*cols)]


def hnf_columns(A):
    """Column HNF of an integer matrix.

    Returns (H, U) with H = A @ U, U unimodular, and H's nonzero columns in
    canonical form (pivot = lowest nonzero entry of each column, pivot rows
    strictly increasing left to right, pivots positive, entries in a pivot row
    to the right of the pivot reduced mod the pivot).  Zero columns of H are
    dropped; U is returned full-size so kernels can be read off separately.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    cols = columns(A)
    ucols = columns(identity_matrix(n))
    unplaced = list(range(n))
    placed = []
    for r in range(m - 1, -1, -1):
        live = [j for j in unplaced if cols[j][r] != 0]
        if not live:
            continue
        # Column gcd elimination in row r.
        pivot = live[0]
        for j in live[1:]:
            a, b = cols[pivot][r], cols[j][r]
            g, x, y = _xgcd(a, b)
            pa, pb = a // g, b // g
            new_p = [x * cols[pivot][t] + y * cols[j][t] for t in range(m)]
            new_j = [pa * cols[j][t] - pb * cols[pivot][t] for t in range(m)]
            nu_p = [x * ucols[pivot][t] + y * ucols[j][t] for t in range(n)]
            nu_j = [pa * ucols[j][t] - pb * ucols[pivot][t] for t in range(n)]
            cols[pivot], cols[j] = new_p, new_j
            ucols[pivot], ucols[j] = nu_p, nu_j
        if cols[pivot][r] < 0:
            cols[pivot] = [-t for t in cols[pivot]]
            ucols[pivot] = [-t for t in ucols[pivot]]
        placed.append(pivot)
        unplaced.remove(pivot)
    placed.reverse()  # pivot rows increasing
    # Reduce entries to the right of each pivot, working from the largest
    # pivot row downward so earlier reductions are never disturbed.
    for idx in range(len(placed) - 1, -1, -1):
        j = placed[idx]
        r = _last_nonzero(cols[j])
        p = cols[j][r]
        for k in placed[idx + 1:]:
            q = cols[k][r] // p
            if q:
                cols[k] = [cols[k][t] - q * cols[j][t] for t in range(m)]
                ucols[k] = [ucols[k][t] - q * ucols[j][t] for t in range(n)]
    H = from_columns([cols[j] for j in placed], nrows=m)
    U = from_columns([ucols[j] for j in placed + unplaced], nrows=n)
    return H, U


def _last_nonzero(col):
    for r in range(len(col) - 1, -1, -1):
        if col[r]:
            return r
    raise ValueError("zero column has no pivot")


def _xgcd(a, b):
    """Extended gcd; returns (g, x, y) with g = ax + by, g > 0 unless a=b=0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_basis(vectors, dim):
    """Canonical HNF basis (matrix, columns = basis) of the lattice spanned
    by the given integer vectors in Z^dim.  Empty lattice -> dim x 0 matrix."""
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return [[] for _ in range(dim)]
    H, _ = hnf_columns(from_columns([list(v) for v in vecs], nrows=dim))
    return H


def lattice_rank(B):
    return len(B[0]) if B and B[0] else 0


def kernel_basis(A):
    """Basis (list of integer vectors) of {x in Z^n : A x = 0}."""
    n = len(A[0]) if A else 0
    if n == 0:
        return []
    if not A or len(A) == 0:
        return [list(row) for row in identity_matrix(n)]
    H, U = hnf_columns(A)
    r = lattice_rank(H)
    ucols = columns(U)
    return [ucols[j] for j in range(r, n)]


def solve_integer(A, b):
    """One integer solution x of A x = b, or None.  A is m x n, b length m."""
    m = len(A)
    n = len(A[0]) if A else 0
    if all(v == 0 for v in b):
        return [0] * n
    if n == 0:
        return None
    H, U = hnf_columns(A)
    r = lattice_rank(H)
    hcols = columns(H)
    resid = list(b)
    y = [0] * r
    for j in range(r - 1, -1, -1):
        piv = _last_nonzero(hcols[j])
        if resid[piv] % hcols[j][piv] != 0:
            return None
        y[j] = resid[piv] // hcols[j][piv]
        if y[j]:
            for t in range(m):
                resid[t] -= y[j] * hcols[j][t]
    if any(resid):
        return None
    ucols = columns(U)
    x = [0] * n
    for j in range(r):
        if y[j]:
            for t in range(n):
                x[t] += y[j] * ucols[j][t]
    return x


def solve_rational(A, b):
    """One rational solution of A x = b (entries int or Fraction), or None."""
    m = len(A)
    n = len(A[0]) if A else 0
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    row = 0
    for col in range(n):
        sel = next((r for r in range(row, m) if M[r][col] != 0), None)
        if sel is None:
            continue
        M[row], M[sel] = M[sel], M[row]
        piv = M[row][col]
        M[row] = [x / piv for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [M[r][j] - f * M[row][j] for j in range(n + 1)]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if M[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def rational_rank(A):
    m = len(A)
    n = len(A[0]) if A else 0
    M = [[Fraction(A[i][j]) for j in range(n)] for i in range(m)]
    rank = 0
    for col in range(n):
        sel = next((r for r in range(rank, m) if M[r][col] != 0), None)
        if sel is None:
            continue
        M[rank], M[sel] = M[sel], M[rank]
        piv = M[rank][col]
        for r in range(rank + 1, m):
            if M[r][col] != 0:
                f = M[r][col] / piv
                M[r] = [M[r][j] - f * M[rank][j] for j in range(n)]
        rank += 1
    return rank


def smith_normal_form(A):
    """Diagonal entries d_1 | d_2 | ... (nonnegative) of the SNF of A."""
    M = [list(row) for row in A]
    m = len(M)
    n = len(M[0]) if M else 0
    diag = []
    top = 0
    while top < min(m, n):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(top, m):
            for j in range(top, n):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        M[top], M[bi] = M[bi], M[top]
        for row in M:
            row[top], row[bj] = row[bj], row[top]
        pivot_clean = False
        while not pivot_clean:
            pivot_clean = True
            for i in range(top + 1, m):
                if M[i][top]:
                    q = M[i][top] // M[top][top]
                    for j in range(top, n):
                        M[i][j] -= q * M[top][j]
                    if M[i][top]:
                        M[top], M[i] = M[i], M[top]
                        pivot_clean = False
            for j in range(top + 1, n):
                if M[top][j]:
                    q = M[top][j] // M[top][top]
                    for i in range(top, m):
                        M[i][j] -= q * M[i][top]
                    if M[top][j]:
                        for i in range(top, m):
                            M[i][top], M[i][j] = M[i][j], M[i][top]
                        pivot_clean = False
        # enforce divisibility of the remaining block by the pivot
        p = abs(M[top][top])
        offender = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if M[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(top, n):
                M[top][j] += M[offender][j]
            continue
        diag.append(p)
        top += 1
    return diag


def cokernel_invariants(A, ambient_rank):
    """Invariants (free_rank, [d_i >= 2]) of Z^ambient_rank / column-span(A)."""
    diag = smith_normal_form(A) if (A and A[0]) else []
    nonzero = [d for d in diag if d != 0]
    free = ambient_rank - len(nonzero)
    torsion = [d for d in nonzero if d > 1]
    return free, torsion


# -- lattice calculus --------------------------------------------------------

def lattice_sum(B1, B2):
    dim = len(B1) if B1 else len(B2)
    return lattice_basis(columns(B1) + columns(B2), dim)


def lattice_intersection(B1, B2):
    dim = len(B1)
    r1, r2 = lattice_rank(B1), lattice_rank(B2)
    if r1 == 0 or r2 == 0:
        return [[] for _ in range(dim)]
    stacked = [[B1[i][j] for j in range(r1)] + [-B2[i][j] for j in range(r2)]
               for i in range(dim)]
    vecs = []
    for k in kernel_basis(stacked):
        x = k[:r1]
        vecs.append([sum(B1[i][j] * x[j] for j in range(r1)) for i in range(dim)])
    return lattice_basis(vecs, dim)


def lattice_member(B, v):
    """Is the (integer or Fraction) vector v in the lattice with basis B?"""
    if all(x == 0 for x in v):
        return True
    if lattice_rank(B) == 0:
        return False
    if any(Fraction(x).denominator != 1 for x in v):
        return False
    return solve_integer(B, [int(x) for x in v]) is not None


def lattice_contains(Bsup, Bsub):
    return all(lattice_member(Bsup, col) for col in columns(Bsub))


def lattice_index(Bsub, Bsup):
    """Index [Bsup : Bsub] (requires Bsub <= Bsup); math.inf when ranks differ."""
    rsub, rsup = lattice_rank(Bsub), lattice_rank(Bsup)
    if rsub < rsup:
        return float("inf")
    X = []
    for col in columns(Bsub):
        sol = solve_integer(Bsup, col)
        if sol is None:
            raise ValueError("Bsub not contained in Bsup")
        X.append(sol)
    det = _det_int(from_columns(X, nrows=rsup))
    return abs(det)


def _det_int(A):
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        sel = next((r for r in range(col, n) if M[r][col] != 0), None)
        if sel is None:
            return 0
        if sel != col:
            M[col], M[sel] = M[sel], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [M[r][j] - f * M[col][j] for j in range(n)]
    assert det.denominator == 1
    return det.numerator


def lattice_saturation(B):
    """span_Q(B) intersect Z^n, as an HNF basis."""
    dim = len(B)
    if lattice_rank(B) == 0:
        return [[] for _ in range(dim)]
    # rows annihilating B span the orthogonal relations; their kernel is the
    # saturation.
    rel = kernel_basis(transpose(B))
    if not rel:
        return lattice_basis(columns(identity_matrix(dim)), dim)
    sat = kernel_basis(rel)
    return lattice_basis(sat, dim)


def lattice_reduce_vector(B, v):
    """Canonical representative of v modulo the lattice B (v rational)."""
    out = [Fraction(x) for x in v]
    cols = columns(B)
    order = sorted(range(len(cols)), key=lambda j: -_last_nonzero(cols[j]))
    for j in order:
        r = _last_nonzero(cols[j])
        p = cols[j][r]
        q = out[r] // p  # Fraction floor division -> integer Fraction
        q = int(q)
        if q:
            for t in range(len(out)):
                out[t] -= q * cols[j][t]
    return out


def lattice_quotient_reps(Bsub, Bsup):
    """Coset representatives of Bsub in Bsup (both HNF bases, Bsub <= Bsup).

    Returns a list of integer vectors in the ambient space, or raises
    ValueError if the quotient is infinite.
    """
    rsup = lattice_rank(Bsup)
    rsub = lattice_rank(Bsub)
    if rsup == 0:
        return [[0] * len(Bsup)]
    if rsub < rsup:
        raise ValueError("infinite lattice quotient")
    X = []
    for col in columns(Bsub):
        sol = solve_integer(Bsup, col)
        if sol is None:
            raise ValueError("Bsub not contained in Bsup")
        X.append(sol)
    Xmat = from_columns(X, nrows=rsup)
    reps_small = _cokernel_reps(Xmat)
    out = []
    for rep in reps_small:
        out.append(mat_vec(Bsup, rep))
    return out


def _cokernel_reps(X):
    """Representatives of Z^m / column-span(X) for square full-rank X."""
    m = len(X)
    M = [list(row) for row in X]
    left = identity_matrix(m)
    # row-style HNF via row ops tracked in `left`: left @ X = R upper triangular
    row = 0
    for col in range(len(M[0])):
        live = [r for r in range(row, m) if M[r][col] != 0]
        if not live:
            continue
        piv = live[0]
        for r in live[1:]:
            a, b = M[piv][col], M[r][col]
            g, x, y = _xgcd(a, b)
            pa, pb = a // g, b // g
            M[piv], M[r] = (
                [x * M[piv][t] + y * M[r][t] for t in range(len(M[0]))],
                [pa * M[r][t] - pb * M[piv][t] for t in range(len(M[0]))],
            )
            left[piv], left[r] = (
                [x * left[piv][t] + y * left[r][t] for t in range(m)],
                [pa * left[r][t] - pb * left[piv][t] for t in range(m)],
            )
        M[row], M[piv] = M[piv], M[row]
        left[row], left[piv] = left[piv], left[row]
        if M[row][col] < 0:
            M[row] = [-t for t in M[row]]
            left[row] = [-t for t in left[row]]
        row += 1
    diag = [M[i][i] for i in range(min(m, len(M[0])))]
    if len(diag) < m or any(d == 0 for d in diag):
        raise ValueError("infinite lattice quotient")
    # Z^m / L@?? : with left unimodular, q in Z^m runs over products of residues
    # in the triangular system; enumerate mixed radix then map back by left^{-1}.
    reps = []
    import itertools
    for combo in itertools.product(*[range(d) for d in diag]):
        reps.append(list(combo))
    inv = _unimodular_inverse(left)
    return [mat_vec(inv, rep) for rep in reps]


def _unimodular_inverse(U):
    n = len(U)
    M = [[Fraction(U[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        sel = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[sel] = M[sel], M[col]
        piv = M[col][col]
        M[col] = [x / piv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [M[r][j] - f * M[col][j] for j in range(2 * n)]
    out = [[M[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


def solve_congruence(M, L, c):
    """Solve M t = c (mod column-span(L)) for integer t.

    M is m x k, L is m x s (lattice basis, possibly empty), c length m.
    Returns (t0, T) with t0 a particular solution and T an HNF basis of the
    homogeneous solution lattice in Z^k, or None if unsolvable.
    """
    m = len(M)
    k = len(M[0]) if M else 0
    s = lattice_rank(L)
    aug = [[M[i][j] for j in range(k)] + [L[i][j] for j in range(s)] for i in range(m)]
    sol = solve_integer(aug, list(c))
    if sol is None:
        return None
    t0 = sol[:k]
    T = lattice_basis([v[:k] for v in kernel_basis(aug)], k)
    return t0, T


def vec_int(v):
    """Cast a rational vector with unit denominators to ints."""
    out = []
    for x in v:
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError("non-integer entry")
        out.append(f.numerator)
    return out


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
