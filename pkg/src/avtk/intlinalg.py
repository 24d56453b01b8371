"""Exact linear algebra over Z and Q on plain list-of-list matrices.

Everything here is fraction-free or Fraction-exact; no floats.  Column
spans are compared by flattening formal entries monomial by monomial,
clearing denominators with a single common scale applied to both sides,
and comparing canonical column Hermite forms.

Conventions:
  * hnf(M) returns (H, U) with H = M @ U, U unimodular, H the canonical
    column Hermite form (pivots positive, entries left of a pivot reduced,
    zero columns trailing).
  * snf(M) returns (S, U, V) with S = U @ M @ V and s_i | s_{i+1}.
  * symplectic_basis(E) returns (U, D) with U^T E U = [[0, D], [-D, 0]].
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import PreconditionError, RankDeficiencyError
from .scalars import FormalScalar, GeneratorSet, monomial_flatten


# -- basic matrix helpers ----------------------------------------------------

def shape(M):
    return (len(M), len(M[0]) if M else 0)


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def transpose(M):
    m, n = shape(M)
    return [[M[i][j] for i in range(m)] for j in range(n)]


def matmul(A, B):
    """Matrix product; entries may be ints, Fractions or formal scalars."""
    m, k = shape(A)
    k2, n = shape(B)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(A)} @ {shape(B)}")
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = None
            for t in range(k):
                term = A[i][t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def matvec(A, v):
    return [r[0] for r in matmul(A, [[x] for x in v])]


def mat_copy(M):
    return [list(row) for row in M]


def mat_neg(M):
    return [[-x for x in row] for row in M]


def mat_eq(A, B):
    return shape(A) == shape(B) and all(
        A[i][j] == B[i][j] for i in range(len(A)) for j in range(len(A[0]) if A else 0)
    )


# -- determinants ------------------------------------------------------------

def det(M):
    """Exact determinant.

    Integer matrices go through fraction-free Bareiss elimination; anything
    containing Fractions falls back to exact rational elimination.
    """
    n, n2 = shape(M)
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in M for x in row):
        return _det_bareiss(M)
    return _det_fraction(M)


def _det_bareiss(M):
    n = len(M)
    A = mat_copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _det_fraction(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        piv = None
        for r in range(k, n):
            if A[r][k] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        result *= A[k][k]
        inv = 1 / A[k][k]
        for i in range(k + 1, n):
            if A[i][k] == 0:
                continue
            f = A[i][k] * inv
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return sign * result


def det_mod2(M):
    """Determinant modulo 2 via GF(2) elimination (cheap parity filter)."""
    n, n2 = shape(M)
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    A = [[x & 1 for x in row] for row in M]
    for k in range(n):
        piv = None
        for r in range(k, n):
            if A[r][k]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
        for i in range(k + 1, n):
            if A[i][k]:
                for j in range(k, n):
                    A[i][j] ^= A[k][j]
    return 1


# -- Hermite and Smith forms -------------------------------------------------

def row_hnf(A):
    """(H, U) with H = U @ A in canonical row Hermite form.

    Pivots are positive, strictly right-moving, and entries above each
    pivot are reduced into [0, pivot).  Pivot selection favours minimal
    absolute value to keep intermediate entries small.
    """
    m, n = shape(A)
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    pr = 0
    for col in range(n):
        if pr >= m:
            break
        while True:
            live = [r for r in range(pr, m) if H[r][col] != 0]
            if not live:
                break
            piv = min(live, key=lambda r: abs(H[r][col]))
            if piv != pr:
                H[pr], H[piv] = H[piv], H[pr]
                U[pr], U[piv] = U[piv], U[pr]
            done = True
            for r in range(pr + 1, m):
                if H[r][col] != 0:
                    q = H[r][col] // H[pr][col]
                    if q:
                        for k in range(n):
                            H[r][k] -= q * H[pr][k]
                        for k in range(m):
                            U[r][k] -= q * U[pr][k]
                    if H[r][col] != 0:
                        done = False
            if done:
                break
        if H[pr][col] == 0:
            continue
        if H[pr][col] < 0:
            H[pr] = [-x for x in H[pr]]
            U[pr] = [-x for x in U[pr]]
        p = H[pr][col]
        for r in range(pr):
            q = H[r][col] // p
            if q:
                for k in range(n):
                    H[r][k] -= q * H[pr][k]
                for k in range(m):
                    U[r][k] -= q * U[pr][k]
        pr += 1
    return H, U


def hnf(M):
    """(H, U) with H = M @ U in canonical column Hermite form."""
    Ht, Ut = row_hnf(transpose(M))
    return transpose(Ht), transpose(Ut)


def rank(M):
    """Rank of an integer matrix (count of nonzero rows of its row HNF)."""
    H, _ = row_hnf(M)
    return sum(1 for row in H if any(row))


def int_kernel(M):
    """Basis of the integer kernel {x : M x = 0}, as a list of columns.

    The kernel of an integer matrix is automatically saturated; the basis
    returned is the canonical column Hermite basis of that lattice.
    """
    m, n = shape(M)
    H, U = hnf(M)
    cols = [j for j in range(n) if all(H[i][j] == 0 for i in range(m))]
    basis = [[U[i][j] for j in cols] for i in range(n)]
    if not cols:
        return []
    K, _ = hnf(basis)
    return [[K[i][j] for i in range(n)] for j in range(len(cols))]


def snf(M):
    """(S, U, V) with S = U @ M @ V in Smith normal form, s_i | s_{i+1} >= 0."""
    m, n = shape(M)
    S = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def add_row(src, dst, q):  # row dst -= q * row src
        for k in range(n):
            S[dst][k] -= q * S[src][k]
        for k in range(m):
            U[dst][k] -= q * U[src][k]

    def add_col(src, dst, q):  # col dst -= q * col src
        for r in range(m):
            S[r][dst] -= q * S[r][src]
        for r in range(n):
            V[r][dst] -= q * V[r][src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            S[t], S[i] = S[i], S[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for r in range(m):
                S[r][t], S[r][j] = S[r][j], S[r][t]
            for r in range(n):
                V[r][t], V[r][j] = V[r][j], V[r][t]
        dirty = False
        for r in range(t + 1, m):
            if S[r][t]:
                add_row(t, r, S[r][t] // S[t][t])
                if S[r][t]:
                    dirty = True
        for c in range(t + 1, n):
            if S[t][c]:
                add_col(t, c, S[t][c] // S[t][t])
                if S[t][c]:
                    dirty = True
        if dirty:
            continue
        d = S[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, -1)  # mix the offending row into row t
            continue
        if S[t][t] < 0:
            for k in range(n):
                S[t][k] = -S[t][k]
            for k in range(m):
                U[t][k] = -U[t][k]
        t += 1
    return S, U, V


def elementary_divisors(M):
    """Nonzero diagonal of the Smith form."""
    S, _, _ = snf(M)
    return [S[i][i] for i in range(min(shape(S))) if S[i][i] != 0]


def saturate_columns(M):
    """Basis of the saturation (Q-span of columns) intersected with Z^m.

    Returned as an m x r matrix in canonical column Hermite form; r is the
    rank of M.  The zero matrix saturates to an m x 0 matrix.
    """
    m, n = shape(M)
    S, U, V = snf(M)
    r = sum(1 for i in range(min(m, n)) if S[i][i] != 0)
    if r == 0:
        return [[] for _ in range(m)]
    Uinv = rat_inv(U)
    basis = [[int(Uinv[i][j]) for j in range(r)] for i in range(m)]
    H, _ = hnf(basis)
    return [[H[i][j] for j in range(r)] for i in range(m)]


# -- rational elimination ----------------------------------------------------

def rat_inv(M):
    """Exact inverse of a square matrix over Q (ValueError if singular)."""
    n, n2 = shape(M)
    if n != n2:
        raise ValueError("inverse of a non-square matrix")
    A = [[Fraction(x) for x in row] for row in M]
    B = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = None
        for r in range(k, n):
            if A[r][k] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            B[k], B[piv] = B[piv], B[k]
        inv = 1 / A[k][k]
        A[k] = [x * inv for x in A[k]]
        B[k] = [x * inv for x in B[k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [a - f * p for a, p in zip(A[i], A[k])]
                B[i] = [b - f * p for b, p in zip(B[i], B[k])]
    return B


def rat_solve(A, b):
    """One exact solution x of A x = b over Q, or None if inconsistent.

    A may be rectangular; free variables are set to zero and the full
    system is verified, so overdetermined consistent systems work.
    """
    m, n = shape(A)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * p for a, p in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for row_idx, c in enumerate(pivots):
        x[c] = aug[row_idx][n]
    # paranoia: verify (cheap at these sizes, catches elimination slips)
    for i in range(m):
        total = Fraction(0)
        for j in range(n):
            if x[j]:
                total += Fraction(A[i][j]) * x[j]
        if total != Fraction(b[i]):
            return None
    return x


# -- symplectic reduction ----------------------------------------------------

def symplectic_basis(E):
    """Bring an alternating nondegenerate integer form to type shape.

    Returns (U, D) with U unimodular and U^T E U = [[0, diag(D)], [-diag(D), 0]],
    D a positive divisibility chain d_1 | d_2 | ... | d_n.  Raises
    PreconditionError if E is not alternating with nonzero determinant of
    even size.
    """
    m, m2 = shape(E)
    if m != m2 or m % 2:
        raise PreconditionError("alternating form must be square of even size")
    for i in range(m):
        for j in range(m):
            if E[i][j] != -E[j][i]:
                raise PreconditionError("form is not alternating")
    if det(E) == 0:
        raise PreconditionError("form is degenerate")
    G = mat_copy(E)
    U = identity(m)

    def col_op(dst, src, q):  # basis vector dst += q * src (congruence update)
        if q == 0:
            return
        for r in range(m):
            G[r][dst] += q * G[r][src]
        for c in range(m):
            G[dst][c] += q * G[src][c]
        for r in range(m):
            U[r][dst] += q * U[r][src]

    def col_swap(i, j):
        if i == j:
            return
        for r in range(m):
            G[r][i], G[r][j] = G[r][j], G[r][i]
        G[i], G[j] = G[j], G[i]
        for r in range(m):
            U[r][i], U[r][j] = U[r][j], U[r][i]

    def col_neg(i):
        for r in range(m):
            G[r][i] = -G[r][i]
        for c in range(m):
            G[i][c] = -G[i][c]
        for r in range(m):
            U[r][i] = -U[r][i]

    ds = []
    start = 0
    while start < m:
        best = None
        for i in range(start, m):
            for j in range(start, m):
                if G[i][j] and (best is None or abs(G[i][j]) < abs(G[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            raise PreconditionError("form is degenerate on a sublattice")
        i, j = best
        col_swap(start, i)
        if j == start:
            j = i
        col_swap(start + 1, j)
        if G[start][start + 1] < 0:
            col_neg(start + 1)
        d = G[start][start + 1]
        dirty = False
        for c in range(start + 2, m):
            if G[start][c]:
                col_op(c, start + 1, -(G[start][c] // d))
                if G[start][c]:
                    dirty = True
            if G[start + 1][c]:
                col_op(c, start, G[start + 1][c] // d)
                if G[start + 1][c]:
                    dirty = True
        if dirty:
            continue
        offender = None
        for i in range(start + 2, m):
            for j in range(start + 2, m):
                if G[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            col_op(start, offender, 1)
            continue
        ds.append(d)
        start += 2
    n = m // 2
    # interleaved pairs (a_1, b_1, a_2, b_2, ...) -> block order (a_*, b_*)
    perm = zeros(m, m)
    for k in range(n):
        perm[2 * k][k] = 1
        perm[2 * k + 1][n + k] = 1
    U = matmul(U, perm)
    check = matmul(transpose(U), matmul(E, U))
    expected = zeros(m, m)
    for k in range(n):
        expected[k][n + k] = ds[k]
        expected[n + k][k] = -ds[k]
    if not mat_eq(check, expected):
        raise AssertionError("symplectic reduction postcondition failed")
    return U, ds


# -- span comparison on formal matrices ---------------------------------------

def as_scalar_matrix(M, gens: GeneratorSet | None = None):
    """Coerce a matrix of ints/Fractions/FormalScalars to all-FormalScalar."""
    found = None
    for row in M:
        for x in row:
            if isinstance(x, FormalScalar):
                if found is None:
                    found = x.gens
                elif x.gens != found:
                    raise PreconditionError("matrix mixes generator sets")
    if found is None:
        found = gens if gens is not None else GeneratorSet(())
    out = []
    for row in M:
        out.append(
            [x if isinstance(x, FormalScalar) else found.constant(x) for x in row]
        )
    return out


def flatten_to_int(*matrices):
    """Flatten scalar matrices over shared monomials and one common scale.

    All matrices must have the same number of rows.  Rows of the result
    are indexed by (matrix row, monomial); a single common denominator
    scale is applied across every input so lattice relations survive.
    Returns the list of integer matrices.
    """
    if not matrices:
        return []
    nrows = len(matrices[0])
    widths = [len(M[0]) if M and M[0] else 0 for M in matrices]
    combined = []
    for i in range(nrows):
        row = []
        for M in matrices:
            row.extend(M[i])
        combined.append(row)
    monomials, table = monomial_flatten(combined)
    denom = 1
    for row in table:
        for coeffs in row:
            for c in coeffs:
                denom = lcm(denom, c.denominator)
    outs = []
    offset = 0
    for M, w in zip(matrices, widths):
        if monomials:
            flat = []
            for i in range(nrows):
                for k in range(len(monomials)):
                    flat.append(
                        [int(table[i][offset + j][k] * denom) for j in range(w)]
                    )
        else:  # every entry of every input is zero
            flat = [[0] * w for _ in range(max(nrows, 1))]
        outs.append(flat)
        offset += w
    return outs


def span_equal(A, B, gens: GeneratorSet | None = None) -> bool:
    """Do the columns of A and B generate the same lattice?

    Entries may be formal scalars; both sides are flattened monomial by
    monomial and scaled by one common integer before comparing canonical
    column Hermite forms.  Each side must have full column rank, otherwise
    RankDeficiencyError is raised.
    """
    A = as_scalar_matrix(A, gens)
    B = as_scalar_matrix(B, gens)
    if len(A) != len(B):
        raise PreconditionError("span comparison of matrices with different row counts")
    ZA, ZB = flatten_to_int(A, B)
    _require_full_column_rank(ZA, "left")
    _require_full_column_rank(ZB, "right")
    HA, _ = hnf(ZA)
    HB, _ = hnf(ZB)
    return _nonzero_cols(HA) == _nonzero_cols(HB)


def span_contains(A, B, gens: GeneratorSet | None = None) -> bool:
    """Is every column of B inside the lattice generated by A's columns?"""
    A = as_scalar_matrix(A, gens)
    B = as_scalar_matrix(B, gens)
    if len(A) != len(B):
        raise PreconditionError("span comparison of matrices with different row counts")
    ZA, ZB = flatten_to_int(A, B)
    _require_full_column_rank(ZA, "left")
    _require_full_column_rank(ZB, "right")
    coords = integer_coordinates(ZA, ZB)
    return coords is not None


def integer_coordinates(ZA, ZB):
    """Integer X with ZA @ X = ZB, or None (ZA must have full column rank)."""
    m, n = shape(ZA)
    _, k = shape(ZB)
    X = []
    for j in range(k):
        col = [ZB[i][j] for i in range(m)]
        x = rat_solve(ZA, col)
        if x is None or any(f.denominator != 1 for f in x):
            return None
        X.append([int(f) for f in x])
    return transpose(X) if X else [[] for _ in range(n)]


def rational_coordinates(ZA, ZB):
    """Rational X with ZA @ X = ZB, or None if some column leaves the Q-span."""
    m, n = shape(ZA)
    _, k = shape(ZB)
    X = []
    for j in range(k):
        x = rat_solve(ZA, [ZB[i][j] for i in range(m)])
        if x is None:
            return None
        X.append(x)
    return transpose(X) if X else [[] for _ in range(n)]


def _require_full_column_rank(Z, side):
    m, n = shape(Z)
    if rank(Z) != n:
        raise RankDeficiencyError(
            f"{side} matrix columns are linearly dependent (rank < {n})"
        )


def _nonzero_cols(H):
    m, n = shape(H)
    keep = [j for j in range(n) if any(H[i][j] for i in range(m))]
    return tuple(tuple(H[i][j] for j in keep) for i in range(m))
