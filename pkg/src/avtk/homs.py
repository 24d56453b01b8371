"""Homomorphism modules between polarised tori, exactly over Z.

A homomorphism f between tori X and Y is a pair of matrices: an integer
rational representation M (2m x 2n, on lattices) and an analytic
representation F (m x n, on ambient spaces) tied together by the exact
identity F @ periods_X = periods_Y @ M.  Since the right period block of
X is constant and invertible over Q in the frames used here, F is
determined by the right half of periods_Y @ M, and the identity on the
left half flattens, monomial by monomial, into an integer linear system
whose kernel is the whole homomorphism module.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product
from math import lcm

from .errors import PreconditionError
from .intlinalg import (
    det,
    det_mod2,
    int_kernel,
    mat_eq,
    matmul,
    rat_inv,
    saturate_columns,
    transpose,
)
from .scalars import ScalarFraction
from .torus import (
    DualResult,
    PolarisedTorus,
    SubvarietyEmbedding,
    restricted_polarisation,
)
from .parallel import coefficient_values, run_search
from .verdicts import Found, NoHoms, NotFoundUpToBound


class HomGenerator:
    """One generator of Hom(X, Y): rational and analytic representations.

    The defining identity F @ periods_X == periods_Y @ M is verified on
    construction, so a HomGenerator in hand is proof of itself.
    """

    __slots__ = ("domain", "codomain", "rational_rep", "analytic_rep")

    def __init__(self, domain, codomain, rational_rep, analytic_rep):
        M = tuple(tuple(int(x) for x in row) for row in rational_rep)
        F = []
        for row in analytic_rep:
            F.append(tuple(x if isinstance(x, ScalarFraction) else ScalarFraction(x) for x in row))
        F = tuple(F)
        if len(M) != 2 * codomain.dim or any(len(r) != 2 * domain.dim for r in M):
            raise PreconditionError("rational representation has wrong shape")
        if len(F) != codomain.dim or any(len(r) != domain.dim for r in F):
            raise PreconditionError("analytic representation has wrong shape")
        for row in F:
            for x in row:
                if not x.is_polynomial():
                    raise PreconditionError(
                        "analytic representation must be polynomial in these frames"
                    )
        FP = matmul([[x.as_scalar() for x in row] for row in F],
                    [list(r) for r in domain.periods])
        PM = matmul([list(r) for r in codomain.periods], [list(r) for r in M])
        if not mat_eq(FP, PM):
            raise PreconditionError(
                "representations do not satisfy F @ periods = periods @ M"
            )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "rational_rep", M)
        object.__setattr__(self, "analytic_rep", F)

    def __setattr__(self, *args):
        raise AttributeError("HomGenerator is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomGenerator)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.rational_rep == other.rational_rep
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.rational_rep))

    def __repr__(self) -> str:
        return f"HomGenerator(rational_rep={self.rational_rep!r})"


def _constant_right_block(T: PolarisedTorus):
    n = T.dim
    R = T.right_block()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = R[i][j]
            if not x.is_constant():
                raise PreconditionError(
                    f"right period block entry ({i},{j}) = {x} is not constant; "
                    "bring the torus to a frame with a constant right block first"
                )
            row.append(x.constant_value())
        out.append(row)
    try:
        return rat_inv(out)
    except ValueError:
        raise PreconditionError("right period block is singular over Q") from None


def hom_module(X: PolarisedTorus, Y: PolarisedTorus):
    """Basis of Hom(X, Y) as verified HomGenerators (may be empty).

    The basis is the canonical Hermite basis of the saturated integer
    kernel of the flattened identity, so repeated runs agree entry for
    entry.
    """
    if X.gens != Y.gens:
        raise PreconditionError("tori live over different generator sets")
    n, m = X.dim, Y.dim
    DXinv = _constant_right_block(X)
    W = matmul(DXinv, X.left_block())  # acts on the right of M_R's image
    PY = [list(r) for r in Y.periods]
    unknowns = 4 * m * n
    zero = X.gens.zero()
    coeffs = [[[zero] * unknowns for _ in range(n)] for _ in range(m)]
    for r in range(2 * m):
        for c in range(2 * n):
            k = r * 2 * n + c
            if c < n:
                for i in range(m):
                    coeffs[i][c][k] = coeffs[i][c][k] - PY[i][r]
            else:
                for i in range(m):
                    for j in range(n):
                        coeffs[i][j][k] = coeffs[i][j][k] + PY[i][r] * W[c - n][j]
    monomials = set()
    for i in range(m):
        for j in range(n):
            for k in range(unknowns):
                monomials.update(coeffs[i][j][k].terms)
    monomials = sorted(monomials, key=lambda mo: (sum(mo), mo))
    denom = 1
    for i in range(m):
        for j in range(n):
            for k in range(unknowns):
                for c in coeffs[i][j][k].terms.values():
                    denom = lcm(denom, c.denominator)
    rows = []
    for i in range(m):
        for j in range(n):
            for mono in monomials:
                rows.append(
                    [int(coeffs[i][j][k].terms.get(mono, Fraction(0)) * denom)
                     for k in range(unknowns)]
                )
    if not rows:
        rows = [[0] * unknowns]
    basis_vecs = int_kernel(rows)
    gens_out = []
    for vec in basis_vecs:
        M = [[vec[r * 2 * n + c] for c in range(2 * n)] for r in range(2 * m)]
        MR = [[M[r][n + j] for j in range(n)] for r in range(2 * m)]
        F = matmul(matmul(PY, MR), DXinv)
        gens_out.append(HomGenerator(X, Y, M, F))
    return gens_out


def dual_hom(f: HomGenerator, dual_domain: DualResult | None = None,
             dual_codomain: DualResult | None = None) -> HomGenerator:
    """The induced homomorphism between the duals, in their recorded bases.

    For f: X -> Y this is a homomorphism dual(Y) -> dual(X).  On character
    lattices the rational representation is the transpose; composing with
    the basis bookkeeping of dual() (the quarter-turn block matrix J that
    relates a standard frame's dual basis to the dual torus's raw frame,
    and the recorded permutations) gives the matrix below, and the
    analytic representation is recomputed from the dual frames and
    verified.
    """
    X, Y = f.domain, f.codomain
    dX = dual_domain if dual_domain is not None else X.dual()
    dY = dual_codomain if dual_codomain is not None else Y.dual()
    n, m = X.dim, Y.dim

    def quarter_turn(k):
        J = [[0] * (2 * k) for _ in range(2 * k)]
        for i in range(k):
            J[k + i][i] = 1
            J[i][k + i] = -1
        return J

    def perm_matrix(perm, k):
        P = [[0] * (2 * k) for _ in range(2 * k)]
        for j, pj in enumerate(perm):
            P[pj][j] = 1
            P[k + pj][k + j] = 1
        return P

    JX = quarter_turn(n)
    JY = quarter_turn(m)
    PX = perm_matrix(dX.permutation, n)
    PY = perm_matrix(dY.permutation, m)
    Mt = transpose([list(r) for r in f.rational_rep])
    inner = matmul([[-x for x in row] for row in JX], matmul(Mt, JY))
    Mhat = matmul(transpose(PX), matmul(inner, PY))
    Dinv = _constant_right_block(dY.torus)
    nh = dY.torus.dim
    MR = [[Mhat[r][nh + j] for j in range(nh)] for r in range(2 * n)]
    F = matmul(matmul([list(r) for r in dX.torus.periods], MR), Dinv)
    return HomGenerator(dY.torus, dX.torus, Mhat, F)


class IdempotentData:
    """The symmetric idempotent attached to a polarised subtorus.

    epsilon is the rational projector onto the subtorus factor, exponent
    is the largest divisor of the restricted type, and norm is the
    integral endomorphism exponent * epsilon.
    """

    __slots__ = ("embedding", "epsilon", "exponent", "norm")

    def __init__(self, embedding, epsilon, exponent, norm):
        object.__setattr__(self, "embedding", embedding)
        object.__setattr__(self, "epsilon", tuple(tuple(x) for x in epsilon))
        object.__setattr__(self, "exponent", int(exponent))
        object.__setattr__(self, "norm", tuple(tuple(int(x) for x in row) for row in norm))

    def __setattr__(self, *args):
        raise AttributeError("IdempotentData is immutable")


def idempotent(emb: SubvarietyEmbedding) -> IdempotentData:
    """Symmetric idempotent of a sublattice: J (J^T E J)^(-1) J^T E.

    Requires the restricted form to be nondegenerate.  The projector is
    idempotent by construction; the norm endomorphism (exponent times the
    projector) must be integral, which is exactly the condition for the
    sublattice to behave like a polarised subtorus, and is verified.
    """
    T = emb.torus
    J = [list(r) for r in emb.columns]
    E = [list(r) for r in T.gram]
    gram_b, rtype = restricted_polarisation(T, emb)
    alpha = rat_inv(gram_b)
    eps = matmul(J, matmul(alpha, matmul(transpose(J), E)))
    if not mat_eq(matmul(eps, eps), eps):
        raise AssertionError("projector is not idempotent")
    exponent = rtype[-1]
    norm = [[Fraction(exponent) * x for x in row] for row in eps]
    for row in norm:
        for x in row:
            if Fraction(x).denominator != 1:
                raise PreconditionError(
                    "norm endomorphism is not integral; the sublattice does not "
                    "carry the restricted polarisation as a subtorus"
                )
    return IdempotentData(emb, eps, exponent, norm)


def complementary_subvariety(emb: SubvarietyEmbedding) -> SubvarietyEmbedding:
    """The complementary subtorus: saturation of the image of 1 - epsilon.

    The complement of the whole torus is the rank-0 embedding.  Together
    the two sublattices span a finite-index sublattice of the full
    lattice, which is verified.
    """
    T = emb.torus
    data = idempotent(emb)
    m2 = 2 * T.dim
    comp = [[(Fraction(1) if i == j else Fraction(0)) - data.epsilon[i][j]
             for j in range(m2)] for i in range(m2)]
    denom = lcm(*(x.denominator for row in comp for x in row))
    scaled = [[int(x * denom) for x in row] for row in comp]
    cols = saturate_columns(scaled)
    out = SubvarietyEmbedding(T, cols)
    joint = [list(emb.columns[i]) + list(out.columns[i]) for i in range(m2)]
    if out.rank + emb.rank != m2 or det(joint) == 0:
        raise AssertionError("complement does not span the torus with the input")
    return out


# -- bounded isomorphism search ------------------------------------------------

def _isom_slab(args):
    common, first_values, base = args
    mats, size, bound, polarised, gram_x, gram_y, parities = common
    r = len(mats)
    values = coefficient_values(bound)
    stride = len(values) ** (r - 1)
    for fi, first in enumerate(first_values):
        for ri, tail in enumerate(
            iter_product(values, repeat=r - 1) if r > 1 else [()]
        ):
            c = (first,) + tail
            if all(v == 0 for v in c):
                continue
            if parities is not None and tuple(v & 1 for v in c) not in parities:
                continue
            M = [[sum(c[g] * mats[g][i][j] for g in range(r)) for j in range(size)]
                 for i in range(size)]
            d = det(M)
            if d != 1 and d != -1:
                continue
            if polarised:
                pulled = matmul(transpose(M), matmul(gram_y, M))
                if not mat_eq(pulled, gram_x):
                    continue
            return ((base + fi) * stride + ri, (c, tuple(tuple(row) for row in M)))
    return None


def isom_search(X: PolarisedTorus, Y: PolarisedTorus, bound: int = 10,
                polarised: bool = False):
    """Bounded search for an isomorphism X -> Y among integer combinations
    of the Hom generators.

    A combination is a witness when its rational representation is
    unimodular (and additionally pulls the polarisation of Y back to that
    of X when ``polarised`` is set).  Returns Found with the first witness
    in the deterministic coefficient order, NotFoundUpToBound, or NoHoms
    when the homomorphism module is trivial.  A parity filter modulo 2
    discards most non-unimodular candidates before any determinant work.
    """
    if bound < 1:
        raise PreconditionError("search bound must be at least 1")
    gens = hom_module(X, Y)
    if not gens:
        return NoHoms()
    if X.dim != Y.dim:
        return NotFoundUpToBound(bound=bound, tested=0)
    size = 2 * X.dim
    r = len(gens)
    mats = tuple(g.rational_rep for g in gens)
    parities = None
    if r <= 10:
        parities = set()
        for eps in iter_product((0, 1), repeat=r):
            M = [[sum(eps[g] * mats[g][i][j] for g in range(r)) % 2
                  for j in range(size)] for i in range(size)]
            if det_mod2(M):
                parities.add(eps)
    common = (mats, size, bound, polarised,
              [list(r_) for r_ in X.gram], [list(r_) for r_ in Y.gram], parities)
    hit = run_search(_isom_slab, common, r, bound)
    total = len(coefficient_values(bound)) ** r
    if hit is None:
        return NotFoundUpToBound(bound=bound, tested=total)
    index, (c, M) = hit
    return Found(witness=M, coefficients=c, tested=index + 1)
