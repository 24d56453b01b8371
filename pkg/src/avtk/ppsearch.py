"""Bounded search for principal polarisations, as an exact two-phase sieve.

Whether a torus A carries a principal polarisation compatible with a
model Ahat of its dual comes down to an integer symmetric positive
definite matrix H whose action sends the lattice of A onto the lattice
of Ahat.  Containment of the image lattice is linear in the entries of
H, so phase one solves it once and for all: the admissible symmetric
matrices form a lattice, usually of very small rank.  Positivity and
surjectivity are not linear, so phase two enumerates bounded integer
combinations of that family and tests the two remaining conditions,
both of which reduce to integer determinants.
"""

from __future__ import annotations

from itertools import product as iter_product
from math import lcm

from fractions import Fraction

from .errors import PreconditionError
from .intlinalg import det, hnf, int_kernel, matmul, span_equal
from .parallel import coefficient_values, run_search
from .torus import PolarisedTorus
from .verdicts import Found, NotFoundUpToBound


class PPCandidate:
    """A symmetric integer matrix proposed as a principal polarisation."""

    __slots__ = ("H",)

    def __init__(self, H):
        H = tuple(tuple(int(x) for x in row) for row in H)
        n = len(H)
        if any(len(row) != n for row in H):
            raise PreconditionError("candidate matrix must be square")
        if any(H[i][j] != H[j][i] for i in range(n) for j in range(i)):
            raise PreconditionError("candidate matrix must be symmetric")
        object.__setattr__(self, "H", H)

    def __setattr__(self, *args):
        raise AttributeError("PPCandidate is immutable")

    def leading_minors(self):
        """Determinants of the leading principal submatrices, in order."""
        n = len(self.H)
        return tuple(
            det([[self.H[i][j] for j in range(k)] for i in range(k)])
            for k in range(1, n + 1)
        )

    def is_positive_definite(self) -> bool:
        return _positive_definite([list(r) for r in self.H])

    def __eq__(self, other) -> bool:
        return isinstance(other, PPCandidate) and self.H == other.H

    def __hash__(self) -> int:
        return hash(self.H)

    def __repr__(self) -> str:
        return f"PPCandidate({self.H!r})"


def _positive_definite(H) -> bool:
    if H[0][0] <= 0:
        return False
    n = len(H)
    for k in range(2, n + 1):
        if det([[H[i][j] for j in range(k)] for i in range(k)]) <= 0:
            return False
    return True


class AdmissibleFamily:
    """The lattice of integer symmetric H with H * (lattice of A) inside
    the lattice of Ahat.

    basis holds symmetric n x n matrices; coordinates holds, for each
    basis element B, the integer 2n x 2n matrix C with
    B @ periods_A = periods_Ahat @ C, so a combination sum(c_i B_i) maps
    the lattice onto (not just into) the target exactly when
    det(sum(c_i C_i)) = +-1.
    """

    __slots__ = ("source", "target", "basis", "coordinates")

    def __init__(self, source, target, basis, coordinates):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(
            self, "basis", tuple(tuple(tuple(int(x) for x in row) for row in B) for B in basis)
        )
        object.__setattr__(
            self,
            "coordinates",
            tuple(tuple(tuple(int(x) for x in row) for row in C) for C in coordinates),
        )

    def __setattr__(self, *args):
        raise AttributeError("AdmissibleFamily is immutable")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def member(self, coefficients):
        """The symmetric matrix sum(c_i * basis_i)."""
        if len(coefficients) != self.rank:
            raise PreconditionError("one coefficient per basis element required")
        n = self.source.dim
        return [
            [sum(c * B[i][j] for c, B in zip(coefficients, self.basis)) for j in range(n)]
            for i in range(n)
        ]


def admissible_family(A: PolarisedTorus, Ahat: PolarisedTorus) -> AdmissibleFamily:
    """All integer symmetric H whose image of A's lattice lies in Ahat's.

    The n(n+1)/2 independent entries of H and the target-lattice
    coordinates of each image column are integer unknowns; requiring
    H @ periods_A = periods_Ahat @ C entrywise, monomial by monomial,
    is an integer linear system whose kernel projects bijectively onto
    the family (the coordinates C are determined by H).  The basis
    returned is the Hermite basis of the projection, and every element
    is re-verified against the containment it encodes.
    """
    if A.gens != Ahat.gens:
        raise PreconditionError("tori live over different generator sets")
    if A.dim != Ahat.dim:
        raise PreconditionError("tori have different dimensions")
    n = A.dim
    PA = [list(r) for r in A.periods]
    PH = [list(r) for r in Ahat.periods]
    sym = {}
    for i in range(n):
        for j in range(i, n):
            sym[(i, j)] = len(sym)
    s = len(sym)
    unknowns = s + 4 * n * n
    zero = A.gens.zero()
    coeffs = [[[zero] * unknowns for _ in range(2 * n)] for _ in range(n)]
    for i in range(n):
        for j in range(2 * n):
            for k in range(n):
                u = sym[(min(i, k), max(i, k))]
                coeffs[i][j][u] = coeffs[i][j][u] + PA[k][j]
            for r in range(2 * n):
                u = s + j * 2 * n + r
                coeffs[i][j][u] = coeffs[i][j][u] - PH[i][r]
    monomials = set()
    for i in range(n):
        for j in range(2 * n):
            for u in range(unknowns):
                monomials.update(coeffs[i][j][u].terms)
    monomials = sorted(monomials, key=lambda mo: (sum(mo), mo))
    denom = 1
    for i in range(n):
        for j in range(2 * n):
            for u in range(unknowns):
                for c in coeffs[i][j][u].terms.values():
                    denom = lcm(denom, c.denominator)
    rows = []
    for i in range(n):
        for j in range(2 * n):
            for mono in monomials:
                rows.append(
                    [int(coeffs[i][j][u].terms.get(mono, Fraction(0)) * denom)
                     for u in range(unknowns)]
                )
    if not rows:
        rows = [[0] * unknowns]
    vecs = int_kernel(rows)
    if not vecs:
        return AdmissibleFamily(A, Ahat, (), ())
    r = len(vecs)
    proj = [[vecs[g][u] for g in range(r)] for u in range(s)]
    canon, U = hnf(proj)
    full = matmul([[vecs[g][u] for g in range(r)] for u in range(unknowns)], U)
    basis = []
    coords = []
    for g in range(r):
        H = [[0] * n for _ in range(n)]
        for (i, j), u in sym.items():
            H[i][j] = full[u][g]
            H[j][i] = full[u][g]
        C = [[full[s + j * 2 * n + row][g] for j in range(2 * n)] for row in range(2 * n)]
        left = matmul(H, PA)
        right = matmul(PH, C)
        for i in range(n):
            for j in range(2 * n):
                if left[i][j] != right[i][j]:
                    raise AssertionError("family element fails its containment identity")
        basis.append(H)
        coords.append(C)
    return AdmissibleFamily(A, Ahat, basis, coords)


def _pp_slab(args):
    common, first_values, base = args
    basis, coords, n, bound = common
    r = len(basis)
    values = coefficient_values(bound)
    stride = len(values) ** (r - 1)
    for fi, first in enumerate(first_values):
        for ri, tail in enumerate(
            iter_product(values, repeat=r - 1) if r > 1 else [()]
        ):
            c = (first,) + tail
            if all(v == 0 for v in c):
                continue
            H = [[sum(c[g] * basis[g][i][j] for g in range(r)) for j in range(n)]
                 for i in range(n)]
            if not _positive_definite(H):
                continue
            C = [[sum(c[g] * coords[g][i][j] for g in range(r)) for j in range(2 * n)]
                 for i in range(2 * n)]
            d = det(C)
            if d != 1 and d != -1:
                continue
            return ((base + fi) * stride + ri, (c, tuple(tuple(row) for row in H)))
    return None


def pp_search(A: PolarisedTorus, Ahat: PolarisedTorus, bound: int = 10,
              family: AdmissibleFamily | None = None):
    """Bounded search for a principal polarisation on A relative to Ahat.

    Enumerates integer combinations of the admissible family with
    coefficients up to ``bound`` in absolute value; a hit must be
    positive definite (leading principal minors) and carry the lattice
    of A onto the lattice of Ahat (coordinate determinant +-1).  The
    witness is re-verified symbolically before being returned.
    """
    if bound < 1:
        raise PreconditionError("search bound must be at least 1")
    if family is None:
        family = admissible_family(A, Ahat)
    r = family.rank
    if r == 0:
        return NotFoundUpToBound(bound=bound, tested=0)
    n = A.dim
    common = (family.basis, family.coordinates, n, bound)
    hit = run_search(_pp_slab, common, r, bound)
    if hit is None:
        return NotFoundUpToBound(bound=bound, tested=len(coefficient_values(bound)) ** r)
    index, (c, H) = hit
    candidate = PPCandidate(H)
    if any(m <= 0 for m in candidate.leading_minors()):
        raise AssertionError("witness is not positive definite")
    image = matmul([list(row) for row in H], [list(row) for row in A.periods])
    if not span_equal(image, [list(row) for row in Ahat.periods], A.gens):
        raise AssertionError("witness does not carry the lattice onto the target")
    return Found(witness=candidate, coefficients=c, tested=index + 1)


def obstruction_check(d: int) -> bool:
    """True when -1 is not a square modulo d.

    When true, d*k*m - h*h = 1 has no integer solutions, which rules out
    unimodular members in families whose determinant has that shape.
    """
    if d < 2:
        raise PreconditionError("modulus must be at least 2")
    squares = {(x * x) % d for x in range(d)}
    return (d - 1) % d not in squares
