"""Polarised complex tori presented by big period matrices.

A torus of dimension n is stored as an n x 2n period matrix with formal
polynomial entries together with an alternating nondegenerate integer form
(the gram matrix of the polarisation) on the lattice basis.  The frame
[Z | D] with Z symmetric and D a positive integer diagonal is called a
standard frame; in that frame the gram matrix is [[0, D], [-D, 0]].

Analytic assumptions (for instance that the imaginary part of Z is
positive definite) cannot be expressed over Q; they live in the
``assumptions`` string and are never used by any computation here.

Points of finite order are written in lattice coordinates: a vector of
rationals modulo 1 whose canonical lift lies in [0, 1)^(2n).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product
from math import lcm

from .errors import PreconditionError
from .intlinalg import (
    det,
    elementary_divisors,
    hnf,
    identity,
    int_kernel,
    mat_copy,
    mat_eq,
    matmul,
    rank,
    rat_inv,
    rat_solve,
    saturate_columns,
    shape,
    snf,
    transpose,
)
from .scalars import FormalScalar, GeneratorSet


class TorsionPoint:
    """A torsion point in lattice coordinates, reduced modulo 1.

    The order is the least k with k * coords integral, i.e. the lcm of the
    coordinate denominators.
    """

    __slots__ = ("coords", "order")

    def __init__(self, coords):
        reduced = tuple(Fraction(c) % 1 for c in coords)
        object.__setattr__(self, "coords", reduced)
        object.__setattr__(self, "order", lcm(*(c.denominator for c in reduced)) if reduced else 1)

    def __setattr__(self, *args):
        raise AttributeError("TorsionPoint is immutable")

    def lift(self):
        """The canonical lift in [0,1)^(2n) as a list of Fractions."""
        return list(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        if len(self.coords) != len(other.coords):
            raise ValueError("points live on tori of different dimension")
        return TorsionPoint([a + b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, k: int) -> "TorsionPoint":
        return TorsionPoint([k * c for c in self.coords])

    __rmul__ = __mul__

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint([-c for c in self.coords])

    def __eq__(self, other) -> bool:
        return isinstance(other, TorsionPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"TorsionPoint(({', '.join(str(c) for c in self.coords)}))"


class PolarisedTorus:
    """Period matrix plus polarisation form, all exact.

    ``periods`` is n x 2n over FormalScalar, ``gram`` is 2n x 2n integer,
    alternating and nondegenerate.  Instances are immutable value objects;
    equality compares generators, periods and gram entrywise.
    """

    __slots__ = ("gens", "periods", "gram", "assumptions")

    def __init__(self, gens: GeneratorSet, periods, gram, assumptions: str = ""):
        n = len(periods)
        if n == 0 or any(len(row) != 2 * n for row in periods):
            raise PreconditionError("period matrix must be n x 2n with n >= 1")
        rows = []
        for row in periods:
            entries = []
            for x in row:
                if isinstance(x, FormalScalar):
                    if x.gens != gens:
                        raise PreconditionError("period entry over a different generator set")
                    entries.append(x)
                else:
                    entries.append(gens.constant(x))
            rows.append(tuple(entries))
        m = len(gram)
        if m != 2 * n or any(len(r) != 2 * n for r in gram):
            raise PreconditionError("gram matrix must be 2n x 2n")
        g = tuple(tuple(int(x) for x in row) for row in gram)
        for i in range(m):
            for j in range(m):
                if g[i][j] != -g[j][i]:
                    raise PreconditionError("gram matrix is not alternating")
        if det([list(r) for r in g]) == 0:
            raise PreconditionError("gram matrix is degenerate")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "periods", tuple(rows))
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "assumptions", assumptions)

    def __setattr__(self, *args):
        raise AttributeError("PolarisedTorus is immutable")

    @property
    def dim(self) -> int:
        return len(self.periods)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolarisedTorus)
            and self.gens == other.gens
            and self.periods == other.periods
            and self.gram == other.gram
        )

    def __hash__(self) -> int:
        return hash((self.gens, self.periods, self.gram))

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(str(x) for x in row) for row in self.periods
        )
        return f"PolarisedTorus(dim={self.dim}, periods=[{rows}])"

    # -- frames ---------------------------------------------------------

    def right_block(self):
        n = self.dim
        return [[row[n + j] for j in range(n)] for row in self.periods]

    def left_block(self):
        n = self.dim
        return [[row[j] for j in range(n)] for row in self.periods]

    def standard_frame_diagonal(self):
        """The diagonal D if this is a standard frame [Z | D], else None.

        Standard means: right block a constant positive integer diagonal,
        left block symmetric, gram equal to [[0, D], [-D, 0]].
        """
        n = self.dim
        R = self.right_block()
        D = []
        for i in range(n):
            for j in range(n):
                x = R[i][j]
                if i == j:
                    if not (x.is_constant() and x.constant_value().denominator == 1
                            and x.constant_value() > 0):
                        return None
                    D.append(int(x.constant_value()))
                elif not x.is_zero():
                    return None
        Z = self.left_block()
        for i in range(n):
            for j in range(i + 1, n):
                if Z[i][j] != Z[j][i]:
                    return None
        if not mat_eq([list(r) for r in self.gram], standard_gram(D)):
            return None
        return D

    def with_unit_right_block(self) -> "PolarisedTorus":
        """Ambient base change making the right period block the identity.

        Multiplies the periods on the left by the inverse of the right
        block, which must be constant and invertible over Q; the lattice
        and the gram matrix are untouched.  Fails with a diagnostic
        otherwise: inverting formal entries is not possible in this ring.
        """
        n = self.dim
        R = self.right_block()
        C = []
        for i in range(n):
            row = []
            for j in range(n):
                if not R[i][j].is_constant():
                    raise PreconditionError(
                        f"right block entry ({i},{j}) = {R[i][j]} is not constant; "
                        "cannot invert a formal matrix"
                    )
                row.append(R[i][j].constant_value())
            C.append(row)
        try:
            Cinv = rat_inv(C)
        except ValueError:
            raise PreconditionError("right period block is singular over Q") from None
        new_periods = matmul(Cinv, [list(r) for r in self.periods])
        return PolarisedTorus(self.gens, new_periods, self.gram, self.assumptions)

    # -- the polarisation -------------------------------------------------

    def polarisation_type(self):
        return pairing_type([list(r) for r in self.gram])

    def polarising_kernel(self):
        """Generators of the kernel of the isogeny induced by the form.

        Returns a list of TorsionPoints whose orders are the polarisation
        type repeated twice (order-1 generators are dropped); the cyclic
        groups they generate give the whole kernel as a direct sum.
        """
        gens_mat, orders = self._kernel_basis()
        points = []
        for j, order in enumerate(orders):
            if order == 1:
                continue
            points.append(TorsionPoint([gens_mat[i][j] for i in range(len(gens_mat))]))
        for p, order in zip(points, [o for o in orders if o > 1]):
            if p.order != order:
                raise AssertionError("kernel generator has unexpected order")
        return points

    def _kernel_basis(self):
        """Basis W of the dual lattice with W = V diag(1/s); orders s."""
        S, U, V = snf([list(r) for r in self.gram])
        m = 2 * self.dim
        orders = [S[i][i] for i in range(m)]
        W = [[Fraction(V[i][j], orders[j]) for j in range(m)] for i in range(m)]
        return W, orders

    def kernel_elements(self):
        """Every element of the polarising kernel (small groups only)."""
        W, orders = self._kernel_basis()
        m = 2 * self.dim
        points = set()
        for combo in iter_product(*(range(o) for o in orders)):
            coords = [
                sum(Fraction(combo[j]) * W[i][j] for j in range(m))
                for i in range(m)
            ]
            points.add(TorsionPoint(coords))
        return points

    # -- operations returning new tori ------------------------------------

    def quotient(self, point: TorsionPoint) -> "QuotientResult":
        """Quotient by the cyclic subgroup generated by a kernel point.

        The point must pair integrally with the lattice (i.e. lie in the
        polarising kernel); cyclic groups are automatically isotropic.  The
        new lattice basis is the canonical column Hermite basis of the
        extended lattice, the form is carried along by base change.
        """
        m = 2 * self.dim
        if len(point.coords) != m:
            raise PreconditionError("point dimension does not match the torus")
        lift = point.lift()
        for j in range(m):
            val = sum(Fraction(self.gram[i][j]) * lift[i] for i in range(m))
            if val.denominator != 1:
                raise PreconditionError(
                    f"point is not in the polarising kernel: pairing with basis "
                    f"vector {j} gives {val}"
                )
        k = point.order
        ext = [[k if i == j else 0 for j in range(m)] + [int(k * lift[i])] for i in range(m)]
        H, _ = hnf(ext)
        B = [[Fraction(H[i][j], k) for j in range(m)] for i in range(m)]
        if abs(det(B)) != Fraction(1, k):
            raise AssertionError("quotient basis has wrong index")
        new_periods = matmul([list(r) for r in self.periods], B)
        new_gram_q = matmul(transpose(B), matmul([list(r) for r in self.gram], B))
        new_gram = []
        for row in new_gram_q:
            out = []
            for x in row:
                if Fraction(x).denominator != 1:
                    raise AssertionError("induced form is not integral on the new lattice")
                out.append(int(x))
            new_gram.append(out)
        torus = PolarisedTorus(self.gens, new_periods, new_gram, self.assumptions)
        return QuotientResult(torus=torus, basis=B, source=self)

    def symplectic_complement(self, points):
        """Generators of the orthogonal complement, inside the kernel, of
        the subgroup generated by ``points`` under the induced pairing.

        Orthogonality of x and g means the form takes an integer value on
        their lifts.  Returns generators of a direct-sum decomposition
        (order-1 generators dropped).
        """
        m = 2 * self.dim
        W, orders = self._kernel_basis()
        gram = [list(r) for r in self.gram]
        pair_rows = []
        for g in points:
            lift = g.lift()
            for j in range(m):
                val = sum(Fraction(gram[i][j]) * lift[i] for i in range(m))
                if val.denominator != 1:
                    raise PreconditionError(
                        "complement of a point outside the polarising kernel"
                    )
            row = []
            for i in range(m):
                row.append(
                    sum(Fraction(lift[a]) * gram[a][b] * W[b][i] for a in range(m) for b in range(m))
                )
            pair_rows.append(row)
        if pair_rows:
            scale = lcm(*(v.denominator for row in pair_rows for v in row))
            T = [[int(v * scale) for v in row] for row in pair_rows]
            wide = [row + [-scale if r == i else 0 for r in range(len(T))]
                    for i, row in enumerate(T)]
            kern = int_kernel(wide)
            gens_cols = [[col[i] for col in kern] for i in range(m)]
        else:  # no conditions: every coefficient vector is a solution
            gens_cols = identity(m)
        full = [gens_cols[i] + [orders[i] if j == i else 0 for j in range(m)]
                for i in range(m)]
        BS, _ = hnf(full)
        BS = [row[:m] for row in BS]  # full rank: first m columns are the basis
        if rank(BS) != m:
            raise AssertionError("solution lattice must have full rank")
        C = matmul(rat_inv(BS), [[orders[i] if i == j else 0 for j in range(m)] for i in range(m)])
        if any(Fraction(x).denominator != 1 for row in C for x in row):
            raise AssertionError("relation matrix must be integral")
        Cint = [[int(x) for x in row] for row in C]
        St, Uc, _ = snf(Cint)
        coeff = matmul(BS, rat_inv(Uc))
        point_mat = matmul(W, coeff)
        out = []
        for j in range(m):
            order = St[j][j]
            if order == 1:
                continue
            p = TorsionPoint([point_mat[i][j] for i in range(m)])
            if p.order != order:
                raise AssertionError("complement generator has unexpected order")
            out.append(p)
        return out

    def dual(self) -> "DualResult":
        """The dual torus computed in a standard frame [Z | D].

        Row i of [Z D^{-1} | I] is rescaled by lambda_i = (min D)(max D)/d_i,
        which is the unique scaling producing an integral standard frame
        carrying the dual polarisation; rows and columns are then stably
        reordered so the new diagonal ascends.  Scalings and the
        permutation are recorded, and the pre-permutation frame is kept for
        display.  On divisibility-ordered input, dual of dual returns the
        original torus exactly.
        """
        D = self.standard_frame_diagonal()
        if D is None:
            raise PreconditionError(
                "dual requires a standard frame [Z | D] with symmetric Z, "
                "positive integer diagonal D and the matching standard form"
            )
        n = self.dim
        Z = self.left_block()
        c = min(D) * max(D)
        lams = []
        for d in D:
            if c % d:
                raise PreconditionError(
                    f"diagonal {tuple(D)} is not a divisibility chain when sorted"
                )
            lams.append(c // d)
        raw = []
        for i in range(n):
            row = [Z[i][j] * Fraction(lams[i], D[j]) for j in range(n)]
            row += [self.gens.constant(lams[i] if i == j else 0) for j in range(n)]
            raw.append(row)
        perm = sorted(range(n), key=lambda i: (lams[i], i))  # stable ascending
        new_periods = []
        for i in perm:
            left = [raw[i][perm[j]] for j in range(n)]
            right = [raw[i][n + perm[j]] for j in range(n)]
            new_periods.append(left + right)
        new_D = [lams[i] for i in perm]
        torus = PolarisedTorus(self.gens, new_periods, standard_gram(new_D), self.assumptions)
        return DualResult(
            torus=torus,
            scalings=tuple(lams),
            permutation=tuple(perm),
            display_periods=tuple(tuple(r) for r in raw),
        )


class QuotientResult:
    """A quotient torus plus the base change that produced it.

    ``basis`` expresses the new lattice basis in the source lattice
    coordinates (columns, rational entries); push_point moves torsion
    points of the source into the quotient's coordinates.
    """

    __slots__ = ("torus", "basis", "source")

    def __init__(self, torus, basis, source):
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in basis))
        object.__setattr__(self, "source", source)

    def __setattr__(self, *args):
        raise AttributeError("QuotientResult is immutable")

    def push_point(self, point: TorsionPoint) -> TorsionPoint:
        Binv = rat_inv([list(r) for r in self.basis])
        lift = point.lift()
        return TorsionPoint(
            [sum(Binv[i][j] * lift[j] for j in range(len(lift))) for i in range(len(lift))]
        )


class DualResult:
    """A dual torus plus the recorded row scalings and reordering."""

    __slots__ = ("torus", "scalings", "permutation", "display_periods")

    def __init__(self, torus, scalings, permutation, display_periods):
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "scalings", scalings)
        object.__setattr__(self, "permutation", permutation)
        object.__setattr__(self, "display_periods", display_periods)

    def __setattr__(self, *args):
        raise AttributeError("DualResult is immutable")


class SubvarietyEmbedding:
    """A saturated sublattice of even rank inside a torus lattice.

    Columns of ``columns`` (2n x 2m, integers) are a basis of the
    sublattice; saturation is validated, compatibility with the complex
    structure is the caller's declared assumption and cannot be checked
    formally.
    """

    __slots__ = ("torus", "columns")

    def __init__(self, torus: PolarisedTorus, columns):
        m2 = len(columns[0]) if columns and columns[0] else 0
        if len(columns) != 2 * torus.dim:
            raise PreconditionError("sublattice rows must match the torus lattice rank")
        if m2 % 2:
            raise PreconditionError("sublattice rank must be even")
        cols = [[int(x) for x in row] for row in columns]
        if m2:
            if rank(cols) != m2:
                raise PreconditionError("sublattice columns are dependent")
            if any(d != 1 for d in elementary_divisors(cols)):
                raise PreconditionError("sublattice is not saturated")
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "columns", tuple(tuple(r) for r in cols))

    def __setattr__(self, *args):
        raise AttributeError("SubvarietyEmbedding is immutable")

    @classmethod
    def from_spanning_vectors(cls, torus: PolarisedTorus, vectors):
        """Embedding of the saturation of the span of integer vectors."""
        m = 2 * torus.dim
        mat = [[v[i] for v in vectors] for i in range(m)]
        return cls(torus, saturate_columns(mat))

    @property
    def rank(self) -> int:
        return len(self.columns[0]) if self.columns and self.columns[0] else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubvarietyEmbedding)
            and self.torus == other.torus
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return hash((self.torus, self.columns))


def standard_gram(D):
    """The form [[0, diag(D)], [-diag(D), 0]]."""
    n = len(D)
    E = [[0] * (2 * n) for _ in range(2 * n)]
    for i, d in enumerate(D):
        E[i][n + i] = int(d)
        E[n + i][i] = -int(d)
    return E


def pairing_type(E):
    """Polarisation type of an alternating integral form.

    The elementary divisors of such a form pair up; the type lists each
    pair once, in divisibility order.  A divisor of odd multiplicity means
    the input was not alternating-equivalent to a type form and is
    reported as an error.
    """
    divs = elementary_divisors(E)
    m, n = shape(E)
    if len(divs) != m or m != n:
        raise PreconditionError("form must be square and nondegenerate")
    if m % 2:
        raise PreconditionError("form must have even rank")
    out = []
    for i in range(0, m, 2):
        if divs[i] != divs[i + 1]:
            raise PreconditionError(
                f"elementary divisors {divs} do not pair up; "
                "a divisor occurs with odd multiplicity"
            )
        out.append(divs[i])
    return tuple(out)


def polarisation_exponent(E):
    """Largest value in the pairing type (the exponent of the kernel)."""
    return pairing_type(E)[-1]


def restricted_polarisation(T: PolarisedTorus, emb: SubvarietyEmbedding):
    """(gram, type) of the polarisation restricted to a sublattice.

    The restriction of a polarisation to an abelian subvariety is again a
    polarisation; its first divisor may exceed 1 and no renormalisation is
    performed.
    """
    if emb.torus != T:
        raise PreconditionError("embedding does not belong to this torus")
    J = [list(r) for r in emb.columns]
    gram_b = matmul(transpose(J), matmul([list(r) for r in T.gram], J))
    if det(gram_b) == 0:
        raise PreconditionError("restricted form is degenerate")
    return gram_b, pairing_type(gram_b)


def isogeny_degree(M) -> int:
    """|det| of a rational representation; zero determinant is an error."""
    d = det([list(r) for r in M])
    if d == 0:
        raise PreconditionError("matrix has determinant zero, not an isogeny")
    return abs(int(d)) if isinstance(d, int) else abs(d)


def product(tori):
    """Product torus with globally grouped frame.

    Left column blocks of all factors come first, then all right blocks,
    so a product of standard frames is again a standard frame; the form is
    the direct sum routed through the same column order.
    """
    tori = list(tori)
    if not tori:
        raise PreconditionError("product of no tori")
    gens = tori[0].gens
    for t in tori:
        if t.gens != gens:
            raise PreconditionError("product factors must share one generator set")
    dims = [t.dim for t in tori]
    n = sum(dims)
    offsets = [sum(dims[:i]) for i in range(len(tori))]

    def global_index(f: int, local: int) -> int:
        nf = dims[f]
        if local < nf:
            return offsets[f] + local
        return n + offsets[f] + (local - nf)

    periods = [[gens.zero() for _ in range(2 * n)] for _ in range(n)]
    gram = [[0] * (2 * n) for _ in range(2 * n)]
    for f, t in enumerate(tori):
        nf = t.dim
        for i in range(nf):
            for j in range(2 * nf):
                periods[offsets[f] + i][global_index(f, j)] = t.periods[i][j]
        for i in range(2 * nf):
            for j in range(2 * nf):
                gram[global_index(f, i)][global_index(f, j)] = t.gram[i][j]
    assumption = "; ".join(sorted({t.assumptions for t in tori if t.assumptions}))
    return PolarisedTorus(gens, periods, gram, assumption)


def ambient_to_lattice(T: PolarisedTorus, vector):
    """Rational lattice coordinates of an ambient vector.

    ``vector`` has one (scalar or rational) entry per complex coordinate.
    The period columns span the ambient space over Q after flattening by
    monomials, so the solution, when it exists, is unique; no solution
    means the vector is not a rational combination of the periods.
    """
    from .intlinalg import flatten_to_int

    n = T.dim
    if len(vector) != n:
        raise PreconditionError("ambient vector length must equal the dimension")
    vec = []
    for x in vector:
        if isinstance(x, FormalScalar):
            vec.append(x)
        else:
            vec.append(T.gens.constant(x))
    P = [list(r) for r in T.periods]
    ZP, Zv = flatten_to_int(P, [[x] for x in vec])
    sol = rat_solve(ZP, [row[0] for row in Zv])
    if sol is None:
        raise PreconditionError("vector is not a rational combination of the periods")
    return sol


def subgroup_elements(points, dim):
    """All elements of the finite group generated by torsion points."""
    elems = {TorsionPoint([Fraction(0)] * dim)}
    for g in points:
        current = list(elems)
        for k in range(1, g.order):
            kg = k * g
            for e in current:
                elems.add(e + kg)
    return frozenset(elems)
