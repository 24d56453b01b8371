"""Exact scalar arithmetic in a free polynomial ring over Q.

Entries of period matrices are modelled as polynomials with rational
coefficients in a fixed ordered tuple of formal generators.  There are no
relations between generators, no floating point, and no numerical
approximation anywhere: two scalars are equal exactly when their canonical
term maps coincide.  Assumptions such as "the imaginary part of the period
matrix is positive definite" are never used computationally; they are
carried as declarations on the objects that need them.

Monomials are exponent tuples aligned with the generator tuple and ordered
by graded lexicographic order (total degree first, then lexicographic on
exponents).  That order fixes leading terms, canonical string rendering and
the row layout produced by :func:`monomial_flatten`.

>>> gens = GeneratorSet(("a", "b"))
>>> a, b = gens.gens()
>>> (a + b) * (a - b)
FormalScalar('a*a - b*b')
>>> parse_scalar(gens, "(a + 1/2) * b - b/2") == a * b
True
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import GeneratorMismatchError, ScalarParseError

Monomial = tuple  # tuple[int, ...], one exponent per generator
Rat = Union[int, Fraction]


def _grlex_key(mono):
    return (sum(mono), mono)


class GeneratorSet:
    """An ordered tuple of named formal generators.

    The order is significant: it fixes the monomial order and therefore
    every canonical form downstream.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError("generator names must be non-empty strings")
            if not (name[0].isalpha() or name[0] == "_") or not all(
                ch.isalnum() or ch == "_" for ch in name
            ):
                raise ValueError(f"invalid generator name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, *args):
        raise AttributeError("GeneratorSet is immutable")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"GeneratorSet({self.names!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def scalar(self, name: str) -> "FormalScalar":
        """The generator ``name`` as a scalar."""
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return FormalScalar(self, {tuple(exps): Fraction(1)})

    def gens(self):
        """All generators as scalars, in order."""
        return tuple(self.scalar(n) for n in self.names)

    def zero(self) -> "FormalScalar":
        return FormalScalar(self, {})

    def one(self) -> "FormalScalar":
        return self.constant(1)

    def constant(self, value: Rat) -> "FormalScalar":
        value = Fraction(value)
        if value == 0:
            return FormalScalar(self, {})
        return FormalScalar(self, {(0,) * len(self.names): value})


class FormalScalar:
    """A polynomial over Q in the generators of a :class:`GeneratorSet`.

    Stored as a map from exponent tuples to nonzero ``Fraction``
    coefficients.  All arithmetic is exact; mixing scalars over different
    generator sets raises :class:`GeneratorMismatchError`.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Monomial, Rat]):
        width = len(gens)
        clean = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != width or any(
                not isinstance(e, int) or e < 0 for e in mono
            ):
                raise ValueError(f"bad monomial {mono!r} for {gens!r}")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[mono] = coeff
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):
        raise AttributeError("FormalScalar is immutable")

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree, with the convention deg 0 = -1 for the zero scalar."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def monomials(self):
        """Monomials in ascending graded lexicographic order."""
        return sorted(self.terms, key=_grlex_key)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def leading_term(self):
        """(monomial, coefficient) of the graded-lex largest term."""
        if not self.terms:
            raise ValueError("zero scalar has no leading term")
        mono = max(self.terms, key=_grlex_key)
        return mono, self.terms[mono]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FormalScalar):
            if other.gens != self.gens:
                raise GeneratorMismatchError(
                    f"cannot combine scalars over {self.gens.names} and "
                    f"{other.gens.names}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.gens.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = terms.get(mono, Fraction(0)) + coeff
            if new == 0:
                terms.pop(mono, None)
            else:
                terms[mono] = new
        return FormalScalar(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return FormalScalar(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                new = terms.get(mono, Fraction(0)) + c1 * c2
                if new == 0:
                    terms.pop(mono, None)
                else:
                    terms[mono] = new
        return FormalScalar(self.gens, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational constant only."""
        if isinstance(other, FormalScalar):
            if not other.is_constant():
                raise ValueError(f"cannot divide by non-constant {other}")
            other = other.constant_value()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.gens.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.gens.constant(other)
        if not isinstance(other, FormalScalar):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.gens, frozenset(self.terms.items())))

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        return render_scalar(self)

    def __repr__(self) -> str:
        return f"FormalScalar({render_scalar(self)!r})"


def render_scalar(s: FormalScalar) -> str:
    """Canonical expression string, re-readable by :func:`parse_scalar`.

    Terms appear in descending graded-lex order.  Powers are written as
    repeated products ("a*a*b") because the expression grammar has no
    exponent operator.
    """
    if s.is_zero():
        return "0"
    pieces = []
    for mono in sorted(s.terms, key=_grlex_key, reverse=True):
        coeff = s.terms[mono]
        factors = []
        for name, exp in zip(s.gens.names, mono):
            factors.extend([name] * exp)
        mag = abs(coeff)
        if not factors:
            body = _render_fraction(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_render_fraction(mag)] + factors)
        if not pieces:
            pieces.append(body if coeff > 0 else "-" + body)
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(pieces)


def _render_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- parsing ---------------------------------------------------------------

_OPS = frozenset("+-*/()")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        else:
            raise ScalarParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent for:  expr := term (('+'|'-') term)*
                               term := unary (('*'|'/') unary)*
                               unary := ('+'|'-') unary | atom
                               atom := NUMBER | NAME | '(' expr ')'
    Division is permitted only by a nonzero constant subexpression.
    """

    def __init__(self, gens: GeneratorSet, text: str):
        self.gens = gens
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> FormalScalar:
        value = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ScalarParseError(f"unexpected {text!r}", at)
        return value

    def expr(self) -> FormalScalar:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FormalScalar:
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, at = self.advance()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_constant():
                    raise ScalarParseError("division by a non-constant", at)
                if rhs.is_zero():
                    raise ScalarParseError("division by zero", at)
                value = value / rhs.constant_value()
        return value

    def unary(self) -> FormalScalar:
        kind, _, _ = self.peek()
        if kind == "-":
            self.advance()
            return -self.unary()
        if kind == "+":
            self.advance()
            return self.unary()
        return self.atom()

    def atom(self) -> FormalScalar:
        kind, text, at = self.advance()
        if kind == "num":
            return self.gens.constant(int(text))
        if kind == "name":
            try:
                return self.gens.scalar(text)
            except KeyError:
                raise ScalarParseError(f"unknown generator {text!r}", at) from None
        if kind == "(":
            value = self.expr()
            kind2, text2, at2 = self.advance()
            if kind2 != ")":
                raise ScalarParseError(f"expected ')', got {text2!r}", at2)
            return value
        raise ScalarParseError(f"expected a value, got {text!r}" if text else "unexpected end of expression", at)


def parse_scalar(gens: GeneratorSet, text: str) -> FormalScalar:
    """Parse an expression over ``gens``.

    Accepts integer and rational literals ("1/3" parses as one third),
    generator names, +, -, *, parentheses, and division by nonzero
    constant subexpressions.  Errors carry the offending offset.
    """
    if not isinstance(text, str):
        raise ScalarParseError("expression must be a string", 0)
    return _Parser(gens, text).parse()


# -- matrix flattening ------------------------------------------------------

def monomial_flatten(matrix: Sequence[Sequence[FormalScalar]]):
    """Flatten a scalar matrix into (monomials, coefficient table).

    Returns the sorted tuple of all monomials occurring anywhere in the
    matrix (ascending graded-lex) plus, for each position, the tuple of
    coefficients aligned with that monomial list, so that two matrices
    flattened together can be compared coefficient by coefficient.
    """
    gens = None
    union = set()
    for row in matrix:
        for entry in row:
            if gens is None:
                gens = entry.gens
            elif entry.gens != gens:
                raise GeneratorMismatchError("matrix mixes generator sets")
            union.update(entry.terms)
    monomials = tuple(sorted(union, key=_grlex_key))
    table = tuple(
        tuple(tuple(entry.terms.get(m, Fraction(0)) for m in monomials) for entry in row)
        for row in matrix
    )
    return monomials, table


def monomial_unflatten(gens: GeneratorSet, monomials, table):
    """Inverse of :func:`monomial_flatten`."""
    matrix = []
    for row in table:
        out = []
        for coeffs in row:
            out.append(FormalScalar(gens, dict(zip(monomials, coeffs))))
        matrix.append(out)
    return matrix


# -- polynomial gcd machinery ----------------------------------------------

def exact_div(f: FormalScalar, g: FormalScalar) -> FormalScalar:
    """Exact polynomial quotient f/g; raises ValueError if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    gens = f.gens
    quotient = gens.zero()
    rem = f
    g_mono, g_coeff = g.leading_term()
    while not rem.is_zero():
        r_mono, r_coeff = rem.leading_term()
        diff = tuple(a - b for a, b in zip(r_mono, g_mono))
        if any(d < 0 for d in diff):
            raise ValueError(f"{g} does not divide {f}")
        t = FormalScalar(gens, {diff: r_coeff / g_coeff})
        quotient = quotient + t
        rem = rem - t * g
    return quotient


def _normalise_assoc(f: FormalScalar) -> FormalScalar:
    """Canonical associate: integer coprime coefficients, positive leading one."""
    if f.is_zero():
        return f
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in f.terms.values()))
    g = 0
    for c in f.terms.values():
        g = gcd(g, c.numerator * (den // c.denominator))
    scale = Fraction(den, g)
    _, lead = f.leading_term()
    if lead < 0:
        scale = -scale
    return f * scale


def _as_univariate(f: FormalScalar, var: int):
    """View f as a polynomial in generator ``var``: {degree: coefficient poly}."""
    out: dict = {}
    for mono, coeff in f.terms.items():
        d = mono[var]
        rest = mono[:var] + (0,) + mono[var + 1 :]
        bucket = out.setdefault(d, {})
        bucket[rest] = bucket.get(rest, Fraction(0)) + coeff
    return {d: FormalScalar(f.gens, terms) for d, terms in out.items()}


def _from_univariate(gens: GeneratorSet, var: int, coeffs) -> FormalScalar:
    total = gens.zero()
    for d, poly in coeffs.items():
        shift = FormalScalar(
            gens, {tuple(d if i == var else 0 for i in range(len(gens))): Fraction(1)}
        )
        total = total + poly * shift
    return total


def _gcd_list(polys) -> FormalScalar:
    acc = None
    for p in polys:
        acc = p if acc is None else poly_gcd(acc, p)
    return acc


def _pseudo_rem(a: dict, b: dict, gens: GeneratorSet) -> dict:
    """Pseudo-remainder of univariate coefficient dicts (in some variable)."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        new: dict = {}
        for d, c in r.items():
            new[d] = lb * c
        for d, c in b.items():
            nd = d + dr - db
            new[nd] = new.get(nd, gens.zero()) - lr * c
        r = {d: c for d, c in new.items() if not c.is_zero()}
    return r


def poly_gcd(f: FormalScalar, g: FormalScalar) -> FormalScalar:
    """GCD in Q[generators], returned as the canonical associate.

    Classical primitive Euclidean algorithm: split off contents with
    respect to the highest generator present, recurse on contents, run
    pseudo-remainders on primitive parts.  Nonzero constants are units, so
    gcd(c, h) = 1 for constant c.
    """
    if f.gens != g.gens:
        raise GeneratorMismatchError("gcd of scalars over different generators")
    gens = f.gens
    if f.is_zero():
        return _normalise_assoc(g)
    if g.is_zero():
        return _normalise_assoc(f)
    if f.is_constant() or g.is_constant():
        return gens.one()
    var = max(
        i
        for i in range(len(gens))
        if any(m[i] for m in f.terms) or any(m[i] for m in g.terms)
    )
    fu = _as_univariate(f, var)
    gu = _as_univariate(g, var)
    if max(fu) == 0 or max(gu) == 0:
        # one of them does not involve var after all: gcd via contents
        return _normalise_assoc(poly_gcd(_gcd_list(fu.values()), _gcd_list(gu.values())))
    cf = _gcd_list(fu.values())
    cg = _gcd_list(gu.values())
    c = poly_gcd(cf, cg)
    pf = {d: exact_div(p, cf) for d, p in fu.items()}
    pg = {d: exact_div(p, cg) for d, p in gu.items()}
    a, b = (pf, pg) if max(pf) >= max(pg) else (pg, pf)
    while b:
        r = _pseudo_rem(a, b, gens)
        if r:
            rp = _from_univariate(gens, var, r)
            content = _gcd_list(r.values())
            r_prim = _as_univariate(exact_div(rp, content), var)
        else:
            r_prim = {}
        a, b = b, r_prim
    return _normalise_assoc(c * _from_univariate(gens, var, a))


class ScalarFraction:
    """A quotient of two FormalScalars in canonical reduced form.

    Reduction divides out the polynomial gcd, then scales so the
    denominator is monic (its graded-lex leading coefficient is 1, hence
    positive).  Equality is structural on the canonical form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: FormalScalar, den=None):
        if den is None:
            den = num.gens.one()
        if isinstance(den, (int, Fraction)):
            den = num.gens.constant(den)
        if num.gens != den.gens:
            raise GeneratorMismatchError("fraction parts over different generators")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = num.gens.one()
        else:
            g = poly_gcd(num, den)
            if not (g.is_constant() and g.constant_value() == 1):
                num = exact_div(num, g)
                den = exact_div(den, g)
            _, lead = den.leading_term()
            if lead != 1:
                num = num * (Fraction(1) / lead)
                den = den * (Fraction(1) / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args):
        raise AttributeError("ScalarFraction is immutable")

    @property
    def gens(self) -> GeneratorSet:
        return self.num.gens

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_scalar(self) -> FormalScalar:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self}")
        return self.num / self.den.constant_value()

    def _coerce(self, other):
        if isinstance(other, ScalarFraction):
            return other
        if isinstance(other, FormalScalar):
            return ScalarFraction(other)
        if isinstance(other, (int, Fraction)):
            return ScalarFraction(self.gens.constant(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ScalarFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarFraction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ScalarFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return ScalarFraction(self.num * o.den, self.den * o.num)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"ScalarFraction({str(self)!r})"
