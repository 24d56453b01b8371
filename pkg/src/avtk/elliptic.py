"""Exact reduction of imaginary quadratic periods under SL(2, Z).

A period tau = (p + q*sqrt(disc))/r with disc < 0 squarefree, q > 0,
r > 0 and gcd(p, q, r) = 1 determines an elliptic curve C/(Z + tau Z).
Two periods give isomorphic curves exactly when they land on the same
point of the classical fundamental domain, which this module computes
with integer arithmetic only: Re(tau) is a fraction, |tau|^2 is a
fraction, and every Moebius step is exact.

Boundary convention: Re in [-1/2, 1/2), and on the unit circle the
representative with Re <= 0 is kept.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .errors import PreconditionError, ScalarParseError


def _squarefree(d: int) -> bool:
    d = abs(d)
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadNumber:
    """(p + q*sqrt(disc))/r in the upper half plane, in lowest terms."""

    __slots__ = ("p", "q", "r", "disc")

    def __init__(self, p: int, q: int, r: int, disc: int):
        if disc >= 0 or not _squarefree(disc):
            raise PreconditionError("discriminant must be negative and squarefree")
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        if q <= 0:
            raise PreconditionError("period must lie in the upper half plane (q > 0)")
        g = gcd(gcd(abs(p), q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "disc", disc)

    def __setattr__(self, *args):
        raise AttributeError("QuadNumber is immutable")

    def re(self) -> Fraction:
        return Fraction(self.p, self.r)

    def norm2(self) -> Fraction:
        """|tau|^2, exactly."""
        return Fraction(self.p * self.p - self.q * self.q * self.disc, self.r * self.r)

    def mobius(self, a: int, b: int, c: int, d: int) -> "QuadNumber":
        """(a*tau + b) / (c*tau + d) for an integer matrix of determinant 1."""
        if a * d - b * c != 1:
            raise PreconditionError("moebius matrix must have determinant 1")
        p1 = a * self.p + b * self.r
        q1 = a * self.q
        p2 = c * self.p + d * self.r
        q2 = c * self.q
        denom = p2 * p2 - q2 * q2 * self.disc
        return QuadNumber(
            p1 * p2 - q1 * q2 * self.disc,
            q1 * p2 - p1 * q2,
            denom,
            self.disc,
        )

    def divided_by(self, n: int) -> "QuadNumber":
        if n < 1:
            raise PreconditionError("divisor must be a positive integer")
        return QuadNumber(self.p, self.q, self.r * n, self.disc)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuadNumber)
            and (self.p, self.q, self.r, self.disc)
            == (other.p, other.q, other.r, other.disc)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.r, self.disc))

    def __str__(self) -> str:
        return f"({self.p}+{self.q}*sqrt({self.disc}))/{self.r}"

    def __repr__(self) -> str:
        return f"QuadNumber({str(self)!r})"

    _PATTERN = _re.compile(
        r"""^\s*
        (?:\(\s*(?P<p>[+-]?\d+)\s*(?P<sign>[+-])\s*)?      # optional "(p +"
        (?:(?P<q>\d+)\s*\*\s*)?                            # optional "q*"
        sqrt\(\s*(?P<d>-\d+)\s*\)
        (?:\s*\))?                                         # closing paren
        (?:\s*/\s*(?P<r>\d+))?                             # optional "/r"
        \s*$""",
        _re.VERBOSE,
    )

    @classmethod
    def parse(cls, text: str) -> "QuadNumber":
        """Parse "(p+q*sqrt(-D))/r"; p, q and r may be omitted when trivial."""
        m = cls._PATTERN.match(text)
        if not m:
            raise ScalarParseError(
                f"expected a period of the form (p+q*sqrt(-D))/r, got {text!r}", 0
            )
        p = int(m.group("p") or 0)
        q = int(m.group("q") or 1)
        if m.group("sign") == "-":
            q = -q
        d = int(m.group("d"))
        r = int(m.group("r") or 1)
        try:
            return cls(p, q, r, d)
        except (PreconditionError, ZeroDivisionError) as exc:
            raise ScalarParseError(str(exc), 0) from None


@dataclass(frozen=True)
class TauClass:
    """A reduced period with the trail of moves that got there.

    trail entries are ("T", k) for tau -> tau + k and ("S",) for
    tau -> -1/tau; matrix is the composite SL(2, Z) element, so
    reduced == matrix acting on the original input.
    """

    reduced: QuadNumber
    trail: tuple
    matrix: tuple


def reduce_tau(tau: QuadNumber) -> TauClass:
    """Reduce into the fundamental domain with exact comparisons."""
    trail = []
    mat = ((1, 0), (0, 1))

    def combine(a, b, c, d):
        nonlocal mat
        (a0, b0), (c0, d0) = mat
        mat = ((a * a0 + b * c0, a * b0 + b * d0),
               (c * a0 + d * c0, c * b0 + d * d0))

    start = tau
    while True:
        re = tau.re()
        k = floor(re + Fraction(1, 2))
        if k:
            tau = tau.mobius(1, -k, 0, 1)
            trail.append(("T", -k))
            combine(1, -k, 0, 1)
        if tau.norm2() < 1:
            tau = tau.mobius(0, -1, 1, 0)
            trail.append(("S",))
            combine(0, -1, 1, 0)
        else:
            break
    if tau.norm2() == 1 and tau.re() > 0:
        tau = tau.mobius(0, -1, 1, 0)
        trail.append(("S",))
        combine(0, -1, 1, 0)
    (a, b), (c, d) = mat
    if start.mobius(a, b, c, d) != tau:
        raise AssertionError("reduction trail does not reproduce the result")
    return TauClass(reduced=tau, trail=tuple(trail), matrix=mat)


def quotient_isomorphic(tau: QuadNumber, n: int) -> bool:
    """Is C/(Z + tau Z) isomorphic to C/(Z + (tau/n) Z)?

    The second curve is the quotient by the cyclic group generated by the
    image of tau/n, and isomorphism is equality in the fundamental
    domain.
    """
    if n < 1:
        raise PreconditionError("torsion order must be a positive integer")
    return reduce_tau(tau).reduced == reduce_tau(tau.divided_by(n)).reduced


@dataclass(frozen=True)
class FormalVerdict:
    isomorphic: bool
    certificate: str


def formal_quotient_isomorphic(name: str, n: int) -> FormalVerdict:
    """For a formal (transcendental) period the quotient by an order-n
    subgroup, n > 1, is never isomorphic to the original curve.

    Returns the negative verdict with a short arithmetic certificate.
    """
    if not isinstance(n, int) or n <= 1:
        raise PreconditionError("order must be an integer greater than 1")
    t = name
    certificate = (
        f"an isomorphism would mean integers a, b, c, d with a*d - b*c = 1 and "
        f"(a*{t} + b)/(c*{t} + d) = {t}/{n}. "
        f"case c = 0: then a*d = 1, so a = d = 1 or a = d = -1, and the equation "
        f"becomes ({n}*a - d)*{t} = -{n}*b with {n}*a - d = +-({n} - 1) != 0, "
        f"forcing {t} = -{n}*b/({n}*a - d), a rational number; "
        f"case c != 0: clearing denominators gives "
        f"c*{t}^2 + (d - {n}*a)*{t} - {n}*b = 0, an algebraic relation of degree 2 "
        f"with c != 0. "
        f"either case contradicts {t} being a formal period satisfying no "
        f"polynomial relation over Q, so no such matrix exists."
    )
    return FormalVerdict(isomorphic=False, certificate=certificate)
