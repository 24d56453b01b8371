"""Verdict values returned by the bounded searches.

A bounded search can end three ways: a witness was found, no witness
exists within the coefficient bound, or the search space was empty to
begin with (no homomorphisms at all).  The CLI maps these to exit codes
0, 3 and 4.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Found:
    """A witness, its coefficients in the generator basis, and how many
    candidates were enumerated up to and including the hit."""

    witness: tuple
    coefficients: tuple
    tested: int


@dataclass(frozen=True)
class NotFoundUpToBound:
    bound: int
    tested: int


@dataclass(frozen=True)
class NoHoms:
    pass
