"""JSON documents for tori, points and embeddings, plus run reports.

Every value that leaves the library does so through these functions, and
everything they emit is canonical: object keys sorted, fractions reduced
and rendered "p/q", scalar entries rendered in the parser's own grammar
so documents round-trip exactly.  Reports are byte-identical for
identical inputs except for the timing field.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DocumentError
from .scalars import GeneratorSet, parse_scalar, render_scalar
from .torus import (
    PolarisedTorus,
    SubvarietyEmbedding,
    TorsionPoint,
    ambient_to_lattice,
    standard_gram,
)


def fraction_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"not a fraction: {text!r} ({exc})") from None


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


# -- tori ----------------------------------------------------------------------

def torus_to_doc(T: PolarisedTorus, assumptions: str = "") -> dict:
    return {
        "generators": list(T.gens.names),
        "dim": T.dim,
        "periods": [[render_scalar(x) for x in row] for row in T.periods],
        "gram": [list(row) for row in T.gram],
        "assumptions": assumptions,
    }


def torus_from_doc(doc: dict) -> PolarisedTorus:
    """Build a torus from its document, inferring the standard pairing
    from a [Z | D] frame when no gram matrix is given."""
    if not isinstance(doc, dict):
        raise DocumentError("torus document must be a JSON object")
    for key in ("generators", "dim", "periods"):
        if key not in doc:
            raise DocumentError(f"torus document is missing {key!r}")
    try:
        gens = GeneratorSet(tuple(doc["generators"]))
    except Exception as exc:
        raise DocumentError(f"bad generator list: {exc}") from None
    n = doc["dim"]
    if not isinstance(n, int) or n < 1:
        raise DocumentError("dim must be a positive integer")
    rows = doc["periods"]
    if len(rows) != n or any(len(r) != 2 * n for r in rows):
        raise DocumentError(f"periods must be a {n} x {2 * n} matrix of expressions")
    periods = [[parse_scalar(gens, str(x)) for x in row] for row in rows]
    if "gram" in doc and doc["gram"] is not None:
        gram = doc["gram"]
        if len(gram) != 2 * n or any(len(r) != 2 * n for r in gram):
            raise DocumentError(f"gram must be a {2 * n} x {2 * n} integer matrix")
        gram = [[int(x) for x in row] for row in gram]
    else:
        gram = _infer_standard_gram(periods, n)
    return PolarisedTorus(gens, periods, gram)


def _infer_standard_gram(periods, n):
    diag = []
    for i in range(n):
        for j in range(n):
            x = periods[i][n + j]
            if not x.is_constant():
                raise DocumentError(
                    "cannot infer the pairing: right period block is not constant; "
                    "supply a gram matrix"
                )
            v = x.constant_value()
            if i == j:
                if v.denominator != 1 or v <= 0:
                    raise DocumentError(
                        "cannot infer the pairing: right block diagonal entry "
                        f"({i},{i}) = {v} is not a positive integer"
                    )
                diag.append(int(v))
            elif v != 0:
                raise DocumentError(
                    "cannot infer the pairing: right period block is not diagonal; "
                    "supply a gram matrix"
                )
    return standard_gram(diag)


# -- points --------------------------------------------------------------------

def point_to_doc(p: TorsionPoint) -> dict:
    return {
        "coords": [fraction_str(x) for x in p.coords],
        "basis": "lattice",
    }


def point_from_doc(doc: dict, torus: PolarisedTorus) -> TorsionPoint:
    if not isinstance(doc, dict) or "coords" not in doc:
        raise DocumentError("point document must be an object with coords")
    basis = doc.get("basis", "lattice")
    coords = [parse_fraction(x) for x in doc["coords"]]
    if basis == "lattice":
        if len(coords) != 2 * torus.dim:
            raise DocumentError(
                f"lattice point needs {2 * torus.dim} coordinates, got {len(coords)}"
            )
        return TorsionPoint(coords)
    if basis == "ambient":
        if len(coords) != torus.dim:
            raise DocumentError(
                f"ambient point needs {torus.dim} coordinates, got {len(coords)}"
            )
        lattice = ambient_to_lattice(torus, coords)
        if lattice is None:
            raise DocumentError("ambient point is not rational over the lattice")
        return TorsionPoint(lattice)
    raise DocumentError("point basis must be 'lattice' or 'ambient'")


# -- embeddings and matrices ---------------------------------------------------

def embedding_to_doc(emb: SubvarietyEmbedding) -> dict:
    return {"columns": [list(row) for row in emb.columns]}


def embedding_from_doc(doc: dict, torus: PolarisedTorus) -> SubvarietyEmbedding:
    if not isinstance(doc, dict) or "columns" not in doc:
        raise DocumentError("embedding document must be an object with columns")
    cols = [[int(x) for x in row] for row in doc["columns"]]
    return SubvarietyEmbedding(torus, cols)


def int_matrix_doc(M) -> list:
    return [[int(x) for x in row] for row in M]


def scalar_matrix_doc(M) -> list:
    out = []
    for row in M:
        out.append([x if isinstance(x, str) else render_scalar(x) for x in row])
    return out


def fraction_matrix_doc(M) -> list:
    return [[fraction_str(x) for x in row] for row in M]


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class Report:
    """What a CLI invocation did: inputs, outcome, and a verdict.

    verdict is "pass" when every assertion held, "bounded" when the
    outcome is a negative search result valid only up to its bound, and
    "fail" otherwise.
    """

    command: list
    inputs: dict
    payload: dict
    verdict: str
    timing_seconds: float

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "command": list(self.command),
            "inputs_digest": digest(self.inputs),
            "payload": self.payload,
            "verdict": self.verdict,
        }
        if include_timing:
            out["timing_seconds"] = round(self.timing_seconds, 6)
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return canonical_json(self.to_dict(include_timing=include_timing))
