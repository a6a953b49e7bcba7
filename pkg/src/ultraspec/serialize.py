"""JSON documents for scalars, vectors, operators, verdicts and reports.

Rationals are strings ``"a/b"`` or ``"a"``; norm values are ``{"zero": true}``
or ``{"pow": e}``. Input documents are validated with ``jsonschema`` before
anything is built from them.
"""

from __future__ import annotations

import csv
import io
import json

import jsonschema

from .errors import SchemaError
from .inverse import (
    CanonicalOneSidedInverse,
    ExactInverse,
    InvertibilityVerdict,
    KernelVector,
    LowerBoundIsometry,
    NonSurjectivityWitness,
)
from .operators import (
    Affine,
    Diagonal,
    LeftShift,
    Matrix,
    OperatorExpr,
    RankOneUpdate,
    RightShift,
    Shifted,
    add_rank_one,
    affine,
    shift_by_lambda,
)
from .padic import PNormValue, PrimeContext, format_rational, parse_rational
from .sequence import FinSuppVector, Functional, GeometricTailVector

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"}

SCHEMA_DEFS = {
    "rational": RATIONAL,
    "entries": {
        "type": "object",
        "propertyNames": {"pattern": r"^[0-9]+$"},
        "additionalProperties": {"$ref": "#/$defs/rational"},
    },
    "ambient": {
        "oneOf": [
            {"const": "c0"},
            {
                "type": "object",
                "properties": {"kn": {"type": "integer", "minimum": 1}},
                "required": ["kn"],
                "additionalProperties": False,
            },
        ]
    },
    "vector": {
        "type": "object",
        "properties": {
            "ambient": {"$ref": "#/$defs/ambient"},
            "entries": {"$ref": "#/$defs/entries"},
        },
        "required": ["ambient", "entries"],
    },
    "functional": {
        "type": "object",
        "properties": {"coefficients": {"$ref": "#/$defs/entries"}},
        "required": ["coefficients"],
    },
    "op": {
        "type": "object",
        "required": ["kind"],
        "oneOf": [
            {
                "properties": {
                    "kind": {"const": "matrix"},
                    "entries": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
                    },
                },
                "required": ["entries"],
            },
            {
                "properties": {
                    "kind": {"const": "diagonal"},
                    "prefix": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
                    "tail": {"$ref": "#/$defs/rational"},
                },
                "required": ["prefix", "tail"],
            },
            {"properties": {"kind": {"const": "right_shift"}}},
            {"properties": {"kind": {"const": "left_shift"}}},
            {
                "properties": {
                    "kind": {"const": "shifted"},
                    "lambda": {"$ref": "#/$defs/rational"},
                    "inner": {"$ref": "#/$defs/op"},
                },
                "required": ["lambda", "inner"],
            },
            {
                "properties": {
                    "kind": {"const": "affine"},
                    "alpha": {"$ref": "#/$defs/rational"},
                    "beta": {"$ref": "#/$defs/rational"},
                    "inner": {"$ref": "#/$defs/op"},
                },
                "required": ["alpha", "beta", "inner"],
            },
            {
                "properties": {
                    "kind": {"const": "rank_one"},
                    "u": {"$ref": "#/$defs/vector"},
                    "phi": {"$ref": "#/$defs/functional"},
                    "inner": {"$ref": "#/$defs/op"},
                },
                "required": ["u", "phi", "inner"],
            },
        ],
    },
}


def schema_for(properties: dict, required: list[str]) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$defs": SCHEMA_DEFS,
        "type": "object",
        "properties": {"p": {"type": "integer", "minimum": 2}, **properties},
        "required": ["p", *required],
    }


def validate(doc, schema: dict):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None
    try:
        PrimeContext(doc["p"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# --- encoding ---------------------------------------------------------------


def rational(q) -> str:
    return format_rational(q)


def entries_json(pairs) -> dict:
    return {str(i): rational(q) for i, q in pairs}


def vector_to_json(x) -> dict:
    if isinstance(x, GeometricTailVector):
        return {
            "ambient": "c0",
            "entries": entries_json(x.head.entries),
            "tail": {"start": x.start, "lead": rational(x.lead), "ratio": rational(x.ratio)},
        }
    return {"ambient": "c0" if x.n is None else {"kn": x.n}, "entries": entries_json(x.entries)}


def functional_to_json(phi: Functional) -> dict:
    return {"coefficients": entries_json(phi.coefficients)}


def op_to_json(A: OperatorExpr) -> dict:
    if isinstance(A, Matrix):
        return {"kind": "matrix", "entries": [[rational(q) for q in row] for row in A.rows]}
    if isinstance(A, Diagonal):
        return {"kind": "diagonal", "prefix": [rational(q) for q in A.prefix], "tail": rational(A.tail)}
    if isinstance(A, RightShift):
        return {"kind": "right_shift"}
    if isinstance(A, LeftShift):
        return {"kind": "left_shift"}
    if isinstance(A, Shifted):
        return {"kind": "shifted", "lambda": rational(A.lam), "inner": op_to_json(A.inner)}
    if isinstance(A, Affine):
        return {"kind": "affine", "alpha": rational(A.alpha), "beta": rational(A.beta), "inner": op_to_json(A.inner)}
    if isinstance(A, RankOneUpdate):
        return {
            "kind": "rank_one",
            "u": vector_to_json(A.u),
            "phi": functional_to_json(A.phi),
            "inner": op_to_json(A.inner),
        }
    raise TypeError(f"unknown operator {A!r}")


def operator_document(A: OperatorExpr) -> dict:
    return {"p": A.p, "op": op_to_json(A)}


def certificate_to_json(cert) -> dict:
    if isinstance(cert, ExactInverse):
        return {"kind": "exact_inverse", "matrix": op_to_json(cert.matrix)["entries"]}
    if isinstance(cert, KernelVector):
        return {"kind": "kernel_vector", "vector": vector_to_json(cert.vector)}
    if isinstance(cert, NonSurjectivityWitness):
        doc = {"kind": "non_surjectivity", "missed": vector_to_json(cert.missed), "reason": cert.reason}
        if cert.annihilator is not None:
            doc["annihilator"] = functional_to_json(cert.annihilator)
        if cert.annihilator_ratio is not None:
            doc["annihilator_ratio"] = rational(cert.annihilator_ratio)
        return doc
    if isinstance(cert, CanonicalOneSidedInverse):
        return {
            "kind": "canonical_one_sided_inverse",
            "family": cert.family,
            "recursion": cert.recursion,
            "lower_modulus": cert.lower_modulus.to_json(),
        }
    if isinstance(cert, LowerBoundIsometry):
        return {"kind": "lower_bound_isometry", "gamma": cert.gamma.to_json()}
    raise TypeError(f"unknown certificate {cert!r}")


def verdict_to_json(v: InvertibilityVerdict) -> dict:
    return {
        "side": v.side,
        "invertible": v.invertible,
        "min_inverse_norm": v.min_inverse_norm.to_json() if v.invertible else None,
        "certificate": certificate_to_json(v.certificate),
    }


def norm_cell(v: PNormValue | None) -> str:
    return "inf" if v is None else str(v)


def report_to_json(report) -> dict:
    rows = []
    for r in report.rows:
        row = {"lambda": rational(r.lam)}
        if r.members is None:
            row["error"] = r.error
        else:
            row.update(r.members)
            row["shifted_norm"] = r.shifted_norm.to_json()
            row["min_left_inverse_norm"] = r.min_left.to_json() if r.min_left is not None else None
            row["min_right_inverse_norm"] = r.min_right.to_json() if r.min_right is not None else None
        rows.append(row)
    return {"p": report.p, "epsilon": rational(report.eps), "rows": rows}


CSV_HEADER = [
    "lambda",
    "sigma_l",
    "sigma_r",
    "sigma_eps_l",
    "sigma_eps_r",
    "lambda_eps_l",
    "lambda_eps_r",
    "shifted_norm",
    "min_left_inverse_norm",
    "min_right_inverse_norm",
]


def report_to_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in report.rows:
        if r.members is None:
            w.writerow([rational(r.lam)] + ["NA"] * 9)
            continue
        w.writerow(
            [rational(r.lam)]
            + [int(r.members[c]) for c in CSV_HEADER[1:7]]
            + [norm_cell(r.shifted_norm), norm_cell(r.min_left), norm_cell(r.min_right)]
        )
    return buf.getvalue()


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# --- decoding ---------------------------------------------------------------


def _entries(doc: dict) -> dict:
    return {int(i): parse_rational(q) for i, q in doc.items()}


def vector_from_json(doc: dict, p: int):
    amb = doc["ambient"]
    n = None if amb == "c0" else amb["kn"]
    head = FinSuppVector(p, _entries(doc["entries"]), n)
    if "tail" in doc:
        t = doc["tail"]
        return GeometricTailVector(head, t["start"], parse_rational(t["lead"]), parse_rational(t["ratio"])).simplify()
    return head


def functional_from_json(doc: dict, p: int) -> Functional:
    return Functional(p, _entries(doc["coefficients"]))


def op_from_json(doc: dict, p: int) -> OperatorExpr:
    """Build a folded operator from its JSON form."""
    kind = doc["kind"]
    try:
        if kind == "matrix":
            return Matrix(p, [[parse_rational(q) for q in row] for row in doc["entries"]])
        if kind == "diagonal":
            return Diagonal(p, [parse_rational(q) for q in doc["prefix"]], parse_rational(doc["tail"]))
        if kind == "right_shift":
            return RightShift(p)
        if kind == "left_shift":
            return LeftShift(p)
        inner = op_from_json(doc["inner"], p)
        if kind == "shifted":
            return shift_by_lambda(inner, parse_rational(doc["lambda"]))
        if kind == "affine":
            return affine(inner, parse_rational(doc["alpha"]), parse_rational(doc["beta"]))
        if kind == "rank_one":
            return add_rank_one(inner, vector_from_json(doc["u"], p), functional_from_json(doc["phi"], p))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    raise SchemaError(f"unknown operator kind {kind!r}")
