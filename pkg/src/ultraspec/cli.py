"""Command-line front end: JSON documents in, JSON/CSV/SVG out.

Exit codes: 0 success, 1 a law failed, 2 malformed input, 3 a contract error
(for instance asking for a witness at a point outside the set).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .errors import SchemaError, UltraspecError
from .inverse import decide
from .operators import apply, op_norm, shift_by_lambda
from .padic import parse_rational
from .perturbation import (
    LawInstance,
    condition_destabilizer,
    condition_witness,
    destabilizer,
    law_check,
    pseudo_witness,
    standard_ensemble,
)
from .sequence import sup_norm
from .serialize import (
    dumps,
    functional_to_json,
    op_from_json,
    op_to_json,
    rational,
    report_to_csv,
    report_to_json,
    schema_for,
    validate,
    vector_from_json,
    vector_to_json,
    verdict_to_json,
)
from .spectral import COLUMNS, KINDS, SIDES, grid_points, member, scan

log = logging.getLogger(__name__)

_R = {"$ref": "#/$defs/rational"}
_OP = {"$ref": "#/$defs/op"}
_SIDE = {"enum": list(SIDES)}
_PSEUDO_KINDS = {"enum": ["pseudospectrum", "condition_pseudospectrum"]}

SCHEMAS = {
    "norm": {
        **schema_for({"op": _OP, "vector": {"$ref": "#/$defs/vector"}}, []),
        "oneOf": [{"required": ["op"]}, {"required": ["vector"]}],
    },
    "invert": schema_for({"op": _OP, "side": _SIDE}, ["op"]),
    "member": schema_for(
        {"op": _OP, "lambda": _R, "epsilon": _R, "side": _SIDE, "kind": {"enum": list(KINDS)}},
        ["op", "lambda"],
    ),
    "scan": schema_for(
        {"op": _OP, "epsilon": _R, "grid": {"type": "array", "items": _R, "minItems": 1}},
        ["op", "epsilon"],
    ),
    "witness": schema_for({"op": _OP, "lambda": _R, "epsilon": _R, "kind": _PSEUDO_KINDS}, ["op", "lambda", "epsilon"]),
    "destabilize": schema_for(
        {"op": _OP, "lambda": _R, "epsilon": _R, "kind": _PSEUDO_KINDS, "side": {"enum": ["left", "right"]}},
        ["op", "lambda", "epsilon"],
    ),
}

LAW_INSTANCE_SCHEMA = schema_for(
    {
        "law": {"type": "string"},
        "op": _OP,
        "lambda": _R,
        "epsilon": _R,
        "epsilon2": _R,
        "alpha": _R,
        "beta": _R,
        "seed": {"type": "integer"},
        "samples": {"type": "integer", "minimum": 0},
        "ladder": {"type": "integer", "minimum": 0},
    },
    ["law", "op"],
)
LAWS_SCHEMA = {
    "type": "object",
    "properties": {"instances": {"type": "array", "items": {"type": "object"}}},
    "required": ["instances"],
}


def _load(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def _epsilon(doc, default="1") -> Fraction:
    eps = parse_rational(doc.get("epsilon", default))
    if eps <= 0:
        raise SchemaError("epsilon must be positive")
    return eps


def cmd_norm(doc, args):
    p = doc["p"]
    if "vector" in doc:
        x = vector_from_json(doc["vector"], p)
        return {"norm": sup_norm(x).to_json()}
    A = op_from_json(doc["op"], p)
    return {"norm": op_norm(A).to_json()}


def cmd_invert(doc, args):
    A = op_from_json(doc["op"], doc["p"])
    return verdict_to_json(decide(A, doc.get("side", "left")))


def cmd_member(doc, args):
    A = op_from_json(doc["op"], doc["p"])
    lam, eps, side = parse_rational(doc["lambda"]), _epsilon(doc), doc.get("side", "left")
    if "kind" in doc:
        return {"member": member(A, lam, eps, side, doc["kind"])}
    return {kind: member(A, lam, eps, side, kind) for kind in KINDS}


def _grid(doc, args) -> list[Fraction]:
    if "grid" in doc:
        return [parse_rational(q) for q in doc["grid"]]
    p = doc["p"]
    units = [parse_rational(u) for u in args.grid_units.split(",")] if args.grid_units else None
    vals = range(-3, 4)
    if args.grid_valuations:
        lo, _, hi = args.grid_valuations.partition(":")
        vals = range(int(lo), int(hi or lo) + 1)
    return grid_points(p, units, vals)


def render_svg(report, cell: int = 22) -> str:
    """Strip of grid cells shaded by how many of the six sets contain each point."""
    per_row = 16
    rows = (len(report.rows) + per_row - 1) // per_row
    width, height = per_row * cell + 20, rows * (cell + 14) + 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="7">',
        f'<text x="10" y="14" font-size="10">p = {report.p}, epsilon = {rational(report.eps)}</text>',
    ]
    for k, r in enumerate(report.rows):
        x, y = 10 + (k % per_row) * cell, 22 + (k // per_row) * (cell + 14)
        if r.members is None:
            fill = "#bbbbbb"
        else:
            count = sum(r.members[c] for c in COLUMNS)
            shade = 255 - round(count * 255 / len(COLUMNS))
            fill = f"#{shade:02x}{shade:02x}ff"
        parts.append(f'<rect x="{x}" y="{y}" width="{cell - 2}" height="{cell - 2}" fill="{fill}" stroke="#333"/>')
        parts.append(f'<text x="{x}" y="{y + cell + 8}">{rational(r.lam)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_scan(doc, args):
    A = op_from_json(doc["op"], doc["p"])
    report = scan(A, _grid(doc, args), _epsilon(doc))
    if args.format == "csv":
        return report_to_csv(report)
    if args.format == "svg":
        return render_svg(report)
    return report_to_json(report)


def cmd_witness(doc, args):
    A = op_from_json(doc["op"], doc["p"])
    lam, eps = parse_rational(doc["lambda"]), _epsilon(doc)
    kind = doc.get("kind", "pseudospectrum")
    x = (pseudo_witness if kind == "pseudospectrum" else condition_witness)(A, lam, eps)
    image = apply(shift_by_lambda(A, lam), x).sup_norm()
    return {"witness": vector_to_json(x), "norm": x.sup_norm().to_json(), "image_norm": image.to_json(), "kind": kind}


def cmd_destabilize(doc, args):
    A = op_from_json(doc["op"], doc["p"])
    lam, eps = parse_rational(doc["lambda"]), _epsilon(doc)
    kind = doc.get("kind", "pseudospectrum")
    build = destabilizer if kind == "pseudospectrum" else condition_destabilizer
    side = doc.get("side", "left")
    d = build(A, lam, eps, side)
    return {
        "p": A.p,
        "kind": kind,
        "side": side,
        # only the left-sided construction comes with a theorem; the matrix right side is derived
        "derived_analogue": side == "right",
        "lambda": rational(lam),
        "epsilon": rational(eps),
        "seed": args.seed,
        "u": vector_to_json(d.u),
        "phi": functional_to_json(d.phi),
        "C": op_to_json(d.C),
        "kernel_witness": vector_to_json(d.kernel_witness),
        "norm": d.norm.to_json(),
        "bound": rational(d.bound),
        "norm_bound_checked": d.norm_bound_checked,
    }


def cmd_laws(args) -> int:
    if args.standard:
        pairs = standard_ensemble(args.seed if args.seed is not None else 0)
    else:
        doc = _load(args.input)
        if isinstance(doc, list):
            doc = {"instances": doc}
        validate_laws(doc)
        pairs = [(item["law"], LawInstance.from_json(item)) for item in doc["instances"]]
    failed = 0
    for law, inst in pairs:
        if args.seed is not None and not args.standard:
            inst.seed = args.seed
        verdict = law_check(law, inst)
        failed += not verdict.passed
        sys.stdout.write(dumps(verdict.to_json()) + "\n")
    return 1 if failed else 0


def validate_laws(doc):
    import jsonschema

    try:
        jsonschema.validate(doc, LAWS_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None
    for item in doc["instances"]:
        validate(item, LAW_INSTANCE_SCHEMA)


COMMANDS = {
    "norm": cmd_norm,
    "invert": cmd_invert,
    "member": cmd_member,
    "scan": cmd_scan,
    "witness": cmd_witness,
    "destabilize": cmd_destabilize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ultraspec", description="Exact p-adic pseudospectra toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*COMMANDS, "laws"]:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?", default="-", help="JSON file, inline JSON, or - for stdin")
        sp.add_argument("--seed", type=int, default=None)
        if name == "scan":
            sp.add_argument("--format", choices=["json", "csv", "svg"], default="json")
            sp.add_argument("--grid-units", default=None, help="comma-separated rationals")
            sp.add_argument("--grid-valuations", default=None, help="lo:hi inclusive")
        if name == "laws":
            sp.add_argument("--standard", action="store_true", help="run the seeded standard ensemble")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        if args.command == "laws":
            return cmd_laws(args)
        doc = _load(args.input)
        validate(doc, SCHEMAS[args.command])
        out = COMMANDS[args.command](doc, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except UltraspecError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out if isinstance(out, str) else dumps(out) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
