"""Scan an operator over the default grid and write CSV and SVG portraits.

Usage: python3 scripts/scan_portrait.py operator.json --eps 1/5 --out portraits/name
The operator file holds {"p": ..., "op": {...}}.
"""

import argparse
import json
from pathlib import Path

from ultraspec.cli import render_svg
from ultraspec.padic import parse_rational
from ultraspec.serialize import op_from_json, report_to_csv
from ultraspec.spectral import grid_points, scan


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("operator")
    parser.add_argument("--eps", default="1")
    parser.add_argument("--out", default="portrait")
    args = parser.parse_args()

    doc = json.loads(Path(args.operator).read_text())
    A = op_from_json(doc["op"], doc["p"])
    report = scan(A, grid_points(doc["p"]), parse_rational(args.eps))
    assert report.check_invariants()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".csv").write_text(report_to_csv(report))
    out.with_suffix(".svg").write_text(render_svg(report))
    print(f"wrote {out.with_suffix('.csv')} and {out.with_suffix('.svg')}")


if __name__ == "__main__":
    main()
