"""Print the left/right membership table for the two shifts over Q_5.

Usage: python3 scripts/shift_asymmetry_table.py [--p 5] [--csv out.csv]
"""

import argparse
import csv
import sys
from fractions import Fraction

from ultraspec.operators import LeftShift, RightShift
from ultraspec.padic import format_rational
from ultraspec.spectral import KINDS, closed_form_region, member

SHORT = {"spectrum": "sigma", "pseudospectrum": "sigma_eps", "condition_pseudospectrum": "Lambda_eps"}


def rows(p: int):
    lams = [Fraction(0), Fraction(1), Fraction(p), Fraction(1, p), Fraction(1 + p)]
    for name, X in (("S", RightShift(p)), ("T", LeftShift(p))):
        for eps in (Fraction(1, p), Fraction(1), Fraction(p)):
            for lam in lams:
                row = {"op": name, "epsilon": format_rational(eps), "lambda": format_rational(lam)}
                for kind in KINDS:
                    for side in ("left", "right"):
                        value = member(X, lam, eps, side, kind)
                        assert value == closed_form_region(X, eps, side, kind).contains(lam)
                        row[f"{SHORT[kind]}_{side[0]}"] = int(value)
                yield row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args()
    table = list(rows(args.p))
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    writer = csv.DictWriter(out, fieldnames=list(table[0]))
    writer.writeheader()
    writer.writerows(table)


if __name__ == "__main__":
    main()
