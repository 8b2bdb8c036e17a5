#!/usr/bin/env python3
"""t = 0 leakage rate against beta * E_p for an encoded Hamiltonian.

Prints the table and the per-row deviation from the single-gap
Bose-Einstein ratio, optionally writing a CSV.
"""

import argparse
import math

from ftaqc.config import parse_hamiltonian, resolve_code
from ftaqc.dynamics import NoiseModel, leakage_suppression_report
from ftaqc.io import LEAKAGE_COLUMNS, write_csv


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--hamiltonian", default="1.0 Z")
    ap.add_argument("--code", default="four_qubit")
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--lam", type=float, default=0.1)
    ap.add_argument("--density", choices=("constant", "ohmic"), default="constant")
    ap.add_argument("--beta-ep", type=float, nargs="+", default=[1, 2, 4, 8],
                    help="values of beta * E_p")
    ap.add_argument("--csv", help="optional output path")
    args = ap.parse_args(argv)

    h = parse_hamiltonian(args.hamiltonian, "--hamiltonian")
    noise = NoiseModel(beta=args.beta, lam=args.lam, spectral_density=args.density)
    rep = leakage_suppression_report(h, resolve_code(args.code),
                                     [x / args.beta for x in args.beta_ep], noise)
    print(f"{'E_p':>8} {'gap':>8} {'beta*gap':>9} {'rate':>12} {'slope':>8} {'vs BE':>8}")
    prev = None
    for r in rep.rows:
        dev = ""
        if prev is not None and prev.rate > 0 and r.beta_gap > 0 and prev.beta_gap > 0:
            be = math.expm1(prev.beta_gap) / math.expm1(r.beta_gap)
            dev = f"{100 * ((r.rate / prev.rate) / be - 1):+.2f}%"
        print(f"{r.e_p:8.4g} {r.leakage_gap:8.4g} {r.beta_gap:9.4g} {r.rate:12.4e} "
              f"{r.slope:8.4f} {dev:>8}")
        prev = r
    print(f"fitted slope d ln(rate) / d(beta*gap): {rep.fitted_slope:.4f}")
    if args.csv:
        write_csv(args.csv, LEAKAGE_COLUMNS,
                  [(r.e_p, r.leakage_gap, r.beta_gap, r.rate, r.slope) for r in rep.rows])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
