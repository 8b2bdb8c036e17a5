#!/usr/bin/env python3
"""Bare and encoded gap along the -X -> -Z path, side by side."""

import argparse

from ftaqc.config import parse_hamiltonian, resolve_code
from ftaqc.encoding import default_penalty, encode
from ftaqc.spectral import Schedule, gap_profile


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", default="-1 X")
    ap.add_argument("--end", default="-1 Z")
    ap.add_argument("--code", default="four_qubit")
    ap.add_argument("--penalty", type=float, default=None)
    ap.add_argument("--samples", type=int, default=11)
    args = ap.parse_args(argv)

    h0 = parse_hamiltonian(args.start, "--start")
    h1 = parse_hamiltonian(args.end, "--end")
    code = resolve_code(args.code)
    e_p = args.penalty if args.penalty is not None else max(default_penalty(h0), default_penalty(h1))
    e0, e1 = encode(h0, code, e_p), encode(h1, code, e_p)
    bare = gap_profile(Schedule(h0, h1, 1.0), args.samples)
    coded = gap_profile(Schedule(e0.h_s, e1.h_s, 1.0), args.samples, e0.projector())
    print(f"E_p = {e_p:g}")
    print(f"{'s':>6} {'bare gap':>12} {'codespace gap':>14} {'full gap':>12}")
    for b, c in zip(bare, coded):
        print(f"{b.s:6.3f} {b.gap:12.8f} {c.gap_in_codespace:14.8f} {c.gap:12.8f}")
    worst = max(abs(b.gap - c.gap_in_codespace) for b, c in zip(bare, coded))
    print(f"max |bare - codespace| = {worst:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
