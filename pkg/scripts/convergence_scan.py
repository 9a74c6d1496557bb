#!/usr/bin/env python3
"""Trace the conditional convergence of the Rademacher coefficient sums.

For a chosen class and coefficient index, prints -2 c(k - 1/8) at every
dyadic truncation level together with the exact target, the rounding
residual, and the size of the newly added dyadic block.  Useful for
choosing verification truncations and for eyeballing how slowly the
c-sum settles.

    python scripts/convergence_scan.py --class 2B --k 1 --levels 1024 16384
"""

import argparse

import gmpy2

from m24rad import class_data
from m24rad.modgroup import GroupCtx
from m24rad import rademacher as R


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--class", dest="cls", default="1A")
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--levels", type=int, nargs=2, default=[512, 16384],
                    metavar=("FIRST", "LAST"))
    ap.add_argument("--precision", type=int, default=128)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    record = class_data(args.cls)
    ctx = GroupCtx(record.n, record.h)
    target = R.exact_coefficients(record, args.k)[-1]
    print(f"class {record.name}  (n, h) = ({record.n}, {record.h})  "
          f"k = {args.k}  target = {target}")
    print(f"{'c_max':>8} {'-2 c(k-1/8)':>24} {'resid':>12} {'new block':>12}")

    with gmpy2.context(gmpy2.get_context(), precision=args.precision):
        running = gmpy2.mpc(0)
        lo = 1
        level = args.levels[0]
        pref = -2 * R._prefactor("holo", args.k)
        while level <= args.levels[1]:
            block = R._weighted_sums(ctx, "holo", [args.k], lo, level + 1,
                                     args.precision, args.threads)[0]
            running += block
            lo = level + 1
            value = pref * running
            resid = float(value.real) - target
            print(f"{level:>8} {float(value.real):>24.10f} {resid:>12.2e} "
                  f"{float(abs(pref * block)):>12.2e}")
            level *= 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
