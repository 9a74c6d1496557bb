"""Command line interface: table reproduction, theorem verification, diagnostics.

Exact values are always emitted as integer pairs (numerator/denominator),
never as floats; floating-point numbers appear only in the Rademacher
estimates and diagnostics and are printed with full working precision.
Exit status is 0 exactly when every requested check passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import forms, m24, rademacher
from .config import RunConfig
from .m24 import CLASS_NAMES, DecompositionError
from .modgroup import GroupCtx


def _parse_complex(text: str) -> complex:
    return complex(text.replace("i", "j").replace(" ", ""))


def _emit(args, payload: dict, csv_rows: tuple[list, list] | None):
    if args.format == "csv" and csv_rows is not None:
        header, rows = csv_rows
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(header)
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")


def _frac_cell(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ----------------------------------------------------------------------
# coeffs

def _series_window(kind: str, name: str, rows: int):
    if kind == "hg":
        series = forms.hg_series(name, Fraction(8 * rows - 1, 8))
        expos = [Fraction(8 * l - 1, 8) for l in range(rows)]
    else:
        series = forms.inverse_eta_series(name, Fraction(rows))
        expos = [Fraction(l) for l in range(rows)]
    return expos, [series.coeff(e) for e in expos]


def cmd_coeffs(args) -> int:
    names = list(CLASS_NAMES) if args.all else [args.cls]
    if not names or names[0] is None:
        print("error: pass --class NAME or --all", file=sys.stderr)
        return 2
    table = {}
    expos = None
    for name in names:
        expos, coeffs = _series_window(args.kind, name, args.order)
        table[name] = coeffs
    payload = {
        "kind": args.kind,
        "rows": args.order,
        "classes": names,
        "series": {
            name: [
                {
                    "exponent_numerator": e.numerator,
                    "exponent_denominator": e.denominator,
                    "coefficient_numerator": c.numerator,
                    "coefficient_denominator": c.denominator,
                }
                for e, c in zip(expos, table[name])
            ]
            for name in names
        },
    }
    header = ["exponent"] + names
    rows = [
        [_frac_cell(expos[i])] + [_frac_cell(table[n][i]) for n in names]
        for i in range(args.order)
    ]
    _emit(args, payload, (header, rows))
    return 0


# ----------------------------------------------------------------------
# verify

def cmd_verify(args, cfg: RunConfig) -> int:
    names = []
    for chunk in args.cls or []:
        names.extend(x for x in chunk.split(",") if x)
    if not names:
        print("error: pass --class NAME[,NAME...]", file=sys.stderr)
        return 2
    if args.cmax < max(m24.class_data(n).n for n in names):
        print("error: --cmax is below the largest requested level", file=sys.stderr)
        return 2
    reports = [
        rademacher.verify_theorem_adaptive(
            name, args.kmax, tol=cfg.tolerance, c_cap=args.cmax,
            c_start=args.cstart, prec=cfg.precision_bits, threads=cfg.threads,
        )
        for name in names
    ]
    ok = all(r["pass"] for r in reports)
    payload = {"pass": ok, "reports": reports}
    header = ["class", "k", "c_max", "value_re", "value_im", "target", "pass"]
    rows = [
        [e["class"], e["k"], e["c_max"], e["value_re"], e["value_im"],
         e["target"], e["pass"]]
        for r in reports
        for e in r["entries"]
    ]
    _emit(args, payload, (header, rows))
    return 0 if ok else 1


# ----------------------------------------------------------------------
# decompose

def cmd_decompose(args) -> int:
    rows = []
    try:
        for l in range(args.rows):
            if args.kind == "hg":
                vec = {
                    name: forms.hg_series(name, Fraction(8 * args.rows - 1, 8)).coeff(
                        Fraction(8 * l - 1, 8))
                    for name in CLASS_NAMES
                }
                mult = m24.integral_multiplicities(vec)
            else:
                vec = {
                    name: forms.inverse_eta_series(name, Fraction(args.rows)).coeff(l)
                    for name in CLASS_NAMES
                }
                mult = m24.integral_multiplicities(vec, require_nonnegative=True)
            rows.append(mult)
    except DecompositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = {
        "kind": args.kind,
        "rows": args.rows,
        "irreducibles": [f"chi_{i}" for i in range(1, 27)],
        "multiplicities": rows,
    }
    header = ["row"] + [f"chi_{i}" for i in range(1, 27)]
    csv_rows = [[l] + rows[l] for l in range(args.rows)]
    _emit(args, payload, (header, csv_rows))
    return 0


# ----------------------------------------------------------------------
# diag

def cmd_diag_zeta(args, cfg: RunConfig) -> int:
    ctx = GroupCtx(args.n, args.h)
    partials = rademacher.zeta_partial(
        ctx, args.m, args.l, args.cmax, prec=cfg.precision_bits, threads=cfg.threads
    )
    checkpoints = []
    prev = None
    for C, v in partials:
        inc = abs(v - prev) if prev is not None else abs(v)
        checkpoints.append(
            {"c_max": C, "re": str(v.real), "im": str(v.imag),
             "increment_abs": str(inc)}
        )
        prev = v
    payload = {"n": args.n, "h": args.h, "m": args.m, "l": args.l,
               "checkpoints": checkpoints}
    header = ["c_max", "re", "im", "increment_abs"]
    rows = [[c["c_max"], c["re"], c["im"], c["increment_abs"]] for c in checkpoints]
    _emit(args, payload, (header, rows))
    return 0


def cmd_diag_jacobi(args) -> int:
    tau = _parse_complex(args.tau)
    z = _parse_complex(args.z)
    p = forms.JacobiPoint(tau, z)
    h = forms.h_series(Fraction(args.order))
    zval = forms.z_jacobi_numeric(p)
    eta3 = forms.eta_series(1, Fraction(args.order)) ** 3
    th1 = forms.theta_numeric(1, p, forms._nterms_for(tau))
    mu = forms.mu_numeric(p, args.lmax)
    residual = abs(
        zval * eta3.eval_at(tau) - th1 ** 2 * (24 * mu + h.eval_at(tau))
    )
    z_at_0 = forms.z_jacobi_numeric(forms.JacobiPoint(tau, 0j))
    payload = {
        "tau": str(tau), "z": str(z), "order": args.order,
        "residual": residual,
        "z_at_zero_minus_24": abs(z_at_0 - 24),
    }
    _emit(args, payload, (["tau", "z", "residual", "z_at_zero_minus_24"],
                          [[str(tau), str(z), residual, abs(z_at_0 - 24)]]))
    return 0


def cmd_diag_direct(args, cfg: RunConfig) -> int:
    ctx = GroupCtx(args.n, args.h)
    tau = _parse_complex(args.tau)
    ests = rademacher._coeff_batch(
        ctx, "holo", list(range(1, args.kmax + 1)), args.cmax,
        prec=cfg.precision_bits, threads=cfg.threads,
    )
    import cmath

    series_val = cmath.exp(-2j * cmath.pi * tau / 8)
    for est in ests:
        series_val += complex(est.value) * cmath.exp(
            2j * cmath.pi * tau * (est.k - Fraction(1, 8)))
    rows = []
    for K in args.K:
        direct = rademacher.rademacher_direct(ctx, tau, K, prec=cfg.precision_bits)
        rows.append(
            {"K": K, "direct_re": str(direct.real), "direct_im": str(direct.imag),
             "series_re": series_val.real, "series_im": series_val.imag,
             "abs_diff": abs(complex(direct) - series_val)}
        )
    payload = {"n": args.n, "h": args.h, "tau": str(tau), "kmax": args.kmax,
               "c_max": args.cmax, "comparison": rows}
    header = ["K", "direct_re", "direct_im", "series_re", "series_im", "abs_diff"]
    _emit(args, payload, (header, [[r[k] for k in header] for r in rows]))
    return 0


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision", type=int, default=None,
                        help="mantissa bits for numeric sums (default 128)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes for the c-sums (default 1)")

    ap = argparse.ArgumentParser(
        prog="m24rad",
        description="Exact McKay-Thompson series for M24 and their "
                    "Rademacher-sum verification",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common],
                       help="exact series coefficients (tables)")
    p.add_argument("--class", dest="cls", default=None, metavar="NAME")
    p.add_argument("--all", action="store_true", help="all 26 classes")
    p.add_argument("--kind", choices=("hg", "etainv"), required=True)
    p.add_argument("--order", type=int, default=10, help="number of rows")

    p = sub.add_parser("verify", parents=[common],
                       help="adaptive Rademacher-coefficient check")
    p.add_argument("--class", dest="cls", action="append", metavar="NAME[,NAME...]")
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--cmax", type=int, default=None,
                   help="truncation cap for the adaptive doubling (default 20000)")
    p.add_argument("--cstart", type=int, default=1024)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("decompose", parents=[common],
                       help="irreducible multiplicities of table rows")
    p.add_argument("--kind", choices=("hg", "etainv"), required=True)
    p.add_argument("--rows", type=int, default=10)

    p = sub.add_parser("diag", help="diagnostics")
    dsub = p.add_subparsers(dest="diag_command", required=True)

    d = dsub.add_parser("zeta", parents=[common],
                        help="dyadic partial sums of the Kloosterman zeta")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--h", type=int, default=1)
    d.add_argument("--m", type=int, default=0)
    d.add_argument("--l", type=int, default=1)
    d.add_argument("--cmax", type=int, default=4096)

    d = dsub.add_parser("jacobi", parents=[common],
                        help="elliptic-genus decomposition residual")
    d.add_argument("--tau", required=True)
    d.add_argument("--z", required=True)
    d.add_argument("--order", type=int, default=12)
    d.add_argument("--lmax", type=int, default=40)

    d = dsub.add_parser("direct", parents=[common],
                        help="rectangle sum vs coefficient series")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--h", type=int, default=1)
    d.add_argument("--K", type=int, nargs="+", default=[25, 50, 100])
    d.add_argument("--tau", default="0.1+2i")
    d.add_argument("--kmax", type=int, default=6)
    d.add_argument("--cmax", type=int, default=4096)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kw = {}
    if args.precision is not None:
        kw["precision_bits"] = args.precision
    if args.threads is not None:
        kw["threads"] = args.threads
    if getattr(args, "tol", None) is not None:
        kw["tolerance"] = args.tol
    if getattr(args, "cmax", None) is not None and args.command == "verify":
        kw["c_max"] = args.cmax
    cfg = RunConfig(**kw).with_env_overrides()
    if args.command == "verify" and args.cmax is None:
        args.cmax = cfg.c_max

    if args.command == "coeffs":
        return cmd_coeffs(args)
    if args.command == "verify":
        return cmd_verify(args, cfg)
    if args.command == "decompose":
        return cmd_decompose(args)
    if args.command == "diag":
        if args.diag_command == "zeta":
            return cmd_diag_zeta(args, cfg)
        if args.diag_command == "jacobi":
            return cmd_diag_jacobi(args)
        return cmd_diag_direct(args, cfg)
    raise AssertionError("unreachable")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
