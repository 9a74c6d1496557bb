"""Generalized Kloosterman sums and the Rademacher coefficient machinery.

The exponential sums S(m, l, c, xi) run over double-coset representatives
(a, b; c, d) with d in [0, c) coprime to c, a the inverse lift of d, and
xi the weight-1/2 multiplier psi (twist character times eta^(-3)) or its
conjugate.  Every term is a root of unity whose exponent, over the common
denominator 24c, is the integer

    t = -(24/h)(c/n) c d + 3(a+d) - 6*(6c s(d,c)) - 9c        [psi part]
        + (24m - 3a') a + (24l - 3a') d                        [a' = 24*alpha]

with alpha = 1/8 for psi and 7/8 for the conjugate, so the whole kernel
is integer arithmetic plus one complex exponential per term.  The d and
c-d terms are complex conjugates up to a fixed eighth root of unity,
which halves the transcendental work.

High-precision arithmetic is gmpy2/MPFR with a configurable mantissa
(128 bits by default).  Sums over c are accumulated in fixed blocks of
512 so that parallel and sequential evaluation reduce in exactly the
same order and agree bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import get_context

import gmpy2
from gmpy2 import mpc, mpfr

from .m24 import ClassRecord, class_data
from .modgroup import GroupCtx, Mat2, T, double_coset_reps, psi_multiplier
from .phase import PhaseExp, dedekind_sum_6c

DEFAULT_PREC = 128
BLOCK = 512

ALPHA_NUM = 3        # 24 * (1/8): psi(T) = e(1/8)
ALPHA_BAR_NUM = 21   # 24 * (7/8): conj(psi)(T) = e(7/8)


def _ctx(prec: int):
    return gmpy2.context(gmpy2.get_context(), precision=prec)


def _cis(angle) -> mpc:
    s, c = gmpy2.sin_cos(angle)
    return mpc(c, s)


def _e_frac(num: int, den: int) -> mpc:
    """e(num/den) at the active precision."""
    return _cis(2 * gmpy2.const_pi() * num / den)


def _cexp2pi(w) -> mpc:
    """exp(2*pi*i*w) for complex w at the active precision."""
    return gmpy2.exp(2j * gmpy2.const_pi() * mpc(w))


# ----------------------------------------------------------------------
# Bessel kernels and the generalized exponential

def bessel_i_half(x, prec: int = DEFAULT_PREC) -> mpfr:
    """I_(1/2)(x) = sqrt(2/(pi x)) sinh x for x > 0."""
    if x <= 0:
        raise ValueError("argument must be positive")
    with _ctx(prec):
        X = mpfr(x)
        return gmpy2.sqrt(2 / (gmpy2.const_pi() * X)) * gmpy2.sinh(X)


def bessel_j_half(x, prec: int = DEFAULT_PREC) -> mpfr:
    """J_(1/2)(x) = sqrt(2/(pi x)) sin x for x > 0."""
    if x <= 0:
        raise ValueError("argument must be positive")
    with _ctx(prec):
        X = mpfr(x)
        return gmpy2.sqrt(2 / (gmpy2.const_pi() * X)) * gmpy2.sin(X)


def gen_exp(x, s, prec: int = DEFAULT_PREC) -> mpc:
    """The generalized exponential sum_{m>=0} (2 pi i x)^(m+s)/Gamma(m+s+1).

    (2 pi i x)^s takes the principal branch.  Terms are summed until the
    running ratio |z|/(m+s+1) has dropped below 1/2 and the current term
    is below 2^-(prec+8) relative to the accumulated sum; past that
    point the tail is dominated by a geometric series in 1/2 and stays
    below the working tolerance.
    """
    with _ctx(prec + 16):
        z = 2j * gmpy2.const_pi() * mpc(x)
        sf = Fraction(s)
        sm = mpfr(sf.numerator) / sf.denominator
        if z == 0:
            return mpc(1) if sf == 0 else mpc(0)
        zs = z ** sm if sf != 0 else mpc(1)
        term = zs / gmpy2.gamma(sm + 1)
        acc = term
        j = 0
        eps = mpfr(2) ** (-(prec + 8))
        while True:
            term = term * z / (j + sm + 1)
            acc += term
            j += 1
            if abs(z) / (j + sm + 1) < 0.5 and abs(term) < eps * (abs(acc) + 1):
                break
        return mpc(acc)


# ----------------------------------------------------------------------
# the integer-exponent Kloosterman kernel

def _row_sums(n: int, h: int, c: int, m: int, ls, conjugate: bool) -> list[mpc]:
    """[S(m, l, c, xi) for l in ls] at the active precision.

    ls must be sorted ascending.  The d and c-d summands satisfy
    z(c-d) = e(-3/4) conj(z(d)) for psi and e(-1/4) conj(z(d)) for the
    conjugate multiplier, so each pair contributes (r, r) resp. (r, -r)
    with r = Re z + Im z resp. Re z - Im z; only half the residues need
    a complex exponential.  (In particular every full sum lies on the
    line through 1+i resp. 1-i.)
    """
    L = 24 * c
    twopi_L = 2 * gmpy2.const_pi() / L
    rho_coef = -(24 // h) * (c // n) * c
    a_num = ALPHA_BAR_NUM if conjugate else ALPHA_NUM
    ma = 24 * m - a_num

    if c == 1:
        # single coset: (0, -1; 1, 0)
        base = 9 if conjugate else -9
        w = _cis(twopi_L * (base % L))
        return [w] * len(ls)
    if c == 2:
        # single self-paired residue d = 1; its phase already lies on the
        # fixed line re = +-im
        a = 1
        b = 3 * (a + 1) - 6 * dedekind_sum_6c(1, 2) - 18 + rho_coef
        t0 = (-b if conjugate else b) + ma * a - a_num
        out = []
        x = _cis(twopi_L * (t0 % L))
        u = _cis(twopi_L * (24 % L))
        prev_l = 0
        for l in ls:
            x = x * u ** (l - prev_l)
            prev_l = l
            r = x.real
            out.append(mpc(r, -r) if conjugate else mpc(r, r))
        return out

    # Sum x(d) over the coprime residues d < c/2 only; the reflected
    # residues contribute fac * conj(sum) at the end (linearity).
    nl = len(ls)
    gcd = math.gcd
    cis = _cis
    s6c = dedekind_sum_6c
    sums = [mpc(0)] * nl
    # incremental e(d/c): step phases for the gaps between coprime residues
    step = {}
    u = None
    prev_d = 0
    for d in range(1, c // 2 + 1):
        if gcd(d, c) != 1:
            continue
        a = pow(d, -1, c)
        b = 3 * (a + d) - 6 * s6c(d, c) - 9 * c + rho_coef * d
        if conjugate:
            t0 = -b + ma * a - a_num * d
        else:
            t0 = b + ma * a - a_num * d
        x = cis(twopi_L * (t0 % L))
        g = d - prev_d
        if u is None:
            u = cis(twopi_L * ((24 * d) % L))
        else:
            ug = step.get(g)
            if ug is None:
                ug = step[g] = cis(twopi_L * ((24 * g) % L))
            u = u * ug
        prev_d = d
        prev_l = 0
        for i in range(nl):
            dl = ls[i] - prev_l
            prev_l = ls[i]
            x = x * u if dl == 1 else x * u ** dl
            sums[i] += x
    out = []
    for s in sums:
        if conjugate:
            r = s.real - s.imag  # X - i conj(X) = r(1 - i)
            out.append(mpc(r, -r))
        else:
            r = s.real + s.imag  # X + i conj(X) = r(1 + i)
            out.append(mpc(r, r))
    return out


def kloosterman(ctx: GroupCtx, m: int, l: int, c: int,
                conjugate: bool = False, prec: int = DEFAULT_PREC) -> mpc:
    """The generalized Kloosterman sum S(m, l, c, psi) (or conjugate psi)."""
    if c <= 0 or c % ctx.n:
        raise ValueError(f"c={c} must be a positive multiple of n={ctx.n}")
    with _ctx(prec):
        return _row_sums(ctx.n, ctx.h, c, m, [l], conjugate)[0]


def kloosterman_reference(ctx: GroupCtx, m: int, l: int, c: int,
                          conjugate: bool = False, a_shift: int = 0,
                          prec: int = DEFAULT_PREC) -> mpc:
    """Reference evaluation straight from the double-coset definition.

    Builds each representative matrix, evaluates the multiplier through
    the eta/twist route, and sums exact unit phases.  `a_shift` moves the
    upper-left lift from [0, c) to [a_shift*c, (a_shift+1)*c); the result
    must not depend on it.
    """
    with _ctx(prec):
        total = mpc(0)
        for ph in kloosterman_phases(ctx, m, l, c, conjugate, a_shift):
            total += ph.to_mpc(prec)
        return total


def kloosterman_phases(ctx: GroupCtx, m: int, l: int, c: int,
                       conjugate: bool = False, a_shift: int = 0) -> list[PhaseExp]:
    """The exact unit phases of the Kloosterman summands (definition route)."""
    alpha = Fraction(21 if conjugate else 3, 24)
    ma, la = m - alpha, l - alpha
    out = []
    for g in double_coset_reps(ctx, c):
        for _ in range(a_shift):
            g = T * g
        psi = psi_multiplier(ctx, g, conjugate)
        expo = psi.r + ma * Fraction(g.a, c) + la * Fraction(g.d, c)
        out.append(PhaseExp(expo))
    return out


# ----------------------------------------------------------------------
# weighted c-sums with a fixed block partition

def _partition(c_lo: int, c_hi: int):
    """Split [c_lo, c_hi) at absolute multiples of BLOCK (thread-count free)."""
    out = []
    lo = c_lo
    while lo < c_hi:
        hi = min(c_hi, (lo // BLOCK + 1) * BLOCK)
        out.append((lo, hi))
        lo = hi
    return out


def _block_worker(args) -> list[bytes]:
    (n, h, c_lo, c_hi, kind, ks, mzeta, lzeta, prec) = args
    with _ctx(prec):
        pi = gmpy2.const_pi()
        if kind == "holo":
            ls = list(ks)
            m = 0
            conjugate = False
            roots = [gmpy2.sqrt(mpfr(8 * k - 1)) for k in ks]
        elif kind == "shadow":
            ls = [k + 1 for k in ks]
            m = 1
            conjugate = True
            roots = [gmpy2.sqrt(mpfr(8 * k + 1)) for k in ks]
        elif kind == "zeta":
            ls = [lzeta]
            m = mzeta
            conjugate = False
            roots = None
        else:  # pragma: no cover
            raise ValueError(kind)
        acc = [mpc(0)] * len(ls)
        c = ((c_lo + n - 1) // n) * n
        while c < c_hi:
            rows = _row_sums(n, h, c, m, ls, conjugate)
            if kind == "holo":
                for i, k in enumerate(ks):
                    x = pi * roots[i] / (2 * c)
                    w = gmpy2.sqrt(2 / (pi * x)) * gmpy2.sinh(x) / c
                    acc[i] += w * rows[i]
            elif kind == "shadow":
                for i, k in enumerate(ks):
                    x = pi * roots[i] / (2 * c)
                    w = gmpy2.sqrt(2 / (pi * x)) * gmpy2.sin(x) / c
                    acc[i] += w * rows[i]
            else:
                acc[0] += rows[0] / (mpfr(c) ** mpfr(1.5))
            c += n
        return [gmpy2.to_binary(a) for a in acc]


def _weighted_sums(ctx: GroupCtx, kind: str, ks, c_lo: int, c_hi: int,
                   prec: int, threads: int = 1, mzeta: int = 0, lzeta: int = 0) -> list[mpc]:
    """Sum of the weighted Kloosterman data over c in [c_lo, c_hi).

    Blocks are reduced in ascending order whatever the worker count, so
    results are bit-identical for any `threads`.
    """
    blocks = _partition(c_lo, c_hi)
    args = [(ctx.n, ctx.h, lo, hi, kind, tuple(ks), mzeta, lzeta, prec)
            for lo, hi in blocks]
    if threads > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=threads,
                                 mp_context=get_context("fork")) as pool:
            parts = list(pool.map(_block_worker, args))
    else:
        parts = [_block_worker(a) for a in args]
    with _ctx(prec):
        acc = [mpc(0)] * len(ks)
        for part in parts:
            for i, blob in enumerate(part):
                acc[i] += gmpy2.from_binary(blob)
        return acc


def _prefactor(kind: str, k: int) -> mpc:
    pi = gmpy2.const_pi()
    if kind == "holo":
        return 2 * pi * _e_frac(-1, 8) / gmpy2.sqrt(gmpy2.sqrt(mpfr(8 * k - 1)))
    return _e_frac(-3, 8) * 2 * pi * gmpy2.sqrt(gmpy2.sqrt(mpfr(8 * k + 1)))


@dataclass
class CoeffEstimate:
    """A truncated Rademacher coefficient: value of the c-sum through c_max.

    last_block records the magnitude of the contribution from the final
    dyadic range (c_max/2, c_max], a crude convergence indicator.
    """

    value: mpc
    c_max: int
    last_block: mpfr
    k: int
    kind: str


def _coeff_batch(ctx: GroupCtx, kind: str, ks, c_max: int,
                 prec: int = DEFAULT_PREC, threads: int = 1) -> list[CoeffEstimate]:
    if c_max < ctx.n:
        raise ValueError(f"c_max={c_max} is below the level n={ctx.n}")
    half = c_max // 2
    head = _weighted_sums(ctx, kind, ks, 1, half + 1, prec, threads)
    tail = _weighted_sums(ctx, kind, ks, half + 1, c_max + 1, prec, threads)
    out = []
    with _ctx(prec):
        for i, k in enumerate(ks):
            pref = _prefactor(kind, k)
            value = pref * (head[i] + tail[i])
            if kind == "shadow" and k == 0:
                value += 1  # the identity-coset term q^(1/8) of the shadow sum
            out.append(CoeffEstimate(value=value, c_max=c_max,
                                     last_block=abs(pref * tail[i]),
                                     k=k, kind="holomorphic" if kind == "holo" else "shadow"))
    return out


def rademacher_coeff(ctx: GroupCtx, k: int, c_max: int,
                     prec: int = DEFAULT_PREC, threads: int = 1) -> CoeffEstimate:
    """Partial sum of the weight-1/2 Rademacher coefficient at q^(k - 1/8).

    c(k - 1/8) = 2 pi e(-1/8) (8k-1)^(-1/4) sum_{n|c<=c_max} I_(1/2)(pi
    sqrt(8k-1)/(2c)) S(0, k, c, psi)/c.  The full coefficient of the
    McKay-Thompson series is -2 times the limit.
    """
    if k < 1:
        raise ValueError("the holomorphic side starts at k = 1")
    return _coeff_batch(ctx, "holo", [k], c_max, prec, threads)[0]


def shadow_coeff(ctx: GroupCtx, k: int, c_max: int,
                 prec: int = DEFAULT_PREC, threads: int = 1) -> CoeffEstimate:
    """Partial Fourier coefficient of the weight-3/2 shadow sum at q^(k + 1/8).

    Includes the identity-coset contribution (+1 at k = 0), so for the
    twisted levels (h > 1) every value tends to zero, and for h = 1 the
    k = 0..3 vector tends to a multiple of the eta-cube coefficients
    (1, -3, 0, 5).
    """
    if k < 0:
        raise ValueError("the shadow side starts at k = 0")
    return _coeff_batch(ctx, "shadow", [k], c_max, prec, threads)[0]


def zeta_partial(ctx: GroupCtx, m: int, l: int, c_max: int,
                 prec: int = DEFAULT_PREC, threads: int = 1):
    """Dyadic partial sums of sum_c S(m, l, c, psi)/c^(3/2) (value at s=3/4).

    Returns [(C, partial sum through c <= C)] for C = n, 2n, 4n, ...,
    capped by c_max.
    """
    if c_max < ctx.n:
        raise ValueError("c_max below the level")
    out = []
    with _ctx(prec):
        running = mpc(0)
        lo = 1
        C = ctx.n
        while C <= c_max:
            running += _weighted_sums(ctx, "zeta", [0], lo, C + 1, prec, threads,
                                      mzeta=m, lzeta=l)[0]
            out.append((C, running))
            lo = C + 1
            C *= 2
    return out


# ----------------------------------------------------------------------
# the direct regularized sum (diagnostic route)

def _direct_summand(ctx: GroupCtx, g: Mat2, tau, prec: int = DEFAULT_PREC) -> mpc:
    """One non-trivial term psi(g) e(-g.tau/8) reg(g, tau) jac(g, tau)^(1/4)."""
    with _ctx(prec):
        tau = mpc(tau)
        cd = g.c * tau + g.d
        gtau = (g.a * tau + g.b) / cd
        x = 1 / (8 * g.c * cd)  # g(infinity) - g(tau), divided by 8
        reg = _cexp2pi(-x) * gen_exp(x, Fraction(1, 2), prec)
        psi = psi_multiplier(ctx, g).to_mpc(prec)
        return psi * _cexp2pi(-gtau / 8) * reg * cd ** mpfr(-0.5)


def rademacher_direct(ctx: GroupCtx, tau, K: int, prec: int = DEFAULT_PREC) -> mpc:
    """The regularized coset sum truncated to the rectangle 0 <= c < K,
    -K^2 < d < K^2 (identity coset included).

    Diagnostic only: rectangle convergence is O(K^(-1/2)); the
    coefficient formulas are the quantitative route.
    """
    if K < 1:
        raise ValueError("K must be positive")
    gcd = math.gcd
    with _ctx(prec):
        tau = mpc(tau)
        total = _cexp2pi(-tau / 8)
        for c in range(ctx.n, K, ctx.n):
            for d in range(-K * K + 1, K * K):
                if gcd(d, c) != 1:
                    continue
                a = pow(d % c, -1, c) if c > 1 else 0
                b = (a * d - 1) // c
                total += _direct_summand(ctx, Mat2(a, b, c, d), tau, prec)
        return total


# ----------------------------------------------------------------------
# theorem verification

def _report_entry(name: str, k: int, c_max: int, value: mpc, target: int, tol: float):
    re = value.real
    im = value.imag
    ok = bool(abs(re - target) < tol and abs(im) < tol
              and int(gmpy2.rint(re)) == target)
    return {
        "class": name,
        "k": k,
        "c_max": c_max,
        "value_re": format(re),
        "value_im": format(im),
        "target": target,
        "pass": ok,
    }


def exact_coefficients(record: ClassRecord, k_max: int) -> list[int]:
    """Integer coefficients of the McKay-Thompson series at q^(k-1/8), k=1..k_max."""
    from . import forms

    hg = forms.hg_series(record, Fraction(k_max + 1))
    out = []
    for k in range(1, k_max + 1):
        c = hg.coeff(Fraction(8 * k - 1, 8))
        assert c.denominator == 1
        out.append(int(c))
    return out


def verify_theorem(cls, k_max: int, c_max: int, tol: float = 0.4,
                   prec: int = DEFAULT_PREC, threads: int = 1) -> dict:
    """Compare -2 * rademacher_coeff against the exact series at fixed c_max."""
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    ctx = GroupCtx(record.n, record.h)
    targets = exact_coefficients(record, k_max)
    ks = list(range(1, k_max + 1))
    ests = _coeff_batch(ctx, "holo", ks, c_max, prec, threads)
    with _ctx(prec):
        entries = [
            _report_entry(record.name, k, c_max, -2 * est.value, targets[k - 1], tol)
            for k, est in zip(ks, ests)
        ]
    return {
        "class": record.name,
        "n": record.n,
        "h": record.h,
        "c_max": c_max,
        "tolerance": tol,
        "entries": entries,
        "pass": all(e["pass"] for e in entries),
    }


def verify_theorem_adaptive(cls, k_max: int, tol: float = 0.4,
                            c_cap: int = 100000, c_start: int = 1024,
                            prec: int = DEFAULT_PREC, threads: int = 1) -> dict:
    """Adaptive-truncation theorem check.

    Doubles c_max until, for every k, the rounded value of -2 c(k - 1/8)
    is identical on two consecutive dyadic levels with |Im| and the
    rounding residual below `tol`, then compares the settled integers
    against the exact series.  Gives up at c_cap (reporting failure).
    """
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    ctx = GroupCtx(record.n, record.h)
    if c_cap < ctx.n:
        raise ValueError("cap below the level")
    targets = exact_coefficients(record, k_max)
    ks = list(range(1, k_max + 1))
    levels = []
    c = min(max(c_start, ctx.n), c_cap)
    while True:
        levels.append(c)
        if c >= c_cap:
            break
        c = min(2 * c, c_cap)

    with _ctx(prec):
        running = [mpc(0)] * len(ks)
        prev_rounded = None
        lo = 1
        stable_at = None
        values = None
        rounded = None
        for level in levels:
            part = _weighted_sums(ctx, "holo", ks, lo, level + 1, prec, threads)
            running = [r + p for r, p in zip(running, part)]
            lo = level + 1
            values = [-2 * _prefactor("holo", k) * r for k, r in zip(ks, running)]
            rounded = [int(gmpy2.rint(v.real)) for v in values]
            settled = prev_rounded == rounded and all(
                abs(v.imag) < tol and abs(v.real - r) < tol
                for v, r in zip(values, rounded)
            )
            prev_rounded = rounded
            if settled:
                stable_at = level
                break
        entries = [
            _report_entry(record.name, k, stable_at or levels[-1], v,
                          targets[k - 1], tol)
            for k, v in zip(ks, values)
        ]
    for e, r in zip(entries, rounded):
        e["rounded"] = r
        e["stable"] = stable_at is not None
        e["pass"] = bool(e["pass"] and stable_at is not None)
    return {
        "class": record.name,
        "n": record.n,
        "h": record.h,
        "c_max": stable_at or levels[-1],
        "c_cap": c_cap,
        "tolerance": tol,
        "stable": stable_at is not None,
        "entries": entries,
        "pass": all(e["pass"] for e in entries),
    }
