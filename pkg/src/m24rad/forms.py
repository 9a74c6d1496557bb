"""Every modular object built on the exact q-series engine.

Exact series (denominator-24 Puiseux grid): the eta function and its
products/quotients, the quasi-modular E2, the weight-two forms Lambda_m,
the two level-23 newforms, the mock form H, and the 26 McKay-Thompson
series H_g.  H is extracted by specializing the elliptic-genus
decomposition at the half period z = 1/2 (y = -1), where the fourth
theta power combinations and the Appell-Lerch sum all collapse to pure
one-variable q-products, so every step is a finite exact computation.

Numeric (double precision) evaluators for the Jacobi theta functions,
the Appell-Lerch sum and the weak Jacobi form are provided for the
cross-consistency diagnostics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .m24 import ClassRecord, class_data
from .phase import sigma_divisors
from .pseries import DEFAULT_DENOM, PSeries

Q = Fraction


# ----------------------------------------------------------------------
# exact series

def _times_one_plus(s: PSeries, coeff: Fraction, enum: int) -> PSeries:
    """s * (1 + coeff*q^(enum/denom)); the factor is exact so the order keeps."""
    lim = s.order * s.denom
    out = dict(s.terms)
    for e, c in s.terms.items():
        e2 = e + enum
        if e2 < lim:
            out[e2] = out.get(e2, Q(0)) + c * coeff
    return PSeries(s.denom, out, s.order)


def eta_series(scale: int = 1, order=Fraction(10)) -> PSeries:
    """eta(scale*tau) = q^(scale/24) * prod(1 - q^(scale*n)), exactly.

    Expanded by the pentagonal-number series; the literal product is
    kept as the oracle in the tests.
    """
    if scale < 1:
        raise ValueError("argument scaling must be a positive integer")
    order = Q(order)
    denom = DEFAULT_DENOM
    lim = order * denom
    terms: dict[int, Fraction] = {}
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            # exponent 1/24 + kk(3kk-1)/2, scaled, over the 1/24 grid
            e = scale * (1 + 12 * kk * (3 * kk - 1))
            if e < lim:
                terms[e] = Q(-1 if kk % 2 else 1)
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return PSeries(denom, terms, order)


def eta_quotient(quotient, order) -> PSeries:
    """prod over (scale, exponent) of eta(scale*tau)^exponent, exactly.

    Negative exponents are allowed; the working order is padded so the
    result is exact strictly below `order` despite inversion losses.
    """
    order = Q(order)
    items = sorted(dict(quotient).items())
    # inversion of eta(s*tau)^e costs 2*|e|*s/24 of order headroom
    pad = sum(Q(2 * abs(e) * s, 24) for s, e in items if e < 0) + 1
    out = PSeries.one(order + pad)
    for s, e in items:
        base = eta_series(s, order + pad)
        out = out * (base ** e if e >= 0 else base.invert() ** (-e))
    if out.order < order:
        raise AssertionError("order bookkeeping lost too much precision")
    return out.truncate(order)


def eta_product_series(cls, order) -> PSeries:
    """The eta product attached to a class's cycle shape."""
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    return eta_quotient({i: l for i, l in record.shape}, order)


def inverse_eta_series(cls, order) -> PSeries:
    """1/eta_g, the 24-boson twisted partition function, exactly."""
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    return eta_quotient({i: -l for i, l in record.shape}, order)


def e2_series(scale: int = 1, order=Fraction(10)) -> PSeries:
    """Weight-two quasi-modular Eisenstein series 1 - 24*sum sigma(k) q^(scale k)."""
    if scale < 1:
        raise ValueError("argument scaling must be a positive integer")
    order = Q(order)
    denom = DEFAULT_DENOM
    lim = order * denom
    terms = {0: Q(1)} if lim > 0 else {}
    k = 1
    while scale * k * denom < lim:
        terms[scale * k * denom] = Q(-24 * sigma_divisors(k))
        k += 1
    return PSeries(denom, terms, order)


def lambda_series(m: int, order=Fraction(10)) -> PSeries:
    """The weight-two form on the level-m group with constant term m(m-1)/24.

    Built as m(m-1)/24 + sum_k m sigma(k)(q^k - m q^(mk)), which equals
    m q d/dq log(eta(m tau)/eta(tau)) = (m/24)(m E2(m tau) - E2(tau))
    term by term (asserted in the tests); only this sign of the summand
    is a weight-two form.
    """
    if m < 2:
        raise ValueError("the weight-two family starts at m = 2")
    order = Q(order)
    denom = DEFAULT_DENOM
    lim = order * denom
    terms: dict[int, Fraction] = {}
    if lim > 0:
        terms[0] = Q(m * (m - 1), 24)
    k = 1
    while k * denom < lim:
        s = m * sigma_divisors(k)
        e_low = k * denom
        terms[e_low] = terms.get(e_low, Q(0)) + s
        e_high = m * k * denom
        if e_high < lim:
            terms[e_high] = terms.get(e_high, Q(0)) - m * s
        k += 1
    return PSeries(denom, {e: c for e, c in terms.items() if c}, order)


def phi23_series(which: int, order) -> PSeries:
    """The chosen basis of level-23 weight-two newforms."""
    if which == 1:
        return eta_quotient({1: 2, 23: 2}, order)
    if which == 2:
        a = eta_quotient({1: 3, 23: 3, 2: -1, 46: -1}, order)
        b = eta_quotient({1: 1, 2: 1, 23: 1, 46: 1}, order)
        c = eta_quotient({2: 2, 46: 2}, order)
        return a + 4 * b + 4 * c
    raise ValueError("which must be 1 or 2")


# -- half-period building blocks -----------------------------------------

def _prod_family(order, factors) -> PSeries:
    """prod over n >= 1 of the given (coeff, exponent-numerator) factor family.

    `factors(n)` yields (coeff, enum) pairs for the n-th factor bundle;
    iteration stops once every factor in the bundle is beyond the order.
    """
    out = PSeries.one(order)
    lim = Q(order) * DEFAULT_DENOM
    n = 1
    while True:
        live = False
        for coeff, enum in factors(n):
            if enum < lim:
                live = True
                out = _times_one_plus(out, coeff, enum)
        if not live:
            break
        n += 1
    return out


def _theta1_half(order) -> PSeries:
    """theta_1(tau, 1/2) = 2 q^(1/8) prod (1-q^n)(1+q^n)^2, exactly."""
    def factors(n):
        e = 24 * n
        yield (Q(-1), e)
        yield (Q(1), e)
        yield (Q(1), e)

    body = _prod_family(Q(order) - Q(1, 8), factors)
    lead = PSeries.monomial(2, Q(1, 8), Q(order))
    return lead * body


def _z_half(order) -> PSeries:
    """Z(tau, 1/2) = 8[(A/B)^2 + (B/A)^2] with A, B the half-integer products.

    A = prod (1-q^n)(1-q^(n-1/2))^2 and B = prod (1-q^n)(1+q^(n-1/2))^2
    are the z = 1/2 and z = 0 values of the third/fourth theta
    functions; the two remaining theta quotients of the weak Jacobi
    form cancel pairwise at the half period.
    """
    order = Q(order)
    pad = order + 2

    def fa(n):
        yield (Q(-1), 24 * n)
        half = 12 * (2 * n - 1)
        yield (Q(-1), half)
        yield (Q(-1), half)

    def fb(n):
        yield (Q(-1), 24 * n)
        half = 12 * (2 * n - 1)
        yield (Q(1), half)
        yield (Q(1), half)

    a = _prod_family(pad, fa)
    b = _prod_family(pad, fb)
    r = a * b.invert()
    out = 8 * (r * r + r.invert() ** 2)
    if out.order < order:
        raise AssertionError("order bookkeeping lost too much precision")
    return out.truncate(order)


def _mu_half(order) -> PSeries:
    """Appell-Lerch sum at z = 1/2: (1/theta_1(tau,1/2)) (1/2 + 2 sum_l q^(l(l+1)/2)/(1+q^l)).

    The l-th and (-1-l)-th bilateral terms coincide at the half period,
    and each 1/(1+q^l) expands geometrically, so the whole sum is an
    exact series.
    """
    order = Q(order)
    pad = order + 1
    denom = DEFAULT_DENOM
    lim = pad * denom
    terms = {0: Q(1, 2)}
    l = 1
    while denom * l * (l + 1) // 2 < lim:
        base = denom * l * (l + 1) // 2
        j = 0
        while base + denom * l * j < lim:
            e = base + denom * l * j
            terms[e] = terms.get(e, Q(0)) + Q(2 * (-1) ** j)
            j += 1
        l += 1
    body = PSeries(denom, terms, pad)
    out = body * _theta1_half(pad + Q(3, 8)).invert()
    if out.order < order:
        raise AssertionError("order bookkeeping lost too much precision")
    return out.truncate(order)


@lru_cache(maxsize=8)
def h_series(order) -> PSeries:
    """The mock form H(tau) = q^(-1/8)(-2 + 90 q + 462 q^2 + ...), exactly.

    Extracted from the weak Jacobi form at the half period:
    H = Z(tau,1/2) eta^3 / theta_1(tau,1/2)^2 - 24 mu(tau,1/2).
    """
    order = Q(order)
    pad = order + 2
    eta3 = eta_series(1, pad) ** 3
    th = _theta1_half(pad + Q(1, 2))
    out = _z_half(pad) * eta3 * (th * th).invert() - 24 * _mu_half(pad)
    if out.order < order:
        raise AssertionError("order bookkeeping lost too much precision")
    return out.truncate(order)


def ttilde_series(cls, order, alt: bool = False) -> PSeries:
    """The weight-two completion form attached to a class, exactly."""
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    terms = record.ttilde_alt if alt else record.ttilde
    if terms is None:
        raise ValueError(f"{record.name} has no alternative construction")
    order = Q(order)
    out = PSeries.zero(order)
    for t in terms:
        if t.kind == "lambda":
            comp = lambda_series(t.m, order)
        elif t.kind == "eta":
            comp = eta_quotient(dict(t.quotient), order)
        elif t.kind == "cusp23":
            comp = phi23_series(t.which, order)
        else:  # pragma: no cover - loader rejects unknown kinds
            raise ValueError(t.kind)
        out = out + t.coeff * comp
    return out


def hg_series(cls, order) -> PSeries:
    """The McKay-Thompson series H_g = (chi/24) H - T_g/eta^3, exactly."""
    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    order = Q(order)
    pad = order + 1
    out = PSeries.zero(pad + Q(1, 4))
    if record.chi:
        out = out + Q(record.chi, 24) * h_series(pad)
    if record.ttilde:
        inv_eta3 = (eta_series(1, pad + Q(1, 2)) ** 3).invert()
        out = out - ttilde_series(record, pad + Q(1, 8)) * inv_eta3
    if out.order < order:
        raise AssertionError("order bookkeeping lost too much precision")
    return out.truncate(order)


# ----------------------------------------------------------------------
# numeric evaluators (double precision)

@dataclass(frozen=True)
class JacobiPoint:
    """A point (tau, z) with tau in the upper half-plane."""

    tau: complex
    z: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")


def _nterms_for(tau: complex, eps: float = 1e-15) -> int:
    absq = math.exp(-2 * math.pi * complex(tau).imag)
    if absq >= 1:  # pragma: no cover - excluded by JacobiPoint
        raise ValueError("tau must lie in the upper half-plane")
    n = int(math.log(eps * (1 - absq)) / math.log(absq)) + 2
    return max(8, n)


def eta_numeric(tau: complex, nterms: int | None = None) -> complex:
    """eta(tau) by the truncated defining product.

    The tail factor of the product after N terms differs from 1 by at
    most |q|^(N+1)/(1-|q|), which fixes the default N.
    """
    tau = complex(tau)
    n = nterms or _nterms_for(tau)
    q = cmath.exp(2j * math.pi * tau)
    out = cmath.exp(2j * math.pi * tau / 24)
    qk = q
    for _ in range(n):
        out *= 1 - qk
        qk *= q
    return out


def theta_numeric(i: int, p: JacobiPoint, nterms: int) -> complex:
    """theta_i(tau, z) by its truncated triple product, i in 1..4.

    Truncating after `nterms` factors leaves a multiplicative tail
    bounded by prod_{n>N}(1+O(|q|^(n-1/2))), i.e. 1 + O(|q|^N)
    geometrically.
    """
    tau, z = complex(p.tau), complex(p.z)
    q = cmath.exp(2j * math.pi * tau)
    y = cmath.exp(2j * math.pi * z)
    q8 = cmath.exp(2j * math.pi * tau / 8)
    y2 = cmath.exp(1j * math.pi * z)
    if i == 1:
        out = -1j * q8 * y2
    elif i == 2:
        out = q8 * y2
    elif i in (3, 4):
        out = 1 + 0j
    else:
        raise ValueError("theta index must be 1..4")
    sq = cmath.sqrt(q)
    for n in range(1, nterms + 1):
        qn = q ** n
        if i == 1:
            out *= (1 - qn) * (1 - y * qn) * (1 - qn / (y * q))
        elif i == 2:
            out *= (1 - qn) * (1 + y * qn) * (1 + qn / (y * q))
        elif i == 3:
            out *= (1 - qn) * (1 + y * qn / sq) * (1 + qn / (y * sq))
        else:
            out *= (1 - qn) * (1 - y * qn / sq) * (1 - qn / (y * sq))
    return out


def mu_numeric(p: JacobiPoint, lmax: int, pole_tol: float = 1e-9) -> complex:
    """The Appell-Lerch sum, bilateral in |l| <= lmax.

    Terms decay like |q|^(l^2/2); the y-power in the numerator is y^l.
    Raises if any denominator 1 - y q^l comes within `pole_tol` of zero
    (z on the lattice of poles).
    """
    tau, z = complex(p.tau), complex(p.z)
    q = cmath.exp(2j * math.pi * tau)
    y = cmath.exp(2j * math.pi * z)
    total = 0j
    for l in range(-lmax, lmax + 1):
        den = 1 - y * q ** l
        if abs(den) < pole_tol:
            raise ZeroDivisionError(f"z within {pole_tol} of an Appell-Lerch pole (l={l})")
        total += (-1) ** l * y ** l * q ** (l * (l + 1) // 2) / den
    th1 = theta_numeric(1, p, _nterms_for(tau))
    return -1j * cmath.exp(1j * math.pi * z) / th1 * total


def z_jacobi_numeric(p: JacobiPoint, nterms: int | None = None) -> complex:
    """The weight-zero index-one weak Jacobi form 8 sum (theta_i(z)/theta_i(0))^2."""
    n = nterms or _nterms_for(p.tau)
    zero = JacobiPoint(p.tau, 0j)
    total = 0j
    for i in (2, 3, 4):
        total += (theta_numeric(i, p, n) / theta_numeric(i, zero, n)) ** 2
    return 8 * total
