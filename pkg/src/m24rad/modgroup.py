"""SL2(Z) and Gamma0(n) machinery: membership, multiplier systems, cosets, cusps.

Branch convention used throughout for half-integral weights: the
automorphy factor jac(g, tau)^(w/2) is evaluated as (c*tau+d)^(-w) with
the principal logarithm.  The eta multiplier below is normalized so the
transformation identity eps(g) * eta(g tau) * (c tau + d)^(-1/2) =
eta(tau) holds pointwise for every g under that convention; as a
consequence the negation reduction differs between c < 0 (factor
e(-1/4)) and c = 0, d = -1 (factor e(1/4), since arg(-1) = +pi on the
principal branch).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .phase import PhaseExp, dedekind_sum, kronecker_symbol


@dataclass(frozen=True)
class Mat2:
    """Unimodular 2x2 integer matrix (a, b; c, d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"matrix {self} has determinant != 1")

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def apply(self, tau):
        """Moebius action (a*tau + b)/(c*tau + d)."""
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Mat2(1, 0, 0, 1)
T = Mat2(1, 1, 0, 1)
S = Mat2(0, -1, 1, 0)


@dataclass(frozen=True)
class GroupCtx:
    """The congruence group of level n together with the twist parameter h.

    h must divide both n and 24; the twist character below is
    e(-c*d/(n*h)) on lower rows (c, d).
    """

    n: int
    h: int = 1

    def __post_init__(self):
        if self.n < 1 or self.h < 1:
            raise ValueError("level parameters must be positive")
        if self.n % self.h or 24 % self.h:
            raise ValueError(f"h={self.h} must divide gcd(n={self.n}, 24)")


@dataclass(frozen=True)
class CuspInfo:
    """A cusp of Gamma0(n): representative, width, and twist exponent m.

    representative is None for the infinite cusp, else the rational 1/q
    (reduced; q = 1 gives the zero cusp since 1 and 0 are translates).
    The twist character takes the value e(m/h) on the conjugated width
    translation at this cusp.
    """

    representative: Fraction | None
    width: int
    m: int


def in_gamma0(ctx: GroupCtx, g: Mat2) -> bool:
    return g.c % ctx.n == 0


def _require_member(ctx_n: int, g: Mat2) -> None:
    if g.c % ctx_n:
        raise ValueError(f"{g} is not in the level-{ctx_n} congruence group")


def eta_multiplier(g: Mat2) -> PhaseExp:
    """The multiplier eps(g) of the Dedekind eta function.

    For c > 0 this is e(-(a+d)/(24c) + s(d,c)/2 + 1/8) with s the
    Dedekind sum; c = 0, d = 1 gives e(-b/24).  The remaining elements
    reduce through -g, with the phase fixed by the principal-branch
    convention documented in the module docstring (and pinned by the
    numeric eta-transformation tests).
    """
    if g.c < 0:
        return eta_multiplier(-g) * PhaseExp.of(-1, 4)
    if g.c == 0:
        if g.d == 1:
            return PhaseExp.of(-g.b, 24)
        return eta_multiplier(-g) * PhaseExp.of(1, 4)
    # -(a+d)/(24c) + s(d,c)/2 + 1/8, assembled over one common denominator
    s = dedekind_sum(g.d, g.c)
    num = (3 * g.c - g.a - g.d) * s.denominator + 12 * g.c * s.numerator
    return PhaseExp(Fraction(num, 24 * g.c * s.denominator))


def rho_multiplier(ctx: GroupCtx, g: Mat2) -> PhaseExp:
    """The twist character e(-c*d/(n*h)) on the level-n group."""
    _require_member(ctx.n, g)
    return PhaseExp.of(-g.c * g.d, ctx.n * ctx.h)


def varsigma(N: int, g: Mat2) -> PhaseExp:
    """Quadratic character attached to a level-N eta product of odd weight.

    Computed as the Kronecker symbol (-N/d), which for positive odd d is
    the textbook two-branch value (N/d)(-1)^((d-1)/2); the Kronecker
    reading of the even/negative-d cases is the one validated exactly by
    the eta-product transformation tests (the bare (N/d) at even d is
    not).  It is a genuine character of the level-N group whenever -N is
    congruent to 0 or 1 mod 4, which covers every odd-weight class.
    """
    _require_member(N, g)
    sym = kronecker_symbol(-N, g.d)
    if sym == 1:
        return PhaseExp.of(0)
    if sym == -1:
        return PhaseExp.of(1, 2)
    raise ArithmeticError(f"character vanished on group element {g}")


def psi_multiplier(ctx: GroupCtx, g: Mat2, conjugate: bool = False) -> PhaseExp:
    """The weight-1/2 multiplier: twist character times eps^(-3)."""
    r = rho_multiplier(ctx, g).r - 3 * eta_multiplier(g).r
    return PhaseExp(-r if conjugate else r)


def coset_rep(c: int, d: int) -> Mat2:
    """The translation-coset representative with lower row (c, d), c > 0.

    The top-left entry is the lift of d^(-1) mod c chosen in [0, c);
    any other lift differs by a translation on the left.
    """
    if c <= 0:
        raise ValueError("lower-left entry must be positive")
    dm = d % c
    a = pow(dm, -1, c) if c > 1 else 0
    b = (a * d - 1) // c
    return Mat2(a, b, c, d)


def double_coset_reps(ctx: GroupCtx, c: int) -> list[Mat2]:
    """One representative per translation double coset with lower-left c.

    Representatives are (a, b; c, d') with d' running over the residues
    in [0, c) coprime to c; at c = 1 the single representative is
    (0, -1; 1, 0).
    """
    if c <= 0 or c % ctx.n:
        raise ValueError(f"c={c} must be a positive multiple of n={ctx.n}")
    if c == 1:
        return [S]
    from math import gcd

    return [coset_rep(c, d) for d in range(c) if gcd(d, c) == 1]


def cusp_data(ctx: GroupCtx) -> list[CuspInfo]:
    """All cusps of the level-n group: the infinite cusp plus one 1/q per
    divisor q < n of n.

    The width of 1/q is the least v with n | q^2 v, i.e. n/gcd(q^2, n),
    and the twist exponent is m = (q^2 v / n)(1 + q v) mod h.
    """
    n, h = ctx.n, ctx.h
    from math import gcd

    out = [CuspInfo(representative=None, width=1, m=0)]
    for q in range(1, n):
        if n % q:
            continue
        v = n // gcd(q * q, n)
        m = (q * q * v // n) * (1 + q * v) % h
        rep = Fraction(0) if q == 1 else Fraction(1, q)
        out.append(CuspInfo(representative=rep, width=v, m=m))
    return out


def fricke(n: int, prec: int = 128):
    """The level-n involution (0, -1/sqrt(n); sqrt(n), 0) at `prec` bits."""
    if n < 1:
        raise ValueError("level must be positive")
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        r = gmpy2.sqrt(gmpy2.mpfr(n))
        zero = gmpy2.mpfr(0)
        return ((zero, -1 / r), (r, zero))
