"""Exact Puiseux q-series with a fixed exponent denominator.

A :class:`PSeries` stores finitely many exact rational coefficients
against exponents e/denom (e an integer, denom fixed per series, 24 by
default) together with a truncation order: exponents >= order are
unknown, not zero.  Arithmetic tracks how far results remain exact, so
a product of two truncated series is itself correctly truncated.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import ceil, gcd
from typing import Iterable, Mapping

Q = Fraction

DEFAULT_DENOM = 24


def _as_order(order) -> Fraction:
    order = Fraction(order)
    return order


class PSeries:
    """Finite exact q-expansion: sum of coeff * q^(e/denom) plus O(q^order)."""

    __slots__ = ("denom", "terms", "order")

    def __init__(self, denom: int, terms: Mapping[int, Fraction], order):
        if denom < 1:
            raise ValueError(f"denominator must be positive, got {denom}")
        order = _as_order(order)
        clean = {}
        order_num = order * denom
        for e, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if e >= order_num:
                raise ValueError(
                    f"exponent {Fraction(e, denom)} at or beyond order {order}"
                )
            clean[int(e)] = coeff
        self.denom = denom
        self.terms = clean
        self.order = order

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def zero(order, denom: int = DEFAULT_DENOM) -> "PSeries":
        return PSeries(denom, {}, order)

    @staticmethod
    def one(order, denom: int = DEFAULT_DENOM) -> "PSeries":
        return PSeries.monomial(1, 0, order, denom)

    @staticmethod
    def monomial(coeff, exponent, order, denom: int = DEFAULT_DENOM) -> "PSeries":
        e = Fraction(exponent) * denom
        if e.denominator != 1:
            raise ValueError(f"exponent {exponent} not on the 1/{denom} grid")
        return PSeries(denom, {int(e): Fraction(coeff)}, order)

    # ------------------------------------------------------------------
    # basic queries

    def coeff(self, exponent) -> Fraction:
        """Coefficient of q^exponent; raises if the exponent is truncated away."""
        exponent = Fraction(exponent)
        if exponent >= self.order:
            raise ValueError(f"exponent {exponent} >= truncation order {self.order}")
        e = exponent * self.denom
        if e.denominator != 1:
            return Fraction(0)
        return self.terms.get(int(e), Fraction(0))

    def valuation(self) -> Fraction:
        """Lowest exponent with a nonzero coefficient (order if none)."""
        if not self.terms:
            return self.order
        return Fraction(min(self.terms), self.denom)

    def items(self):
        """Sorted (exponent: Fraction, coefficient: Fraction) pairs."""
        return [(Fraction(e, self.denom), c) for e, c in sorted(self.terms.items())]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.order == other.order and dict(self.items()) == dict(other.items())

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.terms.items())), self.denom))

    def __repr__(self):
        parts = [f"{c}*q^({e})" for e, c in self.items()[:6]]
        if len(self.terms) > 6:
            parts.append("...")
        body = " + ".join(parts) if parts else "0"
        return f"<PSeries {body} + O(q^{self.order})>"

    # ------------------------------------------------------------------
    # ring operations

    def _align(self, other: "PSeries"):
        if self.denom == other.denom:
            return self, other
        d = self.denom * other.denom // gcd(self.denom, other.denom)
        return self.with_denom(d), other.with_denom(d)

    def with_denom(self, denom: int) -> "PSeries":
        if denom % self.denom:
            raise ValueError(f"cannot refine denominator {self.denom} to {denom}")
        f = denom // self.denom
        return PSeries(denom, {e * f: c for e, c in self.terms.items()}, self.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PSeries.monomial(other, 0, self.order, self.denom)
        a, b = self._align(other)
        order = min(a.order, b.order)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        lim = order * a.denom
        return PSeries(a.denom, {e: c for e, c in out.items() if e < lim}, order)

    __radd__ = __add__

    def __neg__(self):
        return PSeries(self.denom, {e: -c for e, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PSeries.monomial(other, 0, self.order, self.denom)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                return PSeries(self.denom, {}, self.order)
            return PSeries(
                self.denom, {e: c * other for e, c in self.terms.items()}, self.order
            )
        a, b = self._align(other)
        denom = a.denom
        # The product is exact below min(val(a)+order(b), val(b)+order(a)).
        va = min(a.terms) if a.terms else a.order * denom
        vb = min(b.terms) if b.terms else b.order * denom
        order_num = min(Fraction(va) + b.order * denom, Fraction(vb) + a.order * denom)
        out: dict[int, Fraction] = {}
        bi = sorted(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bi:
                e = ea + eb
                if e >= order_num:
                    break
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return PSeries(denom, out, Fraction(order_num, denom))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * other.invert()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("series powers must be integers")
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return PSeries.one(self.order, self.denom)
        result = PSeries.one(self.order, self.denom)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self) -> "PSeries":
        """Multiplicative inverse t with self*t = 1 up to the tracked order.

        If self is exact below order O with valuation v, the inverse is
        exact below O - 2v (an O(q^O) perturbation of self moves 1/self
        at order O - 2v).
        """
        if not self.terms:
            raise ZeroDivisionError("cannot invert a series with no known terms")
        v = min(self.terms)
        c0 = self.terms[v]
        order_num = self.order * self.denom
        span = ceil(order_num) - v  # normalized exponents are known in [0, span)
        u_items = sorted((e - v, c / c0) for e, c in self.terms.items() if e != v)
        inv = {0: Fraction(1)}
        for e in range(1, span):
            acc = Fraction(0)
            for f, cf in u_items:
                if f > e:
                    break
                prev = inv.get(e - f)
                if prev is not None:
                    acc -= cf * prev
            if acc:
                inv[e] = acc
        order = (order_num - 2 * v) / self.denom
        return PSeries(self.denom, {e - v: c / c0 for e, c in inv.items()}, order)

    # ------------------------------------------------------------------
    # reshaping

    def truncate(self, order) -> "PSeries":
        order = _as_order(order)
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        lim = order * self.denom
        return PSeries(
            self.denom, {e: c for e, c in self.terms.items() if e < lim}, order
        )

    def stretched(self, s: int) -> "PSeries":
        """Substitute q -> q^s (s a positive integer)."""
        if s < 1:
            raise ValueError("stretch factor must be a positive integer")
        return PSeries(
            self.denom, {e * s: c for e, c in self.terms.items()}, self.order * s
        )

    def eval_at(self, tau: complex) -> complex:
        """Evaluate the truncated series numerically at a point of the
        upper half-plane (q = exp(2*pi*i*tau), fractional powers taken
        as exp(2*pi*i*tau*exponent))."""
        import cmath

        total = 0j
        w = 2j * cmath.pi * complex(tau) / self.denom
        for e, c in self.terms.items():
            total += float(c) * cmath.exp(w * e)
        return total

    # ------------------------------------------------------------------
    # serialization: exact integer pairs, no floats

    def to_records(self) -> list[dict]:
        out = []
        for e, c in self.items():
            out.append(
                {
                    "exponent_numerator": e.numerator,
                    "exponent_denominator": e.denominator,
                    "coefficient_numerator": c.numerator,
                    "coefficient_denominator": c.denominator,
                }
            )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @staticmethod
    def from_records(records: Iterable[Mapping], order, denom: int | None = None) -> "PSeries":
        pairs = [
            (
                Fraction(r["exponent_numerator"], r["exponent_denominator"]),
                Fraction(r["coefficient_numerator"], r["coefficient_denominator"]),
            )
            for r in records
        ]
        if denom is None:
            denom = 1
            for e, _ in pairs:
                denom = denom * e.denominator // gcd(denom, e.denominator)
        terms = {}
        for e, c in pairs:
            en = e * denom
            if en.denominator != 1:
                raise ValueError(f"exponent {e} not on the 1/{denom} grid")
            terms[int(en)] = c
        return PSeries(denom, terms, order)

    @staticmethod
    def from_json(text: str, order, denom: int | None = None) -> "PSeries":
        return PSeries.from_records(json.loads(text), order, denom)
