import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from m24rad.phase import (
    PhaseExp,
    dedekind_sum,
    dedekind_sum_6c,
    jacobi_symbol,
    kronecker_symbol,
    phase_mul,
    phase_pow,
    sigma_divisors,
)

fractions = st.fractions(max_denominator=720)


def e(num, den=1):
    return PhaseExp.of(num, den)


def dedekind_sum_direct(d, c):
    """The defining O(c) sum; the oracle for the reciprocity fast path."""
    def saw(x: Fraction) -> Fraction:
        return Fraction(0) if x.denominator == 1 else x - (x.numerator // x.denominator) - Fraction(1, 2)

    return sum((saw(Fraction(m, c)) * saw(Fraction(m * d, c)) for m in range(1, c)),
               Fraction(0))


def coprime_pairs(max_c):
    return (
        st.integers(min_value=1, max_value=max_c)
        .flatmap(lambda c: st.tuples(st.integers(-3 * max_c, 3 * max_c), st.just(c)))
        .filter(lambda t: math.gcd(t[0], t[1]) == 1)
    )


# ----------------------------------------------------------------------
# phases

def test_phase_mul_examples():
    assert e(1, 8) * e(1, 8) == e(1, 4)
    assert e(3, 4) * e(3, 4) == e(1, 2)
    assert e(1, 3) * e(0) == e(1, 3)


def test_phase_pow_examples():
    assert e(1, 8) ** -3 == e(5, 8)
    assert e(1, 24) ** 24 == e(0)
    assert e(1, 2) ** 2 == e(0)


def test_phase_numeric_modulus():
    for r in (Fraction(1, 7), Fraction(5, 12), Fraction(23, 24)):
        assert abs(abs(complex(PhaseExp(r))) - 1) < 1e-14
        z = PhaseExp(r).to_mpc(96)
        assert abs(abs(complex(z)) - 1) < 1e-15


@given(fractions, fractions, fractions)
def test_phase_mul_assoc_comm(a, b, c):
    pa, pb, pc = PhaseExp(a), PhaseExp(b), PhaseExp(c)
    assert phase_mul(pa, pb) == phase_mul(pb, pa)
    assert phase_mul(phase_mul(pa, pb), pc) == phase_mul(pa, phase_mul(pb, pc))
    assert phase_mul(pa, e(0)) == pa


@given(fractions, st.integers(-30, 30), st.integers(-30, 30))
def test_phase_pow_additive(a, n, m):
    p = PhaseExp(a)
    assert phase_pow(p, n) * phase_pow(p, m) == phase_pow(p, n + m)
    assert p.conjugate() == phase_pow(p, -1)


# ----------------------------------------------------------------------
# Dedekind sums

def test_dedekind_examples():
    assert dedekind_sum(0, 1) == 0
    assert dedekind_sum(1, 3) == Fraction(1, 18)
    assert dedekind_sum_direct(1, 3) == Fraction(1, 18)


def test_dedekind_rejects_bad_modulus():
    with pytest.raises(ValueError):
        dedekind_sum(1, 0)
    with pytest.raises(ValueError):
        dedekind_sum(1, -4)


@given(coprime_pairs(500))
def test_dedekind_matches_direct_sum(pair):
    d, c = pair
    assert dedekind_sum(d, c) == dedekind_sum_direct(d % c, c)


@given(coprime_pairs(400))
def test_dedekind_reciprocity(pair):
    d, c = pair
    d %= c
    if d == 0:
        return
    lhs = dedekind_sum(d, c) + dedekind_sum(c, d)
    rhs = Fraction(-1, 4) + (Fraction(d, c) + Fraction(c, d) + Fraction(1, c * d)) / 12
    assert lhs == rhs


@given(coprime_pairs(300))
def test_dedekind_symmetries(pair):
    d, c = pair
    assert dedekind_sum(-d, c) == -dedekind_sum(d, c)
    assert dedekind_sum(d + c, c) == dedekind_sum(d, c)


@given(coprime_pairs(100000))
def test_dedekind_6c_integer_fast_path(pair):
    d, c = pair
    assert dedekind_sum_6c(d, c) == 6 * c * dedekind_sum(d, c)


# ----------------------------------------------------------------------
# Jacobi / Kronecker symbols

def test_jacobi_examples():
    assert jacobi_symbol(2, 7) == 1
    # Euler-criterion oracle for the prime 7
    assert pow(2, 3, 7) == 1
    assert jacobi_symbol(0, 9) == 0
    for m in (1, 3, 5, 9, 15, 21, 1001):
        assert jacobi_symbol(1, m) == 1


def test_jacobi_rejects_even_or_nonpositive():
    with pytest.raises(ValueError):
        jacobi_symbol(3, 4)
    with pytest.raises(ValueError):
        jacobi_symbol(3, -5)
    with pytest.raises(ValueError):
        jacobi_symbol(3, 0)


@given(st.integers(-200, 200), st.integers(-200, 200),
       st.integers(0, 120).map(lambda k: 2 * k + 1))
def test_jacobi_multiplicative_in_top(a, b, m):
    assert jacobi_symbol(a * b, m) == jacobi_symbol(a, m) * jacobi_symbol(b, m)


def test_jacobi_euler_criterion_oracle():
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for n in range(1, p):
            euler = pow(n, (p - 1) // 2, p)
            want = 1 if euler == 1 else -1
            assert jacobi_symbol(n, p) == want


@given(st.integers(-300, 300), st.integers(0, 100).map(lambda k: 2 * k + 1))
def test_kronecker_extends_jacobi(a, m):
    assert kronecker_symbol(a, m) == jacobi_symbol(a, m)


def test_kronecker_at_two():
    assert kronecker_symbol(7, 2) == 1
    assert kronecker_symbol(3, 2) == -1
    assert kronecker_symbol(6, 2) == 0
    assert kronecker_symbol(23, -1) == 1
    assert kronecker_symbol(-23, -1) == -1


# ----------------------------------------------------------------------
# divisor sums

def test_sigma_examples():
    assert sigma_divisors(1) == 1
    assert sigma_divisors(6) == 12
    assert sigma_divisors(12) == 28


def test_sigma_rejects_nonpositive():
    with pytest.raises(ValueError):
        sigma_divisors(0)


@given(st.integers(1, 400))
def test_sigma_matches_enumeration(k):
    assert sigma_divisors(k) == sum(d for d in range(1, k + 1) if k % d == 0)
