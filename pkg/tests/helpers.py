"""Shared test utilities: random group elements and numeric conventions."""

from math import gcd

from m24rad.modgroup import Mat2, coset_rep


def random_coprime_pair(rng, c_lo=1, c_hi=50, d_span=200):
    while True:
        c = rng.randint(c_lo, c_hi)
        d = rng.randint(-d_span, d_span)
        if gcd(c, d) == 1:
            return c, d


def random_sl2(rng, c_hi=50, allow_negative_c=True, t_span=3):
    """A random unimodular matrix with |c| <= c_hi, including c <= 0 cases."""
    roll = rng.random()
    if roll < 0.05:
        g = Mat2(1, rng.randint(-t_span, t_span), 0, 1)
    elif roll < 0.1:
        g = -Mat2(1, rng.randint(-t_span, t_span), 0, 1)
    else:
        c, d = random_coprime_pair(rng, 1, c_hi)
        g = coset_rep(c, d)
        for _ in range(rng.randint(0, t_span)):
            g = Mat2(1, rng.choice((-1, 1)), 0, 1) * g
        if allow_negative_c and rng.random() < 0.5:
            g = -g
    return g


def random_gamma0(rng, n, t_max=4, d_span=60):
    """A random element of the level-n group with c a small multiple of n."""
    while True:
        c = n * rng.randint(1, t_max)
        d = rng.randint(-d_span, d_span)
        if gcd(c, d) == 1:
            g = coset_rep(c, d)
            if rng.random() < 0.5:
                g = -g
            return g


def jac_quarter(g: Mat2, tau: complex) -> complex:
    """jac(g, tau)^(1/4) = (c tau + d)^(-1/2), principal branch."""
    return (g.c * tau + g.d) ** -0.5
