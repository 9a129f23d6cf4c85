import pytest
from hypothesis import assume, given, strategies as st

from iwalab.catalog import CATALOG, catalog_module
from iwalab.charideal import (
    NotTorsion,
    char_from_presentation,
    char_from_square_presentation,
    char_iota,
    cross_check_growth,
    weierstrass,
)
from iwalab.limits import growth_invariants
from iwalab.modules import ModulePresentation
from iwalab.poly import LambdaPolynomial, divide_univariate, w_poly


def P(p, coeffs):
    return LambdaPolynomial.from_coefficients(p, coeffs)


def square(p, rows):
    return ModulePresentation.build(p, 1, [[P(p, c) for c in row] for row in rows])


def test_examples():
    c = char_from_square_presentation(square(3, [[[-3, 1]]]), 2)
    assert (c.mu, c.lam) == (0, 1) and c.distinguished == P(3, [6, 1])
    c = char_from_square_presentation(square(3, [[[9]]]))
    assert (c.mu, c.lam) == (2, 0) and c.distinguished == P(3, [1])
    c = char_from_square_presentation(square(2, [[[2], [0]], [[0], [0, 1]]]))
    assert (c.mu, c.lam) == (1, 1) and c.distinguished == P(2, [0, 1])
    assert c.generator == P(2, [0, 2])


def test_zero_determinant_is_rejected():
    with pytest.raises(NotTorsion, match="zero determinant"):
        char_from_square_presentation(square(2, [[[1], [1]], [[1], [1]]]))


def test_non_square_uses_minors():
    c = char_from_presentation(catalog_module("lambda-mod-p-T", 3))
    assert (c.mu, c.lam) == (0, 0)
    with pytest.raises(ValueError):
        char_from_square_presentation(catalog_module("lambda-mod-p-T", 3))
    # gcd of p^2 (T - p) and p (T - p)^2 is p (T - p)
    M = ModulePresentation.build(3, 1, [[P(3, [-27, 9]), P(3, [27, -18, 3])]])
    c = char_from_presentation(M)
    assert (c.mu, c.lam) == (1, 1)
    with pytest.raises(NotTorsion):
        char_from_presentation(ModulePresentation.build(
            2, 1, [[P(2, [1])], [P(2, [0, 1])]]))


def test_char_iota_examples():
    c = char_from_square_presentation(square(3, [[[0, 1]]]), 2)
    assert char_iota(c).distinguished == P(3, [0, 1])
    # the reversed generator of T - 3 is 4T + 3, whose root is -3/4 = 6 mod 9
    c = char_from_square_presentation(square(3, [[[-3, 1]]]), 2)
    ci = char_iota(c)
    assert ci.generator == P(3, [3, 4])
    assert ci.distinguished == P(3, [3, 1])
    assert (3 * pow(4, -1, 9)) % 9 == 3
    w = char_from_square_presentation(square(3, [[w_poly(3, 1).coefficients()]]), 3)
    assert char_iota(w).distinguished == w.distinguished == w_poly(3, 1)


def remainder_vanishes(g, dist, N):
    p = g.p
    _, r = divide_univariate(g, dist)
    return all(c % p**N == 0 for c in r.coefficients())


@given(st.lists(st.integers(-40, 40), min_size=1, max_size=7), st.sampled_from([2, 3, 5]),
       st.integers(1, 5))
def test_weierstrass_oracle(coeffs, p, N):
    """P is distinguished and divides f modulo p^N (Weierstrass division has zero remainder)."""
    f = P(p, coeffs)
    assume(not f.is_zero())
    mu, lam, dist = weierstrass(f, N)
    assert mu == f.mu() and lam == f.lam()
    D = P(p, dist)
    assert dist[-1] == 1 and len(dist) == lam + 1
    assert all(c % p == 0 for c in dist[:-1])
    g = P(p, [c // p**mu for c in f.coefficients()])
    assert remainder_vanishes(g, D, N)


@given(st.lists(st.integers(-40, 40), min_size=1, max_size=6), st.sampled_from([2, 3, 5]))
def test_char_iota_is_an_involution(coeffs, p):
    f = P(p, coeffs)
    assume(not f.is_zero())
    c = char_from_square_presentation(ModulePresentation.build(p, 1, [[f]]), 3)
    ci = char_iota(c)
    assert (ci.mu, ci.lam) == (c.mu, c.lam)
    cii = char_iota(ci)
    assert (cii.mu, cii.lam, cii.distinguished) == (c.mu, c.lam, c.distinguished)


def test_precision_only_truncates():
    c2 = char_from_square_presentation(square(3, [[[3, 4]]]), 2)
    c5 = char_from_square_presentation(square(3, [[[3, 4]]]), 5)
    assert [x % 9 for x in c5.distinguished.coefficients()] == c2.distinguished.coefficients()


@pytest.mark.parametrize("name,p,expected", [
    ("lambda-mod-p", 2, (1, 0)),
    ("lambda-mod-T-minus-p", 3, (0, 1)),
    ("lambda-mod-p-T-minus-p", 3, (1, 1)),
    ("lambda-mod-p2", 5, (2, 0)),
])
def test_cross_check_growth(name, p, expected):
    M = catalog_module(name, p)
    c = char_from_presentation(M)
    g = growth_invariants(M, 2)
    assert (c.mu, c.lam) == expected
    assert cross_check_growth(c, g)


def test_d1_catalog_generators_keep_mu_lambda_under_iota():
    for name, entry in CATALOG.items():
        if entry.d != 1:
            continue
        for p in (2, 3, 5):
            c = char_from_presentation(catalog_module(name, p))
            ci = char_iota(c)
            assert (ci.mu, ci.lam) == (c.mu, c.lam)
